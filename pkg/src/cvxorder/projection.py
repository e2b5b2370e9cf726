"""Wasserstein distances and projections onto convex-order cones.

All computations run on the common refinement of the two quantile functions,
computed once per measure pair and reused.  The projection of mu onto the
measures dominated by nu (in the convex order) subtracts the derivative of
the convex hull of the integrated quantile gap from mu's quantile; the
projection of nu onto the measures dominating mu adds the same derivative to
nu's quantile.  Both are independent of the order p of the distance.
"""

from dataclasses import dataclass

import numpy as np

from .errors import BarycenterMismatch, InvalidP
from .hull import PiecewiseLinearFn, _power_mean, lower_hull_indices
from .measures import DiscreteMeasure, _cumulative, measure_from_arrays

LIPSCHITZ_SLACK = 1e-9
_BREAKPOINT_DEDUP = 1e-15  # cumulative weights this close are numerical duplicates


def _refined_quantiles(m1: DiscreteMeasure, m2: DiscreteMeasure, dtype=float):
    """Common refinement of both quantiles: breakpoints and per-interval values.

    Breakpoints from the two measures that agree to within a few ulp are
    identified: otherwise measures equal up to assembly rounding would be
    separated by mass slivers bridging order-one quantile gaps, which the
    p-th root turns into distances far above the rounding scale.
    """
    u1 = np.concatenate(([0.0], np.cumsum(m1.weights, dtype=np.longdouble))).astype(dtype)
    u1[-1] = dtype(1.0)
    u2 = np.concatenate(([0.0], np.cumsum(m2.weights, dtype=np.longdouble))).astype(dtype)
    u2[-1] = dtype(1.0)
    bps = np.union1d(u1, u2)
    bps = bps[np.concatenate(([True], np.diff(bps) > _BREAKPOINT_DEDUP))]
    bps[-1] = dtype(1.0)
    q1 = m1.positions.astype(dtype)[np.searchsorted(u1, bps[1:], side="left") - 1]
    q2 = m2.positions.astype(dtype)[np.searchsorted(u2, bps[1:], side="left") - 1]
    return bps, q1, q2


def wasserstein(m1: DiscreteMeasure, m2: DiscreteMeasure, p: float = 2.0) -> float:
    """Order-p transport distance, exact via the quantile representation.

    The integral runs in extended precision: interval widths are differences
    of near-unit cumulative weights, and for close measures the float64 noise
    of those differences would dominate the small result.
    """
    if not (np.isfinite(p) and p >= 1.0):
        raise InvalidP("p must be a finite real >= 1")
    bps, q1, q2 = _refined_quantiles(m1, m2, dtype=np.longdouble)
    return _power_mean(q1 - q2, np.diff(bps), float(p))


def is_convex_order(m1: DiscreteMeasure, m2: DiscreteMeasure, tol: float = 1e-9) -> bool:
    """Whether m1 precedes m2 in the convex order.

    Requires equal barycenters within tol and holds exactly when the
    integrated quantile gap of (m1, m2) stays non-negative.  The gap is
    piecewise linear, so checking its breakpoints is exact.
    """
    if abs(m1.barycenter() - m2.barycenter()) > tol:
        raise BarycenterMismatch(
            "convex order is only defined between measures with equal means"
        )
    bps, q1, q2 = _refined_quantiles(m1, m2)
    gap = _cumulative((q1 - q2) * np.diff(bps))
    return bool(gap.min(initial=0.0) >= -tol and abs(gap[-1]) <= tol)


def _project_pair(m_mu: DiscreteMeasure, m_nu: DiscreteMeasure):
    """Both projections for a pair, sharing one refinement and one hull."""
    bps, a, b = _refined_quantiles(m_mu, m_nu)
    widths = np.diff(bps)
    gap = np.concatenate(([0.0], _cumulative((a - b) * widths)))
    # zero tolerance: dropping a nearly collinear vertex bends the hull by up
    # to the drop tolerance, which narrow intervals amplify into slope errors
    # on the output quantiles
    idx = lower_hull_indices(bps, gap, tol=0.0)
    hull_u = bps[idx]
    hull_y = gap[idx]
    seg_slopes = np.diff(hull_y) / np.diff(hull_u)
    # hull vertices are a subset of the refined breakpoints, so each refined
    # interval sits inside exactly one hull segment
    seg = np.searchsorted(hull_u, bps[1:], side="left") - 1
    d = seg_slopes[seg]
    lower = measure_from_arrays(a - d, widths)
    upper = measure_from_arrays(b + d, widths)
    return lower, upper, PiecewiseLinearFn(hull_u, hull_y)


@dataclass(frozen=True)
class ProjectionResult:
    """A projected measure, its distance to the measure that was projected,
    and the hull of the integrated quantile gap that produced it."""

    projected: DiscreteMeasure
    distance_to_input: float
    hull_vertices: PiecewiseLinearFn


def project_I(m_mu: DiscreteMeasure, m_nu: DiscreteMeasure, p: float = 2.0) -> ProjectionResult:
    """Closest measure to mu among those dominated by nu in the convex order.

    The result has nu's barycenter, satisfies ``is_convex_order(result, nu)``,
    and does not depend on p; p only sets the reported distance
    ``W_p(mu, result)``.
    """
    lower, _, hull_fn = _project_pair(m_mu, m_nu)
    return ProjectionResult(lower, wasserstein(m_mu, lower, p), hull_fn)


def project_J(m_mu: DiscreteMeasure, m_nu: DiscreteMeasure, p: float = 2.0) -> ProjectionResult:
    """Closest measure to nu among those dominating mu in the convex order."""
    _, upper, hull_fn = _project_pair(m_mu, m_nu)
    return ProjectionResult(upper, wasserstein(m_nu, upper, p), hull_fn)


def equaldist_check(m_mu: DiscreteMeasure, m_nu: DiscreteMeasure, p: float = 2.0):
    """The four cross distances between the pair and its two projections.

    Returns ``(W_p(I, mu), W_p(J, nu), W_p(I, nu), W_p(J, mu))`` where I and J
    are the two projections for (mu, nu).  The first two coincide, as do the
    last two: both projections move by the same amount, in opposite
    directions along the quantile axis.
    """
    lower, upper, _ = _project_pair(m_mu, m_nu)
    return (
        wasserstein(lower, m_mu, p),
        wasserstein(upper, m_nu, p),
        wasserstein(lower, m_nu, p),
        wasserstein(upper, m_mu, p),
    )


@dataclass(frozen=True)
class LipschitzReport:
    """Both sides of the stability bounds for one quadruple of measures.

    The projection onto dominated measures moves at most twice as fast as its
    first argument plus once its second; the projection onto dominating
    measures mirrors this (once the first, twice the second).
    """

    p: float
    lhs_I: float
    rhs_I: float
    lhs_J: float
    rhs_J: float

    @property
    def holds_I(self) -> bool:
        return self.lhs_I <= self.rhs_I + LIPSCHITZ_SLACK

    @property
    def holds_J(self) -> bool:
        return self.lhs_J <= self.rhs_J + LIPSCHITZ_SLACK

    @property
    def ratio_I(self):
        """lhs/rhs, or None when the bound degenerates to 0/0."""
        return None if self.rhs_I == 0.0 else self.lhs_I / self.rhs_I

    @property
    def ratio_J(self):
        return None if self.rhs_J == 0.0 else self.lhs_J / self.rhs_J


def lipschitz_audit(
    m_mu: DiscreteMeasure,
    m_mu2: DiscreteMeasure,
    m_nu: DiscreteMeasure,
    m_nu2: DiscreteMeasure,
    p: float = 2.0,
) -> LipschitzReport:
    """Evaluate both stability bounds on the quadruple (mu, mu', nu, nu')."""
    lower1, upper1, _ = _project_pair(m_mu, m_nu)
    lower2, upper2, _ = _project_pair(m_mu2, m_nu2)
    d_mu = wasserstein(m_mu, m_mu2, p)
    d_nu = wasserstein(m_nu, m_nu2, p)
    return LipschitzReport(
        p=p,
        lhs_I=wasserstein(lower1, lower2, p),
        rhs_I=2.0 * d_mu + d_nu,
        lhs_J=wasserstein(upper1, upper2, p),
        rhs_J=d_mu + 2.0 * d_nu,
    )
