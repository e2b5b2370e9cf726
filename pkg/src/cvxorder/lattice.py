"""Lattice operations for the convex order via potential functions.

The potential of a measure is the integral of ``|x - y|`` against it: a
convex piecewise-linear function with a kink of slope-change twice the weight
at every atom and asymptotic slopes -1 and +1.  On a set of measures with a
common barycenter, the pointwise maximum of two potentials is again a
potential (the smallest common dominating measure), while the pointwise
minimum needs a convex hull pass (the largest common dominated measure).

Breakpoints of min and max are the union of the kinks plus the pairwise
segment crossings, each solved in closed form; slopes are read off the
cumulative kink masses rather than by differencing values, which keeps the
assembled weights exact to rounding.
"""

from dataclasses import dataclass

import numpy as np

from .errors import BarycenterMismatch, InvalidP, MassMismatch
from .hull import lower_hull_indices
from .measures import DiscreteMeasure, _cumulative, _readonly, measure_from_arrays
from .projection import _project_pair, is_convex_order, wasserstein

MASS_TOL = 1e-12
CROSSING_DEDUP_TOL = 1e-12  # on x; avoids zero-mass atoms from duplicate breakpoints
_CHANGE_FLOOR = 1e-12  # slope changes at most this large are treated as no kink


@dataclass(frozen=True)
class PotentialFn:
    """Convex piecewise-linear function with slope -1 left of its kinks.

    ``slope_changes[i] > 0`` is the jump of the derivative at ``kinks[i]``.
    Potentials of probability measures have slope changes summing to 2
    (asymptotic slopes -1 and +1) and satisfy
    ``value >= |x - mean|`` everywhere; those properties are checked where
    they matter, in :func:`measure_from_potential`.
    """

    kinks: np.ndarray
    slope_changes: np.ndarray

    def __post_init__(self):
        x = _readonly(self.kinks)
        c = _readonly(self.slope_changes)
        if x.ndim != 1 or c.ndim != 1 or x.shape != c.shape or x.size == 0:
            raise ValueError("kinks and slope changes must be 1-d arrays of equal length")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(c))):
            raise ValueError("kinks and slope changes must be finite")
        if np.any(np.diff(x) <= 0.0):
            raise ValueError("kinks must be strictly increasing")
        if np.any(c <= 0.0):
            raise ValueError("slope changes must be strictly positive")
        object.__setattr__(self, "kinks", x)
        object.__setattr__(self, "slope_changes", c)

    @property
    def mean(self) -> float:
        """Barycenter of the underlying mass: the anchor of the -1 ray."""
        return float(self.kinks @ self.slope_changes) / 2.0

    def value_at(self, x):
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        pts = np.atleast_1d(x)
        vals = np.abs(pts[:, None] - self.kinks[None, :]) @ (self.slope_changes / 2.0)
        return float(vals[0]) if scalar else vals

    def slope_right_of(self, x):
        """Derivative on the interval just right of each query point, exact."""
        cum = np.concatenate(([0.0], _cumulative(self.slope_changes)))
        idx = np.searchsorted(self.kinks, np.atleast_1d(np.asarray(x, float)), side="right")
        return -1.0 + cum[idx]


def potential(m: DiscreteMeasure) -> PotentialFn:
    """Potential function of a measure: kink of size 2w at every atom of weight w."""
    return PotentialFn(m.positions.copy(), 2.0 * m.weights)


def measure_from_potential(u: PotentialFn) -> DiscreteMeasure:
    """Measure whose potential is ``u``; requires total slope change 2."""
    if abs(float(u.slope_changes.sum()) - 2.0) > MASS_TOL:
        raise MassMismatch("slope changes must sum to 2 for a probability measure")
    return measure_from_arrays(u.kinks, u.slope_changes / 2.0)


def _refined_points(p1: PotentialFn, p2: PotentialFn) -> np.ndarray:
    """Union of kinks plus pairwise segment crossings, deduplicated.

    Outside the span of the kinks both potentials run along their rays, so
    every crossing lies between consecutive union points; there each function
    is affine and the crossing is solved in closed form.
    """
    pts = np.union1d(p1.kinks, p2.kinks)
    if pts.size < 2:
        return pts
    lo, hi = pts[:-1], pts[1:]
    mids = 0.5 * (lo + hi)
    s1 = p1.slope_right_of(mids)
    s2 = p2.slope_right_of(mids)
    v1 = p1.value_at(lo)
    v2 = p2.value_at(lo)
    den = s1 - s2
    with np.errstate(divide="ignore", invalid="ignore"):
        x = lo + (v2 - v1) / den
    margin = CROSSING_DEDUP_TOL * np.maximum(1.0, np.maximum(np.abs(lo), np.abs(hi)))
    ok = (np.abs(den) > 1e-12) & (x > lo + margin) & (x < hi - margin)
    if not np.any(ok):
        return pts
    pts = np.sort(np.concatenate((pts, x[ok])))
    return pts[np.concatenate(([True], np.diff(pts) > CROSSING_DEDUP_TOL))]


def _check_means(m1: DiscreteMeasure, m2: DiscreteMeasure, tol: float):
    if abs(m1.barycenter() - m2.barycenter()) > tol:
        raise BarycenterMismatch(
            "lattice operations are only defined between measures with equal means"
        )


def max_convex(m1: DiscreteMeasure, m2: DiscreteMeasure, tol: float = 1e-9) -> DiscreteMeasure:
    """Smallest measure dominating both arguments in the convex order.

    Its potential is the pointwise maximum of the two potentials, which is
    already convex; the result's atoms sit where that maximum changes slope.
    """
    _check_means(m1, m2, tol)
    p1, p2 = potential(m1), potential(m2)
    pts = _refined_points(p1, p2)
    if pts.size == 1:
        return measure_from_arrays(pts, [1.0])
    mids = 0.5 * (pts[:-1] + pts[1:])
    upper_is_first = p1.value_at(mids) >= p2.value_at(mids)
    slopes = np.where(upper_is_first, p1.slope_right_of(mids), p2.slope_right_of(mids))
    changes = np.diff(np.concatenate(([-1.0], slopes, [1.0])))
    keep = changes > _CHANGE_FLOOR
    return measure_from_arrays(pts[keep], changes[keep] / 2.0)


def min_convex(m1: DiscreteMeasure, m2: DiscreteMeasure, tol: float = 1e-9) -> DiscreteMeasure:
    """Largest measure dominated by both arguments in the convex order.

    Its potential is the convex hull of the pointwise minimum of the two
    potentials.  Hull segments joining adjacent grid points keep the exact
    slope of whichever potential is active there; longer chords bridge the
    non-convex stretches.
    """
    _check_means(m1, m2, tol)
    p1, p2 = potential(m1), potential(m2)
    pts = _refined_points(p1, p2)
    if pts.size == 1:
        return measure_from_arrays(pts, [1.0])
    v1 = p1.value_at(pts)
    v2 = p2.value_at(pts)
    vals = np.minimum(v1, v2)
    mids = 0.5 * (pts[:-1] + pts[1:])
    lower_is_first = p1.value_at(mids) <= p2.value_at(mids)
    slopes = np.where(lower_is_first, p1.slope_right_of(mids), p2.slope_right_of(mids))
    idx = lower_hull_indices(pts, vals)
    seg = np.empty(idx.size - 1)
    for k in range(idx.size - 1):
        i, j = idx[k], idx[k + 1]
        seg[k] = slopes[i] if j == i + 1 else (vals[j] - vals[i]) / (pts[j] - pts[i])
    changes = np.diff(np.concatenate(([-1.0], seg, [1.0])))
    keep = changes > _CHANGE_FLOOR
    return measure_from_arrays(pts[idx][keep], changes[keep] / 2.0)


def sandwich_check(m1: DiscreteMeasure, m2: DiscreteMeasure, tol: float = 1e-9) -> bool:
    """Projections are bracketed by the lattice operations.

    For measures with a common barycenter, the projection of m1 onto the
    measures dominated by m2 is itself dominated by their lattice minimum,
    and the projection of m2 onto the measures dominating m1 dominates their
    lattice maximum.
    """
    _check_means(m1, m2, tol)
    lower, upper, _ = _project_pair(m1, m2)
    return is_convex_order(lower, min_convex(m1, m2, tol), tol) and is_convex_order(
        max_convex(m1, m2, tol), upper, tol
    )


def comb_family(n: int):
    """Three interlacing grid measures (mu, nu, eta) with eta <= mu <= nu in convex order.

    nu spreads mass over the n+1 grid points of [0, 1] with half weights at
    the ends, mu sits on the n cell midpoints, and eta pushes nu's end masses
    one step inward.  Small transport perturbations of these measures move
    their lattice combinations by a factor that grows like n^(1/p).
    """
    if int(n) != n or n < 3:
        raise ValueError("n must be an integer >= 3")
    n = int(n)
    # weights are taken as differences of correctly rounded cumulative
    # breakpoints, so quantile breakpoints rebuild exactly; with weights
    # rounded individually, their prefix sums drift by ~n*ulp, which the
    # amplification ratio of this family magnifies past 1e-12
    nu_u = np.concatenate(([0.0], (2.0 * np.arange(n) + 1.0) / (2 * n), [1.0]))
    nu = DiscreteMeasure(np.arange(n + 1) / n, np.diff(nu_u))
    mu_u = np.arange(n + 1) / n
    mu = DiscreteMeasure((2.0 * np.arange(1, n + 1) - 1.0) / (2 * n), np.diff(mu_u))
    eta_u = np.concatenate(([0.0], (2.0 * np.arange(n - 2) + 3.0) / (2 * n), [1.0]))
    eta = DiscreteMeasure(np.arange(1, n) / n, np.diff(eta_u))
    return mu, nu, eta


def lattice_ratio(n: int, p: float) -> float:
    """Amplification of the lattice maximum on the interlacing family.

    Compares how far the maxima of (mu, nu) and (mu, eta) sit apart against
    the distance of the perturbation (eta, nu) itself; the exact value is
    ``n**(1/p) / 2``, unbounded in n, so neither lattice operation is
    Lipschitz for transport distances.
    """
    if not (np.isfinite(p) and p >= 1.0):
        raise InvalidP("p must be a finite real >= 1")
    mu, nu, eta = comb_family(n)
    top = wasserstein(max_convex(mu, nu), max_convex(mu, eta), p)
    return top / wasserstein(eta, nu, p)
