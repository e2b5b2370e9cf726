"""Step functions on (0, 1], exact antiderivatives, and lower convex hulls.

The hull routine is a monotone-chain scan over the vertex list.  Three
vertices count as collinear when the cross product of the two spanning
vectors is at most ``HULL_TOL`` times the outer abscissa span, which bounds
the vertical deviation of a dropped vertex from the surviving chord by
``HULL_TOL`` itself.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidP
from .measures import _cumulative, _readonly

HULL_TOL = 1e-12


@dataclass(frozen=True)
class StepFn:
    """Piecewise-constant function: ``values[i]`` on ``(breakpoints[i], breakpoints[i+1]]``."""

    breakpoints: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        u = _readonly(self.breakpoints)
        v = _readonly(self.values)
        if u.ndim != 1 or v.ndim != 1 or u.size != v.size + 1 or v.size == 0:
            raise ValueError("need k+1 breakpoints for k values")
        if u[0] != 0.0 or u[-1] != 1.0 or np.any(np.diff(u) <= 0.0):
            raise ValueError("breakpoints must increase strictly from 0 to 1")
        if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
            raise ValueError("breakpoints and values must be finite")
        object.__setattr__(self, "breakpoints", u)
        object.__setattr__(self, "values", v)

    def value_at(self, u):
        u = np.asarray(u, dtype=float)
        idx = np.searchsorted(self.breakpoints, u, side="left")
        idx = np.clip(idx, 1, self.values.size)
        return self.values[idx - 1]


def _drop_collinear(u: np.ndarray, y: np.ndarray, tol: float) -> np.ndarray:
    keep = [0]
    for i in range(1, u.size - 1):
        j = keep[-1]
        cross = (u[i] - u[j]) * (y[i + 1] - y[j]) - (y[i] - y[j]) * (u[i + 1] - u[j])
        if abs(cross) > tol * (u[i + 1] - u[j]):
            keep.append(i)
    keep.append(u.size - 1)
    return np.asarray(keep, dtype=np.intp)


@dataclass(frozen=True)
class PiecewiseLinearFn:
    """Continuous piecewise-linear function on [0, 1] given by its vertices.

    The constructor canonicalizes the vertex list by dropping interior
    vertices that are collinear with their neighbours, so no three
    consecutive vertices are collinear within ``HULL_TOL``.
    """

    u: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if u.ndim != 1 or y.ndim != 1 or u.shape != y.shape or u.size < 2:
            raise ValueError("need at least two vertices with matching abscissae")
        if u[0] != 0.0 or u[-1] != 1.0 or np.any(np.diff(u) <= 0.0):
            raise ValueError("vertex abscissae must increase strictly from 0 to 1")
        if not (np.all(np.isfinite(u)) and np.all(np.isfinite(y))):
            raise ValueError("vertices must be finite")
        idx = _drop_collinear(u, y, HULL_TOL)
        object.__setattr__(self, "u", _readonly(u[idx]))
        object.__setattr__(self, "y", _readonly(y[idx]))

    def value_at(self, u):
        return np.interp(np.asarray(u, dtype=float), self.u, self.y)


def antiderivative(f: StepFn, y0: float = 0.0) -> PiecewiseLinearFn:
    """Exact antiderivative of a step function, anchored at ``F(0) = y0``."""
    increments = f.values * np.diff(f.breakpoints)
    y = y0 + np.concatenate(([0.0], _cumulative(increments)))
    return PiecewiseLinearFn(f.breakpoints.copy(), y)


def lower_hull_indices(x: np.ndarray, y: np.ndarray, tol: float = HULL_TOL) -> np.ndarray:
    """Indices of the lower-convex-hull vertices of a sorted vertex list.

    Monotone chain: a stacked middle vertex is popped whenever the turn
    through the incoming vertex fails to be convex by more than ``tol``
    relative to the outer abscissa span (collinear vertices are dropped).
    """
    keep = [0]
    for i in range(1, x.size):
        while len(keep) >= 2:
            j, k = keep[-2], keep[-1]
            cross = (x[k] - x[j]) * (y[i] - y[j]) - (y[k] - y[j]) * (x[i] - x[j])
            if cross <= tol * (x[i] - x[j]):
                keep.pop()
            else:
                break
        keep.append(i)
    return np.asarray(keep, dtype=np.intp)


def lower_convex_hull(f: PiecewiseLinearFn) -> PiecewiseLinearFn:
    """Greatest convex minorant of a piecewise-linear function.

    Agrees with the input at 0 and 1 and lies below it everywhere else.
    """
    idx = lower_hull_indices(f.u, f.y)
    return PiecewiseLinearFn(f.u[idx], f.y[idx])


def right_derivative(f: PiecewiseLinearFn) -> StepFn:
    """Segment slopes as a step function on the same breakpoints.

    The slope of the segment ending at a vertex is the value on the
    left-open interval reaching that vertex, matching the step convention
    used by quantile functions.
    """
    slopes = np.diff(f.y) / np.diff(f.u)
    return StepFn(f.u.copy(), slopes)


def _power_mean(values: np.ndarray, widths: np.ndarray, p: float) -> float:
    a = np.abs(values)
    if p == 1.0:
        return float(a @ widths)
    if p == 2.0:
        return float(np.sqrt((a * a) @ widths))
    return float(((a**p) @ widths) ** (1.0 / p))


def lp_norm(f: StepFn, p: float) -> float:
    """Exact Lp([0,1]) norm of a step function."""
    if not (np.isfinite(p) and p >= 1.0):
        raise InvalidP("p must be a finite real >= 1")
    return _power_mean(f.values, np.diff(f.breakpoints), float(p))


def resample_values(breakpoints: np.ndarray, values: np.ndarray, refined: np.ndarray) -> np.ndarray:
    """Step values on each refined interval, read at its right endpoint."""
    idx = np.searchsorted(breakpoints, refined[1:], side="left")
    return values[idx - 1]


def common_refinement(f: StepFn, g: StepFn):
    """Shared breakpoint grid with both value lists resampled onto it."""
    bps = np.union1d(f.breakpoints, g.breakpoints)
    return bps, resample_values(f.breakpoints, f.values, bps), resample_values(
        g.breakpoints, g.values, bps
    )


def step_difference(f: StepFn, g: StepFn) -> StepFn:
    """Pointwise difference ``f - g`` over the common refinement."""
    bps, fv, gv = common_refinement(f, g)
    return StepFn(bps, fv - gv)
