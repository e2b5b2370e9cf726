"""Finitely supported probability measures on the line and their quantile functions.

The canonical measure representation keeps atoms sorted, merges positions that
coincide up to a small absolute tolerance, and renormalizes the weights.  All
quantile functions here are left-continuous: on the interval
``(breakpoints[i], breakpoints[i+1]]`` the quantile takes the value attached to
that interval, so the value *at* a breakpoint belongs to the piece ending there.
"""

from dataclasses import dataclass

import numpy as np

from .errors import EmptyInput, MalformedRecord, NonPositiveWeight

ATOM_MERGE_TOL = 1e-12  # absolute tolerance on positions; closer atoms are merged
WEIGHT_SUM_TOL = 1e-12
_DUST = 1e-15  # relative weight below which a merged atom is numerical dust


def _readonly(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


def _cumulative(values) -> np.ndarray:
    # prefix sums in extended precision: plain float64 cumsum drifts by
    # ~k*ulp after k terms, which downstream ratios of small distances amplify
    # past their 1e-12 budgets
    return np.cumsum(values, dtype=np.longdouble).astype(float)


@dataclass(frozen=True)
class DiscreteMeasure:
    """Probability measure with finitely many atoms.

    ``positions`` are strictly increasing and ``weights`` are positive and sum
    to one (within ``WEIGHT_SUM_TOL``).  Instances are immutable; prefer
    :func:`from_atoms`, which canonicalizes arbitrary input, over constructing
    directly.
    """

    positions: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        x = _readonly(self.positions)
        w = _readonly(self.weights)
        if x.ndim != 1 or w.ndim != 1 or x.shape != w.shape:
            raise ValueError("positions and weights must be 1-d arrays of equal length")
        if x.size == 0:
            raise EmptyInput("a measure needs at least one atom")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(w))):
            raise ValueError("positions and weights must be finite")
        if np.any(w <= 0.0):
            raise NonPositiveWeight("atom weights must be strictly positive")
        if np.any(np.diff(x) <= 0.0):
            raise ValueError("positions must be strictly increasing")
        if abs(float(w.sum()) - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError("weights must sum to one")
        object.__setattr__(self, "positions", x)
        object.__setattr__(self, "weights", w)

    def __len__(self) -> int:
        return int(self.positions.size)

    def barycenter(self) -> float:
        return float(self.positions @ self.weights)

    def isclose(self, other: "DiscreteMeasure", atol: float = 1e-9) -> bool:
        """Canonical equality: same atom count, positions and weights within atol."""
        return (
            len(self) == len(other)
            and bool(np.allclose(self.positions, other.positions, rtol=0.0, atol=atol))
            and bool(np.allclose(self.weights, other.weights, rtol=0.0, atol=atol))
        )


def measure_from_arrays(positions, weights) -> DiscreteMeasure:
    """Canonicalize raw atom arrays: sort, merge near-duplicates, normalize.

    Positions closer than ``ATOM_MERGE_TOL`` are merged into their weighted
    mean (weights added), which preserves the barycenter.  Weights carrying
    less than ``_DUST`` of the total mass after merging are dropped; the rest
    are renormalized to sum to one.
    """
    x = np.asarray(positions, dtype=float).ravel()
    w = np.asarray(weights, dtype=float).ravel()
    if x.size == 0:
        raise EmptyInput("a measure needs at least one atom")
    if x.shape != w.shape:
        raise ValueError("positions and weights must have equal length")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(w))):
        raise ValueError("positions and weights must be finite")
    if np.any(w <= 0.0):
        raise NonPositiveWeight("atom weights must be strictly positive")
    order = np.argsort(x, kind="stable")
    x = x[order]
    w = w[order]
    # group runs of positions separated by at most the merge tolerance
    starts = np.concatenate(([0], np.nonzero(np.diff(x) > ATOM_MERGE_TOL)[0] + 1))
    gw = np.add.reduceat(w, starts)
    gx = np.add.reduceat(w * x, starts) / gw
    keep = gw > _DUST * gw.sum()
    gx, gw = gx[keep], gw[keep]
    return DiscreteMeasure(gx, gw / gw.sum())


def from_atoms(atoms) -> DiscreteMeasure:
    """Build a canonical measure from an iterable of ``(position, weight)`` pairs."""
    pairs = list(atoms)
    if not pairs:
        raise EmptyInput("a measure needs at least one atom")
    return measure_from_arrays([p for p, _ in pairs], [w for _, w in pairs])


@dataclass(frozen=True)
class StepQuantile:
    """Piecewise-constant quantile function of a discrete measure.

    Takes the value ``values[i]`` on ``(breakpoints[i], breakpoints[i+1]]``.
    Breakpoints run strictly from 0 to 1 and values are non-decreasing.
    """

    breakpoints: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        u = _readonly(self.breakpoints)
        v = _readonly(self.values)
        if u.ndim != 1 or v.ndim != 1 or u.size != v.size + 1 or v.size == 0:
            raise ValueError("need k+1 breakpoints for k values")
        if u[0] != 0.0 or u[-1] != 1.0 or np.any(np.diff(u) <= 0.0):
            raise ValueError("breakpoints must increase strictly from 0 to 1")
        if np.any(np.diff(v) < 0.0):
            raise ValueError("quantile values must be non-decreasing")
        object.__setattr__(self, "breakpoints", u)
        object.__setattr__(self, "values", v)

    def value_at(self, u):
        """Evaluate at u in (0, 1]; the value at a breakpoint comes from the piece ending there."""
        u = np.asarray(u, dtype=float)
        idx = np.searchsorted(self.breakpoints, u, side="left")
        idx = np.clip(idx, 1, self.values.size)
        return self.values[idx - 1]

    def as_general(self) -> "GeneralQuantile":
        return GeneralQuantile(
            self.breakpoints[1:].copy(),
            np.zeros(self.values.size),
            self.values.copy(),
        )


def quantile(m: DiscreteMeasure) -> StepQuantile:
    """Left-continuous quantile function of a discrete measure."""
    u = np.concatenate(([0.0], _cumulative(m.weights)))
    u[-1] = 1.0  # guard the cumulative rounding in the last entry
    return StepQuantile(u, m.positions.copy())


def measure_from_quantile(q: StepQuantile) -> DiscreteMeasure:
    """Inverse of :func:`quantile`: interval lengths become weights."""
    return measure_from_arrays(q.values, np.diff(q.breakpoints))


@dataclass(frozen=True)
class GeneralQuantile:
    """Non-decreasing piecewise-affine quantile on (0, 1], jumps allowed.

    Piece ``i`` covers ``(upper_edges[i-1], upper_edges[i]]`` (the first piece
    starts at 0), has constant slope ``slopes[i] >= 0``, and reaches
    ``upper_values[i]`` at its right edge.  Between pieces the function may
    jump upward but never downward.
    """

    upper_edges: np.ndarray
    slopes: np.ndarray
    upper_values: np.ndarray

    def __post_init__(self):
        e = _readonly(self.upper_edges)
        s = _readonly(self.slopes)
        v = _readonly(self.upper_values)
        if e.ndim != 1 or e.size == 0 or s.shape != e.shape or v.shape != e.shape:
            raise ValueError("edges, slopes and values must be 1-d arrays of equal length")
        if not (np.all(np.isfinite(e)) and np.all(np.isfinite(s)) and np.all(np.isfinite(v))):
            raise ValueError("quantile pieces must be finite")
        if e[-1] != 1.0 or e[0] <= 0.0 or np.any(np.diff(e) <= 0.0):
            raise ValueError("upper edges must increase strictly and end at 1")
        if np.any(s < 0.0):
            raise ValueError("slopes must be non-negative")
        lower = np.concatenate(([0.0], e[:-1]))
        left_limits = v - s * (e - lower)
        if np.any(left_limits[1:] < v[:-1] - 1e-12):
            raise ValueError("pieces must be globally non-decreasing (no downward jumps)")
        object.__setattr__(self, "upper_edges", e)
        object.__setattr__(self, "slopes", s)
        object.__setattr__(self, "upper_values", v)

    @classmethod
    def from_pieces(cls, pieces) -> "GeneralQuantile":
        """Build from an iterable of ``(u_hi, slope, value_hi)`` triples."""
        triples = list(pieces)
        if not triples:
            raise EmptyInput("a quantile needs at least one piece")
        e = [float(t[0]) for t in triples]
        s = [float(t[1]) for t in triples]
        v = [float(t[2]) for t in triples]
        return cls(np.asarray(e), np.asarray(s), np.asarray(v))

    def value_at(self, u):
        u = np.asarray(u, dtype=float)
        idx = np.searchsorted(self.upper_edges, u, side="left")
        idx = np.clip(idx, 0, self.slopes.size - 1)
        return self.upper_values[idx] - self.slopes[idx] * (self.upper_edges[idx] - u)


def discretize(q, n: int) -> DiscreteMeasure:
    """Midpoint-quantile discretization with ``n`` equal cells.

    Places one atom of weight 1/n at ``q((i - 1/2) / n)`` for each cell.  For
    an affine piece the cell midpoint equals the cell average, so barycenters
    of piecewise-affine quantiles are preserved whenever piece edges align
    with cell edges.  The transport error to the original measure is at most
    ``max_slope / (2n)`` in the sup norm away from jump cells; a jump of
    height J landing inside a cell adds O(J/n) to the order-1 distance.
    """
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    n = int(n)
    mids = (np.arange(n) + 0.5) / n
    vals = np.asarray(q.value_at(mids), dtype=float)
    return measure_from_arrays(vals, np.full(n, 1.0 / n))


# -- plain-record serialization (shared with the command line front end) -----


def measure_record(m: DiscreteMeasure) -> dict:
    """Measure as a plain record: ``{"atoms": [{"x": ..., "w": ...}, ...]}``."""
    return {
        "atoms": [
            {"x": float(x), "w": float(w)} for x, w in zip(m.positions, m.weights)
        ]
    }


def _record_rows(obj: dict, key: str, fields: tuple) -> list:
    rows = obj[key]
    if not isinstance(rows, list) or not rows:
        raise MalformedRecord(f"'{key}' must be a non-empty list")
    out = []
    for row in rows:
        if not isinstance(row, dict) or set(row) != set(fields):
            raise MalformedRecord(f"each '{key}' entry needs exactly the fields {fields}")
        try:
            out.append(tuple(float(row[f]) for f in fields))
        except (TypeError, ValueError) as exc:
            raise MalformedRecord(f"non-numeric value in '{key}' entry") from exc
    return out


def parse_measure_record(obj, discretize_n: int = 4096) -> DiscreteMeasure:
    """Parse a measure record holding either ``atoms`` or ``quantile_pieces``.

    A ``quantile_pieces`` record describes a :class:`GeneralQuantile` and is
    discretized with ``discretize_n`` midpoint cells.
    """
    if not isinstance(obj, dict):
        raise MalformedRecord("a measure record must be a mapping")
    if "atoms" in obj:
        return from_atoms(_record_rows(obj, "atoms", ("x", "w")))
    if "quantile_pieces" in obj:
        rows = _record_rows(obj, "quantile_pieces", ("u_hi", "slope", "value_hi"))
        return discretize(GeneralQuantile.from_pieces(rows), discretize_n)
    raise MalformedRecord("a measure record needs 'atoms' or 'quantile_pieces'")
