"""Random generators for measures, step functions, and order-related perturbations.

Everything takes an explicit ``numpy.random.Generator`` so trials are
reproducible from integer seed tuples; see :func:`trial_rng`.
"""

import numpy as np

from .measures import DiscreteMeasure, StepQuantile, measure_from_arrays
from .hull import PiecewiseLinearFn, StepFn


def trial_rng(*key: int) -> np.random.Generator:
    """Deterministic generator keyed by a tuple of integers."""
    return np.random.default_rng(list(key))


def random_measure(rng: np.random.Generator, max_atoms: int = 10) -> DiscreteMeasure:
    """Measure with 1..max_atoms atoms, positions in [-1, 1], exponential weights."""
    k = int(rng.integers(1, max_atoms + 1))
    positions = rng.uniform(-1.0, 1.0, size=k)
    weights = rng.exponential(size=k)
    return measure_from_arrays(positions, weights / weights.sum())


def random_step_fn(rng: np.random.Generator, max_breakpoints: int = 20) -> StepFn:
    """Step function on (0, 1] with values in [-1, 1]."""
    k = int(rng.integers(1, max_breakpoints + 1))
    inner = np.sort(rng.uniform(0.0, 1.0, size=k - 1))
    inner = inner[np.concatenate(([True], np.diff(inner) > 1e-9))] if k > 1 else inner[:0]
    breakpoints = np.concatenate(([0.0], inner, [1.0]))
    return StepFn(breakpoints, rng.uniform(-1.0, 1.0, size=breakpoints.size - 1))


def random_quantile(rng: np.random.Generator, max_atoms: int = 10) -> StepQuantile:
    """Quantile function of a random measure."""
    from .measures import quantile

    return quantile(random_measure(rng, max_atoms))


def random_piecewise_linear(rng: np.random.Generator, max_vertices: int = 12) -> PiecewiseLinearFn:
    """Continuous piecewise-linear function on [0, 1] with values in [-1, 1]."""
    k = int(rng.integers(2, max_vertices + 1))
    inner = np.sort(rng.uniform(0.0, 1.0, size=k - 2))
    inner = inner[np.concatenate(([True], np.diff(inner) > 1e-9))] if k > 2 else inner[:0]
    u = np.concatenate(([0.0], inner, [1.0]))
    return PiecewiseLinearFn(u, rng.uniform(-1.0, 1.0, size=u.size))


def mean_preserving_spread(
    m: DiscreteMeasure, rng: np.random.Generator, steps: int = 1
) -> DiscreteMeasure:
    """Dominating measure built by repeatedly splitting atoms about their position.

    Each step splits one atom into two points on either side, keeping the
    mean, so the result dominates the input in convex order.
    """
    positions = list(m.positions)
    weights = list(m.weights)
    for _ in range(steps):
        i = int(rng.integers(len(positions)))
        x, w = positions[i], weights[i]
        t = rng.uniform(0.25, 0.75)
        a = rng.uniform(0.05, 0.5)
        del positions[i], weights[i]
        positions += [x - a * (1.0 - t), x + a * t]
        weights += [w * t, w * (1.0 - t)]
    return measure_from_arrays(positions, weights)


def mean_preserving_contraction(
    m: DiscreteMeasure, rng: np.random.Generator, steps: int = 1
) -> DiscreteMeasure:
    """Dominated measure built by partially merging atom pairs toward their mean.

    Each step moves a share of the mass of two atoms to their common
    barycenter, so the result is dominated by the input in convex order.
    """
    positions = list(m.positions)
    weights = list(m.weights)
    for _ in range(steps):
        if len(positions) < 2:
            break
        i, j = rng.choice(len(positions), size=2, replace=False)
        s = rng.uniform(0.3, 1.0)
        da, db = s * weights[i], s * weights[j]
        mid = (da * positions[i] + db * positions[j]) / (da + db)
        weights[i] -= da
        weights[j] -= db
        positions.append(mid)
        weights.append(da + db)
        keep = [k for k, w in enumerate(weights) if w > 1e-14]
        positions = [positions[k] for k in keep]
        weights = [weights[k] for k in keep]
    return measure_from_arrays(positions, weights)


def recentered(m: DiscreteMeasure, mean: float) -> DiscreteMeasure:
    """Translate a measure so its barycenter equals ``mean``."""
    return measure_from_arrays(m.positions + (mean - m.barycenter()), m.weights)
