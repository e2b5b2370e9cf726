"""Shared oracles and generators for the test suite."""

import numpy as np

from cvxorder import random_measure, recentered


def brute_force_hull_values(fn, grid):
    """Greatest convex minorant of a piecewise-linear function, by chord minimum.

    At each grid point the minorant equals the smallest value among all
    chords connecting two vertices that straddle the point; the pair of
    outermost vertices always straddles, so every point gets a value.
    """
    u, y = fn.u, fn.y
    grid = np.asarray(grid, dtype=float)
    best = np.full(grid.shape, np.inf)
    for i in range(u.size - 1):
        for j in range(i + 1, u.size):
            inside = (grid >= u[i]) & (grid <= u[j])
            t = grid[inside]
            chord = y[i] + (y[j] - y[i]) * (t - u[i]) / (u[j] - u[i])
            best[inside] = np.minimum(best[inside], chord)
    return best


def equal_mean_pair(rng, mean: float = 0.0, max_atoms: int = 10):
    """Two independent random measures translated to a common barycenter."""
    a = recentered(random_measure(rng, max_atoms), mean)
    b = recentered(random_measure(rng, max_atoms), mean)
    return a, b
