"""Deterministic generators and order-preserving perturbations."""

import numpy as np

from cvxorder import (
    is_convex_order,
    mean_preserving_contraction,
    mean_preserving_spread,
    random_measure,
    random_piecewise_linear,
    random_step_fn,
    recentered,
    trial_rng,
)


def test_trial_rng_is_deterministic():
    a = random_measure(trial_rng(7, 11))
    b = random_measure(trial_rng(7, 11))
    c = random_measure(trial_rng(7, 12))
    assert a.isclose(b, atol=0.0)
    assert not a.isclose(c, atol=0.0) or not np.array_equal(a.positions, c.positions)


def test_random_measure_respects_documented_ranges():
    for t in range(200):
        m = random_measure(trial_rng(600, t))
        assert 1 <= len(m) <= 10
        assert m.positions.min() >= -1.0 and m.positions.max() <= 1.0
        assert m.weights.min() > 0.0
        assert abs(float(m.weights.sum()) - 1.0) <= 1e-12
    small = random_measure(trial_rng(600, 0), max_atoms=3)
    assert 1 <= len(small) <= 3


def test_random_step_fn_is_well_formed():
    for t in range(100):
        f = random_step_fn(trial_rng(601, t))
        assert f.breakpoints[0] == 0.0 and f.breakpoints[-1] == 1.0
        assert f.values.size <= 20
        assert np.all(np.abs(f.values) <= 1.0)


def test_random_piecewise_linear_is_well_formed():
    for t in range(100):
        f = random_piecewise_linear(trial_rng(602, t))
        assert f.u[0] == 0.0 and f.u[-1] == 1.0
        assert f.u.size <= 12
        assert np.all(np.abs(f.y) <= 1.0)


def test_spread_dominates_and_keeps_the_mean():
    for t in range(100):
        rng = trial_rng(603, t)
        m = random_measure(rng)
        s = mean_preserving_spread(m, rng, steps=2)
        assert abs(s.barycenter() - m.barycenter()) <= 1e-12
        assert is_convex_order(m, s)


def test_contraction_is_dominated_and_keeps_the_mean():
    for t in range(100):
        rng = trial_rng(604, t)
        m = random_measure(rng)
        c = mean_preserving_contraction(m, rng, steps=2)
        assert abs(c.barycenter() - m.barycenter()) <= 1e-12
        assert is_convex_order(c, m)


def test_recentered_hits_the_target_mean():
    for t in range(50):
        m = random_measure(trial_rng(605, t))
        assert abs(recentered(m, 0.42).barycenter() - 0.42) <= 1e-12
