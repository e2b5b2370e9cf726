"""Transport distances, convex-order predicate, projections, and stability."""

import numpy as np
import pytest

import helpers
from cvxorder import (
    BarycenterMismatch,
    InvalidP,
    comb_family,
    equaldist_check,
    from_atoms,
    is_convex_order,
    lipschitz_audit,
    mean_preserving_contraction,
    measure_from_arrays,
    project_I,
    project_J,
    random_measure,
    trial_rng,
    wasserstein,
)

DIRAC_ZERO = from_atoms([(0.0, 1.0)])
TWO_POINT = from_atoms([(-0.25, 0.5), (1.0, 0.5)])  # barycenter 0.375


def test_wasserstein_frozen_values():
    assert wasserstein(DIRAC_ZERO, TWO_POINT, 1.0) == pytest.approx(0.625, abs=1e-15)
    assert wasserstein(DIRAC_ZERO, TWO_POINT, 2.0) == pytest.approx(
        0.7288689868556626, abs=1e-15
    )
    mu, nu, eta = comb_family(4)
    assert wasserstein(mu, nu, 1.0) == pytest.approx(0.125, abs=1e-15)
    assert wasserstein(eta, nu, 1.0) == pytest.approx(0.0625, abs=1e-15)
    assert wasserstein(eta, nu, 2.0) == pytest.approx(0.125, abs=1e-15)


def test_wasserstein_is_a_metric_on_samples():
    for t in range(25):
        rng = trial_rng(300, t)
        a, b, c = random_measure(rng), random_measure(rng), random_measure(rng)
        for p in (1.0, 2.0, 3.0):
            dab = wasserstein(a, b, p)
            assert dab == pytest.approx(wasserstein(b, a, p), abs=1e-14)
            assert wasserstein(a, a, p) <= 1e-15
            assert dab <= wasserstein(a, c, p) + wasserstein(c, b, p) + 1e-12


def test_wasserstein_translation_and_scale_equivariance():
    for t in range(25):
        rng = trial_rng(301, t)
        a, b = random_measure(rng), random_measure(rng)
        shift_a = measure_from_arrays(a.positions + 0.7, a.weights)
        shift_b = measure_from_arrays(b.positions + 0.7, b.weights)
        scale_a = measure_from_arrays(3.0 * a.positions, a.weights)
        scale_b = measure_from_arrays(3.0 * b.positions, b.weights)
        for p in (1.0, 2.0):
            d = wasserstein(a, b, p)
            assert wasserstein(shift_a, shift_b, p) == pytest.approx(d, abs=1e-12)
            assert wasserstein(scale_a, scale_b, p) == pytest.approx(3.0 * d, rel=1e-12)


def test_wasserstein_rejects_bad_exponent():
    with pytest.raises(InvalidP):
        wasserstein(DIRAC_ZERO, TWO_POINT, 0.5)
    with pytest.raises(InvalidP):
        wasserstein(DIRAC_ZERO, TWO_POINT, np.inf)


def test_convex_order_on_interlacing_chain():
    mu, nu, eta = comb_family(4)
    assert is_convex_order(eta, mu)
    assert is_convex_order(mu, nu)
    assert is_convex_order(eta, nu)
    assert not is_convex_order(nu, mu)
    assert is_convex_order(mu, mu)
    dirac_mean = from_atoms([(mu.barycenter(), 1.0)])
    assert is_convex_order(dirac_mean, eta)


def test_convex_order_requires_equal_means():
    with pytest.raises(BarycenterMismatch):
        is_convex_order(DIRAC_ZERO, TWO_POINT)


def test_projection_frozen_oracle():
    res_i = project_I(DIRAC_ZERO, TWO_POINT)
    assert res_i.projected.isclose(from_atoms([(0.375, 1.0)]), atol=1e-15)
    assert res_i.distance_to_input == pytest.approx(0.375, abs=1e-15)
    res_j = project_J(DIRAC_ZERO, TWO_POINT)
    assert res_j.projected.isclose(from_atoms([(-0.625, 0.5), (0.625, 0.5)]), atol=1e-15)
    assert res_j.distance_to_input == pytest.approx(0.375, abs=1e-15)


def test_projected_measure_is_independent_of_p():
    for t in range(20):
        rng = trial_rng(302, t)
        mu, nu = random_measure(rng), random_measure(rng)
        base_i = project_I(mu, nu, p=1.0).projected
        base_j = project_J(mu, nu, p=1.0).projected
        for p in (2.0, 3.0):
            assert project_I(mu, nu, p=p).projected.isclose(base_i, atol=1e-12)
            assert project_J(mu, nu, p=p).projected.isclose(base_j, atol=1e-12)


def test_projection_barycenters_swap():
    # the dominated projection inherits the target mean, the dominating one
    # keeps the source mean
    for t in range(20):
        rng = trial_rng(303, t)
        mu, nu = random_measure(rng), random_measure(rng)
        assert project_I(mu, nu).projected.barycenter() == pytest.approx(
            nu.barycenter(), abs=1e-12
        )
        assert project_J(mu, nu).projected.barycenter() == pytest.approx(
            mu.barycenter(), abs=1e-12
        )


def test_projection_feasibility_and_idempotence():
    mu, nu, _ = comb_family(4)
    assert project_I(mu, nu).projected.isclose(mu, atol=1e-12)
    assert project_J(mu, nu).projected.isclose(nu, atol=1e-12)
    for t in range(20):
        rng = trial_rng(304, t)
        a, b = random_measure(rng), random_measure(rng)
        assert is_convex_order(project_I(a, b).projected, b)
        assert is_convex_order(a, project_J(a, b).projected)


def test_hull_vertices_describe_the_integrated_gap():
    for t in range(20):
        rng = trial_rng(305, t)
        mu, nu = random_measure(rng), random_measure(rng)
        hull = project_I(mu, nu).hull_vertices
        assert hull.y[0] == 0.0
        assert hull.y[-1] == pytest.approx(mu.barycenter() - nu.barycenter(), abs=1e-12)
        slopes = np.diff(hull.y) / np.diff(hull.u)
        assert np.all(np.diff(slopes) >= -1e-12)


def test_equaldist_frozen_oracle_and_identities():
    for p in (1.0, 2.0):
        d_i_mu, d_j_nu, d_i_nu, d_j_mu = equaldist_check(DIRAC_ZERO, TWO_POINT, p)
        assert d_i_mu == pytest.approx(0.375, abs=1e-15)
        assert d_j_nu == pytest.approx(0.375, abs=1e-15)
        assert d_i_nu == pytest.approx(0.625, abs=1e-15)
        assert d_j_mu == pytest.approx(0.625, abs=1e-15)
    for t in range(20):
        rng = trial_rng(306, t)
        a, b = random_measure(rng), random_measure(rng)
        d1, d2, d3, d4 = equaldist_check(a, b)
        assert abs(d1 - d2) <= 1e-9
        assert abs(d3 - d4) <= 1e-9


def test_lipschitz_report_bounds_and_ratios():
    mu, nu, eta = comb_family(4)
    degenerate = lipschitz_audit(mu, mu, nu, nu)
    assert degenerate.lhs_I == pytest.approx(0.0, abs=1e-12)
    assert degenerate.ratio_I is None and degenerate.ratio_J is None
    assert degenerate.holds_I and degenerate.holds_J
    for t in range(50):
        rng = trial_rng(307, t)
        report = lipschitz_audit(
            random_measure(rng),
            random_measure(rng),
            random_measure(rng),
            random_measure(rng),
            p=2.0,
        )
        assert report.holds_I and report.holds_J
        assert report.ratio_I is None or report.ratio_I <= 1.0 + 1e-9
        assert report.ratio_J is None or report.ratio_J <= 1.0 + 1e-9


def test_no_dominated_competitor_is_closer():
    # brute-force optimality certificate: every explicitly constructed
    # measure below the target is at least as far from the source
    for t in range(15):
        rng = trial_rng(309, t)
        mu = random_measure(rng, max_atoms=6)
        nu = random_measure(rng, max_atoms=6)
        results = {p: project_I(mu, nu, p=p).distance_to_input for p in (1.0, 2.0)}
        for _ in range(10):
            eta = mean_preserving_contraction(nu, rng, steps=int(rng.integers(1, 4)))
            for p, best in results.items():
                assert best <= wasserstein(mu, eta, p) + 1e-9


def test_equal_mean_projection_is_between_the_pair():
    # with a common barycenter the dominated projection precedes both inputs
    for t in range(20):
        a, b = helpers.equal_mean_pair(trial_rng(308, t), mean=0.1)
        lower = project_I(a, b).projected
        upper = project_J(a, b).projected
        assert is_convex_order(lower, b)
        assert is_convex_order(lower, upper)
        assert is_convex_order(a, upper)
