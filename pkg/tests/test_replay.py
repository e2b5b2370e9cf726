"""The reference fixture suite must reproduce every frozen value."""

import pytest

from cvxorder import run_replay


def test_every_fixture_passes():
    records, lattice_rows, alpha_rows = run_replay()
    failures = [r["fixture"] for r in records if not r["pass"]]
    assert failures == []
    assert len(records) >= 30

    assert len(lattice_rows) == 30 * 3
    for n, p, ratio, exact in lattice_rows:
        assert exact == n ** (1.0 / p) / 2.0
        assert ratio == pytest.approx(exact, abs=1e-12)

    assert len(alpha_rows) == 6
    alphas = [row["alpha"] for row in alpha_rows]
    assert alphas == sorted(alphas, reverse=True)
    ratios = [row["ratio"] for row in alpha_rows]
    assert all(a < b for a, b in zip(ratios, ratios[1:]))  # climbs toward 2
    assert ratios[-1] == pytest.approx(1.99601, abs=1e-3)
    assert ratios[-1] < 2.0
    for row in alpha_rows:
        assert row["gap_lower"] == pytest.approx(row["gap_upper"], abs=1e-12)


def test_coarser_discretization_still_passes():
    records, _, _ = run_replay(discretize_n=512)
    assert all(r["pass"] for r in records)
