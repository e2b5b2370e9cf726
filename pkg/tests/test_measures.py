"""Measure canonicalization, quantile round trips, and record parsing."""

import numpy as np
import pytest

from cvxorder import (
    DiscreteMeasure,
    EmptyInput,
    GeneralQuantile,
    MalformedRecord,
    NonPositiveWeight,
    StepQuantile,
    discretize,
    from_atoms,
    measure_from_arrays,
    measure_from_quantile,
    measure_record,
    parse_measure_record,
    quantile,
    random_measure,
    trial_rng,
)


def test_atoms_are_sorted_merged_and_normalized():
    m = from_atoms([(0.5, 2.0), (-0.5, 1.0), (0.5 + 5e-13, 1.0)])
    assert len(m) == 2
    assert np.allclose(m.positions, [-0.5, 0.5], atol=1e-12)
    assert np.allclose(m.weights, [0.25, 0.75], atol=1e-15)
    assert abs(float(m.weights.sum()) - 1.0) <= 1e-15


def test_merge_preserves_barycenter():
    raw_x = [0.3, 0.3 + 9e-13, -0.7]
    raw_w = [1.0, 3.0, 4.0]
    m = measure_from_arrays(raw_x, raw_w)
    assert len(m) == 2
    expected = float(np.asarray(raw_x) @ np.asarray(raw_w)) / 8.0
    assert abs(m.barycenter() - expected) <= 1e-15


def test_invalid_inputs_are_rejected():
    with pytest.raises(EmptyInput):
        from_atoms([])
    with pytest.raises(NonPositiveWeight):
        from_atoms([(0.0, 0.0)])
    with pytest.raises(NonPositiveWeight):
        from_atoms([(0.0, -1.0)])
    with pytest.raises(ValueError):
        measure_from_arrays([0.0, np.inf], [0.5, 0.5])
    with pytest.raises(ValueError):
        DiscreteMeasure(np.array([0.0, 1.0]), np.array([0.6, 0.6]))
    with pytest.raises(ValueError):
        DiscreteMeasure(np.array([1.0, 0.0]), np.array([0.5, 0.5]))


def test_measure_arrays_are_readonly():
    m = from_atoms([(0.0, 0.5), (1.0, 0.5)])
    with pytest.raises(ValueError):
        m.positions[0] = 3.0
    with pytest.raises(ValueError):
        m.weights[0] = 3.0


def test_isclose_distinguishes_atom_counts():
    a = from_atoms([(0.0, 1.0)])
    b = from_atoms([(0.0, 0.5), (1.0, 0.5)])
    assert a.isclose(a)
    assert not a.isclose(b)


def test_quantile_is_left_continuous():
    m = from_atoms([(-1.0, 0.25), (0.0, 0.5), (2.0, 0.25)])
    q = quantile(m)
    assert q.value_at(1e-9) == -1.0
    assert q.value_at(0.25) == -1.0  # breakpoint belongs to the piece ending there
    assert q.value_at(0.25 + 1e-12) == 0.0
    assert q.value_at(0.75) == 0.0
    assert q.value_at(1.0) == 2.0


def test_quantile_round_trip():
    for t in range(50):
        m = random_measure(trial_rng(100, t))
        back = measure_from_quantile(quantile(m))
        # canonicalization recomputes positions as weighted means, so the
        # round trip is exact only up to one rounding of (w * x) / w
        assert back.isclose(m, atol=1e-15)


def test_step_quantile_validation():
    with pytest.raises(ValueError):
        StepQuantile(np.array([0.0, 0.5]), np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        StepQuantile(np.array([0.1, 1.0]), np.array([1.0]))
    with pytest.raises(ValueError):
        StepQuantile(np.array([0.0, 0.5, 1.0]), np.array([2.0, 1.0]))


def test_general_quantile_evaluation_and_jumps():
    q = GeneralQuantile.from_pieces([(0.5, 1.0, 0.5), (1.0, 0.0, 2.0)])
    assert q.value_at(0.25) == pytest.approx(0.25, abs=1e-15)
    assert q.value_at(0.5) == pytest.approx(0.5, abs=1e-15)
    assert q.value_at(0.75) == 2.0  # upward jump at 0.5 lands on the flat piece
    with pytest.raises(ValueError):
        GeneralQuantile.from_pieces([(0.5, 0.0, 1.0), (1.0, 0.0, 0.5)])
    with pytest.raises(ValueError):
        GeneralQuantile.from_pieces([(0.5, -1.0, 0.5), (1.0, 0.0, 1.0)])
    with pytest.raises(EmptyInput):
        GeneralQuantile.from_pieces([])


def test_step_quantile_as_general_agrees():
    m = from_atoms([(-0.5, 0.25), (0.25, 0.5), (1.5, 0.25)])
    q = quantile(m)
    g = q.as_general()
    probes = np.array([0.1, 0.25, 0.3, 0.75, 0.9, 1.0])
    assert np.allclose(g.value_at(probes), q.value_at(probes), atol=0.0)


def test_discretize_uniform_quantile():
    q = GeneralQuantile.from_pieces([(1.0, 1.0, 1.0)])
    m = discretize(q, 4)
    assert np.allclose(m.positions, [0.125, 0.375, 0.625, 0.875], atol=0.0)
    assert np.allclose(m.weights, 0.25, atol=1e-15)
    assert m.barycenter() == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(ValueError):
        discretize(q, 0)


def test_discretize_recovers_dyadic_measure():
    m = from_atoms([(-1.0, 0.25), (0.5, 0.25), (2.0, 0.5)])
    assert discretize(quantile(m), 8).isclose(m, atol=1e-15)


def test_record_round_trip():
    m = from_atoms([(-0.25, 0.5), (1.0, 0.5)])
    rec = measure_record(m)
    assert rec == {"atoms": [{"x": -0.25, "w": 0.5}, {"x": 1.0, "w": 0.5}]}
    assert parse_measure_record(rec).isclose(m, atol=0.0)


def test_quantile_pieces_record_is_discretized():
    rec = {"quantile_pieces": [{"u_hi": 1.0, "slope": 1.0, "value_hi": 1.0}]}
    m = parse_measure_record(rec, discretize_n=4)
    assert np.allclose(m.positions, [0.125, 0.375, 0.625, 0.875], atol=0.0)


def test_malformed_records_are_rejected():
    bad = [
        "not a mapping",
        {},
        {"atoms": []},
        {"atoms": [{"x": 0.0}]},
        {"atoms": [{"x": 0.0, "w": 1.0, "extra": 2.0}]},
        {"atoms": [{"x": "zero", "w": 1.0}]},
        {"quantile_pieces": [{"u_hi": 1.0, "slope": 1.0}]},
    ]
    for obj in bad:
        with pytest.raises(MalformedRecord):
            parse_measure_record(obj)
