"""Built-in reference fixtures with independently derived expected values.

Each fixture exercises one public operation on a closed-form instance: the
two-point sharpness family, the interlacing comb measures, the quartet of
continuous-quantile measures whose projection distances add exactly, and the
small weak-transport instances.  ``run_replay`` evaluates everything and
returns per-fixture records plus two plot tables (lattice amplification
against grid size, sharpness ratio against the two-point parameter).
"""

import numpy as np

from .lattice import comb_family, lattice_ratio, max_convex, min_convex, sandwich_check
from .measures import (
    DiscreteMeasure,
    GeneralQuantile,
    discretize,
    from_atoms,
    measure_from_arrays,
    quantile,
)
from .projection import (
    equaldist_check,
    is_convex_order,
    lipschitz_audit,
    project_I,
    project_J,
    wasserstein,
)
from .weakot import plan_barycenter_pushforward, weak_ot_solve

SWEEP_ALPHAS = (0.5, 0.1, 0.05, 0.01, 0.005, 0.001)
LATTICE_NS = tuple(range(3, 33))
LATTICE_PS = (1.0, 2.0, 3.0)


def dirac(x: float) -> DiscreteMeasure:
    return measure_from_arrays([x], [1.0])


def two_point_family(alpha: float) -> DiscreteMeasure:
    """(1-a) mass at -a^2 and a at 1; barycenter a(1 - a(1-a))."""
    return from_atoms([(-(alpha**2), 1.0 - alpha), (1.0, alpha)])


def projected_dirac_position(alpha: float) -> float:
    """Barycenter of the two-point measure: where its dominated projection of a Dirac sits."""
    return alpha * (1.0 - alpha * (1.0 - alpha))


def sharpness_gap(alpha: float) -> float:
    """Distance between the two-point measure and the Dirac at its mean.

    Closed form 2*(a + a^2*(a*(1-a) - 1)), re-derived by integrating the
    quantile difference: both branches contribute (1-a)*|m + a^2| + a*(1-m)
    with m the barycenter, which expands to 2a(1-a)(1+a^2).
    """
    return 2.0 * (alpha + alpha**2 * (alpha * (1.0 - alpha) - 1.0))


def sharpness_distance(alpha: float) -> float:
    """1-Wasserstein distance from the Dirac at zero to the two-point measure."""
    return alpha + alpha**2 * (1.0 - alpha)


def quartet():
    """Two measure pairs with piecewise-affine quantiles whose squared
    projection distance splits exactly into the two marginal distances."""
    q_mu = GeneralQuantile.from_pieces([(0.5, 1.0, 0.5), (1.0, 0.5, 1.0)])
    q_nu = GeneralQuantile.from_pieces([(1.0, 0.5, 0.5)])
    q_mu2 = GeneralQuantile.from_pieces([(0.5, 1.0, 0.5), (1.0, 5.0 / 18.0, 17.0 / 18.0)])
    q_nu2 = GeneralQuantile.from_pieces([(0.5, 1.0 / 3.0, 1.0 / 6.0), (1.0, 0.5, 0.5)])
    return q_mu, q_nu, q_mu2, q_nu2


def quartet_target_first(u):
    """Quantile of the dominated projection for the first quartet pair."""
    return np.asarray(u, dtype=float) / 2.0


def quartet_target_second(u):
    """Quantile of the dominated projection for the second quartet pair."""
    u = np.asarray(u, dtype=float)
    return np.where(u <= 0.5, u / 3.0, (3.0 + 5.0 * u) / 18.0)


def _atoms(m: DiscreteMeasure):
    return [[float(x), float(w)] for x, w in zip(m.positions, m.weights)]


def _record(name, expected, computed, tol, ok):
    return {
        "fixture": name,
        "expected": expected,
        "computed": computed,
        "tol": float(tol),
        "pass": bool(ok),
    }


def _scalar(records, name, expected, computed, tol):
    records.append(
        _record(name, float(expected), float(computed), tol, abs(expected - computed) <= tol)
    )


def _measure(records, name, expected: DiscreteMeasure, computed: DiscreteMeasure, tol):
    records.append(
        _record(name, _atoms(expected), _atoms(computed), tol, expected.isclose(computed, atol=tol))
    )


def _flag(records, name, expected: bool, computed: bool):
    records.append(_record(name, bool(expected), bool(computed), 0.0, computed == expected))


def lattice_table():
    """Rows (n, p, computed ratio, exact n**(1/p)/2) over the checked grid."""
    return [
        (n, p, lattice_ratio(n, p), n ** (1.0 / p) / 2.0) for n in LATTICE_NS for p in LATTICE_PS
    ]


def alpha_table():
    """Sharpness sweep: gap, base distance, and their ratio (approaching 2).

    The gap is measured twice, through the dominated-side projections and
    through the dominating-side ones, which coincide here.
    """
    rows = []
    for alpha in SWEEP_ALPHAS:
        nu_a = two_point_family(alpha)
        target = dirac(projected_dirac_position(alpha))
        gap_lower = wasserstein(project_I(nu_a, nu_a, p=1.0).projected,
                                project_I(dirac(0.0), nu_a, p=1.0).projected, 1.0)
        gap_upper = wasserstein(project_J(target, nu_a, p=1.0).projected,
                                project_J(target, dirac(0.0), p=1.0).projected, 1.0)
        base = wasserstein(dirac(0.0), nu_a, 1.0)
        rows.append(
            {
                "alpha": alpha,
                "gap_lower": gap_lower,
                "gap_upper": gap_upper,
                "base_distance": base,
                "ratio": gap_lower / base,
            }
        )
    return rows


def run_replay(discretize_n: int = 4096):
    """Evaluate every reference fixture; returns (records, lattice_rows, alpha_rows)."""
    records = []
    mu4, nu4, eta4 = comb_family(4)
    nu_half = two_point_family(0.5)

    # measure assembly and its quantile/barycenter on the two closed families
    _measure(
        records,
        "comb-assembly-n4",
        nu4,
        from_atoms([(0.0, 0.125), (0.25, 0.25), (0.5, 0.25), (0.75, 0.25), (1.0, 0.125)]),
        1e-12,
    )
    q = quantile(nu_half)
    ok_q = (
        abs(q.value_at(0.25) + 0.25) <= 1e-12
        and abs(q.value_at(0.5) + 0.25) <= 1e-12
        and abs(q.value_at(0.75) - 1.0) <= 1e-12
        and abs(q.value_at(1.0) - 1.0) <= 1e-12
    )
    records.append(
        _record(
            "two-point-quantile-alpha-0.5",
            [-0.25, -0.25, 1.0, 1.0],
            [q.value_at(u) for u in (0.25, 0.5, 0.75, 1.0)],
            1e-12,
            ok_q,
        )
    )
    _scalar(records, "two-point-barycenter-alpha-0.5", 0.375, nu_half.barycenter(), 1e-12)

    # distances on the comb family and the two-point family
    _scalar(records, "comb-distance-mu-nu-p1", 0.125, wasserstein(mu4, nu4, 1.0), 1e-12)
    _scalar(records, "comb-distance-eta-nu-p1", 0.0625, wasserstein(eta4, nu4, 1.0), 1e-12)
    _scalar(records, "comb-distance-eta-nu-p2", 0.125, wasserstein(eta4, nu4, 2.0), 1e-12)
    _scalar(records, "two-point-base-distance", 0.625, wasserstein(dirac(0.0), nu_half, 1.0), 1e-12)

    # order predicate on the comb chain
    _flag(records, "comb-order-eta-mu", True, is_convex_order(eta4, mu4))
    _flag(records, "comb-order-mu-nu", True, is_convex_order(mu4, nu4))

    # projections: Dirac target, two-point family, ordered pair
    _measure(
        records, "project-lower-onto-dirac", dirac(0.3), project_I(mu4, dirac(0.3)).projected, 1e-12
    )
    _measure(
        records, "project-upper-above-dirac", mu4, project_J(mu4, dirac(0.3)).projected, 1e-12
    )
    _measure(
        records,
        "project-lower-two-point",
        dirac(0.375),
        project_I(dirac(0.0), nu_half).projected,
        1e-12,
    )
    _measure(
        records,
        "project-upper-two-point",
        nu_half,
        project_J(dirac(0.375), nu_half).projected,
        1e-12,
    )
    _measure(records, "project-lower-ordered-pair", mu4, project_I(mu4, nu4).projected, 1e-12)
    d_i_mu, d_j_nu, _, _ = equaldist_check(dirac(0.0), nu_half, 1.0)
    _scalar(records, "equaldist-first-pair-lower", 0.375, d_i_mu, 1e-12)
    _scalar(records, "equaldist-first-pair-upper", 0.375, d_j_nu, 1e-12)

    # sharpness of the stability constants on the two-point family
    for alpha in (0.5, 0.1, 0.01, 0.001):
        nu_a = two_point_family(alpha)
        gap = wasserstein(
            project_I(nu_a, nu_a, p=1.0).projected,
            project_I(dirac(0.0), nu_a, p=1.0).projected,
            1.0,
        )
        _scalar(records, f"sharpness-gap-alpha-{alpha}", sharpness_gap(alpha), gap, 1e-12)
    ratio = sharpness_gap(0.001) / sharpness_distance(0.001)
    nu_small = two_point_family(0.001)
    computed_ratio = wasserstein(
        project_I(nu_small, nu_small, p=1.0).projected,
        project_I(dirac(0.0), nu_small, p=1.0).projected,
        1.0,
    ) / wasserstein(dirac(0.0), nu_small, 1.0)
    _scalar(records, "sharpness-ratio-alpha-0.001", ratio, computed_ratio, 1e-9)
    _scalar(records, "sharpness-ratio-near-two", 1.99601, computed_ratio, 1e-3)

    # quartet: additivity of squared distances and the projected quantiles
    q_mu, q_nu, q_mu2, q_nu2 = quartet()
    n = int(discretize_n)
    d_mu, d_nu = discretize(q_mu, n), discretize(q_nu, n)
    d_mu2, d_nu2 = discretize(q_mu2, n), discretize(q_nu2, n)
    report = lipschitz_audit(d_mu, d_mu2, d_nu, d_nu2, p=2.0)
    w_mu = wasserstein(d_mu, d_mu2, 2.0)
    w_nu = wasserstein(d_nu, d_nu2, 2.0)
    split = abs(report.lhs_I**2 - w_mu**2 - w_nu**2)
    records.append(
        _record(
            "quartet-squared-distance-split",
            0.0,
            float(split),
            1e-3,
            split <= 1e-3 and w_mu > 0.0 and w_nu > 0.0,
        )
    )
    mids = (np.arange(n) + 0.5) / n
    err_first = np.max(
        np.abs(quantile(project_I(d_mu, d_nu).projected).value_at(mids) - quartet_target_first(mids))
    )
    err_second = np.max(
        np.abs(
            quantile(project_I(d_mu2, d_nu2).projected).value_at(mids) - quartet_target_second(mids)
        )
    )
    records.append(
        _record("quartet-first-projection-quantile", 0.0, float(err_first), 1e-3, err_first <= 1e-3)
    )
    records.append(
        _record(
            "quartet-second-projection-quantile", 0.0, float(err_second), 1e-3, err_second <= 1e-3
        )
    )

    # lattice operations on the comb chain
    _measure(records, "lattice-min-mu-nu", mu4, min_convex(mu4, nu4), 1e-12)
    _measure(records, "lattice-min-mu-eta", eta4, min_convex(mu4, eta4), 1e-12)
    _measure(records, "lattice-max-mu-nu", nu4, max_convex(mu4, nu4), 1e-12)
    _measure(records, "lattice-max-mu-eta", mu4, max_convex(mu4, eta4), 1e-12)
    _scalar(records, "lattice-ratio-n4-p1", 2.0, lattice_ratio(4, 1.0), 1e-12)
    _scalar(records, "lattice-ratio-n4-p2", 1.0, lattice_ratio(4, 2.0), 1e-12)
    _scalar(records, "lattice-ratio-n16-p2", 2.0, lattice_ratio(16, 2.0), 1e-12)
    _flag(records, "sandwich-comb", True, sandwich_check(mu4, nu4))
    _measure(records, "sandwich-comb-lower-tight", mu4, project_I(mu4, nu4).projected, 1e-12)

    # weak transport on the forced-plan instance
    value, plan = weak_ot_solve(dirac(0.0), nu_half)
    _scalar(records, "weak-transport-value", 0.140625, value, 1e-9)
    _measure(
        records,
        "weak-transport-pushforward",
        dirac(0.375),
        plan_barycenter_pushforward(plan, dirac(0.0), nu_half),
        1e-9,
    )

    lattice_rows = lattice_table()
    for n_row, p_row, computed, exact in lattice_rows:
        if abs(computed - exact) > 1e-12:
            records.append(
                _record(f"lattice-ratio-n{n_row}-p{p_row}", exact, computed, 1e-12, False)
            )
    alpha_rows = alpha_table()
    for row in alpha_rows:
        if abs(row["gap_lower"] - row["gap_upper"]) > 1e-12:
            records.append(
                _record(
                    f"sharpness-mirror-alpha-{row['alpha']}",
                    row["gap_lower"],
                    row["gap_upper"],
                    1e-12,
                    False,
                )
            )
    return records, lattice_rows, alpha_rows
