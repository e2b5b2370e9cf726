"""
Stability of the projections under perturbation of both arguments
=================================================================

Moving the pair (mu, nu) to (mu', nu') moves the dominated projection
by at most 2*W_p(mu, mu') + W_p(nu, nu'), and the dominating one by at
most W_p(mu, mu') + 2*W_p(nu, nu').  A randomized audit measures how
much of that allowance real instances use, and a two-point family
shows the constant 2 cannot be improved.
"""

import numpy as np

from cvxorder import from_atoms, lipschitz_audit, project_I, random_measure, trial_rng, wasserstein

trials = 2000
ratios = np.empty(trials)
for t in range(trials):
    rng = trial_rng(12, t)
    report = lipschitz_audit(
        random_measure(rng), random_measure(rng), random_measure(rng), random_measure(rng), p=2.0
    )
    assert report.holds_I and report.holds_J
    ratios[t] = max(report.ratio_I or 0.0, report.ratio_J or 0.0)

print(f"{trials} random quadruples at p = 2, all within both bounds")
print("share of allowance used (lhs/rhs): mean {:.4f}  median {:.4f}  max {:.4f}".format(
    ratios.mean(), float(np.median(ratios)), ratios.max()))
print()

# generic instances stay far from the bound; a two-point measure with a
# vanishing atom approaches it
print("alpha      gap/base   (constant approached: 2)")
dirac0 = from_atoms([(0.0, 1.0)])
for alpha in (0.5, 0.1, 0.01, 0.001):
    nu_a = from_atoms([(-(alpha**2), 1.0 - alpha), (1.0, alpha)])
    gap = wasserstein(
        project_I(nu_a, nu_a, p=1.0).projected,
        project_I(dirac0, nu_a, p=1.0).projected,
        1.0,
    )
    base = wasserstein(dirac0, nu_a, 1.0)
    print(f"{alpha:7.3f}   {gap / base:.6f}")
