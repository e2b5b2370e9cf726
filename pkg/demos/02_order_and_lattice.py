"""
Lattice operations in the convex order, and why they are not Lipschitz
======================================================================

Measures with a common barycenter form a lattice under the convex
order: any two have a greatest lower bound and a least upper bound,
computed through their potential functions.  Unlike the projections,
these operations amplify perturbations, and the amplification grows
like n**(1/p) on a family of interlacing grid measures.
"""

import numpy as np

from cvxorder import (
    comb_family,
    is_convex_order,
    lattice_ratio,
    max_convex,
    min_convex,
    sandwich_check,
    wasserstein,
)

mu, nu, eta = comb_family(4)
print("three interlacing measures on the grid of [0, 1]:")
for name, m in (("mu ", mu), ("nu ", nu), ("eta", eta)):
    print(f"  {name}: positions {np.round(m.positions, 4)} weights {np.round(m.weights, 4)}")
print()

print("chain in the convex order: eta <= mu:", is_convex_order(eta, mu),
      " mu <= nu:", is_convex_order(mu, nu))
print()

# on an ordered pair the lattice collapses to the pair itself
print("min(mu, nu) == mu:", min_convex(mu, nu).isclose(mu, atol=1e-12))
print("max(mu, nu) == nu:", max_convex(mu, nu).isclose(nu, atol=1e-12))
print("projections bracketed by min/max:", sandwich_check(mu, nu))
print()

# replacing nu by the nearby eta moves max(mu, .) much further than
# the perturbation itself; the ratio is exactly n**(1/p)/2
print("perturbation cost  W_1(eta, nu) =", wasserstein(eta, nu, 1.0))
print("lattice response   W_1(max(mu,nu), max(mu,eta)) =",
      wasserstein(max_convex(mu, nu), max_convex(mu, eta), 1.0))
print()

print(" n   p   ratio        n**(1/p)/2")
for n in (3, 4, 8, 16, 32):
    for p in (1.0, 2.0, 3.0):
        ratio = lattice_ratio(n, p)
        print(f"{n:3d} {p:3.0f}   {ratio:10.6f}   {n ** (1.0 / p) / 2.0:10.6f}")
print()
print("the ratio is unbounded in n, so no Lipschitz constant exists")
