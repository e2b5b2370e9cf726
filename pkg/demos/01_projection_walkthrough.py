"""
Projecting a measure onto the measures below (or above) another one
===================================================================

A Dirac mass at 0 and a two-point measure are not comparable in the
convex order: their means differ, and no amount of convexity fixes
that.  The two projections repair the pair from either side, and both
repairs cost exactly the same amount of transport.
"""

from cvxorder import equaldist_check, from_atoms, is_convex_order, project_I, project_J, wasserstein

mu = from_atoms([(0.0, 1.0)])
nu = from_atoms([(-0.25, 0.5), (1.0, 0.5)])

print("source mu  : atoms", [(float(x), float(w)) for x, w in zip(mu.positions, mu.weights)], " mean", mu.barycenter())
print("target nu  : atoms", [(float(x), float(w)) for x, w in zip(nu.positions, nu.weights)], " mean", nu.barycenter())
print("W_1(mu, nu) =", wasserstein(mu, nu, 1.0))
print("W_2(mu, nu) =", wasserstein(mu, nu, 2.0))
print()

# the closest measure to mu among those dominated by nu: it must carry
# nu's mean, so the Dirac slides to nu's barycenter
res_lower = project_I(mu, nu, p=2.0)
lower = res_lower.projected
print("dominated projection:", [(float(x), float(w)) for x, w in zip(lower.positions, lower.weights)])
print("  distance moved     :", res_lower.distance_to_input)
print("  sits below nu      :", is_convex_order(lower, nu))

# the closest measure to nu among those dominating mu: nu translates
# until its mean matches mu's
res_upper = project_J(mu, nu, p=2.0)
upper = res_upper.projected
print("dominating projection:", [(float(x), float(w)) for x, w in zip(upper.positions, upper.weights)])
print("  distance moved     :", res_upper.distance_to_input)
print("  sits above mu      :", is_convex_order(mu, upper))
print()

# both projections are read off one convex hull, so they move in step:
# the near distances agree, and so do the cross distances
d_i_mu, d_j_nu, d_i_nu, d_j_mu = equaldist_check(mu, nu, p=2.0)
print("W_2(I, mu) =", d_i_mu, "  W_2(J, nu) =", d_j_nu)
print("W_2(I, nu) =", d_i_nu, "  W_2(J, mu) =", d_j_mu)
print("equal-distance residuals:", abs(d_i_mu - d_j_nu), abs(d_i_nu - d_j_mu))
print()

# the projected measure never depends on the order of the distance
for p in (1.0, 2.0, 3.0):
    same = project_I(mu, nu, p=p).projected.isclose(lower, atol=1e-12)
    print(f"p = {p}: projection unchanged -> {same}")
