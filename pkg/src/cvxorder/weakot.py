"""Weak quadratic transport between discrete measures.

Instead of paying for every displaced particle, the weak quadratic cost
charges each source atom for the squared distance between its position and
the barycenter of where its mass goes.  The objective

    sum_i mu_i * (x_i - (P y)_i / mu_i)**2

is convex in the plan P but not separable, so it is minimized by projected
gradient descent over the transportation polytope.  The minimal value equals
the squared 2-Wasserstein distance between the first marginal and its
projection onto the set of measures dominated in convex order by the second,
and the row-barycenter pushforward of an optimal plan recovers that
projection.  Plans are dense (m x n) arrays; Dykstra's alternating scheme
handles the polytope projection.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidP, NoConvergence
from .measures import DiscreteMeasure, _readonly, measure_from_arrays

MARGINAL_TOL = 1e-10
_NEGATIVE_TOL = 1e-10


@dataclass(frozen=True)
class TransportPlan:
    """Coupling matrix with prescribed row and column sums.

    Entries may carry rounding dust down to -1e-10, which is clipped on
    construction; anything more negative is rejected.
    """

    matrix: np.ndarray
    row_marginals: np.ndarray
    col_marginals: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=float)
        row = _readonly(self.row_marginals)
        col = _readonly(self.col_marginals)
        if mat.ndim != 2 or mat.shape != (row.size, col.size):
            raise ValueError("matrix shape must match the marginal lengths")
        if not np.all(np.isfinite(mat)):
            raise ValueError("plan entries must be finite")
        if mat.min(initial=0.0) < -_NEGATIVE_TOL:
            raise ValueError("plan entries must be nonnegative")
        mat = np.clip(mat, 0.0, None)
        if np.max(np.abs(mat.sum(axis=1) - row)) > MARGINAL_TOL:
            raise ValueError("row sums do not match the first marginal")
        if np.max(np.abs(mat.sum(axis=0) - col)) > MARGINAL_TOL:
            raise ValueError("column sums do not match the second marginal")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "row_marginals", row)
        object.__setattr__(self, "col_marginals", col)


_POLISH_EVERY = 25


def _active_set_polish(z0, free, u, row_target, col_target, tol):
    """Exact projection onto the polytope for a guessed set of zero entries.

    Solves the stationarity system Q = z0 + alpha_i + beta_j on the free
    entries (zero elsewhere) for the marginal constraints, then verifies the
    guess: free entries nonnegative, pinned entries with a nonnegative
    multiplier, marginals within ``tol``.  Returns None when the guess fails.
    ``u`` holds the row weights of the inner product (ones for the Euclidean
    case), which only enter the column equations.
    """
    m, n = z0.shape
    k_row = free.sum(axis=1).astype(float)
    uw = free * u[:, None]
    k_col = uw.sum(axis=0)
    if (k_row == 0.0).any() or (k_col == 0.0).any():
        return None
    system = np.zeros((m + n, m + n))
    system[:m, :m] = np.diag(k_row)
    system[:m, m:] = free
    system[m:, :m] = uw.T
    system[m:, m:] = np.diag(k_col)
    rhs = np.concatenate(
        (
            row_target - np.where(free, z0, 0.0).sum(axis=1),
            col_target - (uw * z0).sum(axis=0),
        )
    )
    solution, *_ = np.linalg.lstsq(system, rhs, rcond=None)
    shifted = z0 + solution[:m, None] + solution[None, m:]
    if np.any(shifted[~free] > 1e-12):
        return None
    q = np.where(free, shifted, 0.0)
    if q.min(initial=0.0) < -1e-12:
        return None
    q = np.clip(q, 0.0, None)
    err = max(
        np.max(np.abs(q.sum(axis=1) - row_target)),
        np.max(np.abs(u @ q - col_target)),
    )
    if err > tol:
        return None
    return q


def project_transport_polytope(
    matrix,
    row_marginals,
    col_marginals,
    tol: float = 1e-12,
    max_sweeps: int = 10000,
) -> np.ndarray:
    """Euclidean projection of a matrix onto the transportation polytope.

    Dykstra's alternating scheme over two convex sets: the affine space of
    matrices with the prescribed row and column sums, and the nonnegative
    cone.  The affine projection is closed form (a rank-two correction), so
    only the cone step carries a Dykstra correction.  Terminates when both
    marginal errors are below ``tol`` (iterates are nonnegative by
    construction).  Every few sweeps the active set suggested by the current
    iterate is tested by an exact KKT solve, which ends the slow tail of the
    alternation once the face is identified.
    """
    y = np.asarray(matrix, dtype=float).copy()
    z0 = y.copy()
    row = np.asarray(row_marginals, dtype=float)
    col = np.asarray(col_marginals, dtype=float)
    m, n = row.size, col.size
    if y.shape != (m, n):
        raise ValueError("matrix shape must match the marginal lengths")
    ones = np.ones(m)
    p_cone = np.zeros_like(y)
    for sweep in range(max_sweeps):
        a = (row - y.sum(axis=1)) / n
        b = (col - y.sum(axis=0) - a.sum()) / m
        y = y + a[:, None] + b[None, :]
        z = y + p_cone
        y = np.clip(z, 0.0, None)
        p_cone = z - y
        err = max(
            np.max(np.abs(y.sum(axis=1) - row)),
            np.max(np.abs(y.sum(axis=0) - col)),
        )
        if err <= tol:
            return y
        if sweep % _POLISH_EVERY == 0:
            polished = _active_set_polish(z0, y > 0.0, ones, row, col, tol)
            if polished is not None:
                return polished
    raise NoConvergence("polytope projection did not reach tolerance")


def _project_kernel_polytope(
    kernel,
    mu_w,
    nu_w,
    tol: float = 1e-12,
    max_sweeps: int = 10000,
    hint=None,
):
    """Dykstra projection of a row kernel in the mu-weighted inner product.

    Feasible kernels Q satisfy Q >= 0, unit row sums, and mu-weighted column
    sums equal to the second marginal; the plan is recovered as mu_i * Q_ij.
    Working in this metric keeps the gradient curvature uniform across rows,
    where in plan coordinates it blows up as 1/min(mu).  As in
    :func:`project_transport_polytope` the two marginal constraints are one
    affine set with a closed-form (rank-two) projection, so the alternation
    is affine set vs nonnegative cone, with periodic exact active-set solves.

    Returns ``(q, face)`` where ``face`` is the verified free-entry mask, so
    a caller projecting a sequence of nearby points can pass it back as
    ``hint``; the hint only ever short-circuits a fully verified KKT solve,
    never the answer itself.
    """
    y = np.asarray(kernel, dtype=float).copy()
    z0 = y.copy()
    n = nu_w.size
    row_target = np.ones(mu_w.size)
    if hint is not None:
        polished = _active_set_polish(z0, hint, mu_w, row_target, nu_w, tol)
        if polished is not None:
            return polished, hint
    p_cone = np.zeros_like(y)
    for sweep in range(max_sweeps):
        alpha = (1.0 - y.sum(axis=1)) / n
        beta = nu_w - mu_w @ y - float(mu_w @ alpha)
        y = y + alpha[:, None] + beta[None, :]
        z = y + p_cone
        y = np.clip(z, 0.0, None)
        p_cone = z - y
        err = max(
            np.max(np.abs(y.sum(axis=1) - 1.0)),
            np.max(np.abs(mu_w @ y - nu_w)),
        )
        if err <= tol:
            return y, y > 0.0
        if sweep % _POLISH_EVERY == 0:
            free = y > 0.0
            polished = _active_set_polish(z0, free, mu_w, row_target, nu_w, tol)
            if polished is not None:
                return polished, free
    raise NoConvergence("polytope projection did not reach tolerance")


def _objective_and_residual(kernel, x, y, mu_w):
    r = x - kernel @ y
    return float(mu_w @ r**2), r


def _max_correlation(r, mu_w, y, nu_w) -> float:
    """Largest E[r * y] over couplings of the two weighted samples.

    Attained by the comonotone coupling: sort both samples and fill a
    north-west-corner plan along the two sorted orders.
    """
    order_r = np.argsort(r, kind="stable")
    order_y = np.argsort(y, kind="stable")
    rs, ws = r[order_r], mu_w[order_r].copy()
    ys, vs = y[order_y], nu_w[order_y].copy()
    total = 0.0
    i = j = 0
    while i < rs.size and j < ys.size:
        m = ws[i] if ws[i] <= vs[j] else vs[j]
        total += m * rs[i] * ys[j]
        ws[i] -= m
        vs[j] -= m
        if ws[i] <= 0.0:
            i += 1
        if j < vs.size and vs[j] <= 0.0:
            j += 1
    return total


_GAP_TOL = 1e-9
_GAP_RTOL = 1e-7


def weak_ot_solve(
    m_mu: DiscreteMeasure,
    m_nu: DiscreteMeasure,
    p: float = 2.0,
    max_iter: int = 100000,
    tol: float = 1e-10,
):
    """Minimize the barycentric quadratic cost over couplings of the two measures.

    Only the quadratic case is implemented; other exponents raise
    :class:`InvalidP`.  Returns ``(value, TransportPlan)`` where ``value`` is
    the squared cost.  Projected gradient descent with Armijo backtracking
    and Nesterov momentum (restarted whenever extrapolation overshoots),
    started from the product coupling; raises :class:`NoConvergence` when the
    iteration cap is hit without the objective settling.  Iterates live in
    row-kernel coordinates (see :func:`_project_kernel_polytope`) so the step
    scale 1/L with L = 2*sum(y**2) is valid for every instance.

    Termination: the gradient is rank-one, so minimizing it linearly over the
    polytope is a comonotone pairing; the resulting duality gap bounds the
    distance to the optimal value and stops the iteration as soon as it drops
    below 1e-9.  The objective-decrease rule (< tol) is kept as a fallback.
    """
    if p != 2.0:
        raise InvalidP("only the quadratic cost (p = 2) is supported")
    x, mu_w = m_mu.positions, m_mu.weights
    y, nu_w = m_nu.positions, m_nu.weights
    kernel = np.tile(nu_w, (mu_w.size, 1))
    value, r = _objective_and_residual(kernel, x, y, mu_w)
    step = 1.0 / (2.0 * float(y @ y) + 1e-30)
    prev = kernel
    t_mom = 1.0
    face = None
    for _ in range(max_iter):
        plain = t_mom == 1.0
        t_next = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t_mom * t_mom))
        z = kernel if plain else kernel + ((t_mom - 1.0) / t_next) * (kernel - prev)
        z_value, z_r = _objective_and_residual(z, x, y, mu_w)
        while True:
            try:
                candidate, face = _project_kernel_polytope(
                    z + 2.0 * step * np.outer(z_r, y), mu_w, nu_w, hint=face
                )
            except NoConvergence:
                if step < 1e-18:
                    raise
                step *= 0.5
                continue
            cand_value, cand_r = _objective_and_residual(candidate, x, y, mu_w)
            # backtracking on the quadratic majorization at z, not on the raw
            # value: the extrapolated z may sit outside the cone, where the
            # projected step legitimately lands above f(z)
            delta = candidate - z
            dz = delta @ y
            model = (
                z_value
                - 2.0 * float((mu_w * z_r) @ dz)
                + 0.5 / step * float(mu_w @ (delta * delta).sum(axis=1))
            )
            if cand_value <= model + 1e-12 or step < 1e-18:
                break
            step *= 0.5
        if cand_value > value + 1e-15:
            if plain:
                # a momentum-free projected step cannot decrease any further:
                # numerically stationary, hence optimal by convexity
                return value, TransportPlan(mu_w[:, None] * kernel, mu_w, nu_w)
            prev = kernel
            t_mom = 1.0
            continue
        decrease = value - cand_value
        prev, kernel, value, r = kernel, candidate, cand_value, cand_r
        t_mom = t_next
        gap = 2.0 * (_max_correlation(r, mu_w, y, nu_w) - float(mu_w * r @ (kernel @ y)))
        if gap <= max(_GAP_TOL, _GAP_RTOL * value):
            return value, TransportPlan(mu_w[:, None] * kernel, mu_w, nu_w)
        if decrease < tol:
            if plain:
                return value, TransportPlan(mu_w[:, None] * kernel, mu_w, nu_w)
            # settle the decrease rule without momentum artifacts
            prev = kernel
            t_mom = 1.0
    raise NoConvergence("projected gradient did not converge within the iteration cap")


def weak_ot_value(m_mu: DiscreteMeasure, m_nu: DiscreteMeasure, p: float = 2.0) -> float:
    """Minimal barycentric quadratic cost (the squared weak transport distance)."""
    value, _ = weak_ot_solve(m_mu, m_nu, p)
    return value


def plan_barycenter_pushforward(
    plan: TransportPlan, m_mu: DiscreteMeasure, m_nu: DiscreteMeasure
) -> DiscreteMeasure:
    """Image of the first marginal under the row-barycenter map of a plan.

    For an optimal plan this is the projection of the first measure onto the
    set of measures dominated by the second in convex order.
    """
    b = plan.matrix @ m_nu.positions / m_mu.weights
    return measure_from_arrays(b, m_mu.weights)
