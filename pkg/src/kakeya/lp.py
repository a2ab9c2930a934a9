"""Small dense linear and quadratic programming routines.

The geometric problems in this package have few variables (the ambient
dimension plus one) and possibly many inequality constraints.  The main
solver is a simplex method run on the dual problem, whose basis has only
as many rows as there are variables, so each pivot costs one pass over the
constraint matrix plus an n-by-n solve.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_BOX = 1e7


@dataclass
class LPResult:
    status: str
    x: np.ndarray | None = None
    value: float = float("nan")
    basis: list = field(default_factory=list)
    iterations: int = 0

    @property
    def ok(self) -> bool:
        return self.status == OPTIMAL


def maximize(c, A, b, basis=None, tol: float = 1e-11, max_iter: int | None = None) -> LPResult:
    """Maximize c.x subject to A x <= b with x free.

    Runs the primal simplex method on the dual  min b.y, A^T y = c, y >= 0.
    A dual basis is a set of n rows of A; the matching primal point is the
    vertex where those rows are tight.  Entering rows are the most violated
    primal constraints, so the solver behaves like a cutting-plane method and
    touches only a handful of the m rows in practice.

    Artificial box rows |x_j| <= 1e7 give a dual-feasible start.  If a box row
    is still carrying weight at the optimum the problem is reported unbounded.
    `basis` may hold row indices of a previous solve as a warm start.
    """
    c = np.asarray(c, dtype=float)
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    if m == 0:
        return LPResult(UNBOUNDED if np.any(c != 0) else OPTIMAL, np.zeros(n), 0.0)
    norms = np.linalg.norm(A, axis=1)
    if np.any(norms == 0):
        # 0.x <= b_i is either always true or always false
        if np.any(b[norms == 0] < -tol):
            return LPResult(INFEASIBLE)
        keep = norms > 0
        idx = np.flatnonzero(keep)
        res = maximize(c, A[keep], b[keep], None, tol, max_iter)
        res.basis = [int(idx[i]) if i < len(idx) else i for i in res.basis]
        return res
    An = np.vstack([A / norms[:, None], np.eye(n), -np.eye(n)])
    bn = np.concatenate([b / norms, np.full(2 * n, _BOX)])
    scale = max(1.0, float(np.max(np.abs(bn[:m]))))
    feas_tol = tol * scale

    B = None
    if basis is not None and len(basis) == n:
        B = [int(i) for i in basis]
        try:
            y = np.linalg.solve(An[B].T, c)
            if np.any(y < -1e-12 * max(1.0, np.abs(c).max())):
                B = None
        except np.linalg.LinAlgError:
            B = None
    if B is None:
        B = [m + j if c[j] >= 0 else m + n + j for j in range(n)]
    if max_iter is None:
        max_iter = 50 * (m + n) + 200

    degenerate_run = 0
    for it in range(max_iter):
        AB = An[B]
        try:
            x = np.linalg.solve(AB, bn[B])
            y = np.linalg.solve(AB.T, c)
        except np.linalg.LinAlgError:
            return _fallback(c, A, b)
        y = np.maximum(y, 0.0)
        slack = bn - An @ x
        if degenerate_run > 50:
            neg = np.flatnonzero(slack < -feas_tol)
            j = int(neg[0]) if len(neg) else -1
        else:
            j = int(np.argmin(slack))
            if slack[j] >= -feas_tol:
                j = -1
        if j < 0:
            boxed = [k for k, r in enumerate(B) if r >= m and y[k] > 1e-9]
            if boxed:
                return LPResult(UNBOUNDED, x, float(c @ x), list(B), it)
            return LPResult(OPTIMAL, x, float(c @ x), list(B), it)
        z = np.linalg.solve(AB.T, An[j])
        pos = z > 1e-12
        if not np.any(pos):
            return LPResult(INFEASIBLE, None, float("nan"), list(B), it)
        ratios = np.full(n, np.inf)
        ratios[pos] = y[pos] / z[pos]
        rmin = ratios.min()
        ties = np.flatnonzero(ratios <= rmin + 1e-15)
        # prefer removing artificial box rows, then the smallest row index
        leave = int(max(ties, key=lambda k: (B[k] >= m, -B[k])))
        degenerate_run = degenerate_run + 1 if rmin <= 1e-14 else 0
        B[leave] = j
    return _fallback(c, A, b)


def _fallback(c, A, b) -> LPResult:
    """Solve with the HiGHS solver shipped in scipy when the dense pivoting stalls."""
    res = linprog(-np.asarray(c), A_ub=A, b_ub=b, bounds=[(None, None)] * len(c), method="highs",
                  options={"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10})
    if res.status == 2:
        return LPResult(INFEASIBLE)
    if res.status == 3:
        return LPResult(UNBOUNDED)
    if res.status != 0:
        raise RuntimeError(f"LP solver failed: {res.message}")
    return LPResult(OPTIMAL, res.x, float(-res.fun))


def highs_maximize(c, A, b) -> LPResult:
    """Reference solve through scipy's HiGHS wrapper (used as a test oracle)."""
    return _fallback(c, A, b)


def max_slack_point(A, b, basis=None) -> tuple[np.ndarray | None, float, list]:
    """Point maximizing the smallest normalized slack min_i (b_i - a_i.x)/|a_i|.

    The optimum radius is the inradius of {A x <= b}; it is negative when the
    set is empty.  Returns (point, radius, basis).
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float)
    m, d = A.shape
    norms = np.linalg.norm(A, axis=1)
    Aext = np.hstack([A, norms[:, None]])
    c = np.zeros(d + 1)
    c[-1] = 1.0
    res = maximize(c, Aext, b, basis=basis)
    if res.status == UNBOUNDED:
        return None, float("inf"), []
    if res.status != OPTIMAL:  # cannot happen: r -> -inf is always feasible
        raise RuntimeError("max-slack LP failed")
    return res.x[:d], float(res.x[d]), res.basis


def min_norm_point(P, tol: float = 1e-12, max_iter: int = 10000) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Wolfe's algorithm: the point of minimum Euclidean norm in conv(P).

    Returns (point, weights, indices) with point = weights @ P[indices].
    """
    P = np.atleast_2d(np.asarray(P, dtype=float))
    sq = np.einsum("ij,ij->i", P, P)
    scale = float(sq.max()) if sq.max() > 0 else 1.0
    j0 = int(np.argmin(sq))
    S = [j0]
    lam = np.array([1.0])
    x = P[j0].copy()
    for _ in range(max_iter):
        # major cycle: add the point most opposed to x
        dots = P @ x
        j = int(np.argmin(dots))
        if x @ x - dots[j] <= tol * scale or j in S:
            break
        S.append(j)
        lam = np.append(lam, 0.0)
        while True:
            # minor cycle: affine minimizer over the current corral
            Q = P[S]
            k = len(S)
            M = np.zeros((k + 1, k + 1))
            M[:k, :k] = Q @ Q.T
            M[:k, k] = 1.0
            M[k, :k] = 1.0
            rhs = np.zeros(k + 1)
            rhs[k] = 1.0
            mu = np.linalg.lstsq(M, rhs, rcond=None)[0][:k]
            if np.all(mu > 1e-14):
                lam = mu
                break
            mask = mu <= 1e-14
            diff = lam[mask] - mu[mask]
            with np.errstate(divide="ignore", invalid="ignore"):
                cand = np.where(diff > 0, lam[mask] / diff, np.inf)
            theta = min(1.0, float(cand.min())) if len(cand) else 1.0
            lam = lam + theta * (mu - lam)
            keep = lam > 1e-14
            if np.all(keep):
                keep[int(np.argmin(lam))] = False
            S = [s for s, kf in zip(S, keep) if kf]
            lam = lam[keep]
            lam = lam / lam.sum()
            if len(S) == 1:
                break
        x = lam @ P[S]
    return x, lam, np.array(S)


def project_onto_hull(p, V) -> np.ndarray:
    """Euclidean projection of p onto conv(V)."""
    p = np.asarray(p, dtype=float)
    x, _, _ = min_norm_point(np.asarray(V, dtype=float) - p)
    return x + p


def project_onto_halfspaces(p, A, b) -> np.ndarray | None:
    """Euclidean projection of p onto {A x <= b} by least-distance programming.

    The problem min |z| s.t. G z >= h (G = -A, h = A p - b) is solved through
    the non-negative least squares problem on E = [G^T; h^T], f = e_{n+1}.
    Returns None when the set is empty.
    """
    p = np.asarray(p, dtype=float)
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float)
    norms = np.linalg.norm(A, axis=1)
    A = A / norms[:, None]
    b = b / norms
    h = A @ p - b
    if np.all(h <= 0):
        return p.copy()
    # only the constraints violated or nearly active at p can matter much, but
    # all are kept: the NNLS active-set method is exact and m is moderate
    n = len(p)
    E = np.vstack([-A.T, h[None, :]])
    f = np.zeros(n + 1)
    f[n] = 1.0
    u = nnls(E, f)
    r = E @ u - f
    if abs(r[n]) < 1e-14:
        return None
    z = -r[:n] / r[n]
    return p + z


def nnls(E, f, tol: float = 1e-13, max_iter: int | None = None) -> np.ndarray:
    """Lawson-Hanson active-set solution of min |E u - f| subject to u >= 0."""
    E = np.atleast_2d(np.asarray(E, dtype=float))
    f = np.asarray(f, dtype=float)
    k, m = E.shape
    u = np.zeros(m)
    passive = np.zeros(m, dtype=bool)
    scale = max(1.0, float(np.abs(E).max()) * max(1.0, float(np.abs(f).max())))
    if max_iter is None:
        max_iter = 3 * m + 50
    for _ in range(max_iter):
        w = E.T @ (f - E @ u)
        w[passive] = -np.inf
        j = int(np.argmax(w))
        if w[j] <= tol * scale:
            break
        passive[j] = True
        while True:
            idx = np.flatnonzero(passive)
            s = np.zeros(m)
            s[idx] = np.linalg.lstsq(E[:, idx], f, rcond=None)[0]
            if np.all(s[idx] > 0):
                u = s
                break
            bad = idx[s[idx] <= 0]
            alpha = np.min(u[bad] / (u[bad] - s[bad]))
            u = u + alpha * (s - u)
            passive &= u > tol
            u[~passive] = 0.0
            if not passive.any():
                break
    return u


def hull_membership_lp(V, x, tol: float = 1e-9, chunk: int = 400) -> tuple[bool, float]:
    """Decide x in conv(V) by LP feasibility of convex-combination weights.

    Minimizes the infinity-norm residual t with |V^T lam - x| <= t, lam >= 0,
    sum lam = 1.  Large point sets are handled by column generation: a
    restricted LP over a subset of points is solved and points with negative
    reduced cost under its dual prices are added.  Returns (inside, residual).
    """
    V = np.atleast_2d(np.asarray(V, dtype=float))
    x = np.asarray(x, dtype=float)
    N, d = V.shape
    if N <= chunk:
        cols = np.arange(N)
    else:
        dist = np.einsum("ij,ij->i", V - x, V - x)
        near = np.argsort(dist)[: chunk // 2]
        extremes = np.unique(np.concatenate([np.argmax(V, axis=0), np.argmin(V, axis=0)]))
        cols = np.unique(np.concatenate([near, extremes]))
    while True:
        t, duals = _restricted_membership(V[cols], x)
        if t <= tol or len(cols) == N:
            return t <= tol, t
        y_ub, y_eq = duals
        # reduced cost of weight column j: -(y_pos.v - y_neg.v + y_eq)
        red = -(V @ (y_ub[:d] - y_ub[d:]) + y_eq)
        red[cols] = np.inf
        cand = np.flatnonzero(red < -1e-12)
        if len(cand) == 0:
            return False, t
        order = cand[np.argsort(red[cand])][:chunk]
        cols = np.concatenate([cols, order])


def _restricted_membership(Vs, x):
    n, d = Vs.shape
    # variables: lam (n), t
    cost = np.zeros(n + 1)
    cost[-1] = 1.0
    A_ub = np.zeros((2 * d, n + 1))
    A_ub[:d, :n] = Vs.T
    A_ub[d:, :n] = -Vs.T
    A_ub[:, -1] = -1.0
    b_ub = np.concatenate([x, -x])
    A_eq = np.zeros((1, n + 1))
    A_eq[0, :n] = 1.0
    res = linprog(cost, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=[1.0],
                  bounds=[(0, None)] * n + [(None, None)], method="highs",
                  options={"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10})
    if res.status != 0:
        raise RuntimeError(f"membership LP failed: {res.message}")
    return float(res.x[-1]), (res.ineqlin.marginals, float(res.eqlin.marginals[0]))
