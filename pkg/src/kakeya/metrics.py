"""Distances between convex sets and minimum enclosing balls."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import lp
from .errors import EmptyBody, KakeyaError
from .geometry import HPolytope, VPolytope, h_to_v_2d, hull2d, vec


def point_set_distance(p, A) -> float:
    """Euclidean distance from p to the convex set A (H- or V-polytope)."""
    p = vec(p)
    if isinstance(A, HPolytope):
        z = lp.project_onto_halfspaces(p, A.normals, A.offsets)
        if z is None:
            raise EmptyBody("polytope is empty")
        return float(np.linalg.norm(z - p))
    V = _points(A)
    if V.shape[1] == 2:
        return float(_polygon_distances(p[None, :], V)[0])
    return float(np.linalg.norm(lp.project_onto_hull(p, V) - p))


def _points(A) -> np.ndarray:
    if isinstance(A, VPolytope):
        return np.asarray(A.vertices)
    if isinstance(A, HPolytope):
        if A.dim == 2:
            return np.asarray(h_to_v_2d(A).vertices)
        return boundary_samples(A)
    V = np.atleast_2d(np.asarray(A, dtype=float))
    if V.size == 0:
        raise EmptyBody("empty point set")
    return V


def boundary_samples(A: HPolytope, n_dirs: int = 200, seed: int = 0) -> np.ndarray:
    """LP extreme points of A along quasi-uniform directions.

    Their hull is an inner approximation of A; used for d >= 3 where exact
    vertex enumeration is out of scope.
    """
    if A.is_empty():
        raise EmptyBody("polytope is empty")
    d = A.dim
    rng = np.random.default_rng(seed)
    dirs = rng.normal(size=(n_dirs, d))
    dirs = np.vstack([np.eye(d), -np.eye(d), dirs / np.linalg.norm(dirs, axis=1, keepdims=True)])
    poly = A if A.inradius >= 0 else HPolytope(A.normals, A.offsets - A.inradius)
    pts, basis = [], None
    for u in dirs:
        x, basis = poly.extreme_point(u, basis)
        pts.append(x)
    return np.unique(np.round(np.array(pts), 13), axis=0)


def _polygon_distances(Q, V) -> np.ndarray:
    """Distances from each row of Q to conv(V) for planar V (exact)."""
    h = hull2d(V)
    P = h.points
    if len(P) == 1:
        return np.linalg.norm(Q - P[0], axis=1)
    if len(P) == 2:
        A, B = P[:1], P[1:]
    else:
        A, B = P, np.roll(P, -1, axis=0)
    E = B - A  # (k, 2)
    D = Q[:, None, :] - A[None, :, :]  # (n, k, 2)
    ee = np.einsum("kj,kj->k", E, E)
    t = np.clip(np.einsum("nkj,kj->nk", D, E) / ee, 0.0, 1.0)
    diff = D - t[..., None] * E
    dist = np.sqrt(np.einsum("nkj,nkj->nk", diff, diff)).min(axis=1)
    if len(P) >= 3:
        cross = E[None, :, 0] * D[..., 1] - E[None, :, 1] * D[..., 0]
        inside = np.all(cross >= 0, axis=1)
        dist[inside] = 0.0
    return dist


def directed_hausdorff(X, Y) -> float:
    """max over x in X of d(x, conv Y); attained at a vertex of X."""
    Xp, Yp = _points(X), _points(Y)
    if Xp.shape[1] == 2:
        return float(_polygon_distances(Xp, Yp).max())
    return float(max(np.linalg.norm(lp.project_onto_hull(x, Yp) - x) for x in Xp))


def hausdorff(X, Y) -> float:
    return max(directed_hausdorff(X, Y), directed_hausdorff(Y, X))


# --------------------------------------------------------------------------
# Minimum enclosing ball


@dataclass(frozen=True, eq=False)
class ChebyshevResult:
    center: np.ndarray
    radius: float
    support_points: np.ndarray


def _circumball(B: list):
    """Smallest ball with every point of B on its boundary (centre in aff B)."""
    if not B:
        return None, -1.0
    p0 = B[0]
    if len(B) == 1:
        return p0.copy(), 0.0
    Q = np.array(B[1:]) - p0
    G = Q @ Q.T
    rhs = 0.5 * np.einsum("ij,ij->i", Q, Q)
    try:
        lam = np.linalg.solve(G, rhs)
    except np.linalg.LinAlgError:
        lam = np.linalg.lstsq(G, rhs, rcond=None)[0]
    c = p0 + lam @ Q
    return c, float(max(np.sum((np.array(B) - c) ** 2, axis=1)))


def _mtf(P: np.ndarray, end: int, B: list, d: int):
    """Move-to-front recursion on the rows P[:end] with B on the boundary.

    Rows are reordered in place: a point found outside the current ball is
    moved to the front so later passes meet it early.
    """
    c, r2 = _circumball(B)
    if len(B) == d + 1:
        return c, r2
    k = 0
    while k < end:
        if c is None:
            idx = k
        else:
            dd = np.sum((P[k:end] - c) ** 2, axis=1)
            out = np.flatnonzero(dd > r2 * (1 + 1e-12) + 1e-24)
            if len(out) == 0:
                break
            idx = k + int(out[0])
        p = P[idx].copy()
        c, r2 = _mtf(P, idx, B + [p], d)
        P[1:idx + 1] = P[:idx].copy()
        P[0] = p
        k = idx + 1
    return c, r2


def min_enclosing_ball(points, seed: int = 0) -> tuple[np.ndarray, float]:
    """Centre and radius by the randomized move-to-front algorithm."""
    P = np.atleast_2d(np.asarray(points, dtype=float))
    if P.size == 0:
        raise EmptyBody("empty point set")
    rng = np.random.default_rng(seed)
    L = P[rng.permutation(len(P))].copy()
    c, r2 = _mtf(L, len(L), [], P.shape[1])
    # the move-to-front pass can leave rounding-level misses; sweep until clean
    for _ in range(5):
        far = np.sum((P - c) ** 2, axis=1)
        if far.max() <= r2 * (1 + 1e-12) + 1e-24:
            break
        c, r2 = _mtf(L, len(L), [P[int(np.argmax(far))]], P.shape[1])
    return c, float(np.sqrt(max(r2, 0.0)))


def chebyshev_center(A, seed: int = 0) -> ChebyshevResult:
    """Centre of the minimum enclosing ball of A's points (equal to that of the hull)."""
    P = np.unique(_points(A), axis=0)
    c, r = min_enclosing_ball(P, seed)
    dist = np.linalg.norm(P - c, axis=1)
    on = P[dist >= r - 1e-9 * max(1.0, r)]
    if len(on) > 1:
        # the centre is a convex combination of at most d+1 boundary points
        _, lam, idx = lp.min_norm_point(on - c)
        on = on[idx[lam > 1e-12]]
    return ChebyshevResult(c, r, on)


# --------------------------------------------------------------------------
# Continuity probe


@dataclass
class ModulusProbe:
    max_gap: float
    gaps: np.ndarray
    holes: list = field(default_factory=list)


def hausdorff_modulus_probe(family, grid) -> ModulusProbe:
    """Largest Hausdorff distance between family members at adjacent grid values.

    Parameters where the family is empty are reported as holes; pairs touching
    a hole get gap NaN.
    """
    grid = list(grid)
    if len(grid) < 2:
        raise ValueError("grid needs at least two parameters")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be sorted")
    members, holes = [], []
    for g in grid:
        try:
            m = family(g)
        except KakeyaError:
            m = None
        if m is None:
            holes.append(g)
        members.append(m)
    gaps = np.full(len(grid) - 1, np.nan)
    for i in range(len(grid) - 1):
        if members[i] is not None and members[i + 1] is not None:
            gaps[i] = hausdorff(members[i], members[i + 1])
    finite = gaps[np.isfinite(gaps)]
    return ModulusProbe(float(finite.max()) if finite.size else float("nan"), gaps, holes)
