"""Vectors, rotations, convex polytopes, support functions and hulls.

Polytopes are stored as numpy arrays and never mutated after construction.
Halfspace normals are rescaled to unit length, so constraint slack
``offset - normal . x`` is the Euclidean distance to each bounding hyperplane.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.spatial import ConvexHull, HalfspaceIntersection, QhullError

from . import lp
from .errors import DegenerateInput, EmptyBody, Unbounded, UnboundedInDirection

TOL = 1e-9


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def vec(x, dim: int | None = None) -> np.ndarray:
    """Finite real vector, optionally of a fixed dimension."""
    v = np.asarray(x, dtype=float).reshape(-1)
    if not np.all(np.isfinite(v)):
        raise ValueError(f"non-finite vector {x!r}")
    if dim is not None and v.size != dim:
        raise ValueError(f"expected a vector of dimension {dim}, got {v.size}")
    return v


def direction(x) -> np.ndarray:
    """Unit vector along x."""
    v = vec(x)
    n = np.linalg.norm(v)
    if n == 0:
        raise ValueError("zero vector has no direction")
    return v / n


def unit_rows(X) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    return X / np.linalg.norm(X, axis=1, keepdims=True)


# --------------------------------------------------------------------------
# Rotations


@dataclass(frozen=True, eq=False)
class Rotation:
    matrix: np.ndarray

    def __post_init__(self):
        R = np.array(self.matrix, dtype=float)
        if R.ndim != 2 or R.shape[0] != R.shape[1]:
            raise ValueError("rotation matrix must be square")
        d = R.shape[0]
        if np.abs(R.T @ R - np.eye(d)).max() > 1e-10 or abs(np.linalg.det(R) - 1) > 1e-10:
            raise ValueError("matrix is not a proper rotation")
        object.__setattr__(self, "matrix", _frozen(R))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def apply(self, points) -> np.ndarray:
        """Rotate a point or an (n, d) array of points."""
        return np.asarray(points, dtype=float) @ self.matrix.T

    def inverse(self) -> "Rotation":
        return Rotation(self.matrix.T)

    def __matmul__(self, other: "Rotation") -> "Rotation":
        return Rotation(self.matrix @ other.matrix)

    @classmethod
    def identity(cls, d: int) -> "Rotation":
        return cls(np.eye(d))

    @classmethod
    def planar(cls, theta: float) -> "Rotation":
        c, s = np.cos(theta), np.sin(theta)
        return cls(np.array([[c, -s], [s, c]]))

    @classmethod
    def axis_angle(cls, axis, angle: float) -> "Rotation":
        k = direction(axis)
        K = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
        return cls(np.eye(3) + np.sin(angle) * K + (1 - np.cos(angle)) * K @ K)

    @classmethod
    def random(cls, d: int, rng) -> "Rotation":
        Q, R = np.linalg.qr(rng.normal(size=(d, d)))
        Q = Q * np.sign(np.diag(R))
        if np.linalg.det(Q) < 0:
            Q[:, 0] = -Q[:, 0]
        return cls(Q)


# --------------------------------------------------------------------------
# Bodies


@dataclass(frozen=True, eq=False)
class HPolytope:
    """{x : normals @ x <= offsets}.  Normals are stored with unit length."""

    normals: np.ndarray
    offsets: np.ndarray

    def __post_init__(self):
        N = np.atleast_2d(np.asarray(self.normals, dtype=float))
        b = np.asarray(self.offsets, dtype=float).reshape(-1)
        if N.shape[0] != b.size:
            raise ValueError("one offset per normal required")
        if not (np.all(np.isfinite(N)) and np.all(np.isfinite(b))):
            raise ValueError("non-finite halfspace data")
        norms = np.linalg.norm(N, axis=1)
        if np.any(norms == 0):
            raise ValueError("halfspace normals must be nonzero")
        object.__setattr__(self, "normals", _frozen(N / norms[:, None]))
        object.__setattr__(self, "offsets", _frozen(b / norms))

    @property
    def dim(self) -> int:
        return self.normals.shape[1]

    def __len__(self):
        return self.normals.shape[0]

    @classmethod
    def from_halfspaces(cls, halfspaces) -> "HPolytope":
        normals = [h[0] for h in halfspaces]
        offsets = [h[1] for h in halfspaces]
        return cls(np.array(normals, dtype=float), np.array(offsets, dtype=float))

    @classmethod
    def box(cls, lo, hi) -> "HPolytope":
        lo, hi = vec(lo), vec(hi)
        d = lo.size
        return cls(np.vstack([np.eye(d), -np.eye(d)]), np.concatenate([hi, -lo]))

    def slack(self, points) -> np.ndarray:
        """Smallest constraint slack at each point (negative outside)."""
        P = np.atleast_2d(np.asarray(points, dtype=float))
        return np.min(self.offsets[None, :] - P @ self.normals.T, axis=1)

    def contains(self, point, tol: float = TOL) -> bool:
        return bool(self.slack(point)[0] >= -tol)

    def translate(self, t) -> "HPolytope":
        t = vec(t, self.dim)
        return HPolytope(self.normals, self.offsets + self.normals @ t)

    def rotate(self, R: Rotation) -> "HPolytope":
        return HPolytope(R.apply(self.normals), self.offsets)

    def inflate(self, tau: float) -> "HPolytope":
        """Push every facet outward by tau."""
        return HPolytope(self.normals, self.offsets + tau)

    def scale(self, s: float) -> "HPolytope":
        return HPolytope(self.normals, self.offsets * s)

    @cached_property
    def _deep(self):
        x, r, basis = lp.max_slack_point(self.normals, self.offsets)
        return x, r, basis

    @property
    def inradius(self) -> float:
        """Radius of the largest inscribed ball; negative if the set is empty."""
        return self._deep[1]

    @property
    def deep_point(self) -> np.ndarray:
        """Centre of a largest inscribed ball (the max-slack point)."""
        if self._deep[0] is None:
            raise Unbounded(None, "polytope has unbounded inradius")
        return self._deep[0]

    def is_empty(self, tol: float = TOL) -> bool:
        return self.inradius < -tol

    def is_bounded(self) -> bool:
        return _normals_positively_span(self.normals)

    def support(self, d) -> float:
        return support(self, d)

    def extreme_point(self, d, basis=None):
        res = lp.maximize(vec(d, self.dim), self.normals, self.offsets, basis=basis)
        if res.status == lp.INFEASIBLE:
            raise EmptyBody("polytope is empty")
        if res.status == lp.UNBOUNDED:
            raise UnboundedInDirection(d)
        return res.x, res.basis


def _normals_positively_span(N) -> bool:
    """True when the recession cone {y : N y <= 0} is {0}."""
    N = np.atleast_2d(N)
    d = N.shape[1]
    if d == 1:
        return bool(np.any(N[:, 0] > 0) and np.any(N[:, 0] < 0))
    if d == 2:
        ang = np.sort(np.arctan2(N[:, 1], N[:, 0]))
        gaps = np.diff(np.concatenate([ang, [ang[0] + 2 * np.pi]]))
        return bool(gaps.max() < np.pi - 1e-12)
    zeros = np.zeros(N.shape[0])
    for i in range(d):
        for s in (1.0, -1.0):
            c = np.zeros(d)
            c[i] = s
            res = lp.maximize(c, N, zeros)
            if res.status == lp.UNBOUNDED or (res.ok and res.value > 1e-12):
                return False
    return True


@dataclass(frozen=True, eq=False)
class VPolytope:
    """Convex hull of a nonempty finite point list."""

    vertices: np.ndarray

    def __post_init__(self):
        V = np.atleast_2d(np.asarray(self.vertices, dtype=float))
        if V.shape[0] == 0 or V.size == 0:
            raise EmptyBody("a V-polytope needs at least one point")
        if not np.all(np.isfinite(V)):
            raise ValueError("non-finite vertex")
        object.__setattr__(self, "vertices", _frozen(V))

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    def __len__(self):
        return self.vertices.shape[0]

    def normalized(self) -> "VPolytope":
        """Same set with duplicate points removed."""
        return VPolytope(np.unique(self.vertices, axis=0))

    def contains(self, point, tol: float = TOL) -> bool:
        return lp.hull_membership_lp(self.vertices, vec(point, self.dim), tol)[0]

    def translate(self, t) -> "VPolytope":
        return VPolytope(self.vertices + vec(t, self.dim))

    def rotate(self, R: Rotation) -> "VPolytope":
        return VPolytope(R.apply(self.vertices))

    def support(self, d) -> float:
        return support(self, d)


@dataclass(frozen=True, eq=False)
class Segment:
    base: np.ndarray
    direction: np.ndarray
    length: float = 1.0

    def __post_init__(self):
        if not self.length > 0:
            raise ValueError("segment length must be positive")
        object.__setattr__(self, "base", _frozen(vec(self.base)))
        object.__setattr__(self, "direction", _frozen(direction(self.direction)))
        if self.base.size != self.direction.size:
            raise ValueError("base and direction dimensions differ")

    @property
    def dim(self) -> int:
        return self.base.size

    @property
    def vertices(self) -> np.ndarray:
        return np.vstack([self.base, self.base + self.length * self.direction])

    def rotate(self, R: Rotation) -> "Segment":
        return Segment(R.apply(self.base), R.apply(self.direction), self.length)

    def translate(self, t) -> "Segment":
        return Segment(self.base + vec(t), self.direction, self.length)

    def as_vrep(self) -> VPolytope:
        return VPolytope(self.vertices)

    def support(self, d) -> float:
        return support(self, d)


def unit_segment(v, base=None) -> Segment:
    v = direction(v)
    return Segment(np.zeros_like(v) if base is None else base, v, 1.0)


def probe_points(S) -> np.ndarray:
    """Points whose convex hull is the probe S."""
    if isinstance(S, (VPolytope, Segment)):
        return np.asarray(S.vertices)
    return np.atleast_2d(np.asarray(S, dtype=float))


def support(body, d) -> float:
    """Support function h(d) = max over the body of <d, x>."""
    if isinstance(body, HPolytope):
        res = lp.maximize(vec(d, body.dim), body.normals, body.offsets)
        if res.status == lp.INFEASIBLE:
            raise EmptyBody("polytope is empty")
        if res.status == lp.UNBOUNDED:
            raise UnboundedInDirection(d)
        return res.value
    return float(np.max(probe_points(body) @ vec(d)))


def support_many(body, dirs) -> np.ndarray:
    """Support values along each row of dirs."""
    dirs = np.atleast_2d(np.asarray(dirs, dtype=float))
    if isinstance(body, HPolytope):
        return np.array([support(body, u) for u in dirs])
    return np.max(dirs @ probe_points(body).T, axis=1)


def contains(body, point, tol: float = TOL) -> bool:
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    return body.contains(point, tol)


# --------------------------------------------------------------------------
# Hulls


@dataclass(frozen=True, eq=False)
class Hull:
    """Extreme points of a point set.

    For full-dimensional input ``affine_dim`` equals the ambient dimension; a
    smaller value marks degenerate input.  In 2D the points are in
    counter-clockwise order.  In 3D ``facets`` holds outward-oriented vertex
    index triples into ``points`` with unit normals and offsets.
    """

    points: np.ndarray
    affine_dim: int
    facets: np.ndarray | None = None
    normals: np.ndarray | None = None
    offsets: np.ndarray | None = None

    @property
    def degenerate(self) -> bool:
        return self.affine_dim < self.points.shape[1]

    def as_vrep(self) -> VPolytope:
        return VPolytope(self.points)

    def as_hrep(self) -> HPolytope:
        if self.degenerate:
            raise DegenerateInput(f"hull has affine dimension {self.affine_dim}")
        if self.normals is None:  # 2D: edges of the ccw polygon
            P = self.points
            E = np.roll(P, -1, axis=0) - P
            N = np.column_stack([E[:, 1], -E[:, 0]])
            return HPolytope(N, np.einsum("ij,ij->i", N, P))
        return HPolytope(self.normals, self.offsets)


def affine_rank(points, tol: float = 1e-7) -> int:
    P = np.atleast_2d(np.asarray(points, dtype=float))
    if len(P) <= 1:
        return 0
    Q = P - P.mean(axis=0)
    _, _, Vt = np.linalg.svd(Q, full_matrices=False)
    # extent of the points along each principal axis
    proj = Q @ Vt.T
    width = proj.max(axis=0) - proj.min(axis=0)
    return int(np.sum(width > tol))


def _degenerate_hull(P, k: int) -> Hull:
    P = np.unique(P, axis=0)
    c = P.mean(axis=0)
    if k == 0:
        return Hull(_frozen(c[None, :]), 0)
    _, _, Vt = np.linalg.svd(P - c)
    coords = (P - c) @ Vt[:k].T
    if k == 1:
        i, j = np.argmin(coords[:, 0]), np.argmax(coords[:, 0])
        return Hull(_frozen(P[[i, j]]), 1)
    sub = hull2d(coords) if k == 2 else None
    if sub is None or sub.degenerate:
        return _degenerate_hull(P, k - 1)
    idx = [int(np.flatnonzero(np.all(np.isclose(coords, q, atol=0, rtol=0), axis=1))[0])
           for q in sub.points]
    return Hull(_frozen(P[idx]), k)


def hull2d(points) -> Hull:
    P = np.atleast_2d(np.asarray(points, dtype=float))
    if P.shape[1] != 2:
        raise ValueError("hull2d expects planar points")
    k = affine_rank(P, 1e-12)
    if k < 2:
        return _degenerate_hull(P, k)
    try:
        h = ConvexHull(P)
    except QhullError:
        return _degenerate_hull(P, 1)
    return Hull(_frozen(P[h.vertices]), 2)  # qhull orders 2D vertices counter-clockwise


def hull3d(points) -> Hull:
    P = np.atleast_2d(np.asarray(points, dtype=float))
    if P.shape[1] != 3:
        raise ValueError("hull3d expects points in R^3")
    k = affine_rank(P, 1e-12)
    if k < 3:
        return _degenerate_hull(P, k)
    try:
        h = ConvexHull(P)
    except QhullError:
        return _degenerate_hull(P, 2)
    verts = h.vertices
    remap = -np.ones(len(P), dtype=int)
    remap[verts] = np.arange(len(verts))
    tri = h.simplices.copy()
    N = h.equations[:, :3]
    a, b, c = P[tri[:, 0]], P[tri[:, 1]], P[tri[:, 2]]
    flip = np.einsum("ij,ij->i", np.cross(b - a, c - a), N) < 0
    tri[flip] = tri[flip][:, [0, 2, 1]]
    return Hull(_frozen(P[verts]), 3, remap[tri], _frozen(N), _frozen(-h.equations[:, 3]))


def h_to_v_2d(poly: HPolytope) -> VPolytope:
    """Vertices of a bounded planar H-polytope in counter-clockwise order.

    Full-dimensional sets go through qhull's halfspace intersection from the
    max-slack interior point.  Sets thinner than 1e-9 (segments and points)
    are recovered from LP extreme points instead.
    """
    if poly.dim != 2:
        raise ValueError("h_to_v_2d expects a planar polytope")
    if not poly.is_bounded():
        raise Unbounded(None, "polytope is unbounded")
    x, r, _ = poly._deep
    if r < -TOL:
        raise EmptyBody("polytope is empty")
    if r > TOL:
        hs = HalfspaceIntersection(np.column_stack([poly.normals, -poly.offsets]), x)
        return VPolytope(hull2d(hs.intersections).points)
    relaxed = HPolytope(poly.normals, poly.offsets + max(0.0, -r))
    angles = np.arange(8) * np.pi / 4
    pts = [relaxed.extreme_point([np.cos(a), np.sin(a)])[0] for a in angles]
    return VPolytope(hull2d(np.array(pts)).points)
