"""Translate sets of a probe inside a container, and interior certificates.

For a container K = {x : a_i . x <= b_i} and a probe S, the set of
translations w with S + w inside K is {w : a_i . w <= b_i - h_S(a_i)}, where
h_S is the support function of S.  It keeps the normals of K and only moves
the offsets, so it is exact and cheap.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import InfeasibleAuxiliary, PreconditionViolated
from .geometry import (TOL, HPolytope, Rotation, Segment, VPolytope, affine_rank, direction,
                       probe_points, unit_segment, vec)

FEAS_TOL = 1e-9
POINT_TOL = 1e-7


@dataclass(frozen=True, eq=False)
class TranslateSet:
    poly: HPolytope
    container: HPolytope
    probe: object

    @property
    def dim(self) -> int:
        return self.poly.dim

    @property
    def feasible(self) -> bool:
        """Nonempty, allowing constraint slack down to -1e-9."""
        return self.poly.inradius >= -FEAS_TOL

    def contains(self, w, tol: float = TOL) -> bool:
        return self.poly.contains(w, tol)

    def placement_slack(self, w) -> float:
        """Smallest container slack over the probe's points placed at w."""
        P = probe_points(self.probe) + vec(w, self.dim)
        return float(self.container.slack(P).min())


def erode(K: HPolytope, S, margin: float = 0.0) -> TranslateSet:
    """{w : S + w inside K}; with margin > 0 every constraint keeps that much slack."""
    P = probe_points(S)
    h = np.max(K.normals @ P.T, axis=1)
    return TranslateSet(HPolytope(K.normals, K.offsets - h - margin), K, S)


def erode_rotated(K: HPolytope, S, R: Rotation) -> TranslateSet:
    if isinstance(S, (Segment, VPolytope)):
        return erode(K, S.rotate(R))
    return erode(K, VPolytope(R.apply(probe_points(S))))


def erode_direction(K: HPolytope, v, margin: float = 0.0) -> TranslateSet:
    """I_v: translations u with u and u + v both in K (unit segment along v)."""
    return erode(K, unit_segment(v), margin)


def segment_offsets(K: HPolytope, v) -> np.ndarray:
    """Offsets of I_v for a unit segment along v; same normals as K."""
    return K.offsets - np.maximum(0.0, K.normals @ np.asarray(v, dtype=float))


# --------------------------------------------------------------------------
# Interior certificates


@dataclass(frozen=True, eq=False)
class InteriorCertificate:
    center: np.ndarray
    radius: float
    translate_set: TranslateSet | None = field(default=None, repr=False)
    info: dict = field(default_factory=dict, repr=False)

    def slack(self) -> float:
        """Constraint slack of the certified ball (>= 0 means the ball fits)."""
        I = self.translate_set.poly
        return float(I.slack(self.center)[0] - self.radius)

    def sample_ball(self, n: int, rng) -> np.ndarray:
        d = self.center.size
        g = rng.normal(size=(n, d))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        r = self.radius * rng.random(n) ** (1.0 / d)
        return self.center + g * r[:, None]


def _check_in(K: HPolytope, pt, what: str):
    if not K.contains(pt, TOL):
        raise PreconditionViolated(f"{what} is not in the container (slack {K.slack(pt)[0]:.3e})")


def long_segment_certificate(K: HPolytope, u, v, lam: float) -> InteriorCertificate:
    """Ball inside I_v from a segment u, u + lam v of length lam > 1 inside K.

    Every p in K gives u + (1 - 1/lam)(p - u) in I_v.  Applying this to the
    endpoints of a unit chord of K along each axis yields 2d points of I_v
    whose mean is the centre of a cube of half-width (1 - 1/lam)/(2d).
    """
    d = K.dim
    u = vec(u, d)
    v = direction(v)
    if not lam > 1:
        raise PreconditionViolated(f"segment length factor must exceed 1, got {lam}")
    _check_in(K, u, "u")
    _check_in(K, u + lam * v, "u + lam*v")
    shrink = 1.0 - 1.0 / lam
    pts = []
    for i in range(d):
        e = np.zeros(d)
        e[i] = 1.0
        chord = erode_direction(K, e)
        if not chord.feasible:
            raise PreconditionViolated(f"container has no unit chord along axis {i}")
        y = chord.poly.deep_point
        pts.append(u + shrink * (y - u))
        pts.append(u + shrink * (y + e - u))
    center = np.mean(pts, axis=0)
    return InteriorCertificate(center, shrink / (2 * d), erode_direction(K, v),
                               {"lambda": lam, "points": np.array(pts)})


def inner_product_interior(K: HPolytope, p, x, q) -> InteriorCertificate:
    """Ball inside I_p from a segment x, x + q inside K with <p, q> > 1."""
    d = K.dim
    p = direction(p)
    x, q = vec(x, d), vec(q, d)
    pq = float(p @ q)
    if not pq > 1 + 1e-9:
        raise PreconditionViolated(f"<p, q> = {pq} must exceed 1")
    _check_in(K, x, "x")
    _check_in(K, x + q, "x + q")
    # |p - eps q|^2 < (1 - eps)^2  <=>  eps (|q|^2 - 1) < 2 (<p,q> - 1)
    qq = float(q @ q)
    eps_max = min(1.0, 2 * (pq - 1) / (qq - 1))
    eps = 0.5 * eps_max
    r = p - eps * q
    while np.linalg.norm(r) < 1e-12:
        eps *= 0.5
        r = p - eps * q
    nr = float(np.linalg.norm(r))
    p_aux = r / nr
    aux = erode_direction(K, p_aux)
    if not aux.feasible:
        raise InfeasibleAuxiliary(f"no unit segment of the container along {p_aux.tolist()}")
    y = aux.poly.deep_point
    # z' - z = (eps q + |p - eps q| p_aux) / (eps + |p - eps q|) = p / (eps + |p - eps q|)
    z = (eps * x + nr * y) / (eps + nr)
    lam = 1.0 / (eps + nr)
    cert = long_segment_certificate(K, z, p, lam)
    cert.info.update({"epsilon": eps, "z": z})
    return cert


def interior_from_translates(K: HPolytope, v, u, w) -> InteriorCertificate:
    """Ball inside I_v given u, u + w in I_v with <v, w> != 0."""
    v = direction(v)
    u, w = vec(u, K.dim), vec(w, K.dim)
    I = erode_direction(K, v)
    if not (I.contains(u) and I.contains(u + w)):
        raise PreconditionViolated("u and u + w must both lie in I_v")
    vw = float(v @ w)
    if abs(vw) <= 1e-12:
        raise PreconditionViolated("<v, w> must be nonzero")
    if vw < 0:
        u, w = u + w, -w
    return inner_product_interior(K, v, u, v + w)


# --------------------------------------------------------------------------
# Dimension classes


@dataclass(frozen=True)
class DimensionClass:
    kind: str  # "Empty" | "Point" | "LowDim" | "FullDim"
    k: int | None = None

    def __str__(self):
        return f"LowDim({self.k})" if self.kind == "LowDim" else self.kind


EMPTY = DimensionClass("Empty")
POINT = DimensionClass("Point")
FULLDIM = DimensionClass("FullDim")


def _probe_directions(d: int) -> np.ndarray:
    rng = np.random.default_rng(12345)
    extra = rng.normal(size=(4 * d, d))
    extra /= np.linalg.norm(extra, axis=1, keepdims=True)
    return np.vstack([np.eye(d), -np.eye(d), extra, -extra])


def sampled_extreme_points(I: TranslateSet, n_extra: int = 0) -> np.ndarray:
    """LP extreme points of I in the coordinate directions, fixed pseudo-random
    directions and the principal axes of the points found so far."""
    poly = I.poly
    r = poly.inradius
    if r < 0:
        poly = HPolytope(poly.normals, poly.offsets - r)
    d = poly.dim
    dirs = _probe_directions(d)
    if n_extra:
        rng = np.random.default_rng(n_extra)
        extra = rng.normal(size=(n_extra, d))
        dirs = np.vstack([dirs, extra / np.linalg.norm(extra, axis=1, keepdims=True)])
    pts = []
    basis = None
    for u in dirs:
        x, basis = poly.extreme_point(u, basis)
        pts.append(x)
    pts = np.array(pts)
    _, _, Vt = np.linalg.svd(pts - pts.mean(axis=0))
    for u in np.vstack([Vt, -Vt]):
        x, basis = poly.extreme_point(u, basis)
        pts = np.vstack([pts, x])
    return pts


def dimension_class(I: TranslateSet, point_tol: float = POINT_TOL) -> DimensionClass:
    """Empty / Point / LowDim(k) / FullDim at resolution point_tol."""
    r = I.poly.inradius
    if r < -FEAS_TOL:
        return EMPTY
    if r > point_tol:
        return FULLDIM
    pts = sampled_extreme_points(I)
    diam = max(np.linalg.norm(pts - p, axis=1).max() for p in pts)
    if diam <= point_tol:
        return POINT
    k = min(affine_rank(pts, point_tol), I.dim - 1)
    return DimensionClass("LowDim", max(k, 1))


def orthogonality_defect(I: TranslateSet, v, pts=None) -> float:
    """max |<v, a - b>| over sampled extreme points a, b of I.

    When I is lower dimensional the differences of its points are orthogonal
    to v, so this is ~0 for Point and LowDim translate sets.
    """
    if pts is None:
        pts = sampled_extreme_points(I)
    proj = pts @ direction(v)
    return float(proj.max() - proj.min())
