"""A four-dimensional probe that fits in every orientation but cannot be
rotated continuously.

The probe is S = {x in R^4 : |x| = 1, x_1 = +-1/2}; rotating it so that
e_1 goes to v gives S_v = {v' : |v'| = 1, <v, v'> = +-1/2}.  The container
forces the (z, w) coordinates of every point on the cylinder
C = {x^2 + y^2 = 1} into one of four planar sets T1, T2, T3, T chosen by a
dyadic rule in x.  Near v = e_1 this rule makes every continuous rotation
drag the translation by at least 1/100.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import BudgetExceeded, OutOfRegime
from .geometry import HPolytope, VPolytope, h_to_v_2d
from .metrics import point_set_distance

SQ3 = math.sqrt(3.0)
OBSTRUCTION = 0.01

T_SETS = {
    "T1": HPolytope([[1, 0], [-1, 0], [0, 1], [0, -1]], [0, 0, 1, 0]),   # {0} x [0, 1]
    "T2": HPolytope([[1, 0], [-1, 0], [0, 1], [0, -1]], [1, 0, 0, 0]),   # [0, 1] x {0}
    "T3": HPolytope([[1, 1], [-1, -1], [-1, 0], [0, -1]], [1, -1, 0, 0]),  # z + w = 1
    "T": HPolytope([[1, 1], [-1, 0], [0, -1]], [1, 0, 0]),              # filled triangle
}
T_VERTICES = {
    "T1": np.array([[0.0, 0.0], [0.0, 1.0]]),
    "T2": np.array([[0.0, 0.0], [1.0, 0.0]]),
    "T3": np.array([[1.0, 0.0], [0.0, 1.0]]),
    "T": np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]),
}
_RESIDUE = {1: "T1", 2: "T2", 0: "T3"}  # k mod 3 -> set; residue 0 names T3


def _dyadic_label_exact(s: Fraction) -> str:
    if s == 0:
        return "T"
    k = 1
    while s <= Fraction(1, 2 ** (k + 1)):
        k += 1
    if s == Fraction(1, 2 ** k):
        return "T"
    return _RESIDUE[k % 3]


def dyadic_level(s: float) -> tuple[int, bool]:
    """(k, on_boundary) with 2^-k >= s > 2^-(k+1); on_boundary when s = 2^-k
    up to relative tolerance 1e-12."""
    m, e = math.frexp(s)  # s = m 2^e, 0.5 <= m < 1, so 2^(e-1) <= s < 2^e
    if abs(m - 0.5) <= 0.5e-12:
        return 1 - e, True
    if abs(m - 1.0) <= 1e-12:
        return -e, True
    return -e, False


def ap_label(p) -> str:
    """Name of A_p for p = (x, y) on the unit circle; only x matters.

    s = min(|x - 1/2|, |x + 1/2|); A_p = T when s = 0 or s = 2^-k, otherwise
    T_{k mod 3} with k the integer such that 2^-k >= s > 2^-(k+1).
    Fractions (or strings such as "3/4") are compared exactly.
    """
    x = p[0] if isinstance(p, (tuple, list, np.ndarray)) else p
    if isinstance(x, str):
        x = Fraction(x)
    if isinstance(x, (Fraction, int)):
        xf = Fraction(x)
        return _dyadic_label_exact(min(abs(xf - Fraction(1, 2)), abs(xf + Fraction(1, 2))))
    x = float(x)
    s = min(abs(x - 0.5), abs(x + 0.5))
    if s <= 1e-12:
        return "T"
    k, boundary = dyadic_level(s)
    if boundary:
        return "T"
    return _RESIDUE[k % 3]


def a_p(p) -> HPolytope:
    return T_SETS[ap_label(p)]


# --------------------------------------------------------------------------
# Properties of the rule


def property5_radius(zw, eps: float) -> dict:
    """A radius r < eps at which the rule picks a set at distance >= 1/100 from zw.

    Takes the first of T1, T2, T3 at distance >= 1/100 from zw (one always
    is: the three segments have no common point within 1/100), then the
    midpoint r = (3/4) 2^-k of a dyadic gap with k = index mod 3 and r < eps.
    """
    zw = np.asarray(zw, dtype=float)
    for i, name in ((1, "T1"), (2, "T2"), (3, "T3")):
        dist = point_set_distance(zw, VPolytope(T_VERTICES[name]))
        if dist >= OBSTRUCTION:
            break
    else:  # pragma: no cover - excluded by geometry
        raise RuntimeError("no set at distance 1/100")
    k = i % 3 or 3
    while 0.75 * 2.0 ** -k >= eps:
        k += 3
    r = 0.75 * 2.0 ** -k
    return {"index": i, "label": name, "distance": dist, "k": k, "radius": r}


def verify_ap_properties(n_pairs: int = 10000, n_prop5_trials: int = 100, seed: int = 0) -> dict:
    rng = np.random.default_rng(seed)
    ang = rng.uniform(0, 2 * np.pi, size=(n_pairs, 2))
    P = np.stack([np.cos(ang[:, 0]), np.sin(ang[:, 0])], axis=1)
    Q = np.stack([np.cos(ang[:, 1]), np.sin(ang[:, 1])], axis=1)
    # add exact boundary cases: s = 0 and s = 2^-k
    for x in (0.5, -0.5, 0.75, 0.25, 0.375, 1.0, -1.0, 0.0):
        P = np.vstack([P, [x, math.sqrt(1 - x * x)]])
        Q = np.vstack([Q, [-x, -math.sqrt(1 - x * x)]])

    # 1: pairwise intersections are nonempty.  Any two of the four sets share
    # a vertex of T, so the intersection LP is feasible with zero slack.
    p1_fail = []
    for p, q in zip(P, Q):
        A, B = a_p(p), a_p(q)
        both = HPolytope(np.vstack([A.normals, B.normals]), np.concatenate([A.offsets, B.offsets]))
        if both.inradius < -1e-12:
            p1_fail.append((p.tolist(), q.tolist()))
    # 2: A_p = A_{-p}
    p2_fail = [p.tolist() for p in P if ap_label(p) != ap_label(-p)]
    # 3: all points of every A_p have norm <= 1
    p3_fail = [n for n, V in T_VERTICES.items() if np.linalg.norm(V, axis=1).max() > 1.0]
    # 4: along convergent sequences either A_p = T or A_{p_n} is eventually A_p
    p4_fail = []
    for x in np.concatenate([rng.uniform(-1, 1, 200), [0.5, -0.5, 0.25, 0.125, -0.75, 0.625]]):
        p = (x, math.sqrt(max(0.0, 1 - x * x)))
        lab = ap_label(p)
        for sign in (1.0, -1.0):
            seq = [ap_label((x + sign * 2.0 ** -n * rng.uniform(0.5, 1.0), 0.0)) for n in range(20, 40)]
            if lab != "T" and any(s != lab for s in seq[-10:]):
                p4_fail.append(float(x))
            # closedness: limits of points of A_{p_n} lie in A_p
            for name in set(seq[-10:]):
                if not all(T_SETS[lab].contains(v, 1e-12) for v in T_VERTICES[name]):
                    p4_fail.append(float(x))
    # 5: constructive search
    p5 = []
    for _ in range(n_prop5_trials):
        zw = rng.uniform(-0.5, 1.5, size=2)
        eps = float(10 ** rng.uniform(-6, 0))
        res = property5_radius(zw, eps)
        r = res["radius"]
        got = {ap_label((0.5 + r, 0.0)), ap_label((0.5 - r, 0.0)), ap_label((-0.5 + r, 0.0))}
        ok = got == {res["label"]} and r < eps and res["distance"] >= OBSTRUCTION
        p5.append({"zw": zw.tolist(), "eps": eps, **res, "passed": ok})
    return {
        "property1": {"passed": not p1_fail, "n": len(P), "failures": p1_fail},
        "property2": {"passed": not p2_fail, "n": len(P), "failures": p2_fail},
        "property3": {"passed": not p3_fail, "failures": p3_fail},
        "property4": {"passed": not p4_fail, "failures": p4_fail},
        "property5": {"passed": all(t["passed"] for t in p5), "n": len(p5), "trials": p5},
    }


# --------------------------------------------------------------------------
# S_v and the cylinder


@dataclass
class SvIntersection:
    kind: str  # "None" | "Pair" | "TwoPairs"
    points: list = field(default_factory=list)  # the points with <v, .> = +1/2

    @property
    def all_points(self) -> np.ndarray:
        if not self.points:
            return np.zeros((0, 4))
        P = np.array(self.points)
        return np.vstack([P, -P])


def sv_cylinder_intersection(v, tol: float = 1e-12) -> SvIntersection:
    """Points v' = (p, 0, 0), p on the unit circle, with <v, v'> = +-1/2.

    Writing (v1, v2) = rho (cos a, sin a), the condition is
    rho cos(b - a) = +-1/2: no solution for rho^2 < 1/4, one antipodal pair
    at rho^2 = 1/4 and two pairs beyond.
    """
    v = np.asarray(v, dtype=float)
    rho2 = float(v[0] ** 2 + v[1] ** 2)
    if rho2 < 0.25 - tol:
        return SvIntersection("None")
    if abs(rho2 - 0.25) <= tol:
        return SvIntersection("Pair", [np.array([2 * v[0], 2 * v[1], 0.0, 0.0])])
    rho = math.sqrt(rho2)
    a = math.atan2(v[1], v[0])
    off = math.acos(0.5 / rho)
    return SvIntersection("TwoPairs", [np.array([math.cos(a + off), math.sin(a + off), 0.0, 0.0]),
                                       np.array([math.cos(a - off), math.sin(a - off), 0.0, 0.0])])


def sv_sample(v, n: int) -> np.ndarray:
    """2n points of S_v: n quasi-uniform points on each of its two 2-spheres."""
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    _, _, Vt = np.linalg.svd(v[None, :])
    perp = Vt[1:]  # orthonormal basis of the complement of v
    i = np.arange(n) + 0.5
    z = 1 - 2 * i / n
    th = np.pi * (1 + 5 ** 0.5) * i
    sph = np.stack([np.sqrt(1 - z * z) * np.cos(th), np.sqrt(1 - z * z) * np.sin(th), z], axis=1)
    ring = (SQ3 / 2) * sph @ perp
    return np.vstack([0.5 * v + ring, -0.5 * v + ring])


def translate_set_v1(v) -> np.ndarray:
    """Vertices of T_v = A_{v'} n A_{v''} for v with v1^2 + v2^2 >= 1/4."""
    inter = sv_cylinder_intersection(v)
    pts = inter.points
    A = a_p(pts[0][:2])
    B = a_p(pts[-1][:2])
    both = HPolytope(np.vstack([A.normals, B.normals]), np.concatenate([A.offsets, B.offsets]))
    return np.asarray(h_to_v_2d(both).vertices)


def p_v(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    a = math.hypot(v[0], v[1])
    b = math.hypot(v[2], v[3])
    return np.array([0.5 * v[0] / a, 0.5 * v[1] / a, SQ3 / 2 * v[2] / b, SQ3 / 2 * v[3] / b])


def witness_translates(v) -> np.ndarray:
    """Vertices of the planar set of (z, w) translations used for S_v."""
    rho2 = v[0] ** 2 + v[1] ** 2
    if rho2 >= 0.25:
        return translate_set_v1(v)
    if rho2 >= 0.01:
        p = p_v(v)
        return T_VERTICES[ap_label((2 * p[0], 2 * p[1]))]
    return np.zeros((1, 2))


@dataclass
class WitnessCloud:
    points: VPolytope
    directions: np.ndarray
    resolution: int
    seed: int

    @property
    def tolerance(self) -> float:
        """Membership tolerance for points of S_v at unsampled v.

        The worst membership residual over 40 fresh directions (all their
        witness translates) measured 1.31, 1.01 and 0.91 divided by the
        resolution at resolutions 20, 40 and 80, so it decays like 1/resolution.
        """
        return 1.5 / self.resolution

    def contains(self, x, tol: float | None = None) -> bool:
        return self.points.contains(x, self.tolerance if tol is None else tol)


def _stratum_directions(n: int, lo: float, hi: float, rng) -> np.ndarray:
    r2 = rng.uniform(lo, hi, n)
    a, b = rng.uniform(0, 2 * np.pi, (2, n))
    r, s = np.sqrt(r2), np.sqrt(1 - r2)
    return np.stack([r * np.cos(a), r * np.sin(a), s * np.cos(b), s * np.sin(b)], axis=1)


def build_4d_witness_cloud(resolution: int = 40, seed: int = 0, budget: int = 200_000) -> WitnessCloud:
    """Sampled points of the container: S_v + (0, 0, t) over sampled v and t.

    `resolution` is both the number of directions drawn in each of the three
    strata v1^2 + v2^2 in [1/4, 1], [1/100, 1/4], [0, 1/100] and the number of
    points per 2-sphere of each S_v.
    """
    rng = np.random.default_rng(seed)
    n = int(resolution)
    dirs = np.vstack([
        [[1.0, 0, 0, 0], [0.5, 0, math.sqrt(0.75), 0], [0.1, 0, math.sqrt(0.99), 0]],
        _stratum_directions(n, 0.25, 1.0, rng),
        _stratum_directions(n, 0.01, 0.25, rng),
        _stratum_directions(n, 0.0, 0.01, rng),
    ])
    estimate = len(dirs) * (2 * n + 4) * 3
    if estimate > budget:
        raise BudgetExceeded(f"about {estimate} points requested, budget is {budget}")
    chunks = []
    for v in dirs:
        S = sv_sample(v, n)
        inter = sv_cylinder_intersection(v)
        if inter.kind != "None":
            S = np.vstack([S, inter.all_points])
        for t in witness_translates(v):
            chunks.append(S + np.array([0.0, 0.0, t[0], t[1]]))
    return WitnessCloud(VPolytope(np.vstack(chunks)), dirs, n, seed)


# --------------------------------------------------------------------------
# The obstruction along a path


def _track(prev, inter: SvIntersection):
    a, b = inter.points
    if prev is None:
        return (a, b) if a[1] >= b[1] else (b, a)
    if np.linalg.norm(a - prev[0]) + np.linalg.norm(b - prev[1]) <= \
            np.linalg.norm(b - prev[0]) + np.linalg.norm(a - prev[1]):
        return a, b
    return b, a


def verify_4d_obstruction(cloud, path_attempt: dict, tol: float = 1e-6) -> dict:
    """Locate the forced translation jump of a rotation path starting at e_1.

    path_attempt holds arrays "t" (k,), "gamma" (k, 4) and "delta" (k, 4).
    The two points v'(t), v''(t) of S_gamma(t) on the cylinder start at
    (1/2, +-sqrt(3)/2, 0, 0).  If one of them reaches first coordinate
    1/2 +- eps along the path, property 5 supplies a radius r < eps where the rule picks a
    set T_i at distance >= 1/100 from delta(0)'s (z, w); at the time t0 the
    coordinate crosses 1/2 +- r, every admissible translation has (z, w) in
    T_i, hence differs from delta(0) by at least that distance.
    """
    t = np.asarray(path_attempt["t"], dtype=float)
    G = np.asarray(path_attempt["gamma"], dtype=float)
    D = np.asarray(path_attempt["delta"], dtype=float)
    G = G / np.linalg.norm(G, axis=1, keepdims=True)
    if np.any(G[:, 0] <= 0.9):
        raise OutOfRegime("the path leaves the region gamma_1 > 9/10")
    if np.linalg.norm(G[0] - np.array([1.0, 0, 0, 0])) > 1e-9:
        raise OutOfRegime("the path must start at (1, 0, 0, 0)")
    tracks, prev = [], None
    for g in G:
        prev = _track(prev, sv_cylinder_intersection(g))
        tracks.append(prev)
    devs = np.array([[abs(a[0] - 0.5), abs(b[0] - 0.5)] for a, b in tracks])
    report = {"vacuous": bool(devs.max() <= 1e-12), "obstruction": OBSTRUCTION}
    if report["vacuous"]:
        report.update({"forced_jump": 0.0, "continuity_violated": False})
        return report
    which = int(np.argmax(devs.max(axis=0)))
    eps = float(devs[:, which].max())
    zw0 = D[0, 2:]
    p5 = property5_radius(zw0, eps)
    r = p5["radius"]
    moved = int(np.flatnonzero(devs[:, which] >= r)[0])

    # bisection for the crossing |x(s) - 1/2| = r inside the first sample interval reaching r
    def dev_at(s):
        g = (1 - s) * G[moved - 1] + s * G[moved]
        g = g / np.linalg.norm(g)
        pts = _track(tracks[moved - 1], sv_cylinder_intersection(g))
        return abs(pts[which][0] - 0.5) - r, g, pts[which]

    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if dev_at(mid)[0] < 0:
            lo = mid
        else:
            hi = mid
    s = hi
    _, g0, vp = dev_at(s)
    t0 = float((1 - s) * t[moved - 1] + s * t[moved])
    delta0 = (1 - s) * D[moved - 1] + s * D[moved]
    label = ap_label(vp[:2])
    A = VPolytope(T_VERTICES[label])
    forced = point_set_distance(zw0, A)
    consistent = bool(np.all(np.abs(delta0[:2]) <= 1e-6) and point_set_distance(delta0[2:], A) <= 1e-6)
    path_jump = float(np.linalg.norm(delta0 - D[0]))
    report.update({
        "t0": t0, "gamma_t0": g0, "v_prime_t0": vp, "radius": r, "epsilon": eps,
        "rule_set": label, "rule_matches": label == p5["label"], "property5": p5, "forced_jump": float(forced),
        "delta_t0": delta0, "path_jump": path_jump, "delta_consistent": consistent,
        "max_early_motion": float(np.linalg.norm(D[: moved + 1] - D[0], axis=1).max()),
        # any admissible translation path moves by forced_jump before t0
        "continuity_violated": bool(forced >= OBSTRUCTION - 1e-3),
        "discontinuity_flagged": bool(consistent and path_jump > OBSTRUCTION),
    })
    if cloud is not None:
        pts = np.vstack([vp + delta0, -vp + delta0])
        if isinstance(cloud, WitnessCloud):
            report["cloud_membership"] = [cloud.contains(p) for p in pts]
        else:
            report["cloud_membership"] = [bool(cloud.contains(p, tol)) for p in pts]
    return report


def random_path_attempt(rng, n_samples: int = 200, drift: float = 0.005) -> dict:
    """A nonconstant rotation path from e_1 staying in gamma_1 > 9/10.

    gamma(t) is e_1 + t a + t^2 b normalized, with a, b orthogonal to e_1 and
    |a| + |b| <= 0.45; delta(t) starts at (0, 0, z, w) with (z, w) in T and
    wanders by at most `drift` (so it never moves 1/100).
    """
    t = np.linspace(0.0, 1.0, n_samples)
    a, b = np.zeros(4), np.zeros(4)
    a[1:], b[1:] = rng.normal(size=3), rng.normal(size=3)
    scale = rng.uniform(0.05, 0.45) / (np.linalg.norm(a) + np.linalg.norm(b))
    a, b = a * scale, b * scale
    G = np.array([1.0, 0, 0, 0]) + t[:, None] * a + t[:, None] ** 2 * b
    G /= np.linalg.norm(G, axis=1, keepdims=True)
    zw = rng.dirichlet([1.0, 1.0, 1.0])[:2]
    wiggle = rng.normal(size=(2, 4))
    D = np.zeros((n_samples, 4))
    D[:, 2:] = zw
    D += drift / 2 * (np.sin(np.pi * t)[:, None] * wiggle[0] / np.linalg.norm(wiggle[0])
                      + np.sin(2 * np.pi * t)[:, None] * wiggle[1] / np.linalg.norm(wiggle[1]))
    return {"t": t, "gamma": G, "delta": D}
