"""Rotating a unit segment inside a convex body in R^3.

A placement is a pair (v, u): the segment from u to u + v.  Paths are stored
as samples (t, direction, translate) plus, for every interval between
consecutive samples, a pivot in [0, 1]: along the interval the point
u + pivot * v moves linearly while the direction moves along the great
circle.  Pivot 1/2 (the midpoint) is used between graph nodes; pivot 0 keeps
the base point fixed, which is what the cap escape needs.

Margin certificate.  Write sigma(c, v) = min_i b_i - a_i.c - |a_i.v| / 2 for
the slack of the segment with midpoint c.  It is concave in (c, v), so along
the chord between two placements it is at least the smaller end value.  The
great-circle direction differs from the chord direction by at most
1 - cos(theta / 2) <= theta^2 / 8 and sigma is 1/2-Lipschitz in v, so an
interval between placements with slack >= margin + theta^2 / 16 keeps slack
>= margin throughout.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from . import lp
from .erosion import (FEAS_TOL, DimensionClass, TranslateSet, dimension_class, erode_direction,
                      orthogonality_defect, sampled_extreme_points)
from .errors import NoPathAtResolution, NotKakeya, PreconditionViolated
from .geometry import HPolytope, direction

CHECK_POINTS = 40  # interior samples per unchecked interval; a multiple of the validation density
ORTHO_TOL = 1e-4  # polygonal containers leave thin translate sets this far from orthogonal
ANCHOR_REACH = 0.5  # farthest graph node (radians) joined directly to a start or goal


# --------------------------------------------------------------------------
# Icosphere


def icosphere(level: int) -> tuple[np.ndarray, np.ndarray]:
    """Vertices and edges of the icosahedron subdivided `level` times."""
    g = (1 + 5 ** 0.5) / 2
    V = [[-1, g, 0], [1, g, 0], [-1, -g, 0], [1, -g, 0], [0, -1, g], [0, 1, g],
         [0, -1, -g], [0, 1, -g], [g, 0, -1], [g, 0, 1], [-g, 0, -1], [-g, 0, 1]]
    F = [[0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11], [1, 5, 9], [5, 11, 4],
         [11, 10, 2], [10, 7, 6], [7, 1, 8], [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8],
         [3, 8, 9], [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1]]
    verts = [np.array(v, dtype=float) / np.linalg.norm(v) for v in V]
    for _ in range(level):
        cache = {}

        def mid(a, b):
            key = (min(a, b), max(a, b))
            if key not in cache:
                m = verts[a] + verts[b]
                verts.append(m / np.linalg.norm(m))
                cache[key] = len(verts) - 1
            return cache[key]

        newF = []
        for a, b, c in F:
            ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
            newF += [[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]
        F = newF
    F = np.array(F)
    E = np.vstack([F[:, [0, 1]], F[:, [1, 2]], F[:, [2, 0]]])
    E = np.unique(np.sort(E, axis=1), axis=0)
    return np.array(verts), E


def slerp(a, b, s) -> np.ndarray:
    """Points on the great circle arc from a to b at parameters s (any shape)."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    s = np.asarray(s, dtype=float)[..., None]
    theta = math.acos(max(-1.0, min(1.0, float(a @ b))))
    if theta < 1e-12:
        out = (1 - s) * a + s * b
    else:
        out = (np.sin((1 - s) * theta) * a + np.sin(s * theta) * b) / math.sin(theta)
    return out / np.linalg.norm(out, axis=-1, keepdims=True)


def arc(a, b) -> float:
    return math.acos(max(-1.0, min(1.0, float(np.dot(a, b)))))


# --------------------------------------------------------------------------
# Slack of placements


def midpoint_offsets(K: HPolytope, v) -> np.ndarray:
    """Offsets of the set of segment midpoints c with c +- v/2 in K."""
    return K.offsets - 0.5 * np.abs(K.normals @ v)


def segment_slack(K: HPolytope, dirs, translates) -> np.ndarray:
    """Smallest constraint slack over both endpoints, per placement."""
    D = np.atleast_2d(dirs)
    U = np.atleast_2d(translates)
    AU = U @ K.normals.T
    AD = D @ K.normals.T
    return np.min(K.offsets[None, :] - AU - np.maximum(AD, 0.0), axis=1)


def _interval_samples(d0, u0, d1, u1, pivot, s):
    dirs = slerp(d0, d1, s)
    p = (1 - s)[:, None] * (u0 + pivot * d0) + s[:, None] * (u1 + pivot * d1)
    return dirs, p - pivot * dirs


def interval_slack(K, d0, u0, d1, u1, pivot=0.5, n=CHECK_POINTS) -> float:
    s = np.linspace(0.0, 1.0, n + 2)
    dirs, trans = _interval_samples(np.asarray(d0), np.asarray(u0), np.asarray(d1), np.asarray(u1), pivot, s)
    return float(segment_slack(K, dirs, trans).min())


# --------------------------------------------------------------------------
# Direction graph


@dataclass(eq=False)
class DirectionGraph:
    body: HPolytope
    level: int
    nodes: np.ndarray
    edges: np.ndarray
    neighbors: list
    edge_arcs: np.ndarray
    inradius: np.ndarray  # inradius of each I_v
    midpoints: np.ndarray  # deepest segment midpoint of each I_v
    _classes: dict = field(default_factory=dict, repr=False)

    @property
    def max_edge_arc(self) -> float:
        return float(self.edge_arcs.max())

    def __len__(self):
        return len(self.nodes)

    def translate_set(self, i: int) -> TranslateSet:
        return erode_direction(self.body, self.nodes[i])

    def translate(self, i: int) -> np.ndarray:
        return self.midpoints[i] - 0.5 * self.nodes[i]

    def dimension_class(self, i: int, point_tol: float = 1e-7) -> DimensionClass:
        key = (i, point_tol)
        if key not in self._classes:
            self._classes[key] = dimension_class(self.translate_set(i), point_tol)
        return self._classes[key]

    def candidate_translates(self, i: int, k: int = 16) -> np.ndarray:
        """Deepest point, Chebyshev centre and LP extreme points of I_v, at most k."""
        from .metrics import chebyshev_center
        I = self.translate_set(i)
        pts = sampled_extreme_points(I)
        cands = [self.translate(i), chebyshev_center(pts).center]
        return np.vstack(cands + [farthest_point_subsample(pts, k - 2)])

    def nearest(self, v, max_arc: float) -> np.ndarray:
        """Node indices within max_arc of v, closest first."""
        cosines = self.nodes @ v
        idx = np.flatnonzero(cosines >= math.cos(max_arc))
        return idx[np.argsort(-cosines[idx], kind="stable")]


def farthest_point_subsample(P, k: int) -> np.ndarray:
    P = np.asarray(P)
    if len(P) <= k:
        return P
    chosen = [0]
    dist = np.linalg.norm(P - P[0], axis=1)
    while len(chosen) < k:
        j = int(np.argmax(dist))
        chosen.append(j)
        dist = np.minimum(dist, np.linalg.norm(P - P[j], axis=1))
    return P[chosen]


def build_graph(K: HPolytope, level: int = 5, classify: bool = False,
                point_tol: float = 1e-7) -> DirectionGraph:
    """Icosphere graph with the translate set of every node.

    One max-slack LP per node (warm-started along the node order) decides
    emptiness; raises NotKakeya at the first direction with no unit segment.
    """
    if K.dim != 3:
        raise PreconditionViolated("the planner works in R^3")
    if not 2 <= level <= 7:
        raise PreconditionViolated("level must be between 2 and 7")
    if not K.is_bounded():
        raise PreconditionViolated("container must be bounded")
    nodes, edges = icosphere(level)
    n = len(nodes)
    nb = [[] for _ in range(n)]
    for a, b in edges:
        nb[a].append(b)
        nb[b].append(a)
    arcs = np.arccos(np.clip(np.einsum("ij,ij->i", nodes[edges[:, 0]], nodes[edges[:, 1]]), -1, 1))
    r = np.empty(n)
    mids = np.empty((n, 3))
    basis = None
    for i, v in enumerate(nodes):
        x, r[i], basis = lp.max_slack_point(K.normals, midpoint_offsets(K, v), basis)
        if r[i] < -FEAS_TOL:
            raise NotKakeya(v)
        mids[i] = x
    g = DirectionGraph(K, level, nodes, edges, [np.array(x) for x in nb], arcs, r, mids)
    if classify:
        for i in range(n):
            g.dimension_class(i, point_tol)
    return g


# --------------------------------------------------------------------------
# Cap regions


@dataclass(frozen=True, eq=False)
class CapRegion:
    v: np.ndarray
    u: np.ndarray
    w: np.ndarray

    def contains(self, p) -> bool:
        p = direction(p)
        return bool(p @ (self.v + self.w) > 1 or p @ (self.v - self.w) > 1)

    def reach_bound(self, p) -> float:
        """Any p in the region is reachable along a path 2|p - v|-close to {v}."""
        return 2 * float(np.linalg.norm(direction(p) - self.v))

    def sample(self, n: int, rng) -> np.ndarray:
        """n directions of the region (rejection sampling around the two cap centres)."""
        out = []
        centres = [direction(self.v + self.w), direction(self.v - self.w)]
        half = [math.acos(min(1.0, 1 / np.linalg.norm(self.v + s * self.w))) for s in (1, -1)]
        while len(out) < n:
            k = int(rng.integers(2))
            c, h = centres[k], half[k]
            g = rng.normal(size=3)
            g -= (g @ c) * c
            g /= np.linalg.norm(g)
            p = math.cos(h * rng.random()) * c + math.sin(h * rng.random()) * g
            p = direction(p)
            if self.contains(p):
                out.append(p)
        return np.array(out)


def cap_region(K: HPolytope, v, u, w, tol: float = 1e-9) -> CapRegion:
    """Two open caps of directions p with <p, v + w> > 1 or <p, v - w> > 1.

    Requires u and u + w in I_v, 0 < |w| < 1 and <v, w> = 0 (to 1e-8).
    """
    v = direction(v)
    u, w = np.asarray(u, float), np.asarray(w, float)
    nw = float(np.linalg.norm(w))
    if not 0 < nw < 1:
        raise PreconditionViolated(f"|w| = {nw} must lie in (0, 1)")
    if abs(float(v @ w)) > 1e-8:
        raise PreconditionViolated(f"<v, w> = {float(v @ w)} is not zero")
    I = erode_direction(K, v)
    if not (I.contains(u, tol) and I.contains(u + w, tol)):
        raise PreconditionViolated("u and u + w must both lie in I_v")
    return CapRegion(v, u, w)


# --------------------------------------------------------------------------
# Paths


@dataclass(eq=False)
class MotionPath:
    t: np.ndarray
    directions: np.ndarray
    translates: np.ndarray
    pivots: np.ndarray  # pivots[i] governs the interval from sample i to i + 1
    margin: float
    epsilon: float | None = None
    info: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.t)

    def to_json(self) -> dict:
        return {"samples": [{"t": float(t), "dir": d.tolist(), "translate": u.tolist(), "pivot": float(p)}
                            for t, d, u, p in zip(self.t, self.directions, self.translates,
                                                  np.append(self.pivots, 0.5))],
                "margin": self.margin, "epsilon": self.epsilon}

    @classmethod
    def from_json(cls, data: dict) -> "MotionPath":
        S = data["samples"]
        return cls(np.array([s["t"] for s in S]), np.array([s["dir"] for s in S]),
                   np.array([s["translate"] for s in S]),
                   np.array([s.get("pivot", 0.5) for s in S[:-1]]),
                   float(data.get("margin", 0.0)), data.get("epsilon"))


@dataclass
class ValidationReport:
    passed: bool
    min_slack: float
    worst_t: float
    n_checked: int


def validate(path: MotionPath, K: HPolytope, density: int = 10) -> ValidationReport:
    """Re-sample every interval at `density` points and check both segment ends."""
    worst, worst_t, count = math.inf, 0.0, 0
    s = np.arange(density + 1) / density
    for i in range(len(path) - 1):
        dirs, trans = _interval_samples(path.directions[i], path.translates[i], path.directions[i + 1],
                                        path.translates[i + 1], path.pivots[i], s)
        sl = segment_slack(K, dirs, trans)
        count += len(s)
        j = int(np.argmin(sl))
        if sl[j] < worst:
            worst, worst_t = float(sl[j]), float(path.t[i] + s[j] * (path.t[i + 1] - path.t[i]))
    if len(path) == 1:
        worst = float(segment_slack(K, path.directions, path.translates)[0])
        count = 1
    return ValidationReport(worst >= -FEAS_TOL, worst, worst_t, count)


@dataclass
class EpsilonReport:
    epsilon: float
    distances: np.ndarray


def epsilon_closeness(path, reference) -> EpsilonReport:
    """max over path directions of the distance to the nearest reference direction."""
    D = path.directions if isinstance(path, MotionPath) else np.atleast_2d(np.asarray(path, float))
    R = np.atleast_2d(np.asarray(reference, dtype=float))
    if len(D) == 0 or len(R) == 0:
        raise PreconditionViolated("path and reference must be nonempty")
    dist = np.sqrt(np.maximum(0.0, np.sum(D ** 2, 1)[:, None] + np.sum(R ** 2, 1)[None, :]
                              - 2 * D @ R.T)).min(axis=1)
    return EpsilonReport(float(dist.max()), dist)


# a path piece is a list of (direction, translate, pivot to the next sample)


def _reverse(piece):
    if not piece:
        return piece
    out = []
    n = len(piece)
    for j in range(n):
        d, u, _ = piece[n - 1 - j]
        pivot = piece[n - 2 - j][2] if j < n - 1 else 0.5
        out.append((d, u, pivot))
    return out


def _join(*pieces):
    out = []
    for piece in pieces:
        for d, u, p in piece:
            if out and np.allclose(out[-1][0], d, atol=1e-15) and np.allclose(out[-1][1], u, atol=1e-15):
                out[-1] = (out[-1][0], out[-1][1], p)
                continue
            out.append((np.asarray(d, float), np.asarray(u, float), p))
    return out


# --------------------------------------------------------------------------
# Planning


@dataclass(eq=False)
class _Anchor:
    """A placement from which the graph is entered (or left), with the path to it."""
    direction: np.ndarray
    translate: np.ndarray
    slack: float
    piece: list  # from the given start placement to this one
    kind: str
    info: dict = field(default_factory=dict)


def _deepest(K, v):
    x, r, _ = lp.max_slack_point(K.normals, midpoint_offsets(K, v))
    return x - 0.5 * v, r


def _anchors(K: HPolytope, v, u, margin: float, bulge: float, point_tol: float) -> list:
    """Placements with good slack reachable from (v, u) without leaving a small cap.

    Endpoint splice: translate within I_v to a canonical placement (the
    deepest one), so the rest of the path does not depend on u.  When I_v is
    thin, also build the two-cap escape: slide to an end of I_v, tilt the
    direction toward v + lam w keeping the base point fixed (the moving end
    stays in the triangle u, u + v, u + v + w), then move to the deepest
    placement of the tilted direction.
    """
    v = direction(v)
    deep, r = _deepest(K, v)
    out = [_Anchor(v, deep, r, [(v, u, 0.5), (v, deep, 0.5)], "splice")]
    if r >= margin + bulge:
        return out
    I = erode_direction(K, v)
    pts = sampled_extreme_points(I)
    _, _, Vt = np.linalg.svd(pts - pts.mean(axis=0))
    proj = pts @ Vt[0]
    a, b = pts[int(np.argmax(proj))], pts[int(np.argmin(proj))]
    w = b - a
    length = float(np.linalg.norm(w))
    if length <= max(point_tol, 1e-9):
        return out
    # a thin I_v must be (nearly) orthogonal to v before the caps apply
    defect = orthogonality_defect(I, v, pts)
    if defect > max(point_tol, ORTHO_TOL):
        return out
    if length >= 1:
        w = w * (0.9 / length)
    for base, ww in ((a, w), (a + w, -w)):
        for lam in (0.02, 0.05, 0.1, 0.2, 0.35, 0.5, 0.75, 1.0):
            q = direction(v + lam * ww)
            dq, rq = _deepest(K, q)
            if rq < margin + bulge:
                continue
            mus = np.linspace(0.0, lam, 17)
            tilt = [(direction(v + m * ww), base, 0.0) for m in mus]
            piece = [(v, u, 0.5)] + tilt + [(q, dq, 0.5)]
            if _piece_slack(K, piece) >= -FEAS_TOL:
                out.append(_Anchor(q, dq, rq, piece, "cap", {"w": ww, "lambda": lam, "defect": defect}))
            break
    return out


def _piece_slack(K, piece) -> float:
    worst = math.inf
    for (d0, u0, p), (d1, u1, _) in zip(piece, piece[1:]):
        worst = min(worst, interval_slack(K, d0, u0, d1, u1, p))
    return worst


def _connect(K, d0, u0, d1, u1, threshold: float, depth: int = 6):
    """Samples joining two placements with slack >= threshold, subdividing at
    deepest intermediate placements when the straight interval fails."""
    if interval_slack(K, d0, u0, d1, u1) >= threshold:
        return [(d0, u0, 0.5), (d1, u1, 0.5)]
    if depth == 0 or arc(d0, d1) < 1e-6:
        return None
    m = slerp(d0, d1, 0.5)
    um, rm = _deepest(K, m)
    if rm < threshold:
        return None
    left = _connect(K, d0, u0, m, um, threshold, depth - 1)
    if left is None:
        return None
    right = _connect(K, m, um, d1, u1, threshold, depth - 1)
    return None if right is None else left[:-1] + right


def plan(K: HPolytope, start, goal, level: int = 5, margin: float = 1e-3, reference=None,
         eps_budget: float | None = None, graph: DirectionGraph | None = None,
         projective: bool | str = False, point_tol: float = 1e-7) -> MotionPath:
    """Path of placements from start = (v0, u0) to goal = (v1, u1).

    Between the first and last graph placements every sample keeps slack >=
    margin (certified as in the module docstring, or checked at CHECK_POINTS
    points per interval).  The pieces joining the given start and goal to the
    graph only need to stay feasible, since the given placements may have no
    slack at all.

    With projective=True the goal may also be reached as (-v1, u1 + v1),
    which is the same segment traversed the other way; "auto" tries the
    oriented problem first.
    """
    g = graph if graph is not None else build_graph(K, level)
    if projective == "auto":
        kw = dict(margin=margin, reference=reference, eps_budget=eps_budget, graph=g, point_tol=point_tol)
        try:
            return plan(K, start, goal, projective=False, **kw)
        except NoPathAtResolution:
            return plan(K, start, goal, projective=True, **kw)
    v0, u0 = direction(start[0]), np.asarray(start[1], float)
    v1, u1 = direction(goal[0]), np.asarray(goal[1], float)
    for name, (v, u) in (("start", (v0, u0)), ("goal", (v1, u1))):
        if segment_slack(K, v, u)[0] < -FEAS_TOL:
            raise PreconditionViolated(f"{name} translate is not in I_v (slack {segment_slack(K, v, u)[0]:.3e})")
    bulge = g.max_edge_arc ** 2 / 16
    allowed = np.ones(len(g), dtype=bool)
    ref = None
    if reference is not None:
        ref = np.atleast_2d(np.asarray(reference, float))
        ref = ref / np.linalg.norm(ref, axis=1, keepdims=True)
        if eps_budget is not None:
            allowed = epsilon_closeness(g.nodes, ref).distances <= eps_budget
    usable = allowed & (g.inradius >= margin - FEAS_TOL)
    certified = usable & (g.inradius >= margin + bulge)

    def within_budget(d):
        return ref is None or eps_budget is None or epsilon_closeness(d[None], ref).epsilon <= eps_budget

    starts = [a for a in _anchors(K, v0, u0, margin, bulge, point_tol) if within_budget(a.direction)]
    goal_options = [(v1, u1, False)] + ([(-v1, u1 + v1, True)] if projective else [])
    goals = []
    for gv, gu, flipped in goal_options:
        for a in _anchors(K, gv, gu, margin, bulge, point_tol):
            if within_budget(a.direction):
                goals.append((a, flipped))
    if not starts or not goals:
        raise NoPathAtResolution("start or goal has no admissible anchor within the budget")

    reach = 1.5 * g.max_edge_arc

    def attach(anchor):
        # keep the anchor's own slack if possible; near Point-class directions
        # the slack can dip before it grows, so fall back to lower thresholds
        top = min(margin, anchor.slack)
        for thr in (top, top / 2, 0.0):
            links = {}
            near = [j for j in g.nearest(anchor.direction, ANCHOR_REACH) if usable[j]][:8]
            for j in near:
                link = _connect(K, anchor.direction, anchor.translate, g.nodes[j], g.translate(j),
                                thr - FEAS_TOL)
                if link is not None:
                    links[int(j)] = link
            if links:
                return links
        return {}

    start_links = [attach(a) for a in starts]
    goal_links = [attach(a) for a, _ in goals]
    goal_nodes = {}
    for k, links in enumerate(goal_links):
        for j, link in links.items():
            cost = arc(g.nodes[j], goals[k][0].direction)
            if j not in goal_nodes or cost < goal_nodes[j][0]:
                goal_nodes[j] = (cost, k)
    goal_dirs = np.array([a.direction for a, _ in goals])

    # direct start-goal joins for nearby anchors
    best = None
    for i, sa in enumerate(starts):
        for k, (ga, _) in enumerate(goals):
            if arc(sa.direction, ga.direction) <= reach:
                link = _connect(K, sa.direction, sa.translate, ga.direction, ga.translate,
                                min(margin, sa.slack, ga.slack) - FEAS_TOL)
                if link is not None:
                    cost = arc(sa.direction, ga.direction)
                    if best is None or cost < best[0]:
                        best = (cost, i, k, link)

    def h(j):
        return float(np.arccos(np.clip(goal_dirs @ g.nodes[j], -1, 1)).min())

    checked = {}

    def edge_ok(a, b):
        if certified[a] and certified[b]:
            return True
        key = (min(a, b), max(a, b))
        if key not in checked:
            checked[key] = interval_slack(K, g.nodes[a], g.translate(a), g.nodes[b], g.translate(b)) \
                >= margin - FEAS_TOL
        return checked[key]

    dist, parent, heap = {}, {}, []
    for i, links in enumerate(start_links):
        for j, _ in links.items():
            c = arc(starts[i].direction, g.nodes[j])
            if c < dist.get(j, math.inf):
                dist[j], parent[j] = c, ("start", i)
                heapq.heappush(heap, (c + h(j), c, j))
    found = None
    bound = best[0] if best is not None else math.inf
    while heap:
        f, c, j = heapq.heappop(heap)
        if f >= bound:
            break
        if c > dist.get(j, math.inf):
            continue
        if j in goal_nodes:
            total = c + goal_nodes[j][0]
            if total < bound:
                bound, found = total, j
        for k in g.neighbors[j]:
            k = int(k)
            if not usable[k]:
                continue
            ck = c + arc(g.nodes[j], g.nodes[k])
            if ck < dist.get(k, math.inf) and edge_ok(j, k):
                dist[k], parent[k] = ck, ("node", j)
                heapq.heappush(heap, (ck + h(k), ck, k))

    if found is None and best is None:
        raise NoPathAtResolution(f"graph level {g.level}, margin {margin}, "
                                 f"{int(usable.sum())} of {len(g)} directions usable")
    if found is None:
        _, i, k, link = best
        middle = link
        s_anchor, (g_anchor, flipped) = starts[i], goals[k]
    else:
        chain = [found]
        while parent[chain[-1]][0] == "node":
            chain.append(parent[chain[-1]][1])
        chain.reverse()
        i = parent[chain[0]][1]
        k = goal_nodes[found][1]
        s_anchor, (g_anchor, flipped) = starts[i], goals[k]
        middle = _join(start_links[i][chain[0]],
                       [(g.nodes[j], g.translate(j), 0.5) for j in chain],
                       _reverse(goal_links[k][found]))
    samples = _join(s_anchor.piece, middle, _reverse(g_anchor.piece))
    n = len(samples)
    path = MotionPath(np.linspace(0.0, 1.0, n) if n > 1 else np.zeros(1),
                      np.array([s[0] for s in samples]), np.array([s[1] for s in samples]),
                      np.array([s[2] for s in samples[:-1]]), margin)
    core = (None, None)
    if found is not None:
        first, last = g.nodes[chain[0]], g.nodes[chain[-1]]
        hits0 = [i for i, d in enumerate(path.directions) if np.array_equal(d, first)]
        hits1 = [i for i, d in enumerate(path.directions) if np.array_equal(d, last)]
        core = (hits0[0], hits1[-1])
    path.info.update({"flipped_goal": flipped, "start_kind": s_anchor.kind, "goal_kind": g_anchor.kind,
                      "graph_level": g.level, "bulge": bulge, "core": core,
                      "nodes": chain if found is not None else []})
    if ref is not None:
        path.epsilon = epsilon_closeness(path, ref).epsilon
    check = validate(path, K, 10)
    path.info["validation"] = check
    if not check.passed:  # pragma: no cover - certificates make this unreachable
        raise NoPathAtResolution(f"assembled path fails validation (slack {check.min_slack:.3e})")
    return path
