import math

import numpy as np
import pytest

from kakeya import bodies
from kakeya.erosion import dimension_class, erode_direction, orthogonality_defect
from kakeya.errors import NoPathAtResolution, NotKakeya, PreconditionViolated
from kakeya.geometry import HPolytope
from kakeya.planner import (ORTHO_TOL, MotionPath, _deepest, arc, build_graph, cap_region,
                            epsilon_closeness, icosphere, plan, segment_slack, slerp, validate)


def h_vertices(K):
    from scipy.spatial import HalfspaceIntersection
    hs = np.hstack([K.normals, -K.offsets[:, None]])
    return HalfspaceIntersection(hs, np.zeros(3)).intersections


def unit(v):
    v = np.asarray(v, float)
    return v / np.linalg.norm(v)


@pytest.fixture(scope="module")
def ball():
    return bodies.ball(0.505, 512)


@pytest.fixture(scope="module")
def ball_graph(ball):
    return build_graph(ball, 4)


@pytest.fixture(scope="module")
def cyl():
    return bodies.cylinder()


@pytest.fixture(scope="module")
def cyl_graph(cyl):
    return build_graph(cyl, 4)


def test_icosphere_levels():
    prev = math.inf
    for L in range(0, 5):
        V, E = icosphere(L)
        assert len(V) == 10 * 4 ** L + 2 and len(E) == 30 * 4 ** L
        assert np.allclose(np.linalg.norm(V, axis=1), 1)
        m = np.arccos(np.einsum("ij,ij->i", V[E[:, 0]], V[E[:, 1]])).max()
        assert m < prev
        prev = m


def test_slerp_and_arc():
    a, b = unit([1, 0, 0]), unit([0, 1, 0])
    assert np.allclose(slerp(a, b, 0.5), unit([1, 1, 0]))
    assert arc(a, b) == pytest.approx(np.pi / 2)


def test_build_graph_errors():
    with pytest.raises(PreconditionViolated):
        build_graph(HPolytope.box([0, 0], [2, 2]), 3)
    with pytest.raises(PreconditionViolated):
        build_graph(bodies.ball(0.6), 8)
    with pytest.raises(PreconditionViolated):
        build_graph(HPolytope([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [1, 1, 1]), 2)
    with pytest.raises(NotKakeya):
        build_graph(bodies.ball(0.4), 2)


def test_graph_classes_ball():
    # 512 tangent planes leave translate sets about 0.09 across: Point at that resolution
    g = build_graph(bodies.ball(0.5, 512), 2)
    assert {str(g.dimension_class(i, 0.1)) for i in range(len(g))} == {"Point"}


def test_graph_classes_cylinder(cyl):
    g = build_graph(cyl, 3)
    eq = np.flatnonzero(np.abs(g.nodes[:, 0]) < 1e-12)
    assert len(eq) > 0
    for i in eq:
        assert str(g.dimension_class(i, 2e-2)) == "LowDim(1)"
    for i in np.flatnonzero(np.abs(g.nodes[:, 0]) > 0.5):
        assert str(g.dimension_class(i, 2e-2)) == "FullDim"


def test_swept_hull_yz_directions_are_points():
    K = bodies.swept_hull(64, 64)
    for phi in (0.4, 1.2, -0.8, 2.5):
        I = erode_direction(K, [0, math.cos(phi), math.sin(phi)])
        assert str(dimension_class(I, 0.05)) == "Point"


def equator_translate_set(cyl):
    v = np.array([0.0, 1.0, 0.0])
    I = erode_direction(cyl, v)
    lo, _ = I.poly.extreme_point(np.array([-1.0, 0, 0]))
    return v, lo


def test_cap_region(cyl, rng):
    v, u = equator_translate_set(cyl)
    w = np.array([0.5, 0, 0])
    P = cap_region(cyl, v, u, w)
    samples = P.sample(20, rng)
    assert len(samples) == 20
    for p in samples:
        assert str(dimension_class(erode_direction(cyl, p))) == "FullDim"
        assert P.reach_bound(p) == pytest.approx(2 * np.linalg.norm(p - v))
    Q = cap_region(cyl, v, u + w, -w)
    assert all(Q.contains(p) for p in samples)
    assert all(P.contains(p) for p in Q.sample(20, rng))
    with pytest.raises(PreconditionViolated):
        cap_region(cyl, v, u, [1.0, 0, 0])
    with pytest.raises(PreconditionViolated):
        cap_region(cyl, v, u, [0.3, 0.1, 0])
    with pytest.raises(PreconditionViolated):
        cap_region(cyl, v, u + [0, 0, 0.1], w)


def test_epsilon_closeness_examples():
    ref = np.array([slerp([1, 0, 0], [0, 1, 0], s) for s in np.linspace(0, 1, 11)])
    assert epsilon_closeness(ref[2:5], ref).epsilon == 0
    v = np.array([0, 0, 1.0])
    alpha = 0.3
    ring = np.array([[math.sin(alpha) * math.cos(a), math.sin(alpha) * math.sin(a), math.cos(alpha)]
                     for a in np.linspace(0, 2 * np.pi, 50)])
    assert epsilon_closeness(ring, v).epsilon == pytest.approx(2 * math.sin(alpha / 2), abs=1e-12)
    with pytest.raises(PreconditionViolated):
        epsilon_closeness(np.zeros((0, 3)), v)


def test_ball_path_follows_centre(ball, ball_graph):
    v0, v1 = unit([1, 0.2, 0.1]), unit([-0.3, 1, -0.5])
    path = plan(ball, (v0, -v0 / 2), (v1, -v1 / 2), margin=1e-3, graph=ball_graph)
    rep = validate(path, ball, 10)
    assert rep.passed and rep.min_slack >= 0
    # for the round ball the midpoint u + v/2 is forced to the centre; with 512 facets it is
    # confined to the midpoints of I_v, within sqrt(R^2 - 1/4) of the centre for circumradius R
    R = np.linalg.norm(h_vertices(ball), axis=1).max()
    spread = math.sqrt(R * R - 0.25)
    for d, u in zip(path.directions, path.translates):
        assert np.linalg.norm(u + 0.5 * d) <= spread + 1e-9
    i, j = path.info["core"]
    core = segment_slack(ball, path.directions[i:j + 1], path.translates[i:j + 1])
    assert core.min() >= 1e-3 - 1e-9


def test_validate_detects_outward_perturbation(ball, ball_graph):
    v0, v1 = unit([0, 0, 1]), unit([1, 1, 0])
    path = plan(ball, (v0, -v0 / 2), (v1, -v1 / 2), margin=1e-3, graph=ball_graph)
    k = len(path) // 2
    d, u = path.directions[k], path.translates[k]
    # push the sample through its tightest facet until it sits 2 * margin outside
    ends = np.vstack([u, u + d])
    sl = ball.offsets[None, :] - ends @ ball.normals.T
    e, f = np.unravel_index(np.argmin(sl), sl.shape)
    bad = MotionPath(path.t, path.directions, path.translates.copy(), path.pivots, path.margin)
    bad.translates[k] += (sl[e, f] + 2e-3) * ball.normals[f]
    rep = validate(bad, ball, 10)
    assert not rep.passed
    assert rep.min_slack == pytest.approx(-2e-3, abs=1e-9)


def test_json_round_trip(ball, ball_graph):
    v0, v1 = unit([0, 1, 0]), unit([0, 0, 1])
    path = plan(ball, (v0, -v0 / 2), (v1, -v1 / 2), graph=ball_graph)
    back = MotionPath.from_json(path.to_json())
    assert np.allclose(back.directions, path.directions) and np.allclose(back.pivots, path.pivots)
    assert validate(back, ball).passed


def test_cylinder_equator_pair_leaves_equator(cyl, cyl_graph):
    v0 = np.array([0.0, 1.0, 0.0])
    v1 = -v0
    u0 = _deepest(cyl, v0)[0]
    u1 = _deepest(cyl, v1)[0]
    path = plan(cyl, (v0, u0), (v1, u1), margin=1e-3, graph=cyl_graph)
    assert not path.info["flipped_goal"]
    assert np.abs(path.directions[:, 0]).max() > 0.1
    assert validate(path, cyl, 10).passed
    assert path.info["start_kind"] == "cap" and path.info["goal_kind"] == "cap"


def test_cap_anchors_pass_orthogonality_gate(cyl, cyl_graph):
    v0, v1 = unit([0, 1, 1]), unit([1, 0.2, 0])
    path = plan(cyl, (v0, _deepest(cyl, v0)[0]), (v1, _deepest(cyl, v1)[0]), graph=cyl_graph)
    assert path.info["start_kind"] == "cap"
    assert orthogonality_defect(erode_direction(cyl, v0), v0) <= ORTHO_TOL
    assert validate(path, cyl).passed


def test_plan_symmetry(cyl, cyl_graph, rng):
    for _ in range(4):
        a, b = unit(rng.normal(size=3)), unit(rng.normal(size=3))
        A, B = (a, _deepest(cyl, a)[0]), (b, _deepest(cyl, b)[0])
        ok_ab = ok_ba = True
        try:
            plan(cyl, A, B, graph=cyl_graph)
        except NoPathAtResolution:
            ok_ab = False
        try:
            plan(cyl, B, A, graph=cyl_graph)
        except NoPathAtResolution:
            ok_ba = False
        assert ok_ab == ok_ba


def test_start_translate_only_changes_prefix():
    K = HPolytope.box([-1, -1, -1], [1, 1, 1])
    g = build_graph(K, 3)
    v0, v1 = unit([1, 0.3, 0.2]), unit([0.1, -1, 0.4])
    goal = (v1, -v1 / 2)
    p1 = plan(K, (v0, -v0 / 2), goal, graph=g)
    p2 = plan(K, (v0, -v0 / 2 + [0.2, -0.1, 0.3]), goal, graph=g)
    assert p1.info["start_kind"] == p2.info["start_kind"] == "splice"
    assert np.allclose(p1.directions[1:], p2.directions[1:]) and np.allclose(p1.translates[1:], p2.translates[1:])
    assert not np.allclose(p1.translates[0], p2.translates[0])


def test_infeasible_inputs(cyl, cyl_graph):
    with pytest.raises(PreconditionViolated):
        plan(cyl, ([1, 0, 0], [5, 0, 0]), ([0, 0, 1], [0, 0, -0.5]), graph=cyl_graph)
    with pytest.raises(NoPathAtResolution, match="not a proof"):
        plan(cyl, ([1, 0, 0], [-0.5, 0, 0]), ([0, 1, 0], [0, -0.5, 0]), margin=0.3, graph=cyl_graph)


def test_projective_goal(cyl, cyl_graph):
    v0, v1 = unit([1, 0.1, 0]), unit([-1, 0.1, 0.05])
    path = plan(cyl, (v0, _deepest(cyl, v0)[0]), (v1, _deepest(cyl, v1)[0]), graph=cyl_graph,
                projective="auto")
    assert validate(path, cyl).passed
    # the last sample is the goal segment, traversed either way
    d, u = path.directions[-1], path.translates[-1]
    ends = {tuple(np.round(u, 9)), tuple(np.round(u + d, 9))}
    g = _deepest(cyl, v1)[0]
    assert ends == {tuple(np.round(g, 9)), tuple(np.round(g + v1, 9))}


def test_reference_budget_on_swept_hull():
    K = bodies.swept_hull(64, 64)
    g = build_graph(K, 4)
    a, b = 0.5, -0.5
    s = np.array([0, math.cos(a), math.sin(a)])
    e = np.array([0, math.cos(b), math.sin(b)])
    ref = np.array([[0, math.cos(x), math.sin(x)] for x in np.linspace(a, b, 201)])
    with pytest.raises(NoPathAtResolution):
        plan(K, (s, _deepest(K, s)[0]), (e, _deepest(K, e)[0]), reference=ref, eps_budget=0.05, graph=g)
    path = plan(K, (s, _deepest(K, s)[0]), (e, _deepest(K, e)[0]), reference=ref, graph=g)
    assert validate(path, K).passed
    assert path.epsilon == pytest.approx(epsilon_closeness(path, ref).epsilon, abs=1e-12)
    assert path.epsilon > 0.05
