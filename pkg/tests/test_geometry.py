import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from kakeya.errors import EmptyBody, Unbounded, UnboundedInDirection
from kakeya.geometry import (HPolytope, Rotation, Segment, VPolytope, contains, h_to_v_2d, hull2d,
                             hull3d, support, support_many)
from oracles import polygon_vertices_brute_force, random_polygon

unit_square_v = VPolytope([[0, 0], [1, 0], [1, 1], [0, 1]])
unit_square_h = HPolytope.box([0, 0], [1, 1])


def test_support_examples():
    assert support(unit_square_v, [1, 0]) == 1
    assert support(Segment([0, 0], [1, 0], 0.5), [0, 1]) == 0
    assert support(unit_square_h, [1, 1]) == pytest.approx(2)


def test_support_hrep_matches_vertex_enumeration(rng):
    for _ in range(20):
        N, b = random_polygon(rng)
        V = polygon_vertices_brute_force(N, b)
        P = HPolytope(N, b)
        for d in rng.normal(size=(10, 2)):
            assert support(P, d) == pytest.approx(np.max(V @ d), abs=1e-9)


def test_support_errors():
    with pytest.raises(EmptyBody):
        support(HPolytope([[1, 0], [-1, 0]], [0, -1]), [1, 0])
    with pytest.raises(UnboundedInDirection):
        support(HPolytope([[1, 0]], [1]), [0, 1])


def test_contains_examples(rng):
    assert contains(unit_square_h, [0.5, 0.5], 0)
    assert not contains(unit_square_h, [1 + 1e-6, 0.5], 1e-9)
    S = rng.normal(size=(100, 4))
    S /= np.linalg.norm(S, axis=1, keepdims=True)
    assert contains(VPolytope(S), S.mean(axis=0), 1e-9)
    assert not contains(VPolytope(S), np.array([1.01, 0, 0, 0]), 1e-9)
    with pytest.raises(ValueError):
        contains(unit_square_h, [0, 0], -1)


def test_vrep_membership_agrees_with_hull_facets(rng):
    P = rng.normal(size=(40, 3))
    H = hull3d(P).as_hrep()
    V = VPolytope(P)
    for x in rng.normal(size=(60, 3)) * 0.8:
        s = H.slack(x)[0]
        if abs(s) > 1e-6:
            assert V.contains(x) == (s > 0)


def test_hull2d_examples(rng):
    h = hull2d([[0, 0], [1, 0], [0, 1], [0.2, 0.2]])
    assert len(h.points) == 3 and not h.degenerate
    ang = rng.uniform(0, 2 * np.pi, 1000)
    rad = np.sqrt(rng.uniform(0, 1, 1000))
    D = np.stack([rad * np.cos(ang), rad * np.sin(ang)], axis=1)
    H = hull2d(D).as_hrep()
    assert H.slack(D).min() >= -1e-9
    # counter-clockwise order
    P = hull2d(D).points
    E = np.roll(P, -1, axis=0) - P
    cross = E[:, 0] * np.roll(E, -1, axis=0)[:, 1] - E[:, 1] * np.roll(E, -1, axis=0)[:, 0]
    assert np.all(cross > 0)


def test_hull3d_cube():
    C = np.array([[x, y, z] for x in (0, 1) for y in (0, 1) for z in (0, 1)], dtype=float)
    h = hull3d(np.vstack([C, [[0.5, 0.5, 0.5]]]))
    assert len(h.points) == 8
    # qhull triangulates each square face
    assert len(h.facets) == 12
    H = h.as_hrep()
    assert H.contains([0.5, 0.5, 0.5]) and not H.contains([1.1, 0.5, 0.5])
    # facets are outward: their normal points away from the centroid
    P = h.points
    for f, n in zip(h.facets, h.normals):
        a, b, c = P[f]
        assert np.cross(b - a, c - a) @ n > 0
        assert n @ (a - P.mean(axis=0)) > 0


def test_hull_degenerate_marker():
    h = hull3d([[0, 0, 0], [1, 0, 0], [2, 0, 0], [0.5, 0, 0]])
    assert h.degenerate and h.affine_dim == 1 and len(h.points) == 2
    h = hull2d([[1, 1]] * 3)
    assert h.affine_dim == 0


def test_h_to_v_2d_examples(rng):
    assert len(h_to_v_2d(unit_square_h)) == 4
    redundant = HPolytope(np.vstack([unit_square_h.normals, [[1, 1]]]),
                          np.concatenate([unit_square_h.offsets, [5]]))
    V = h_to_v_2d(redundant).vertices
    assert len(V) == 4
    for _ in range(30):
        N, b = random_polygon(rng, 8)
        V = h_to_v_2d(HPolytope(N, b)).vertices
        ref = polygon_vertices_brute_force(N, b)
        assert len(V) == len(ref)
        for v in V:
            assert np.min(np.linalg.norm(ref - v, axis=1)) < 1e-8
        # every vertex has two active constraints
        slack = b[None, :] - V @ N.T
        assert np.all(np.sum(slack < 1e-9, axis=1) >= 2)
        dirs = np.stack([np.cos(np.arange(64) * np.pi / 32), np.sin(np.arange(64) * np.pi / 32)], 1)
        assert np.allclose(support_many(VPolytope(V), dirs), support_many(HPolytope(N, b), dirs), atol=1e-9)


def test_h_to_v_2d_degenerate_and_errors():
    seg = HPolytope([[1, 0], [-1, 0], [0, 1], [0, -1]], [1, 0, 0, 0])
    V = h_to_v_2d(seg).vertices
    assert len(V) == 2 and np.allclose(sorted(V[:, 0]), [0, 1])
    with pytest.raises(EmptyBody):
        h_to_v_2d(HPolytope([[1, 0], [-1, 0], [0, 1], [0, -1]], [0, -1, 1, 1]))
    with pytest.raises(Unbounded):
        h_to_v_2d(HPolytope([[1, 0], [-1, 0], [0, 1]], [1, 1, 1]))


def test_hpolytope_validation():
    with pytest.raises(ValueError):
        HPolytope([[0, 0]], [1])
    with pytest.raises(ValueError):
        HPolytope([[1, 0]], [np.nan])
    P = HPolytope([[2, 0], [-3, 0], [0, 1], [0, -1]], [2, 3, 1, 1])
    assert np.allclose(np.linalg.norm(P.normals, axis=1), 1)
    assert P.is_bounded()
    assert not HPolytope([[1, 0], [0, 1]], [1, 1]).is_bounded()


def test_rotation_validation(rng):
    with pytest.raises(ValueError):
        Rotation(np.diag([1.0, -1.0]))
    with pytest.raises(ValueError):
        Rotation(np.array([[1.0, 0.1], [0, 1]]))
    R = Rotation.random(4, rng)
    x = rng.normal(size=(5, 4))
    assert np.allclose(R.inverse().apply(R.apply(x)), x, atol=1e-9)


vectors2 = arrays(np.float64, 2, elements=st.floats(-5, 5))


@settings(max_examples=60, deadline=None)
@given(vectors2, st.floats(0.01, 100))
def test_support_positive_homogeneity(d, lam):
    P = VPolytope([[0, 0], [2, 1], [-1, 3], [0.5, -2]])
    assert support(P, lam * d) == pytest.approx(lam * support(P, d), rel=1e-12, abs=1e-12)
    H = HPolytope.box([-1, -2], [3, 1])
    assert support(H, lam * d) == pytest.approx(lam * support(H, d), rel=1e-9, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_support_of_hull_is_max_over_points(seed):
    r = np.random.default_rng(seed)
    P = r.normal(size=(30, 3))
    H = hull3d(P).as_hrep()
    for d in r.normal(size=(5, 3)):
        assert support(H, d) == pytest.approx(np.max(P @ d), abs=1e-8)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_contains_monotone_under_union(seed):
    r = np.random.default_rng(seed)
    P, Q = r.normal(size=(12, 3)), r.normal(size=(8, 3))
    x = r.normal(size=3) * 0.5
    if VPolytope(P).contains(x):
        assert VPolytope(np.vstack([P, Q])).contains(x)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 5))
def test_rotation_round_trip(seed, d):
    r = np.random.default_rng(seed)
    R = Rotation.random(d, r)
    x = r.normal(size=(3, d))
    assert np.allclose(R.matrix.T @ (R.matrix @ x.T), x.T, atol=1e-9)
