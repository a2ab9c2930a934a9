import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kakeya import fourd
from kakeya.errors import BudgetExceeded, OutOfRegime


def rule_brute_force(x: Fraction) -> str:
    """Direct evaluation of the dyadic rule by halving, on exact rationals."""
    s = min(abs(x - Fraction(1, 2)), abs(x + Fraction(1, 2)))
    if s == 0:
        return "T"
    k, power = 0, Fraction(1)
    while not (power >= s > power / 2):
        k += 1
        power /= 2
    if s == power:
        return "T"
    return {1: "T1", 2: "T2", 0: "T3"}[k % 3]


def test_label_examples():
    assert fourd.ap_label((0.5, math.sqrt(3) / 2)) == "T"
    assert fourd.ap_label((0.9, math.sqrt(1 - 0.81))) == "T1"
    assert rule_brute_force(Fraction(9, 10)) == "T1"
    assert fourd.ap_label("3/4") == "T"
    assert fourd.ap_label(0.75) == "T"
    assert fourd.ap_label(Fraction(5, 8)) == "T"  # s = 1/8
    assert fourd.ap_label(Fraction(5, 8) + Fraction(1, 100)) == rule_brute_force(Fraction(5, 8) + Fraction(1, 100))


@settings(max_examples=300, deadline=None)
@given(st.floats(-1, 1))
def test_float_rule_matches_exact_rule(x):
    # a float is an exact dyadic rational; boundary cases within 1e-12 are widened to T
    exact = rule_brute_force(Fraction(x))
    s = min(abs(x - 0.5), abs(x + 0.5))
    if s > 0:
        m = math.frexp(s)[0]
        if abs(m - 0.5) < 1e-11 or abs(m - 1) < 1e-11 or s < 1e-11:
            return
    assert fourd.ap_label(x) == exact


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 2 * np.pi))
def test_rule_ignores_y_and_sign(a):
    p = np.array([np.cos(a), np.sin(a)])
    assert fourd.ap_label(p) == fourd.ap_label((p[0], -p[1])) == fourd.ap_label(-p)
    assert fourd.ap_label(p) in fourd.T_SETS


def test_properties_hold():
    rep = fourd.verify_ap_properties(10000, 100, seed=3)
    for k in ("property1", "property2", "property3", "property4", "property5"):
        assert rep[k]["passed"], (k, rep[k].get("failures"))


def test_property5_at_origin():
    res = fourd.property5_radius((0.0, 0.0), 1e-3)
    assert res["label"] == "T3" and res["distance"] == pytest.approx(1 / math.sqrt(2))
    r = res["radius"]
    assert r < 1e-3
    for x in (0.5 + r, 0.5 - r, -0.5 + r, -0.5 - r):
        assert fourd.ap_label(x) == "T3"


def test_every_pair_of_sets_meets():
    for a in fourd.T_SETS.values():
        for b in fourd.T_SETS.values():
            both = fourd.HPolytope(np.vstack([a.normals, b.normals]), np.concatenate([a.offsets, b.offsets]))
            assert both.inradius >= -1e-12
    # the origin is not in T3, so the common point is not always (0, 0)
    assert not fourd.T_SETS["T3"].contains([0, 0], 1e-9)


def test_cylinder_intersection_trichotomy():
    inter = fourd.sv_cylinder_intersection([1.0, 0, 0, 0])
    assert inter.kind == "TwoPairs"
    P = np.array(sorted(inter.points, key=lambda p: -p[1]))
    assert np.allclose(P, [[0.5, math.sqrt(3) / 2, 0, 0], [0.5, -math.sqrt(3) / 2, 0, 0]], atol=1e-12)
    v = np.array([math.sqrt(0.2), 0, math.sqrt(0.8), 0])
    assert fourd.sv_cylinder_intersection(v).kind == "None"
    v = np.array([0.3, 0.4, math.sqrt(0.75), 0])
    inter = fourd.sv_cylinder_intersection(v)
    assert inter.kind == "Pair" and np.allclose(inter.points[0], [0.6, 0.8, 0, 0])


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6))
def test_cylinder_points_geometry(seed):
    v = np.random.default_rng(seed).normal(size=4)
    v /= np.linalg.norm(v)
    inter = fourd.sv_cylinder_intersection(v)
    P = inter.all_points
    for p in P:
        assert abs(np.linalg.norm(p) - 1) <= 1e-12
        assert abs(abs(p @ v) - 0.5) <= 1e-12
    # antipodal closure
    for p in P:
        assert np.min(np.linalg.norm(P + p, axis=1)) <= 1e-15


def test_pairs_merge_at_the_boundary():
    dists = []
    for eps in 10.0 ** -np.arange(1, 9):
        r = math.sqrt(0.25 + eps)
        v = np.array([r, 0, math.sqrt(1 - r * r), 0])
        a, b = fourd.sv_cylinder_intersection(v).points
        dists.append(np.linalg.norm(a - b))
    assert all(y < x for x, y in zip(dists, dists[1:]))
    assert dists[-1] < 1e-3


def test_sv_sample_on_probe():
    v = np.random.default_rng(1).normal(size=4)
    v /= np.linalg.norm(v)
    S = fourd.sv_sample(v, 50)
    assert np.allclose(np.linalg.norm(S, axis=1), 1)
    assert np.allclose(np.abs(S @ v), 0.5)


@pytest.fixture(scope="module")
def cloud():
    return fourd.build_4d_witness_cloud(20, seed=0)


def test_cloud_points(cloud):
    P = cloud.points.vertices
    assert np.all(P[:, 0] ** 2 + P[:, 1] ** 2 <= 1 + 1e-9)
    on_c = P[P[:, 0] ** 2 + P[:, 1] ** 2 >= 1 - 1e-12]
    assert len(on_c) > 0
    for p in on_c:
        assert fourd.a_p(p[:2]).contains(p[2:], 1e-9)
    with pytest.raises(BudgetExceeded):
        fourd.build_4d_witness_cloud(200, budget=10_000)


def test_cloud_holds_translates_of_fresh_probes(cloud):
    rng = np.random.default_rng(5)
    for v in rng.normal(size=(50, 4)):
        v /= np.linalg.norm(v)
        t = fourd.witness_translates(v)[0]
        S = fourd.sv_sample(v, 6) + np.array([0, 0, t[0], t[1]])
        assert all(cloud.contains(x) for x in S)


def test_obstruction_constant_path_is_vacuous():
    t = np.linspace(0, 1, 20)
    G = np.tile([1.0, 0, 0, 0], (20, 1))
    rep = fourd.verify_4d_obstruction(None, {"t": t, "gamma": G, "delta": np.zeros((20, 4))})
    assert rep["vacuous"] and not rep["continuity_violated"]


def test_obstruction_on_random_paths():
    rng = np.random.default_rng(11)
    for _ in range(20):
        rep = fourd.verify_4d_obstruction(None, fourd.random_path_attempt(rng))
        assert not rep["vacuous"]
        assert rep["forced_jump"] >= fourd.OBSTRUCTION - 1e-3
        assert rep["continuity_violated"] and rep["rule_matches"]
        assert rep["max_early_motion"] < fourd.OBSTRUCTION


def test_obstruction_adversarial_jump():
    t = np.concatenate([[0.0, 1e-9], np.linspace(2e-9, 1, 50)])
    G = np.stack([np.ones_like(t), 0.3 * t, np.zeros_like(t), 0.1 * t], 1)
    D = np.zeros((len(t), 4))
    D[:, 2:] = [0.0, 0.5]
    D[0, 2:] = [0.02, 0.5]
    rep = fourd.verify_4d_obstruction(None, {"t": t, "gamma": G, "delta": D})
    assert rep["rule_set"] == "T1" and rep["delta_consistent"]
    assert rep["forced_jump"] == pytest.approx(0.02)
    assert rep["discontinuity_flagged"] and rep["path_jump"] == pytest.approx(0.02)


def test_obstruction_regime_errors():
    t = np.linspace(0, 1, 5)
    G = np.stack([np.ones(5), t, np.zeros(5), np.zeros(5)], 1)
    with pytest.raises(OutOfRegime):
        fourd.verify_4d_obstruction(None, {"t": t, "gamma": G, "delta": np.zeros((5, 4))})
    G = np.tile([0.99, 0.1, 0, 0], (5, 1))
    with pytest.raises(OutOfRegime):
        fourd.verify_4d_obstruction(None, {"t": t, "gamma": G, "delta": np.zeros((5, 4))})
