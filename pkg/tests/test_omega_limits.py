import math
from fractions import Fraction as F

import pytest

from graphchaos import corpus
from graphchaos.graph_map import ArcUnion
from graphchaos.metric_graph import Arc, GraphPoint, InputError
from graphchaos.omega_limits import (BASIC, CYCLE, SINGULAR, OmegaParams, UnsupportedInput, basic_set_property_check,
                                     classify_maximal_omega, compute_B_set, compute_P_omega, cycle_plus_witness,
                                     omega_limit_approx, periodic_points_in, seed_points)

WHOLE = ArcUnion.from_intervals([("I", F(0), F(1))])
CIRCLE = ArcUnion.from_intervals([("S", F(0), F(1))])


@pytest.fixture(scope="module")
def classes(maps):
    params = OmegaParams()
    return {name: classify_maximal_omega(m, seed_points(m, 1)[0], params) for name, m in maps.items()}


def test_fixed_point_net(tent):
    om = omega_limit_approx(tent, GraphPoint("I", F(0)))
    assert om.net == (GraphPoint("I", F(0)),) and om.period == 1


def test_period_two_net(tent):
    om = omega_limit_approx(tent, GraphPoint("I", F(2, 5)))
    assert om.net == (GraphPoint("I", F(2, 5)), GraphPoint("I", F(4, 5)))


def test_rotation_net_covers_circle(maps):
    m = maps["rotation"]
    om = omega_limit_approx(m, GraphPoint("S", F(1, 7)), eps=0.01)
    offs = sorted(float(p.offset) for p in om.net)
    gaps = [b - a for a, b in zip(offs, offs[1:])] + [1 - offs[-1] + offs[0]]
    assert max(gaps) <= 0.02  # every point of the circle is within eps of the net
    assert min(gaps) >= 0.005  # eps/2-separated


def test_sample_length_precondition(tent):
    with pytest.raises(InputError):
        omega_limit_approx(tent, GraphPoint("I", F(1, 3)), n_transient=1000, n_sample=5000)


def test_tent_periodic_points(tent):
    pts = periodic_points_in(tent, Arc("I", F(0), F(1)), 2)
    assert [(p.period, p.point.offset) for p in pts] == [(1, 0), (1, F(2, 3)), (2, F(2, 5)), (2, F(4, 5))]


def test_identity_interval_of_fixed_points(maps):
    pts = periodic_points_in(maps["identity"], Arc("I", F(1, 5), F(3, 10)), 1)
    assert len(pts) == 1 and pts[0].interval == Arc("I", F(1, 5), F(3, 10))


def test_period_max_precondition(tent):
    with pytest.raises(InputError):
        periodic_points_in(tent, Arc("I", F(0), F(1)), 0)


@pytest.mark.parametrize("name,kind", [
    ("tent", BASIC), ("slope3", BASIC), ("doubling", BASIC), ("star_tent", BASIC),
    ("identity", CYCLE), ("contraction", CYCLE), ("star_permutation", CYCLE), ("rotation", SINGULAR),
])
def test_classification(classes, name, kind):
    assert classes[name].kind == kind


def test_tent_p_omega_is_whole_interval(classes):
    P = classes["tent"].p_omega
    assert P.triples() == [("I", "0", "1")]
    assert P.components == 1 and P.invariant
    assert P.witness.point == GraphPoint("I", F(0))


def test_doubling_p_omega_is_circle(classes):
    P = classes["doubling"].p_omega
    assert P.arcs == CIRCLE and P.witness is not None


def test_rotation_p_omega_has_no_witness(classes):
    P = classes["rotation"].p_omega
    assert P.arcs.measure() == 1 and P.components == 1 and P.witness is None


def test_star_tent_has_three_portions(classes):
    assert classes["star_tent"].p_omega.components == 1
    assert classes["star_tent"].p_omega.arcs.measure() == 3


def test_p_omega_is_forward_invariant(maps, classes):
    for name in ("tent", "slope3", "doubling", "star_tent"):
        P = classes[name].p_omega
        img = maps[name].image_of_union(P.arcs)
        assert all(P.arcs.covers(a) for a in img.arcs())


@pytest.mark.parametrize("name", ["tent", "rotation", "slope3"])
def test_classification_stable_under_deeper_refinement(maps, classes, name):
    m = maps[name]
    deeper = classify_maximal_omega(m, seed_points(m, 1)[0], OmegaParams(refinement_depth=7))
    assert deeper.kind == classes[name].kind


def test_p_omega_needs_markov(maps):
    om = omega_limit_approx(maps["contraction"], GraphPoint("I", F(1, 3)))
    with pytest.raises(UnsupportedInput):
        compute_P_omega(maps["contraction"], om)


@pytest.mark.parametrize("name,M,expected", [
    ("tent", WHOLE, 1), ("identity", WHOLE, 0), ("doubling", CIRCLE, 1), ("rotation", CIRCLE, 0),
    ("slope3", WHOLE, 1),
])
def test_b_set_measure(maps, name, M, expected):
    B = compute_B_set(maps[name], M)
    assert B.measure == expected and B.infinite == (expected > 0)


def test_b_set_rejects_non_invariant_m(tent):
    with pytest.raises(InputError):
        compute_B_set(tent, ArcUnion.from_intervals([("I", F(0), F(1, 2))]))


def test_b_set_empty_m(tent):
    assert not compute_B_set(tent, ArcUnion()).infinite


def test_basic_properties_tent(tent, classes):
    rep = basic_set_property_check(tent, classes["tent"])
    assert all(rep[k]["pass"] for k in ("perfect", "entropy_bound", "periodic_dense", "horseshoe", "eventual_cover"))
    assert rep["entropy_bound"]["bound"] == pytest.approx(math.log(2) / 2)
    assert rep["eventual_cover"]["N"] <= 2


def test_basic_properties_doubling(maps, classes):
    rep = basic_set_property_check(maps["doubling"], classes["doubling"])
    assert rep["perfect"]["pass"] and rep["periodic_dense"]["pass"] and rep["horseshoe"]["pass"]


def test_basic_properties_need_basic(maps, classes):
    with pytest.raises(InputError):
        basic_set_property_check(maps["identity"], classes["identity"])


def test_cycle_plus_witness(maps):
    w = cycle_plus_witness(maps["tent"])
    assert w is not None and w["far_distance"] >= 0.02
    assert cycle_plus_witness(maps["identity"]) is None
    assert cycle_plus_witness(maps["rotation"]) is None


def test_seed_points_are_deterministic_rationals(maps):
    for m in maps.values():
        a, b = seed_points(m, 6), seed_points(m, 6)
        assert a == b
        for p in a:
            assert isinstance(p.offset, F) and 0 < p.offset < m.graph.edge(p.edge).length


def test_report_dict_shape(classes):
    d = classes["tent"].as_dict()
    assert d["class"] == BASIC and d["p_omega"]["P_omega"] == [["I", "0", "1"]]
