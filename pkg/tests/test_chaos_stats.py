import math
from fractions import Fraction as F

import numpy as np
import pytest

from graphchaos import corpus
from graphchaos.chaos_stats import (DC1, DC2, DC3, LI_YORKE, NONE, ChaosParams, GraphSystem, classify_pair,
                                    classify_statistics, distributional_functions, is_li_yorke_pair,
                                    statistics_from_distances, verify_scrambled_set, xi)
from graphchaos.metric_graph import GraphPoint, InputError
from graphchaos.shift_space import FunctionSource, ShiftSystem, SymbolSequence, constant_word, parse_word

ZERO, TWO_THIRDS = GraphPoint("I", F(0)), GraphPoint("I", F(2, 3))


def brute_xi(m, x, y, n, t):
    """Oracle: walk both exact orbits and count distances below t."""
    count = 0
    for _ in range(n):
        if m.graph.distance(x, y) < t:
            count += 1
        x, y = m.evaluate(x), m.evaluate(y)
    return count


def factorial_blocks():
    # alternating 0/1 blocks of lengths 1!, 2!, 3!, ...
    ends = np.cumsum([math.factorial(k) for k in range(1, 12)])
    return SymbolSequence(FunctionSource(lambda i: np.searchsorted(ends, i, side="right") % 2, "fact"))


def test_xi_identical_points(tent_system):
    x = GraphPoint("I", F(1, 7))
    assert xi(tent_system, x, x, 50, 1e-9) == 50


@pytest.mark.parametrize("t,expected", [(0.5, 0), (0.7, 40)])
def test_xi_tent_fixed_points(tent_system, t, expected):
    assert xi(tent_system, ZERO, TWO_THIRDS, 40, t) == expected


def test_xi_shift_alternating_pair():
    m = 25
    assert xi(ShiftSystem(), constant_word(0), parse_word("(01)*"), 2 * m, 0.6) == m


@pytest.mark.parametrize("x,y", [(F(1, 7), F(2, 9)), (F(3, 11), F(5, 13)), (F(1, 5), F(4, 5))])
@pytest.mark.parametrize("t", [0.01, 0.1, 0.4])
def test_xi_matches_exact_orbit_oracle(tent_system, tent, x, y, t):
    px, py = GraphPoint("I", x), GraphPoint("I", y)
    assert xi(tent_system, px, py, 60, t) == brute_xi(tent, px, py, 60, t)


def test_xi_strict_inequality(tent_system):
    # distance is exactly 2/3 at every step
    assert xi(tent_system, ZERO, TWO_THIRDS, 10, 2 / 3) == 0


def test_xi_bad_arguments(tent_system):
    with pytest.raises(InputError):
        xi(tent_system, ZERO, ZERO, 0, 0.1)
    with pytest.raises(InputError):
        xi(tent_system, ZERO, ZERO, 5, 0)


def test_step_profile_for_fixed_points(tent_system):
    grid = [0.1, 0.5, 0.66, 0.67, 0.9]
    st = distributional_functions(tent_system, ZERO, TWO_THIRDS, 1000, grid)
    assert st.f_upper_est.tolist() == [0, 0, 0, 1, 1]
    assert st.f_lower_est.tolist() == [0, 0, 0, 1, 1]


def test_identical_points_profile_is_one(tent_system):
    x = GraphPoint("I", F(2, 7))
    st = distributional_functions(tent_system, x, x, 500)
    assert np.all(st.f_upper_est == 1) and np.all(st.f_lower_est == 1)


def test_distributional_preconditions(tent_system):
    with pytest.raises(InputError):
        distributional_functions(tent_system, ZERO, TWO_THIRDS, 50)
    with pytest.raises(InputError):
        distributional_functions(tent_system, ZERO, TWO_THIRDS, 500, [0.5, 0.1])


def test_li_yorke_examples(tent_system):
    assert not is_li_yorke_pair(tent_system, ZERO, TWO_THIRDS, 1000)
    assert not is_li_yorke_pair(tent_system, ZERO, ZERO, 1000)
    assert is_li_yorke_pair(ShiftSystem(), constant_word(0), factorial_blocks(), 40_000)
    with pytest.raises(InputError):
        is_li_yorke_pair(tent_system, ZERO, TWO_THIRDS, 1000, 0.5, 0.1)


def test_classify_fixed_points_none(tent_system):
    assert classify_pair(tent_system, ZERO, TWO_THIRDS, ChaosParams(n_max=2000)).kind == NONE


def test_classify_rotation_pair_none():
    m = corpus.rotation()
    x = GraphPoint("S", F(1, 10))
    y = m.evaluate(x)
    c = classify_pair(GraphSystem(m), x, y, ChaosParams(n_max=5000))
    assert c.kind == NONE and not c.li_yorke


def test_classify_same_point_is_error(tent_system):
    with pytest.raises(InputError):
        classify_pair(tent_system, ZERO, GraphPoint("I", F(0)))


def test_classification_on_synthetic_distances():
    n = 20_000
    grid = np.array([0.01, 0.1, 0.5, 1.0])
    # together for the first 10% of time, then apart: lower drops to 0.1, upper stays 1
    d = np.where(np.arange(n) < n // 10, 0.0, 2.0)
    assert classify_statistics(statistics_from_distances(d, grid, 20)).kind == DC2
    # the same at moderate distance: the small scales never see the pair close
    d = np.where(np.arange(n) < n // 10, 0.2, 2.0)
    c = classify_statistics(statistics_from_distances(d, grid, 20))
    assert c.kind == DC3 and c.gap_interval == (0.5, 1.0)
    assert classify_statistics(statistics_from_distances(np.zeros(n), grid, 20)).kind == NONE


def test_dc1_implies_weaker_flags():
    n = 20_000
    grid = np.array([0.01, 0.1, 0.5, 1.0])
    d = np.zeros(n)
    d[100:2000] = 2.0  # far for 95% of [0, 2000), then close forever
    st = statistics_from_distances(d, grid, 20)
    c = classify_statistics(st)
    assert c.kind == DC1 and c.at_least(DC2) and c.at_least(DC3) and c.at_least(LI_YORKE)
    assert np.all(st.f_upper_est >= 0.95)
    assert np.any(st.f_upper_est - st.f_lower_est > 0.05)


def test_scrambled_report_for_fixed_points(tent_system):
    rep = verify_scrambled_set(tent_system, [ZERO, TWO_THIRDS], params=ChaosParams(n_max=1000))
    assert [c.kind for c in rep.classes.values()] == [NONE]
    assert rep.invariant and not rep.scrambled and not rep.uniform


def test_scrambled_needs_two_points(tent_system):
    with pytest.raises(InputError):
        verify_scrambled_set(tent_system, [ZERO])


def test_non_invariant_sample_detected(tent_system):
    rep = verify_scrambled_set(tent_system, [ZERO, GraphPoint("I", F(1, 8))], params=ChaosParams(n_max=200))
    assert not rep.invariant


def test_csv_columns(tent_system):
    st = distributional_functions(tent_system, ZERO, TWO_THIRDS, 1000, [0.5, 0.7])
    head, *rows = st.to_csv(sample_ns=[10, 1000]).strip().splitlines()
    assert head == "t,xi_over_n@10,xi_over_n@1000,f_lower,f_upper"
    assert rows[1].split(",") == ["0.7", "1.000000", "1.000000", "1.000000", "1.000000"]
