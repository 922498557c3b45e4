from fractions import Fraction as F

import numpy as np
import pytest

from graphchaos import corpus
from graphchaos.graph_map import ContinuityError, PLGraphMap, evaluate, image_of_arc, iterate, markov_data, pieces_from_table
from graphchaos.metric_graph import Arc, GraphPoint, InputError, interval, star


def P(e, t):
    return GraphPoint(e, F(t))


def test_evaluate_examples():
    assert evaluate(corpus.tent(), P("I", "1/4")) == P("I", "1/2")
    assert evaluate(corpus.identity(), P("I", "3/7")) == P("I", "3/7")
    assert evaluate(corpus.doubling(), P("S", "0.7")) == P("S", "0.4")


def test_iterate_examples():
    orbit = iterate(corpus.tent(), P("I", "0.4"), 4)
    assert [p.offset for p in orbit] == [F(2, 5), F(4, 5), F(2, 5), F(4, 5), F(2, 5)]
    assert [p.offset for p in iterate(corpus.doubling(), P("S", "1/3"), 2)] == [F(1, 3), F(2, 3), F(1, 3)]
    assert set(iterate(corpus.identity(), P("I", "1/9"), 5)) == {P("I", "1/9")}


def test_iterate_needs_positive_n():
    with pytest.raises(InputError):
        iterate(corpus.tent(), P("I", 0), 0)


def test_float_orbit_matches_exact_orbit_early():
    m = corpus.slope3()
    exact = iterate(m, P("I", "1/7"), 10)
    approx = iterate(m, GraphPoint("I", 1 / 7), 10)
    assert max(abs(float(a.offset) - b.offset) for a, b in zip(exact, approx)) < 1e-6


def test_image_of_arc_examples():
    tent = corpus.tent()
    img = image_of_arc(tent, Arc("I", F(0), F(1, 2)))
    assert list(img.items()) == [("I", 0, 1)]
    img = image_of_arc(tent, Arc("I", F(1, 4), F(3, 4)))
    assert list(img.items()) == [("I", F(1, 2), 1)]
    assert img.multiplicity == 2
    img = image_of_arc(corpus.identity(), Arc("I", F(1, 5), F(3, 10)))
    assert list(img.items()) == [("I", F(1, 5), F(3, 10))]


def test_image_crossing_branches_on_star():
    m = corpus.star_tent()
    img = image_of_arc(m, Arc("A", F(1, 4), F(3, 4)))
    assert list(img.items()) == [("B", F(1, 2), 1)]


def test_markov_matrices():
    md = markov_data(corpus.tent())
    assert [(c.lo, c.hi) for c in md.partition] == [(0, F(1, 2)), (F(1, 2), 1)]
    assert md.transition_matrix.tolist() == [[1, 1], [1, 1]]
    assert markov_data(corpus.identity()).transition_matrix.tolist() == [[1]]
    md = markov_data(corpus.slope3())
    assert md.transition_matrix.tolist() == np.ones((3, 3), dtype=int).tolist()


def test_contraction_is_not_markov():
    assert markov_data(corpus.halving()) is None


def test_row_sums_match_image_lengths_on_uniform_cells():
    # constant |slope| L: f(cell) has length L * width, so it covers L cells
    for m in (corpus.tent(), corpus.slope3(), corpus.doubling()):
        md = markov_data(m)
        width = md.partition[0].length
        assert all(c.length == width for c in md.partition)
        assert all(row.sum() == m.lipschitz for row in md.transition_matrix)


def test_discontinuity_rejected_with_breakpoint():
    with pytest.raises(ContinuityError) as exc:
        PLGraphMap(interval(), pieces_from_table([("I", 0, F(1, 2), "I", 0, 1), ("I", F(1, 2), 1, "I", F(3, 4), 0)]))
    assert exc.value.edge == "I" and exc.value.offset == F(1, 2)


def test_vertex_continuity_on_star():
    rows = [("A", 0, 1, "A", 0, 1), ("B", 0, 1, "B", 0, 1), ("C", 0, 1, "C", F(1, 2), 1)]
    with pytest.raises(ContinuityError):
        PLGraphMap(star(), pieces_from_table(rows))


def test_piece_image_must_stay_in_edge():
    with pytest.raises(ContinuityError):
        PLGraphMap(interval(), pieces_from_table([("I", 0, 1, "I", 0, 2)]))


def test_constant_piece_is_allowed_and_flagged():
    m = PLGraphMap(interval(), pieces_from_table([("I", 0, F(1, 2), "I", 0, 1), ("I", F(1, 2), 1, "I", 1, 1)]))
    assert m.has_constant_pieces
    assert evaluate(m, P("I", "0.9")) == P("I", 1)


def test_refined_markov_is_finer_and_consistent():
    m = corpus.tent()
    coarse, fine = m.markov_data(), m.refined_markov(3, resolution=0.0)
    assert len(fine.partition) > len(coarse.partition)
    for i, c in enumerate(fine.partition):
        img = m.image_of_arc(c)
        for j, d in enumerate(fine.partition):
            assert (fine.transition_matrix[i, j] >= 1) == img.covers(d)
