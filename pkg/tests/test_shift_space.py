from fractions import Fraction as F

import numpy as np
import pytest

from graphchaos import corpus
from graphchaos.chaos_stats import DC1, NONE, ChaosParams, classify_pair
from graphchaos.entropy_horseshoe import HorseshoeCertificate, covering_branch, verify_certificate
from graphchaos.metric_graph import Arc, InputError
from graphchaos.shift_space import (BlockSchedule, DecodedSystem, ShiftSystem, build_scrambled_family,
                                    constant_word, decoded_invariance, itinerary_decode, parse_word, same_sequence,
                                    shift, shift_distance, verify_family_dc1)


def word(prefix_len_zeros):
    return parse_word("0" * prefix_len_zeros + "1(0)*")


def test_distance_of_constant_words():
    assert shift_distance(constant_word(0), constant_word(1)) == 1


@pytest.mark.parametrize("m", [1, 2, 5, 30])
def test_distance_first_disagreement(m):
    assert shift_distance(word(m), constant_word(0)) == 2.0 ** -m


def test_distance_beyond_precision_is_zero():
    assert shift_distance(word(70), constant_word(0), precision=64) == 0
    with pytest.raises(InputError):
        shift_distance(word(1), word(1), precision=0)


def test_parse_word_prefix_and_block():
    w = parse_word("01(001)*")
    assert w.prefix(11).tolist() == [0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1]
    assert shift(shift(w)).prefix(3).tolist() == [0, 0, 1]


@pytest.mark.parametrize("bad", ["01", "0(1)", "02(1)*", "(0)*1", ""])
def test_parse_word_rejects(bad):
    with pytest.raises(InputError):
        parse_word(bad)


def test_same_sequence_is_exact_for_periodic_words():
    assert same_sequence(shift(parse_word("(01)*")), parse_word("(10)*"))
    assert same_sequence(parse_word("0(10)*"), parse_word("(01)*"))
    assert not same_sequence(parse_word("(01)*"), parse_word("(10)*"))


def test_alternating_pair_is_not_dc1():
    c = classify_pair(ShiftSystem(), parse_word("(01)*"), parse_word("(10)*"), ChaosParams(n_max=2000))
    assert c.kind == NONE  # distance is 1 at every step


def test_eventually_equal_words_not_scrambled():
    # the estimator window starts at n_max / 1000, so the transient must be shorter than that
    c = classify_pair(ShiftSystem(), parse_word("1101(0)*"), constant_word(0), ChaosParams(n_max=100_000))
    assert c.kind == NONE and not c.li_yorke


def test_family_needs_two_generators():
    with pytest.raises(InputError):
        build_scrambled_family(1)
    with pytest.raises(InputError):
        build_scrambled_family(3, J=4)
    # exhaustive search: no two phase assignments separate all 15 members
    with pytest.raises(InputError):
        build_scrambled_family(5, J=2)


def test_block_schedule_growth():
    blocks = BlockSchedule().blocks(100_000)
    assert blocks[0] == (0, 120, "chaos_a")
    for (s0, l0, _), (s1, l1, _) in zip(blocks, blocks[1:]):
        assert s1 == s0 + l0
        assert l1 == 24 * s1
    assert [b[2] for b in blocks[:4]] == ["chaos_a", "sync", "chaos_b", "sync"]


def test_generators_agree_on_sync_blocks():
    fam = build_scrambled_family(3, J=2)
    start, length, kind = BlockSchedule().blocks(10_000)[1]
    assert kind == "sync"
    for s in fam.sample:
        assert not s.prefix(start + length)[start + 64:start + length - fam.J].any()


def test_prefix_is_deterministic_across_request_order():
    a = build_scrambled_family(3).generators[1]
    b = build_scrambled_family(3).generators[1]
    late = a.segment(5000, 6000)
    b.segment(0, 10)
    assert np.array_equal(late, b.segment(5000, 6000))
    assert np.array_equal(a.segment(0, 7000)[5000:6000], late)


def test_small_family_is_uniform_dc1():
    fam = build_scrambled_family(2)
    # k=2 shares the chaos-A phase, so separation needs the chaos-B block to dominate
    rep = verify_family_dc1(fam, n_max=100_000)
    assert rep.dc1_scrambled and rep.uniform_epsilon == 0.5 and rep.invariant
    with pytest.raises(InputError):
        verify_family_dc1(fam, n_max=1000)


def test_family_closure_accepts_further_shifts():
    fam = build_scrambled_family(2, J=1)
    last = fam.sample[-1]
    assert fam.closure_hint(last, shift(last))
    assert not fam.closure_hint(last, parse_word("(0)*"))


# -- decoding ------------------------------------------------------------------
def slope3_certificate():
    m = corpus.slope3()
    U, V = Arc("I", F(0), F(1, 3)), Arc("I", F(2, 3), F(1))
    arcs = (U, V)
    br = {(a, b): covering_branch(m, arcs[a], arcs[b], 1) for a in (0, 1) for b in (0, 1)}
    return m, HorseshoeCertificate(1, U, V, m.iterated_image(U, 1), m.iterated_image(V, 1), br)


def test_depth_one_decodes_to_the_arcs():
    m, cert = slope3_certificate()
    assert verify_certificate(m, cert)
    assert itinerary_decode(m, cert, [0], 1)[0] == cert.U
    assert itinerary_decode(m, cert, [1, 0], 1)[0] == cert.V


def test_all_ones_decodes_to_right_end():
    m, cert = slope3_certificate()
    arc, mid = itinerary_decode(m, cert, constant_word(1), 20)
    assert arc.hi == 1 and arc.length == F(1, 3) ** 20
    assert abs(float(mid.offset) - 1) < 1e-9


def test_tent_zero_word_decodes_near_zero(tent, tent_cert):
    _, mid = itinerary_decode(tent, tent_cert, constant_word(0), 30)
    assert float(mid.offset) < 1e-9


def test_decode_preconditions(tent, tent_cert):
    with pytest.raises(InputError):
        itinerary_decode(tent, tent_cert, constant_word(0), 0)
    with pytest.raises(InputError):
        itinerary_decode(tent, tent_cert, [0, 1], 3)


def test_decoded_arrays_match_exact_decoding(tent, tent_cert):
    sys = DecodedSystem(tent, tent_cert, depth=25)
    w = build_scrambled_family(2).sample[1]
    _, offs = sys.decoded_arrays(w, 6)
    exact = [float(itinerary_decode(tent, tent_cert, w.shifted(i), 25)[1].offset) for i in range(6)]
    assert np.allclose(offs, exact, atol=1e-12)


def test_decoded_sample_is_invariant(tent, tent_cert):
    fam = build_scrambled_family(3, J=1)
    assert all(decoded_invariance(tent, tent_cert, w, 30) for w in fam.sample)


def test_decoded_pair_is_dc1(tent, tent_cert):
    sys = DecodedSystem(tent, tent_cert)
    u, v = build_scrambled_family(2).sample
    c = classify_pair(sys, u, v, ChaosParams(n_max=100_000))
    assert c.kind == DC1
