import math
from fractions import Fraction as F

import numpy as np
import pytest

from graphchaos import corpus
from graphchaos.entropy_horseshoe import (HorseshoeCertificate, covering_branch, detect_horseshoe, entropy_positive,
                                          separated_entropy, spectral_entropy_oracle, spectral_radius,
                                          verify_certificate)
from graphchaos.metric_graph import Arc

LOG2, LOG3 = math.log(2), math.log(3)


def eig_oracle(m):
    """Independent: largest eigenvalue modulus by dense LAPACK."""
    A = m.markov_data().transition_matrix
    return math.log(max(1.0, max(abs(np.linalg.eigvals(A.astype(float))))))


def hand_certificate(m, n, U, V):
    arcs = (U, V)
    branches = {(a, b): covering_branch(m, arcs[a], arcs[b], n) for a in (0, 1) for b in (0, 1)}
    return HorseshoeCertificate(n, U, V, m.iterated_image(U, n), m.iterated_image(V, n), branches)


@pytest.mark.parametrize("name,expected", [
    ("tent", LOG2), ("slope3", LOG3), ("doubling", LOG2), ("identity", 0.0), ("rotation", 0.0),
    ("contraction", 0.0), ("star_permutation", 0.0), ("star_tent", LOG2),
])
def test_oracle_values(maps, name, expected):
    assert spectral_entropy_oracle(maps[name]) == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("name", ["tent", "slope3", "doubling", "identity", "star_tent", "star_permutation"])
def test_oracle_agrees_with_eigvals(maps, name):
    assert spectral_entropy_oracle(maps[name]) == pytest.approx(eig_oracle(maps[name]), abs=1e-9)


def test_spectral_radius_reducible_and_nilpotent():
    assert spectral_radius([[0, 1], [0, 0]]) == 0
    assert spectral_radius([[2, 5], [0, 3]]) == pytest.approx(3)
    # period-2 block: plain power iteration would oscillate
    assert spectral_radius([[0, 4], [1, 0]]) == pytest.approx(2)


def test_separated_identity_has_no_growth():
    est = separated_entropy(corpus.identity(), (6, 12), (1e-2,))
    assert est.h_est == 0
    assert est.s[(6, 1e-2)] == est.s[(12, 1e-2)]


def test_separated_monotone_in_eps():
    est = separated_entropy(corpus.tent(), (6, 10), (1e-3, 1e-2, 1e-1))
    for n in (6, 10):
        assert est.s[(n, 1e-3)] >= est.s[(n, 1e-2)] >= est.s[(n, 1e-1)]


def test_separated_preconditions():
    with pytest.raises(ValueError):
        separated_entropy(corpus.tent(), (), (1e-3,))
    with pytest.raises(ValueError):
        separated_entropy(corpus.tent(), (6,), (1e-3,), sample_density=5)


def test_entropy_csv_header():
    est = separated_entropy(corpus.identity(), (4, 8), (1e-2,))
    head, first, _ = est.to_csv().strip().splitlines()
    assert head == "n,eps,s_n,log s_n / n"
    assert first.startswith("4,0.01,")


def test_slope3_certificate_at_first_iterate():
    m = corpus.slope3()
    cert = detect_horseshoe(m, 1)
    assert cert is not None and cert.n == 1 and verify_certificate(m, cert)


def test_slope3_outer_thirds():
    m = corpus.slope3()
    assert verify_certificate(m, hand_certificate(m, 1, Arc("I", F(0), F(1, 3)), Arc("I", F(2, 3), F(1))))


@pytest.mark.parametrize("delta", [F(1, 64), F(1, 32)])
def test_slope3_symmetric_shrink_is_not_a_horseshoe(delta):
    # f(U) = [0, 1 - 3 delta] misses the right end of V
    m = corpus.slope3()
    U, V = Arc("I", F(0), F(1, 3) - delta), Arc("I", F(2, 3) + delta, F(1))
    assert list(m.iterated_image(U, 1).items()) == [("I", 0, 1 - 3 * delta)]
    assert not verify_certificate(m, hand_certificate(m, 1, U, V))


def test_tent_quarter_pair_verifies_at_second_iterate(tent):
    cert = hand_certificate(tent, 2, Arc("I", F(0), F(1, 4)), Arc("I", F(1, 2), F(3, 4)))
    assert verify_certificate(tent, cert)
    assert list(cert.image_U.items()) == [("I", 0, 1)] == list(cert.image_V.items())


def test_tent_search_certificate(tent, tent_cert):
    assert tent_cert.n == 2 and verify_certificate(tent, tent_cert)
    assert tent.graph.arcs_disjoint(tent_cert.U, tent_cert.V)


def test_tent_has_no_first_iterate_horseshoe(tent):
    # f(U), f(V) would both need to cover both halves: only the shared fold point allows it
    assert detect_horseshoe(tent, 1) is None


def test_verify_rejects_bad_certificates(tent):
    overlap = hand_certificate(tent, 2, Arc("I", F(0), F(1, 2)), Arc("I", F(1, 2), F(1)))
    assert not verify_certificate(tent, overlap)
    short = HorseshoeCertificate(1, Arc("I", F(0), F(1, 4)), Arc("I", F(1, 2), F(3, 4)), None, None)
    assert not verify_certificate(tent, short)


@pytest.mark.parametrize("name", ["identity", "rotation", "contraction", "star_permutation"])
def test_zero_entropy_maps_have_no_horseshoe(maps, name):
    assert detect_horseshoe(maps[name], 4) is None


def test_entropy_positive_examples(maps):
    ev = entropy_positive(maps["tent"], with_separated=False)
    assert ev.positive and ev.certificate.n == 2 and ev.oracle == pytest.approx(LOG2)
    assert not entropy_positive(maps["identity"], with_separated=False).positive
    ev = entropy_positive(maps["doubling"], with_separated=False)
    assert ev.positive and ev.oracle_method == "spectral"


@pytest.mark.parametrize("name", ["tent", "slope3", "doubling", "star_tent"])
def test_horseshoe_implies_entropy(maps, name):
    m = maps[name]
    cert = detect_horseshoe(m, 6)
    assert verify_certificate(m, cert)
    assert spectral_entropy_oracle(m) >= LOG2 / cert.n - 0.1
