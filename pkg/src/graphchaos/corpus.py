"""Built-in corpus of piecewise-linear graph maps with known entropy."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction as F

from .graph_map import PLGraphMap, pieces_from_table
from .metric_graph import circle, interval, star

ROTATION_NUMBER = F(377, 610)


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    map: PLGraphMap
    expected: dict = field(default_factory=dict)
    provenance: str = ""
    flags: tuple = ()


def tent() -> PLGraphMap:
    return PLGraphMap(interval(), pieces_from_table([
        ("I", 0, F(1, 2), "I", 0, 1),
        ("I", F(1, 2), 1, "I", 1, 0),
    ]), name="tent")


def slope3() -> PLGraphMap:
    return PLGraphMap(interval(), pieces_from_table([
        ("I", 0, F(1, 3), "I", 0, 1),
        ("I", F(1, 3), F(2, 3), "I", 1, 0),
        ("I", F(2, 3), 1, "I", 0, 1),
    ]), name="slope3")


def identity() -> PLGraphMap:
    return PLGraphMap(interval(), pieces_from_table([("I", 0, 1, "I", 0, 1)]), name="identity")


def halving() -> PLGraphMap:
    return PLGraphMap(interval(), pieces_from_table([("I", 0, 1, "I", 0, F(1, 2))]), name="contraction")


def doubling() -> PLGraphMap:
    return PLGraphMap(circle(), pieces_from_table([
        ("S", 0, F(1, 2), "S", 0, 1),
        ("S", F(1, 2), 1, "S", 0, 1),
    ]), name="doubling")


def rotation(alpha: F = ROTATION_NUMBER) -> PLGraphMap:
    cut = 1 - alpha
    return PLGraphMap(circle(), pieces_from_table([
        ("S", 0, cut, "S", alpha, 1),
        ("S", cut, 1, "S", 0, alpha),
    ]), name="rotation")


def star_tent() -> PLGraphMap:
    """Branch A -> B -> C -> A, each folded by the tent map (centre at offset 0)."""
    nxt = {"A": "B", "B": "C", "C": "A"}
    rows = []
    for b, c in nxt.items():
        rows += [(b, 0, F(1, 2), c, 0, 1), (b, F(1, 2), 1, c, 1, 0)]
    return PLGraphMap(star(), pieces_from_table(rows), name="star_tent")


def star_permutation() -> PLGraphMap:
    nxt = {"A": "B", "B": "C", "C": "A"}
    return PLGraphMap(star(), pieces_from_table([(b, 0, 1, c, 0, 1) for b, c in nxt.items()]),
                      name="star_permutation")


def builtin_corpus() -> list[CorpusEntry]:
    pos = dict(entropy_positive=True, has_horseshoe=True, has_dc_pair=True)
    zero = dict(entropy_positive=False, has_horseshoe=False, has_dc_pair=False)
    entries = [
        CorpusEntry("tent", tent(), pos, "full 2-branch fold, h = log 2"),
        CorpusEntry("slope3", slope3(), pos, "full 3-branch map, h = log 3"),
        CorpusEntry("doubling", doubling(), pos, "degree-2 circle covering, h = log 2"),
        CorpusEntry("rotation", rotation(), zero, "isometry, h = 0",
                    flags=("rational approximation 377/610 of the golden rotation: zero entropy",)),
        CorpusEntry("identity", identity(), zero, "isometry, h = 0"),
        CorpusEntry("contraction", halving(), zero, "x -> x/2, Lipschitz 1/2, h = 0"),
        CorpusEntry("star_tent", star_tent(), pos, "f^3 is the third tent iterate on every branch, h = log 2"),
        CorpusEntry("star_permutation", star_permutation(), zero, "branch permutation isometry, h = 0"),
    ]
    return sorted(entries, key=lambda e: e.name)


def corpus_by_name() -> dict[str, CorpusEntry]:
    return {e.name: e for e in builtin_corpus()}
