"""One-sided full 2-shift: lazily evaluated sequences, the shift metric, an
invariant uniformly DC1-scrambled family, and itinerary decoding through a
horseshoe certificate."""
from __future__ import annotations

import itertools
import math
import re
import threading
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .chaos_stats import ChaosParams, ScrambledSetReport, default_t_grid, verify_scrambled_set
from .entropy_horseshoe import HorseshoeCertificate
from .graph_map import PLGraphMap
from .metric_graph import Arc, GraphPoint, InputError


class SymbolSource:
    """Deterministic symbol stream; prefixes are memoized behind a lock."""

    name = "source"

    def __init__(self):
        self._lock = threading.Lock()
        self._cache = np.zeros(0, dtype=np.uint8)

    def _compute(self, start: int, stop: int) -> np.ndarray:
        raise NotImplementedError

    def segment(self, start: int, stop: int) -> np.ndarray:
        with self._lock:
            if stop > len(self._cache):
                size = max(stop, 2 * len(self._cache), 1024)
                self._cache = np.concatenate([self._cache, self._compute(len(self._cache), size)])
            return self._cache[start:stop]


class PeriodicSource(SymbolSource):
    def __init__(self, prefix: Sequence[int], block: Sequence[int]):
        super().__init__()
        if not block:
            raise InputError("periodic block must be nonempty")
        if any(s not in (0, 1) for s in (*prefix, *block)):
            raise InputError("symbols must be 0 or 1")
        self.prefix = tuple(prefix)
        self.block = tuple(block)
        self.name = "".join(map(str, self.prefix)) + "(" + "".join(map(str, self.block)) + ")*"

    def _compute(self, start, stop):
        idx = np.arange(start, stop)
        pre = np.asarray(self.prefix, dtype=np.uint8)
        blk = np.asarray(self.block, dtype=np.uint8)
        out = blk[np.maximum(idx - len(pre), 0) % len(blk)]
        head = idx < len(pre)
        out[head] = pre[idx[head]]
        return out


class FunctionSource(SymbolSource):
    """Symbols from a vectorized function of the index array."""

    def __init__(self, fn: Callable[[np.ndarray], np.ndarray], name: str):
        super().__init__()
        self.fn = fn
        self.name = name

    def _compute(self, start, stop):
        return np.asarray(self.fn(np.arange(start, stop)), dtype=np.uint8) & 1


@dataclass(frozen=True)
class SymbolSequence:
    source: SymbolSource
    offset: int = 0

    def prefix(self, n: int) -> np.ndarray:
        return self.source.segment(self.offset, self.offset + n)

    def __getitem__(self, i: int) -> int:
        return int(self.prefix(i + 1)[i])

    def shifted(self, k: int = 1) -> "SymbolSequence":
        return SymbolSequence(self.source, self.offset + k)

    @property
    def description(self) -> str:
        return f"{self.source.name}@{self.offset}"

    def __repr__(self):
        return f"SymbolSequence({self.description})"


def shift(s: SymbolSequence) -> SymbolSequence:
    return s.shifted(1)


def same_sequence(u: SymbolSequence, v: SymbolSequence) -> bool:
    """Exact equality for eventually periodic words, description equality otherwise."""
    if u.source is v.source and u.offset == v.offset:
        return True
    if isinstance(u.source, PeriodicSource) and isinstance(v.source, PeriodicSource):
        p1, p2 = len(u.source.block), len(v.source.block)
        n = max(len(u.source.prefix), len(v.source.prefix)) + p1 * p2 // math.gcd(p1, p2)
        return bool(np.array_equal(u.prefix(n), v.prefix(n)))
    return False


_WORD = re.compile(r"^([01]*)(?:\(([01]+)\)\*)?$")


def parse_word(text: str) -> SymbolSequence:
    """``01(001)*``: finite prefix followed by a repeated block."""
    m = _WORD.match(text.strip())
    if not m or m.group(2) is None:
        raise InputError(f"bad word pattern {text!r}; expected e.g. 01(001)*")
    return SymbolSequence(PeriodicSource([int(c) for c in m.group(1)], [int(c) for c in m.group(2)]))


def constant_word(symbol: int) -> SymbolSequence:
    return SymbolSequence(PeriodicSource((), (symbol,)))


def shift_distance(u: SymbolSequence, v: SymbolSequence, precision: int = 64) -> float:
    """2^-k for the first disagreement index k < precision, else 0."""
    if precision < 1:
        raise InputError("precision must be >= 1")
    diff = np.nonzero(u.prefix(precision) != v.prefix(precision))[0]
    return 2.0 ** -int(diff[0]) if diff.size else 0.0


def orbit_shift_distances(u: SymbolSequence, v: SymbolSequence, n: int, precision: int = 64) -> np.ndarray:
    """shift_distance(sigma^i u, sigma^i v) for i < n."""
    diff = np.nonzero(u.prefix(n + precision) != v.prefix(n + precision))[0]
    idx = np.arange(n)
    k = np.searchsorted(diff, idx)
    nxt = np.where(k < len(diff), diff[np.minimum(k, len(diff) - 1)] if len(diff) else 0, n + precision) - idx
    return np.where(nxt < precision, np.exp2(-nxt.astype(float)), 0.0)


class ShiftSystem:
    """The full shift as an orbit system for :mod:`graphchaos.chaos_stats`."""

    diameter = 1.0

    def __init__(self, precision: int = 64):
        self.precision = precision

    def step(self, s: SymbolSequence) -> SymbolSequence:
        return s.shifted(1)

    def same(self, u, v) -> bool:
        return same_sequence(u, v)

    def distance(self, u, v) -> float:
        return shift_distance(u, v, self.precision)

    def orbit_distances(self, u, v, n: int) -> np.ndarray:
        return orbit_shift_distances(u, v, n, self.precision)


# -- scrambled family -----------------------------------------------------------------------------
SYNC, CHAOS_A, CHAOS_B = "sync", "chaos_a", "chaos_b"
PATTERN = np.array([0, 0, 1, 1], dtype=np.uint8)


@dataclass(frozen=True)
class BlockSchedule:
    """Blocks cycle chaos_a, sync, chaos_b, sync, ...; block m has length
    growth * (total length of blocks 1..m-1), the first one ``first``."""

    first: int = 120
    growth: int = 24
    kinds: tuple[str, ...] = (CHAOS_A, SYNC, CHAOS_B, SYNC)

    def blocks(self, until: int) -> list[tuple[int, int, str]]:
        out, start, m = [], 0, 0
        while start < until:
            length = self.first if m == 0 else self.growth * start
            out.append((start, length, self.kinds[m % len(self.kinds)]))
            start += length
            m += 1
        return out


def _collisions(phases: Sequence[int], J: int) -> set:
    members = [(a, j) for a in range(len(phases)) for j in range(J + 1)]
    out = set()
    for (a, j), (b, jj) in itertools.combinations(members, 2):
        if (phases[a] + j - phases[b] - jj) % 4 == 0:
            out.add(((a, j), (b, jj)))
    return out


def _choose_phases(k: int, J: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Pattern phases for the two chaos-block kinds such that no pair of sample
    members reads the same 2-block in both kinds."""
    if J > 3:
        raise InputError("J <= 3 required (pattern period 4)")
    for pa in itertools.product(range(4), repeat=k - 1):
        pa = (0, *pa)
        ca = _collisions(pa, J)
        for pb in itertools.product(range(4), repeat=k - 1):
            pb = (0, *pb)
            if not ca & _collisions(pb, J):
                return pa, pb
    raise InputError(f"no phase assignment separates all pairs for k={k}, J={J}")


class FamilyGenerator(SymbolSource):
    def __init__(self, family: "ScrambledFamily", index: int):
        super().__init__()
        self.family = family
        self.index = index
        self.name = f"g{index}"

    def _compute(self, start, stop):
        fam = self.family
        blocks = fam.schedule.blocks(stop)
        starts = np.array([b[0] for b in blocks])
        idx = np.arange(start, stop)
        which = np.searchsorted(starts, idx, side="right") - 1
        out = np.zeros(len(idx), dtype=np.uint8)
        for bi, (b0, _, kind) in enumerate(blocks):
            if kind == SYNC:
                continue
            mask = which == bi
            if not mask.any():
                continue
            phase = (fam.phases_a if kind == CHAOS_A else fam.phases_b)[self.index]
            out[mask] = PATTERN[(phase + idx[mask] - b0) % 4]
        return out


@dataclass
class ScrambledFamily:
    k: int
    J: int
    schedule: BlockSchedule
    phases_a: tuple[int, ...]
    phases_b: tuple[int, ...]
    generators: list[FamilyGenerator] = field(default_factory=list)

    @property
    def sample(self) -> list[SymbolSequence]:
        return [SymbolSequence(g, j) for g in self.generators for j in range(self.J + 1)]

    def is_member(self, s: SymbolSequence) -> bool:
        """Membership by description: some generator shifted any number of times."""
        return isinstance(s.source, FamilyGenerator) and s.source.family is self and s.offset >= 0

    def closure_hint(self, s, image) -> bool:
        return self.is_member(image)


def build_scrambled_family(k: int, schedule: BlockSchedule | None = None, J: int = 0) -> ScrambledFamily:
    """k block-structured generators and their shifts up to order J.

    All generators are 0 on sync blocks; on chaos blocks generator a reads the
    pattern 0011 with a phase chosen so that every pair of sample members
    differs in one of its first two symbols throughout at least one kind of
    chaos block.
    """
    if k < 2:
        raise InputError("k >= 2 generators required")
    if J < 0:
        raise InputError("J >= 0 required")
    pa, pb = _choose_phases(k, J)
    fam = ScrambledFamily(k, J, schedule or BlockSchedule(), pa, pb)
    fam.generators = [FamilyGenerator(fam, a) for a in range(k)]
    return fam


def family_params(n_max: int = 100_000, eps: float = 0.5, diameter: float = 1.0, **kw) -> ChaosParams:
    grid = np.union1d(default_t_grid(diameter), [eps])
    return ChaosParams(n_max=n_max, t_grid=grid, **kw)


def verify_family_dc1(family: ScrambledFamily, n_max: int = 100_000, eps: float = 0.5,
                      precision: int = 64) -> ScrambledSetReport:
    if n_max < 10_000:
        raise InputError("n_max >= 10^4 required")
    system = ShiftSystem(precision)
    report = verify_scrambled_set(system, family.sample, family.closure_hint, family_params(n_max, eps))
    report.notes.append("shift metric 2^-(first disagreement); uniform constant searched on the t grid")
    return report


# -- itinerary decoding --------------------------------------------------------------------------------
def itinerary_decode(m: PLGraphMap, cert: HorseshoeCertificate, word: SymbolSequence | Sequence[int],
                     depth: int) -> tuple[Arc, GraphPoint]:
    """Arc of points whose f^n-itinerary through (U, V) starts with word[:depth]."""
    if depth < 1:
        raise InputError("depth >= 1 required")
    syms = [int(s) for s in (word.prefix(depth) if isinstance(word, SymbolSequence) else word[:depth])]
    if len(syms) < depth:
        raise InputError("word shorter than depth")
    arcs = (cert.U, cert.V)
    last = arcs[syms[-1]]
    lo, hi = last.lo, last.hi
    for i in range(depth - 2, -1, -1):
        br = cert.branches[(syms[i], syms[i + 1])]
        a, b = br.inverse(lo), br.inverse(hi)
        lo, hi = min(a, b), max(a, b)
        host = arcs[syms[i]]
        if not (host.lo <= lo and hi <= host.hi and lo < hi):
            raise RuntimeError("itinerary decoding left the certificate arcs; certificate is invalid")
    arc = Arc(arcs[syms[0]].edge, lo, hi)
    return arc, arc.midpoint


class DecodedSystem:
    """Orbit system of f^n on points coded by words through a horseshoe.

    A state is a word w; its point is the depth-``depth`` decoded midpoint and
    f^n acts as the shift (conjugacy on the coded set).
    """

    def __init__(self, m: PLGraphMap, cert: HorseshoeCertificate, depth: int = 30):
        self.map = m
        self.cert = cert
        self.depth = depth
        g = m.graph
        arcs = (cert.U, cert.V)
        self._edge = np.array([g.edge_index[a.edge] for a in arcs])
        self._mid = np.array([float((a.lo + a.hi) / 2) for a in arcs])
        scale, shift_ = np.zeros(4), np.zeros(4)
        for (a, b), br in cert.branches.items():
            scale[2 * a + b] = float(1 / br.alpha)
            shift_[2 * a + b] = float(-br.beta / br.alpha)
        self._scale, self._shift = scale, shift_

    @property
    def diameter(self) -> float:
        return self.map.graph.diameter

    def step(self, w: SymbolSequence) -> SymbolSequence:
        return w.shifted(1)

    def same(self, u, v) -> bool:
        return same_sequence(u, v)

    def point(self, w: SymbolSequence) -> GraphPoint:
        return itinerary_decode(self.map, self.cert, w, self.depth)[1]

    def decoded_arrays(self, w: SymbolSequence, n: int):
        d = self.depth
        sym = w.prefix(n + d).astype(np.int64)
        x = self._mid[sym[d - 1:d - 1 + n]]
        for j in range(d - 2, -1, -1):
            code = 2 * sym[j:j + n] + sym[j + 1:j + 1 + n]
            x = self._scale[code] * x + self._shift[code]
        return self._edge[sym[:n]], x

    def orbit_distances(self, u, v, n: int) -> np.ndarray:
        eu, ou = self.decoded_arrays(u, n)
        ev, ov = self.decoded_arrays(v, n)
        return self.map.graph.distance_arrays(eu, ou, ev, ov)


def decoded_invariance(m: PLGraphMap, cert: HorseshoeCertificate, word: SymbolSequence, depth: int) -> bool:
    """Exact check that f^n(decode(w, depth)) lies in decode(sigma w, depth - 1)."""
    arc, _ = itinerary_decode(m, cert, word, depth)
    target, _ = itinerary_decode(m, cert, word.shifted(1), depth - 1)
    img = m.iterated_image(arc, cert.n)
    return all(target.edge == e and target.lo <= lo and hi <= target.hi for e, lo, hi in img.items())
