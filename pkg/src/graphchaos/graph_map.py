"""Continuous piecewise-linear self-maps of metric graphs.

Each edge is cut at breakpoints ``0 = t0 < ... < tk = length``; on every
subinterval the map is affine in arc length onto an interval of a single
target edge. Continuity is checked at construction time.
"""
from __future__ import annotations

import bisect
from collections import defaultdict, deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .metric_graph import Arc, GraphPoint, InputError, MetricGraph, as_number


class ContinuityError(InputError):
    def __init__(self, message: str, edge: str, offset, line: int | None = None):
        self.edge = edge
        self.offset = offset
        self.line = line
        self.detail = f"{message} at breakpoint {edge}:{offset}"
        super().__init__(self.detail + (f" (line {line})" if line is not None else ""))


@dataclass(frozen=True)
class Piece:
    """Affine piece: offset t0 -> s0 and t1 -> s1, from ``edge`` into ``target``."""

    edge: str
    t0: Fraction
    t1: Fraction
    target: str
    s0: Fraction
    s1: Fraction
    line: int | None = field(default=None, compare=False)

    @property
    def slope(self):
        return (self.s1 - self.s0) / (self.t1 - self.t0)

    def at(self, t):
        if t == self.t0:
            return self.s0
        if t == self.t1:
            return self.s1
        return self.s0 + (t - self.t0) * (self.s1 - self.s0) / (self.t1 - self.t0)

    def preimage(self, s):
        """Offset on ``edge`` mapped to ``s``, or None (constant pieces excluded)."""
        if self.s0 == self.s1:
            return None
        lo, hi = min(self.s0, self.s1), max(self.s0, self.s1)
        if not lo <= s <= hi:
            return None
        return self.t0 + (s - self.s0) * (self.t1 - self.t0) / (self.s1 - self.s0)


@dataclass(frozen=True)
class Branch:
    """f^k restricted to [lo, hi] on ``edge`` equals t -> (target, alpha*t + beta)."""

    edge: str
    lo: Fraction
    hi: Fraction
    target: str
    alpha: Fraction
    beta: Fraction

    def at(self, t):
        return self.alpha * t + self.beta

    @property
    def image(self) -> tuple:
        a, b = self.at(self.lo), self.at(self.hi)
        return (self.target, min(a, b), max(a, b))

    def inverse(self, s):
        return (s - self.beta) / self.alpha


@dataclass
class ArcUnion:
    """Finite union of closed single-edge intervals (degenerate ones allowed)."""

    intervals: dict[str, list[tuple]] = field(default_factory=dict)
    multiplicity: int = 0

    @classmethod
    def from_intervals(cls, items: Iterable[tuple], multiplicity: int = 0) -> "ArcUnion":
        by_edge = defaultdict(list)
        for e, lo, hi in items:
            by_edge[e].append((lo, hi))
        merged = {}
        for e, ivs in by_edge.items():
            ivs.sort()
            out = [list(ivs[0])]
            for lo, hi in ivs[1:]:
                if lo <= out[-1][1]:
                    out[-1][1] = max(out[-1][1], hi)
                else:
                    out.append([lo, hi])
            merged[e] = [tuple(x) for x in out]
        return cls(dict(sorted(merged.items())), multiplicity)

    def items(self):
        for e, ivs in self.intervals.items():
            for lo, hi in ivs:
                yield e, lo, hi

    def arcs(self) -> list[Arc]:
        return [Arc(e, lo, hi) for e, lo, hi in self.items() if lo < hi]

    def covers(self, a: Arc) -> bool:
        return any(lo <= a.lo and a.hi <= hi for lo, hi in self.intervals.get(a.edge, ()))

    def contains_point(self, p: GraphPoint, graph: MetricGraph | None = None, tol=0) -> bool:
        cands = [p]
        if graph is not None:
            v = graph.vertex_of(p)
            if v is not None:
                cands = [GraphPoint(e, t) for e, t in graph.incident_ends(v)]
        for q in cands:
            for lo, hi in self.intervals.get(q.edge, ()):
                if lo - tol <= q.offset <= hi + tol:
                    return True
        return False

    def measure(self):
        return sum(hi - lo for _, lo, hi in self.items())

    def __eq__(self, other):
        return isinstance(other, ArcUnion) and self.intervals == other.intervals


@dataclass(frozen=True)
class MarkovData:
    partition: tuple[Arc, ...]
    transition_matrix: np.ndarray
    points: dict = field(compare=False, repr=False)

    def cell_index(self, p: GraphPoint) -> list[int]:
        """Indices of all cells whose closure contains p."""
        return [i for i, c in enumerate(self.partition) if c.edge == p.edge and c.lo <= p.offset <= c.hi]

    @cached_property
    def successor_lists(self) -> list[list[int]]:
        return [np.nonzero(row)[0].tolist() for row in self.transition_matrix]

    def successors(self, i: int) -> list[int]:
        return self.successor_lists[i]


class PLGraphMap:
    """Continuous piecewise-edge-linear map ``graph -> graph``."""

    def __init__(self, graph: MetricGraph, pieces: Iterable[Piece], name: str = "map"):
        self.graph = graph
        self.name = name
        by_edge: dict[str, list[Piece]] = defaultdict(list)
        for p in pieces:
            p = Piece(
                str(p.edge), as_number(p.t0), as_number(p.t1), str(p.target),
                as_number(p.s0), as_number(p.s1), p.line,
            )
            by_edge[p.edge].append(p)
        self.pieces: dict[str, list[Piece]] = {}
        for e in graph.edges:
            ps = sorted(by_edge.pop(e.id, []), key=lambda p: p.t0)
            self.pieces[e.id] = ps
        if by_edge:
            bad = next(iter(by_edge.values()))[0]
            raise InputError(
                f"piece on unknown edge {bad.edge!r}" + (f" (line {bad.line})" if bad.line else "")
            )
        self._validate()
        self._starts = {e: [p.t0 for p in ps] for e, ps in self.pieces.items()}

    # -- validation ------------------------------------------------------------
    def _validate(self):
        g = self.graph
        for e in g.edges:
            ps = self.pieces[e.id]
            if not ps:
                raise InputError(f"edge {e.id} has no pieces")
            if ps[0].t0 != 0:
                raise ContinuityError("pieces do not start at 0", e.id, ps[0].t0, ps[0].line)
            if ps[-1].t1 != e.length:
                raise ContinuityError("pieces do not reach the edge end", e.id, ps[-1].t1, ps[-1].line)
            for p in ps:
                if not p.t0 < p.t1:
                    raise ContinuityError("empty piece", e.id, p.t0, p.line)
                tgt = g.edge(p.target)
                for s in (p.s0, p.s1):
                    if s < 0 or s > tgt.length:
                        raise ContinuityError(f"image offset {s} outside edge {tgt.id}", e.id, p.t0, p.line)
            for a, b in zip(ps, ps[1:]):
                if a.t1 != b.t0:
                    raise ContinuityError("gap or overlap between pieces", e.id, a.t1, b.line)
                if not g.same_point(GraphPoint(a.target, a.s1), GraphPoint(b.target, b.s0)):
                    raise ContinuityError("discontinuous", e.id, a.t1, b.line)
        for v in g.vertices:
            images = []
            for eid, t in g.incident_ends(v):
                ps = self.pieces[eid]
                p = ps[0] if t == 0 else ps[-1]
                images.append((GraphPoint(p.target, p.s0 if t == 0 else p.s1), eid, t, p.line))
            first = images[0][0]
            for img, eid, t, line in images[1:]:
                if not g.same_point(first, img):
                    raise ContinuityError(f"discontinuous at vertex {v}", eid, t, line)

    # -- evaluation ----------------------------------------------------------
    def piece_at(self, p: GraphPoint) -> Piece:
        ps = self.pieces[p.edge]
        i = bisect.bisect_right(self._starts[p.edge], p.offset) - 1
        return ps[min(max(i, 0), len(ps) - 1)]

    def evaluate(self, x: GraphPoint) -> GraphPoint:
        self.graph.check_point(x)
        piece = self.piece_at(x)
        s = piece.at(x.offset)
        if isinstance(s, float):
            s = min(max(s, 0.0), float(self.graph.edge(piece.target).length))
        return self.graph.canonical(GraphPoint(piece.target, s))

    __call__ = evaluate

    def iterate(self, x: GraphPoint, n: int) -> list[GraphPoint]:
        if n < 1:
            raise InputError("n must be >= 1")
        orbit = [self.graph.canonical(x)]
        for _ in range(n):
            orbit.append(self.evaluate(orbit[-1]))
        return orbit

    @cached_property
    def lipschitz(self) -> Fraction:
        return max(abs(p.slope) for ps in self.pieces.values() for p in ps)

    @cached_property
    def has_constant_pieces(self) -> bool:
        return any(p.s0 == p.s1 for ps in self.pieces.values() for p in ps)

    @cached_property
    def breakpoints(self) -> dict[str, list[Fraction]]:
        return {e: sorted({p.t0 for p in ps} | {ps[-1].t1}) for e, ps in self.pieces.items()}

    # -- vectorized float evaluation -------------------------------------------
    @cached_property
    def _compiled(self):
        eidx = self.graph.edge_index
        out = []
        for e in self.graph.edges:
            ps = self.pieces[e.id]
            starts = np.array([float(p.t0) for p in ps])
            tgt = np.array([eidx[p.target] for p in ps])
            slope = np.array([float(p.slope) for p in ps])
            icpt = np.array([float(p.s0 - p.slope * p.t0) for p in ps])
            out.append((starts, tgt, slope, icpt))
        return out

    def evaluate_arrays(self, edges: np.ndarray, offsets: np.ndarray):
        """Float evaluation for many points at once (edge indices, offsets)."""
        edges = np.asarray(edges, dtype=np.int64)
        offsets = np.asarray(offsets, dtype=float)
        new_e = np.empty_like(edges)
        new_o = np.empty_like(offsets)
        lengths = self.graph._edge_arrays[2]
        for k, (starts, tgt, slope, icpt) in enumerate(self._compiled):
            mask = edges == k
            if not mask.any():
                continue
            t = offsets[mask]
            i = np.clip(np.searchsorted(starts, t, side="right") - 1, 0, len(starts) - 1)
            new_e[mask] = tgt[i]
            new_o[mask] = slope[i] * t + icpt[i]
        np.clip(new_o, 0.0, lengths[new_e], out=new_o)
        return new_e, new_o

    # -- exact images ---------------------------------------------------------
    def _piece_images(self, edge: str, lo, hi) -> list[tuple]:
        out = []
        for p in self.pieces[edge]:
            a, b = max(lo, p.t0), min(hi, p.t1)
            if a > b or (a == b and lo < hi):
                continue
            sa, sb = p.at(a), p.at(b)
            out.append((p.target, min(sa, sb), max(sa, sb)))
        return out

    def image_of_arc(self, a: Arc | tuple) -> ArcUnion:
        if isinstance(a, Arc):
            self.graph.check_arc(a)
            a = a.as_tuple()
        imgs = self._piece_images(*a)
        return ArcUnion.from_intervals(imgs, multiplicity=sum(1 for _, lo, hi in imgs if lo < hi))

    def image_of_union(self, u: ArcUnion) -> ArcUnion:
        imgs = []
        for item in u.items():
            imgs.extend(self._piece_images(*item))
        return ArcUnion.from_intervals(imgs, multiplicity=sum(1 for _, lo, hi in imgs if lo < hi))

    def iterated_image(self, a: Arc, n: int) -> ArcUnion:
        u = ArcUnion.from_intervals([a.as_tuple()])
        for _ in range(n):
            u = self.image_of_union(u)
        return u

    def branches(self, a: Arc, k: int, max_branches: int = 500_000) -> list[Branch]:
        """Maximal pieces of ``a`` on which f^k is affine into one edge."""
        cur = [Branch(a.edge, a.lo, a.hi, a.edge, Fraction(1), Fraction(0))]
        for _ in range(k):
            nxt = []
            for br in cur:
                tgt, ilo, ihi = br.image
                for p in self.pieces[tgt]:
                    plo, phi = max(ilo, p.t0), min(ihi, p.t1)
                    if plo > phi or (plo == phi and ilo < ihi):
                        continue
                    if br.alpha == 0:
                        lo, hi = br.lo, br.hi
                    else:
                        u, w = br.inverse(plo), br.inverse(phi)
                        lo, hi = min(u, w), max(u, w)
                        if lo == hi and br.lo < br.hi:
                            continue
                    alpha = p.slope * br.alpha
                    beta = p.slope * (br.beta - p.t0) + p.s0
                    nxt.append(Branch(br.edge, lo, hi, p.target, alpha, beta))
                    if br.alpha == 0:
                        break
            cur = nxt
            if len(cur) > max_branches:
                raise RuntimeError(f"too many branches ({len(cur)}) for f^{k} on {a}")
        return cur

    # -- Markov structure -------------------------------------------------------
    def forward_closure(self, seeds: Iterable[GraphPoint], cap: int = 5000) -> dict[str, set] | None:
        """Offsets per edge of the smallest forward-invariant set containing seeds,
        all breakpoints and all edge ends; None if it exceeds ``cap`` points."""
        g = self.graph
        pts: dict[str, set] = {e.id: {Fraction(0), e.length} for e in g.edges}
        queue = deque()
        for e, bps in self.breakpoints.items():
            for t in bps:
                queue.append(GraphPoint(e, t))
        queue.extend(seeds)
        for e in g.edges:
            queue.append(GraphPoint(e.id, Fraction(0)))
            queue.append(GraphPoint(e.id, e.length))
        seen = set()
        total = sum(len(s) for s in pts.values())
        while queue:
            p = g.canonical(queue.popleft())
            if p in seen:
                continue
            seen.add(p)
            if p.offset not in pts[p.edge]:
                pts[p.edge].add(p.offset)
                total += 1
                if total > cap:
                    return None
            queue.append(self.evaluate(p))
        return pts

    def preimage_points(self, pts: dict[str, set]) -> list[GraphPoint]:
        out = []
        for e, ps in self.pieces.items():
            for p in ps:
                for s in pts.get(p.target, ()):
                    t = p.preimage(s)
                    if t is not None:
                        out.append(GraphPoint(e, t))
        return out

    def markov_from_points(self, pts: dict[str, set]) -> MarkovData:
        g = self.graph
        cells = []
        for e in g.edges:
            offs = sorted(pts[e.id])
            cells.extend(Arc(e.id, a, b) for a, b in zip(offs, offs[1:]))
        index = {(c.edge, c.lo, c.hi): i for i, c in enumerate(cells)}
        sorted_pts = {e: sorted(v) for e, v in pts.items()}
        A = np.zeros((len(cells), len(cells)), dtype=np.int64)
        for i, c in enumerate(cells):
            for tgt, lo, hi in self._piece_images(c.edge, c.lo, c.hi):
                if lo == hi:
                    continue
                offs = sorted_pts[tgt]
                k0 = bisect.bisect_left(offs, lo)
                k1 = bisect.bisect_left(offs, hi)
                for k in range(k0, k1):
                    A[i, index[(tgt, offs[k], offs[k + 1])]] += 1
        return MarkovData(tuple(cells), A, {e: frozenset(v) for e, v in pts.items()})

    def markov_data(self, cap: int = 5000) -> MarkovData | None:
        """Markov partition generated by breakpoint orbits, or None if not Markov."""
        memo = self.__dict__.setdefault("_markov_memo", {})
        if cap not in memo:
            pts = self.forward_closure([], cap=cap)
            memo[cap] = None if pts is None else self.markov_from_points(pts)
        return memo[cap]

    def refined_markov(self, level: int, resolution: float = 0.01, cap: int = 20000) -> MarkovData | None:
        """Markov partition refined by ``level`` preimage steps plus a dyadic grid
        whose spacing stays at or above ``resolution``."""
        memo = self.__dict__.setdefault("_refined_memo", {})
        key = (level, resolution, cap)
        if key not in memo:
            memo[key] = self._refined_markov(level, resolution, cap)
        return memo[key]

    def _refined_markov(self, level: int, resolution: float, cap: int) -> MarkovData | None:
        base = self.forward_closure([], cap=cap)
        if base is None:
            return None
        pts = base
        for _ in range(level):
            pre = self.preimage_points(pts)
            pts = self.forward_closure(pre + [GraphPoint(e, t) for e, s in pts.items() for t in s], cap=cap)
            if pts is None:
                return None
        grid = []
        for e in self.graph.edges:
            offs = sorted(pts[e.id])
            if max(b - a for a, b in zip(offs, offs[1:])) <= resolution:
                continue
            k = level
            while k > 0 and float(e.length) / 2**k < resolution:
                k -= 1
            grid.extend(GraphPoint(e.id, e.length * Fraction(j, 2**k)) for j in range(1, 2**k))
        if grid:
            extra = self.forward_closure(grid + [GraphPoint(e, t) for e, s in pts.items() for t in s], cap=cap)
            if extra is not None:
                pts = extra
        return self.markov_from_points(pts)

    def __repr__(self):
        return f"PLGraphMap({self.name!r}, edges={len(self.graph.edges)})"


def evaluate(m: PLGraphMap, x: GraphPoint) -> GraphPoint:
    return m.evaluate(x)


def iterate(m: PLGraphMap, x: GraphPoint, n: int) -> list[GraphPoint]:
    return m.iterate(x, n)


def image_of_arc(m: PLGraphMap, a: Arc) -> ArcUnion:
    return m.image_of_arc(a)


def markov_data(m: PLGraphMap) -> MarkovData | None:
    return m.markov_data()


def pieces_from_table(rows: Sequence[tuple]) -> list[Piece]:
    """Rows ``(edge, t0, t1, target, s0, s1)`` with rationals as strings or numbers."""
    return [Piece(r[0], as_number(r[1]), as_number(r[2]), r[3], as_number(r[4]), as_number(r[5])) for r in rows]
