"""Approximate omega-limit sets, the symbolic P-omega set of Markov maps,
the four-way classification of maximal omega-limit sets, B-sets and
property checks for basic sets.

Everything here is resolution-bound: "maximal" and "infinite" mean
"observed at resolution eps", and a Singular verdict only says that no
periodic point of period <= period_max was found near the orbit.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import networkx as nx
import numpy as np

from .chaos_stats import GraphSystem
from .entropy_horseshoe import detect_horseshoe, spectral_entropy_oracle
from .graph_map import ArcUnion, MarkovData, PLGraphMap
from .metric_graph import Arc, GraphPoint, InputError

CYCLE, SOLENOID, SINGULAR, BASIC, UNCLASSIFIED = "Cycle", "Solenoid", "Singular", "Basic", "unclassified"


class UnsupportedInput(InputError):
    """Operation needs a Markov map."""


@dataclass(frozen=True)
class OmegaParams:
    n_transient: int = 1000
    n_sample: int = 10_000
    eps: float = 0.01
    refinement_depth: int = 6
    period_max: int = 12
    max_branches: int = 50_000


@dataclass(frozen=True)
class PeriodicPoint:
    point: GraphPoint
    period: int
    interval: Arc | None = None  # set when a whole arc is fixed by f^period


@dataclass
class OmegaApprox:
    base: GraphPoint
    eps: float
    net: tuple[GraphPoint, ...]
    n_transient: int
    n_sample: int
    exact_cycle: tuple[GraphPoint, ...] | None = None  # the whole omega when the orbit is exactly periodic

    @property
    def period(self) -> int | None:
        return len(self.exact_cycle) if self.exact_cycle is not None else None

    def net_arrays(self, m: PLGraphMap):
        idx = m.graph.edge_index
        return (np.array([idx[p.edge] for p in self.net]), np.array([float(p.offset) for p in self.net]))


@dataclass
class POmega:
    arcs: ArcUnion
    cells: tuple[Arc, ...]
    level: int
    components: int
    invariant: bool
    measures: list[float]
    witness: PeriodicPoint | None = None

    @property
    def contains_periodic(self) -> bool:
        return self.witness is not None

    def triples(self) -> list[tuple[str, str, str]]:
        return sorted((e, str(lo), str(hi)) for e, lo, hi in self.arcs.items())

    def as_dict(self) -> dict:
        return {
            "P_omega": [list(t) for t in self.triples()],
            "level": self.level,
            "components": self.components,
            "strongly_invariant": self.invariant,
            "measure_by_level": self.measures,
            "periodic_witness": _pp_dict(self.witness),
        }


@dataclass
class OmegaClass:
    kind: str
    omega: OmegaApprox
    p_omega: POmega | None = None
    evidence: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "base": [self.omega.base.edge, str(self.omega.base.offset)],
            "class": self.kind,
            "eps": self.omega.eps,
            "net_size": len(self.omega.net),
            "exact_period": self.omega.period,
            "p_omega": self.p_omega.as_dict() if self.p_omega else None,
            "evidence": self.evidence,
            "notes": self.notes,
        }


def _pp_dict(pp: PeriodicPoint | None):
    if pp is None:
        return None
    d = {"point": [pp.point.edge, str(pp.point.offset)], "period": pp.period}
    if pp.interval is not None:
        d["interval"] = [pp.interval.edge, str(pp.interval.lo), str(pp.interval.hi)]
    return d


# -- omega approximation ---------------------------------------------------------------------------
def _greedy_net(m: PLGraphMap, edges: np.ndarray, offs: np.ndarray, eps: float,
                recurrence: bool = True) -> list[int]:
    """Indices of an eps/2-separated subset that eps/2-covers the sample; with
    ``recurrence``, points whose eps-ball holds no other sample point are dropped."""
    g = m.graph
    keys = np.round(offs / (eps / 4)).astype(np.int64)
    _, first = np.unique(np.stack([edges, keys]), axis=1, return_index=True)
    chosen: list[int] = []
    for i in sorted(first):
        if chosen:
            c = np.array(chosen)
            d = g.distance_arrays(np.full(len(c), edges[i]), np.full(len(c), offs[i]), edges[c], offs[c])
            if d.min() < eps / 2:
                continue
        chosen.append(int(i))
    if not recurrence:
        return chosen
    keep = []
    for i in chosen:
        d = g.distance_arrays(np.full(len(edges), edges[i]), np.full(len(edges), offs[i]), edges, offs)
        if np.count_nonzero(d < eps) >= 2:
            keep.append(i)
    return keep


def omega_limit_approx(m: PLGraphMap, x: GraphPoint, n_transient: int = 1000, n_sample: int = 10_000,
                       eps: float = 0.01, exact_limit: int = 2**62) -> OmegaApprox:
    """eps-net of the accumulation points of the orbit of x.

    Rational orbits that close up within the budget give the exact cycle.
    """
    if n_sample < 10 * n_transient:
        raise InputError("n_sample >= 10 * n_transient required")
    g = m.graph
    x = g.check_point(x)
    total = n_transient + n_sample
    p = g.canonical(x)
    if not isinstance(p.offset, float):
        seen: dict[GraphPoint, int] = {}
        orbit = []
        for i in range(total):
            if p in seen:
                cyc = tuple(sorted(orbit[seen[p]:], key=lambda q: (q.edge, q.offset)))
                idx = g.edge_index
                ce = np.array([idx[q.edge] for q in cyc])
                co = np.array([float(q.offset) for q in cyc])
                net = tuple(cyc[i] for i in sorted(_greedy_net(m, ce, co, eps, recurrence=False)))
                return OmegaApprox(x, eps, net, n_transient, n_sample, cyc)
            if Fraction(p.offset).denominator > exact_limit:
                break
            seen[p] = i
            orbit.append(p)
            p = g.canonical(m.evaluate(p))
    edges, offs = GraphSystem(m, exact_limit=exact_limit).orbit_arrays(x, total)
    edges, offs = edges[n_transient:], offs[n_transient:]
    names = [e.id for e in g.edges]
    net = tuple(GraphPoint(names[edges[i]], float(offs[i])) for i in _greedy_net(m, edges, offs, eps))
    return OmegaApprox(x, eps, net, n_transient, n_sample)


# -- periodic points -------------------------------------------------------------------------------
def _iter_periodic(m: PLGraphMap, a: Arc, period_max: int, max_branches: int):
    """Yield (k, points) for k = 1..period_max; points are new periodic points
    first seen as fixed points of f^k, so k is their least period."""
    g = m.graph
    a = g.check_arc(a)
    found: set[GraphPoint] = set()
    intervals: list[PeriodicPoint] = []
    for k in range(1, period_max + 1):
        try:
            brs = m.branches(a, k, max_branches=max_branches)
        except RuntimeError:
            return
        new = []
        for br in brs:
            cands = []
            if br.target == br.edge and br.alpha == 1 and br.beta == 0:
                if br.lo < br.hi:
                    iv = Arc(br.edge, br.lo, br.hi)
                    if not any(q.interval.contains(iv) for q in intervals):
                        pp = PeriodicPoint(iv.midpoint, k, iv)
                        intervals.append(pp)
                        new.append(pp)
                    continue
            elif br.target == br.edge and br.alpha != 1:
                t = br.beta / (1 - br.alpha)
                if br.lo <= t <= br.hi:
                    cands = [t]
            for t in (br.lo, br.hi):
                if g.same_point(GraphPoint(br.edge, t), GraphPoint(br.target, br.at(t))):
                    cands.append(t)
            for t in cands:
                q = g.canonical(GraphPoint(br.edge, t))
                if q not in found and not any(iv.interval.edge == q.edge and iv.interval.contains_offset(q.offset)
                                              for iv in intervals):
                    found.add(q)
                    new.append(PeriodicPoint(q, k))
        yield k, new


def periodic_points_in(m: PLGraphMap, a: Arc, period_max: int,
                       max_branches: int = 50_000) -> list[PeriodicPoint]:
    """Exact periodic points in ``a`` with least period <= period_max.

    Solves the fixed-point equation of every affine branch of f^k on ``a``.
    Stops early once f^k has more than ``max_branches`` branches. An arc of
    points fixed by f^k is reported once, with ``interval`` set.
    """
    if period_max < 1:
        raise InputError("period_max >= 1 required")
    out = [pp for _, new in _iter_periodic(m, a, period_max, max_branches) for pp in new]
    return sorted(out, key=lambda q: (q.period, q.point.edge, q.point.offset))


def periodic_points(m: PLGraphMap, period_max: int, max_branches: int = 50_000) -> list[PeriodicPoint]:
    """Periodic points on the whole graph (vertex duplicates merged)."""
    memo = m.__dict__.setdefault("_periodic_memo", {})
    key = (period_max, max_branches)
    if key not in memo:
        seen, out = set(), []
        for e in m.graph.edges:
            for pp in periodic_points_in(m, m.graph.full_arc(e.id), period_max, max_branches):
                k = (pp.point, pp.interval)
                if k not in seen:
                    seen.add(k)
                    out.append(pp)
        memo[key] = out
    return memo[key]


def _orbit_of(m: PLGraphMap, pp: PeriodicPoint) -> list[GraphPoint]:
    return m.iterate(pp.point, pp.period - 1) if pp.period > 1 else [pp.point]


def _distance_to_points(m: PLGraphMap, omega: OmegaApprox, pts: Sequence[GraphPoint]) -> np.ndarray:
    """For every net point, distance to the nearest of ``pts``."""
    g = m.graph
    ne, no = omega.net_arrays(m)
    idx = g.edge_index
    pe = np.array([idx[p.edge] for p in pts])
    po = np.array([float(p.offset) for p in pts])
    d = g.distance_arrays(np.repeat(ne, len(pe)), np.repeat(no, len(pe)), np.tile(pe, len(ne)), np.tile(po, len(ne)))
    return d.reshape(len(ne), len(pe)).min(axis=1)


def _witness_near_net(m: PLGraphMap, omega: OmegaApprox, cands: Sequence[PeriodicPoint], eps: float):
    for pp in cands:
        if pp.interval is not None:
            continue
        if _distance_to_points(m, omega, [pp.point]).min() <= eps:
            return pp
    return None


# -- P-omega ---------------------------------------------------------------------------------------
def _cell_locator(md: MarkovData):
    by_edge: dict[str, list[tuple]] = {}
    for i, c in enumerate(md.partition):
        by_edge.setdefault(c.edge, []).append((float(c.lo), float(c.hi), i))
    for v in by_edge.values():
        v.sort()
    return by_edge


def _cells_meeting(m: PLGraphMap, md: MarkovData, pts: Sequence[GraphPoint], tol: float = 1e-12) -> set[int]:
    g = m.graph
    loc = _cell_locator(md)
    out = set()
    for p in pts:
        v = g.vertex_of(p) if not isinstance(p.offset, float) else None
        ends = g.incident_ends(v) if v is not None else [(p.edge, p.offset)]
        if isinstance(p.offset, float):
            e = g.edge(p.edge)
            if p.offset <= tol:
                ends = g.incident_ends(e.u)
            elif p.offset >= float(e.length) - tol:
                ends = g.incident_ends(e.v)
        for edge, t in ends:
            cells = loc[edge]
            t = float(t)
            k = bisect.bisect_right(cells, (t, math.inf, 0))
            for lo, hi, i in cells[max(k - 2, 0):k + 1]:
                if lo - tol <= t <= hi + tol:
                    out.add(i)
    return out


class _ReachIndex:
    """Reachability through the condensation of the transition graph, memoized per component."""

    def __init__(self, md: MarkovData):
        G = nx.DiGraph()
        G.add_nodes_from(range(len(md.partition)))
        G.add_edges_from((i, j) for i, js in enumerate(md.successor_lists) for j in js)
        self.C = nx.condensation(G)
        self.comp = self.C.graph["mapping"]
        self._memo: dict[int, frozenset] = {}

    def _from_component(self, c: int) -> frozenset:
        if c not in self._memo:
            comps = {c} | nx.descendants(self.C, c)
            self._memo[c] = frozenset(i for k in comps for i in self.C.nodes[k]["members"])
        return self._memo[c]

    def closed(self, i: int) -> frozenset:
        """Cells reachable from i in zero or more steps."""
        return self._from_component(self.comp[i])

    def strict(self, i: int, succ: list[int]) -> frozenset:
        """Cells reachable from i in one or more steps."""
        out = frozenset()
        for c in {self.comp[j] for j in succ}:
            out |= self._from_component(c)
        return out


def _union(cells: Sequence[Arc]) -> ArcUnion:
    return ArcUnion.from_intervals([c.as_tuple() for c in cells])


def _intersect(u: ArcUnion, v: ArcUnion) -> ArcUnion:
    items = []
    for e, ivs in u.intervals.items():
        for lo, hi in ivs:
            for lo2, hi2 in v.intervals.get(e, ()):
                a, b = max(lo, lo2), min(hi, hi2)
                if a < b:
                    items.append((e, a, b))
    return ArcUnion.from_intervals(items)


def count_components(m: PLGraphMap, cells: Sequence[Arc]) -> int:
    """Connected components of a union of closed cells (joined at shared points)."""
    g = m.graph
    G = nx.Graph()
    G.add_nodes_from(range(len(cells)))
    owner: dict[GraphPoint, int] = {}
    for i, c in enumerate(cells):
        for t in (c.lo, c.hi):
            p = g.canonical(GraphPoint(c.edge, t))
            if p in owner:
                G.add_edge(owner[p], i)
            else:
                owner[p] = i
    return nx.number_connected_components(G) if cells else 0


def _markov_levels(m: PLGraphMap, depth: int, eps: float) -> list[MarkovData]:
    if m.markov_data() is None:
        raise UnsupportedInput(f"{m.name}: no finite Markov partition, P-omega unavailable")
    levels = []
    for level in range(1, depth + 1):
        md = m.refined_markov(level, resolution=eps)
        if md is None:
            raise UnsupportedInput(f"{m.name}: refined Markov partition exceeds the point cap at level {level}")
        levels.append(md)
    return levels


def compute_P_omega(m: PLGraphMap, omega: OmegaApprox, refinement_depth: int = 6,
                    period_max: int = 12, max_branches: int = 50_000) -> POmega:
    """Intersection, over refinement levels and cells meeting the net, of the
    cell sets reachable in one or more steps."""
    if refinement_depth < 1:
        raise InputError("refinement_depth >= 1 required")
    levels = _markov_levels(m, refinement_depth, omega.eps)
    total: ArcUnion | None = None
    measures = []
    finest: set[int] = set()
    for md in levels:
        nbhd = _cells_meeting(m, md, omega.net)
        reach = _ReachIndex(md)
        common: set[int] | None = None
        for i in sorted(nbhd):
            r = reach.strict(i, md.successor_lists[i])
            common = set(r) if common is None else common & r
        finest = common or set()
        u = _union([md.partition[i] for i in sorted(finest)])
        measures.append(float(u.measure()))
        total = u if total is None else _intersect(total, u)
    md = levels[-1]
    cells = tuple(md.partition[i] for i in sorted(finest))
    image = set()
    for i in finest:
        image.update(int(j) for j in md.successors(i))
    witness = None
    for arc in total.arcs():
        for _, new in _iter_periodic(m, arc, period_max, max_branches):
            witness = _witness_near_net(m, omega, new, omega.eps)
            if witness is not None:
                break
        if witness is not None:
            break
    return POmega(total, cells, len(levels), count_components(m, list(total.arcs())),
                  image == finest, measures, witness)


# -- classification --------------------------------------------------------------------------------
def _is_cycle(m: PLGraphMap, omega: OmegaApprox, params: OmegaParams) -> tuple[bool, dict]:
    if omega.exact_cycle is not None:
        ok = omega.period <= params.period_max
        return ok, {"exact_period": omega.period}
    if len(omega.net) > params.period_max:
        return False, {}
    for pp in periodic_points(m, params.period_max, params.max_branches):
        if pp.interval is not None:
            continue
        orbit = _orbit_of(m, pp)
        if _distance_to_points(m, omega, orbit).max() <= omega.eps:
            return True, {"limit_cycle": [[p.edge, str(p.offset)] for p in orbit], "period": pp.period}
    return False, {}


def classify_maximal_omega(m: PLGraphMap, x: GraphPoint, params: OmegaParams | None = None) -> OmegaClass:
    params = params or OmegaParams()
    omega = omega_limit_approx(m, x, params.n_transient, params.n_sample, params.eps)
    notes = [f"observed maximal at resolution eps={params.eps}"]
    cyc, ev = _is_cycle(m, omega, params)
    if cyc:
        return OmegaClass(CYCLE, omega, None, ev, notes)
    if omega.exact_cycle is not None:
        notes.append(f"exact period {omega.period} > period_max={params.period_max}: treated as infinite")
    try:
        P = compute_P_omega(m, omega, params.refinement_depth, params.period_max, params.max_branches)
    except UnsupportedInput as err:
        return OmegaClass(UNCLASSIFIED, omega, None, {}, notes + [str(err)])
    ms = P.measures
    nowhere_dense = len(ms) >= 3 and ms[-1] < 0.5 * ms[0] and ms[-3] > ms[-2] > ms[-1]
    evidence = {"components": P.components, "nowhere_dense_flag": nowhere_dense,
                "periodic_witness": _pp_dict(P.witness)}
    if P.witness is not None:
        kind = BASIC
    elif nowhere_dense:
        kind = SOLENOID
        notes.append("solenoid label is a heuristic (shrinking cell measure)")
    else:
        kind = SINGULAR
        notes.append(f"no periodic point of period <= {params.period_max} within eps of the orbit")
    return OmegaClass(kind, omega, P, evidence, notes)


# -- B-sets ----------------------------------------------------------------------------------------
@dataclass
class BSet:
    cells: tuple[Arc, ...]
    union: ArcUnion
    partition_size: int

    @property
    def measure(self):
        return self.union.measure()

    @property
    def infinite(self) -> bool:
        return self.measure > 0

    def triples(self):
        return sorted((e, str(lo), str(hi)) for e, lo, hi in self.union.items())


def _as_union(M) -> ArcUnion:
    if isinstance(M, ArcUnion):
        return M
    if isinstance(M, POmega):
        return M.arcs
    return _union(list(M))


def _covered_by(u: ArcUnion, M: ArcUnion) -> bool:
    return all(
        any(lo2 <= lo and hi <= hi2 for lo2, hi2 in M.intervals.get(e, ())) for e, lo, hi in u.items() if lo < hi
    )


def compute_B_set(m: PLGraphMap, M, refinement_depth: int = 6, eps: float = 0.01,
                  cap: int = 20_000) -> BSet:
    """Cells of M whose forward orbit (from the cell itself) covers M.

    The partition is the level-``refinement_depth`` Markov refinement split
    once more at every cell midpoint, so each tested cell is strictly smaller
    than the cells used for P-omega.
    """
    Mu = _as_union(M)
    if not Mu.arcs():
        return BSet((), ArcUnion(), 0)
    image = m.image_of_union(Mu)
    if not _covered_by(image, Mu):
        raise InputError("M is not forward invariant")
    md0 = m.refined_markov(refinement_depth, resolution=eps, cap=cap)
    if md0 is None:
        raise UnsupportedInput(f"{m.name}: no finite Markov refinement")
    mids = [c.midpoint for c in md0.partition]
    pts = m.forward_closure(mids + [GraphPoint(e, t) for e, s in md0.points.items() for t in s], cap=cap)
    if pts is None:
        raise UnsupportedInput(f"{m.name}: midpoint refinement exceeds the point cap")
    md = m.markov_from_points(pts)
    inside = {i for i, c in enumerate(md.partition) if Mu.covers(c)}
    reach = _ReachIndex(md)
    good = [md.partition[i] for i in sorted(inside) if inside <= reach.closed(i)]
    return BSet(tuple(good), _union(good), len(md.partition))


# -- basic set checks ------------------------------------------------------------------------------
def _primitive(md: MarkovData, cells: set[int]) -> bool:
    G = nx.DiGraph()
    G.add_nodes_from(cells)
    for i in cells:
        G.add_edges_from((i, int(j)) for j in md.successors(i) if int(j) in cells)
    return len(G) > 0 and nx.is_strongly_connected(G) and nx.is_aperiodic(G)


def _eventual_cover(md: MarkovData, sources: list[int], targets: set[int], n_limit: int = 60,
                    stable: int = 10) -> int | None:
    """Least N with every target reached at exactly n steps from every source, for N <= n <= N + stable."""
    A = (md.transition_matrix > 0).astype(np.int64)
    tgt = np.array(sorted(targets))
    ok_since = None
    rows = np.zeros((len(sources), len(A)), dtype=np.int64)
    rows[np.arange(len(sources)), sources] = 1
    for n in range(1, n_limit + 1):
        rows = np.minimum(rows @ A, 1)
        if rows[:, tgt].all():
            if ok_since is None:
                ok_since = n
            if n - ok_since >= stable:
                return ok_since
        else:
            ok_since = None
    return None


def basic_set_property_check(m: PLGraphMap, cls: OmegaClass, params: OmegaParams | None = None,
                             horseshoe_n_max: int = 6, sample_cells: int = 8) -> dict:
    """Checks of perfectness, the entropy bound, density of periodic points,
    a horseshoe for some iterate and eventual covering of interior cells."""
    params = params or OmegaParams()
    if cls.kind != BASIC or cls.p_omega is None:
        raise InputError("basic_set_property_check needs a Basic classification")
    omega, P, eps = cls.omega, cls.p_omega, cls.omega.eps
    g = m.graph
    report: dict = {}

    ne, no = omega.net_arrays(m)
    isolated = 0
    for i in range(len(ne)):
        d = g.distance_arrays(np.full(len(ne), ne[i]), np.full(len(ne), no[i]), ne, no)
        d[i] = np.inf
        isolated += int(d.min() > 2 * eps)
    report["perfect"] = {"pass": isolated == 0, "isolated_net_points": isolated}

    h = spectral_entropy_oracle(m)
    bound = math.log(2) / (2 * P.components)
    report["entropy_bound"] = {"pass": h is not None and h >= bound - 1e-9, "h": h,
                               "periodic_portions": P.components, "bound": bound}

    md = m.refined_markov(params.refinement_depth, resolution=eps)
    meeting = sorted(_cells_meeting(m, md, omega.net))
    pers = periodic_points(m, params.period_max, params.max_branches)
    offsets: dict[str, list] = {e.id: [] for e in g.edges}
    for pp in pers:
        v = g.vertex_of(pp.point)
        for e, t in (g.incident_ends(v) if v is not None else [(pp.point.edge, pp.point.offset)]):
            offsets[e].append(t)
        if pp.interval is not None:
            offsets[pp.interval.edge].extend([pp.interval.lo, pp.interval.hi])
    for v in offsets.values():
        v.sort()
    missing = 0
    for i in meeting:
        c = md.partition[i]
        offs = offsets[c.edge]
        k = bisect.bisect_left(offs, c.lo)
        if not (k < len(offs) and offs[k] <= c.hi):
            missing += 1
    report["periodic_dense"] = {"pass": missing == 0, "cells_checked": len(meeting),
                                "cells_without_periodic_point": missing}

    cert = detect_horseshoe(m, horseshoe_n_max)
    report["horseshoe"] = {"pass": cert is not None, "n": cert.n if cert else None}

    md1 = m.refined_markov(1, resolution=eps)
    pcells = {i for i, c in enumerate(md1.partition) if P.arcs.covers(c)}
    if not _primitive(md1, pcells):
        report["eventual_cover"] = {"pass": None, "applicable": False,
                                    "reason": "P_omega contains a proper periodic subgraph"}
    else:
        boundary = {g.canonical(GraphPoint(e, t)) for e, lo, hi in P.arcs.items() for t in (lo, hi)}
        interior = {i for i in pcells
                    if not ({g.canonical(GraphPoint(md1.partition[i].edge, t))
                             for t in (md1.partition[i].lo, md1.partition[i].hi)} & boundary)
                    or g.total_length == P.arcs.measure()}
        src = sorted(set(_cells_meeting(m, md1, omega.net)) & pcells)
        step = max(1, len(src) // sample_cells)
        src = src[::step][:sample_cells]
        N = _eventual_cover(md1, src, interior) if interior and src else None
        report["eventual_cover"] = {"pass": N is not None, "applicable": True, "N": N,
                                    "sources": len(src), "targets": len(interior)}
    return report


# -- cycle plus witness ----------------------------------------------------------------------------
def seed_points(m: PLGraphMap, count: int, q: int = 1_000_003) -> list[GraphPoint]:
    """Deterministic rational seeds spread over all edges (golden-ratio sequence, prime denominator)."""
    phi = (math.sqrt(5) - 1) / 2
    edges = m.graph.edges
    out = []
    for i in range(count):
        e = edges[i % len(edges)]
        a = int(((i + 1) * phi % 1.0) * (q - 1)) + 1
        out.append(GraphPoint(e.id, e.length * Fraction(a, q)))
    return out


def cycle_plus_witness(m: PLGraphMap, params: OmegaParams | None = None, seeds: int = 8) -> dict | None:
    """A point whose omega-limit contains a periodic orbit (within eps) and
    also a point at distance >= 2 eps from that orbit."""
    params = params or OmegaParams()
    pers = [pp for pp in periodic_points(m, params.period_max, params.max_branches) if pp.interval is None]
    if not pers:
        return None
    for x in seed_points(m, seeds):
        omega = omega_limit_approx(m, x, params.n_transient, params.n_sample, params.eps)
        if omega.exact_cycle is not None and omega.period <= params.period_max:
            continue
        for pp in pers:
            orbit = _orbit_of(m, pp)
            if max(_distance_to_points(m, omega, [p]).min() for p in orbit) > omega.eps:
                continue
            far = _distance_to_points(m, omega, orbit)
            k = int(np.argmax(far))
            if far[k] >= 2 * omega.eps:
                return {"x": [x.edge, str(x.offset)],
                        "cycle": [[p.edge, str(p.offset)] for p in orbit],
                        "far_point": [omega.net[k].edge, float(omega.net[k].offset)],
                        "far_distance": float(far[k])}
    return None
