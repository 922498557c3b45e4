"""Finite metric graphs with the shortest-path metric.

Edges carry an arc-length coordinate (offset) running from the first endpoint
(offset 0) to the second (offset = length). Lengths and offsets are kept as
``Fraction`` whenever the input allows it so that covering checks are exact;
float offsets are accepted and compared with ``MetricGraph.tol``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from numbers import Real
from typing import Iterable, Sequence

import networkx as nx
import numpy as np


class InputError(ValueError):
    """Invalid user input (bad ids, out-of-range offsets, violated preconditions)."""


def as_number(value) -> Real:
    """Turn ints/strings/Fractions into Fractions; floats stay floats."""
    if isinstance(value, float):
        return value
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    return value


@dataclass(frozen=True)
class Edge:
    id: str
    u: str
    v: str
    length: Fraction

    @property
    def is_loop(self) -> bool:
        return self.u == self.v


@dataclass(frozen=True, order=True)
class GraphPoint:
    edge: str
    offset: Real

    def __repr__(self) -> str:
        return f"GraphPoint({self.edge!r}, {self.offset})"


@dataclass(frozen=True, order=True)
class Arc:
    edge: str
    lo: Real
    hi: Real

    def __post_init__(self):
        if not self.lo < self.hi:
            raise InputError(f"degenerate arc on {self.edge}: [{self.lo}, {self.hi}]")

    @property
    def length(self):
        return self.hi - self.lo

    @property
    def midpoint(self) -> GraphPoint:
        return GraphPoint(self.edge, (self.lo + self.hi) / 2)

    def contains_offset(self, t) -> bool:
        return self.lo <= t <= self.hi

    def contains(self, other: "Arc") -> bool:
        return self.edge == other.edge and self.lo <= other.lo and other.hi <= self.hi

    def as_tuple(self):
        return (self.edge, self.lo, self.hi)


@dataclass(frozen=True)
class MetricGraph:
    """Connected finite graph; loops and parallel edges are allowed."""

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    tol: float = 1e-9
    _edge_map: dict = field(init=False, repr=False, compare=False, hash=False)

    def __init__(self, vertices: Iterable[str], edges: Iterable, tol: float = 1e-9):
        verts = tuple(str(v) for v in vertices)
        es = []
        for e in edges:
            if isinstance(e, Edge):
                es.append(e)
            else:
                eid, (u, v), length = e if len(e) == 3 else (e[0], (e[1], e[2]), e[3])
                es.append(Edge(str(eid), str(u), str(v), as_number(length)))
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", tuple(es))
        object.__setattr__(self, "tol", tol)
        object.__setattr__(self, "_edge_map", {e.id: e for e in es})
        self._validate()

    def _validate(self):
        if not self.edges:
            raise InputError("graph needs at least one edge")
        if len(set(self.vertices)) != len(self.vertices):
            raise InputError("duplicate vertex id")
        if len(self._edge_map) != len(self.edges):
            raise InputError("duplicate edge id")
        vset = set(self.vertices)
        for e in self.edges:
            if e.u not in vset or e.v not in vset:
                raise InputError(f"edge {e.id} references unknown vertex")
            if not e.length > 0:
                raise InputError(f"edge {e.id} has non-positive length")
        g = nx.MultiGraph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from((e.u, e.v) for e in self.edges)
        if not nx.is_connected(g):
            raise InputError("graph is not connected")

    # -- lookup -----------------------------------------------------------
    def edge(self, eid: str) -> Edge:
        try:
            return self._edge_map[eid]
        except KeyError:
            raise InputError(f"unknown edge id {eid!r}") from None

    @cached_property
    def edge_index(self) -> dict[str, int]:
        return {e.id: i for i, e in enumerate(self.edges)}

    @cached_property
    def vertex_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def vertex_distances(self) -> dict:
        """Exact all-pairs shortest-path lengths between vertices."""
        g = nx.MultiGraph()
        g.add_nodes_from(self.vertices)
        for e in self.edges:
            if not e.is_loop:
                g.add_edge(e.u, e.v, weight=e.length)
        dist = nx.floyd_warshall(g)
        return {u: dict(row) for u, row in dist.items()}

    @cached_property
    def vertex_distance_matrix(self) -> np.ndarray:
        n = len(self.vertices)
        out = np.zeros((n, n))
        for u, row in self.vertex_distances.items():
            for v, d in row.items():
                out[self.vertex_index[u], self.vertex_index[v]] = float(d)
        return out

    @cached_property
    def total_length(self):
        return sum(e.length for e in self.edges)

    @cached_property
    def diameter(self) -> float:
        """Largest distance between two points of the graph (computed on a fine sample)."""
        pts = []
        for e in self.edges:
            for k in range(33):
                pts.append(GraphPoint(e.id, e.length * Fraction(k, 32)))
        ei = np.array([self.edge_index[p.edge] for p in pts])
        off = np.array([float(p.offset) for p in pts])
        best = 0.0
        for i in range(len(pts)):
            d = self.distance_arrays(np.full(len(pts), ei[i]), np.full(len(pts), off[i]), ei, off)
            best = max(best, float(d.max()))
        return best

    # -- points -------------------------------------------------------------
    def check_point(self, p: GraphPoint) -> GraphPoint:
        e = self.edge(p.edge)
        if isinstance(p.offset, float):
            if p.offset < -self.tol or p.offset > float(e.length) + self.tol:
                raise InputError(f"offset {p.offset} outside edge {e.id}")
        elif p.offset < 0 or p.offset > e.length:
            raise InputError(f"offset {p.offset} outside edge {e.id}")
        return p

    def _at_start(self, e: Edge, t) -> bool:
        return t <= self.tol if isinstance(t, float) else t == 0

    def _at_end(self, e: Edge, t) -> bool:
        if isinstance(t, float):
            return t >= float(e.length) - self.tol
        return t == e.length

    def vertex_of(self, p: GraphPoint) -> str | None:
        """Vertex id if the point sits on a vertex, else None."""
        e = self.edge(p.edge)
        if self._at_start(e, p.offset):
            return e.u
        if self._at_end(e, p.offset):
            return e.v
        return None

    @cached_property
    def _vertex_rep(self) -> dict[str, GraphPoint]:
        reps: dict[str, GraphPoint] = {}
        for e in sorted(self.edges, key=lambda e: e.id):
            reps.setdefault(e.u, GraphPoint(e.id, Fraction(0)))
            reps.setdefault(e.v, GraphPoint(e.id, e.length))
        return reps

    def vertex_point(self, v: str) -> GraphPoint:
        return self._vertex_rep[v]

    def canonical(self, p: GraphPoint) -> GraphPoint:
        self.check_point(p)
        v = self.vertex_of(p)
        return self._vertex_rep[v] if v is not None else p

    def same_point(self, p: GraphPoint, q: GraphPoint) -> bool:
        a, b = self.canonical(p), self.canonical(q)
        if a.edge != b.edge:
            return False
        if isinstance(a.offset, float) or isinstance(b.offset, float):
            return abs(float(a.offset) - float(b.offset)) <= self.tol
        return a.offset == b.offset

    def incident_ends(self, v: str) -> list[tuple[str, Fraction]]:
        """(edge, offset) pairs of all edge ends at vertex v (loops contribute two)."""
        out = []
        for e in self.edges:
            if e.u == v:
                out.append((e.id, Fraction(0)))
            if e.v == v:
                out.append((e.id, e.length))
        return out

    # -- metric -------------------------------------------------------------
    def distance(self, x: GraphPoint, y: GraphPoint):
        """Shortest-path distance; exact for Fraction offsets."""
        self.check_point(x)
        self.check_point(y)
        ex, ey = self.edge(x.edge), self.edge(y.edge)
        a, b = x.offset, y.offset
        vd = self.vertex_distances
        best = None
        if ex.id == ey.id:
            best = abs(a - b)
        for vx, cx in ((ex.u, a), (ex.v, ex.length - a)):
            for vy, cy in ((ey.u, b), (ey.v, ey.length - b)):
                d = cx + vd[vx][vy] + cy
                if best is None or d < best:
                    best = d
        return best

    def distance_arrays(self, e1, o1, e2, o2) -> np.ndarray:
        """Elementwise float distances for points given as edge-index/offset arrays."""
        e1 = np.asarray(e1, dtype=np.int64)
        e2 = np.asarray(e2, dtype=np.int64)
        o1 = np.asarray(o1, dtype=float)
        o2 = np.asarray(o2, dtype=float)
        us, vs, ls = self._edge_arrays
        D = self.vertex_distance_matrix
        l1, l2 = ls[e1], ls[e2]
        best = np.where(e1 == e2, np.abs(o1 - o2), np.inf)
        for p1, c1 in ((us[e1], o1), (vs[e1], l1 - o1)):
            for p2, c2 in ((us[e2], o2), (vs[e2], l2 - o2)):
                best = np.minimum(best, c1 + D[p1, p2] + c2)
        return best

    @cached_property
    def _edge_arrays(self):
        us = np.array([self.vertex_index[e.u] for e in self.edges])
        vs = np.array([self.vertex_index[e.v] for e in self.edges])
        ls = np.array([float(e.length) for e in self.edges])
        return us, vs, ls

    # -- arcs ---------------------------------------------------------------
    def check_arc(self, a: Arc) -> Arc:
        e = self.edge(a.edge)
        if a.lo < 0 or a.hi > e.length:
            raise InputError(f"arc {a} leaves edge {e.id}")
        return a

    def arc_vertices(self, a: Arc) -> set[str]:
        e = self.edge(a.edge)
        out = set()
        if self._at_start(e, a.lo):
            out.add(e.u)
        if self._at_end(e, a.hi):
            out.add(e.v)
        return out

    def arcs_disjoint(self, a: Arc, b: Arc) -> bool:
        """True iff the closed arcs share no point."""
        self.check_arc(a)
        self.check_arc(b)
        if a.edge == b.edge and not (a.hi < b.lo or b.hi < a.lo):
            return False
        return not (self.arc_vertices(a) & self.arc_vertices(b))

    def full_arc(self, eid: str) -> Arc:
        return Arc(eid, Fraction(0), self.edge(eid).length)


def distance(g: MetricGraph, x: GraphPoint, y: GraphPoint):
    return g.distance(x, y)


def arcs_disjoint(g: MetricGraph, a: Arc, b: Arc) -> bool:
    return g.arcs_disjoint(a, b)


# -- small constructors used by the corpus and tests --------------------------
def interval(length=1) -> MetricGraph:
    return MetricGraph(["0", "1"], [("I", ("0", "1"), length)])


def circle(circumference=1) -> MetricGraph:
    return MetricGraph(["o"], [("S", ("o", "o"), circumference)])


def star(branches: Sequence[str] = ("A", "B", "C"), length=1) -> MetricGraph:
    """Star with the centre at offset 0 of every branch."""
    verts = ["c"] + [f"{b}_end" for b in branches]
    return MetricGraph(verts, [(b, ("c", f"{b}_end"), length) for b in branches])
