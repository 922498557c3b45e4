"""Line-oriented text format for graph maps.

::

    # comment
    vertex <id>
    edge <id> <v1> <v2> <length>
    piece <edge> <t0> <t1> -> <edge'> <s0> <s1>

Numbers are integers, decimals or ``p/q`` rationals and are read exactly.
"""
from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from .graph_map import ContinuityError, Piece, PLGraphMap
from .metric_graph import InputError, MetricGraph


class MapFormatError(InputError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


def _num(tok: str, lineno: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise MapFormatError(lineno, f"bad number {tok!r}") from None


def parse_map(text: str, name: str = "map") -> PLGraphMap:
    vertices, edges, pieces = [], [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kind = tok[0]
        if kind == "vertex":
            if len(tok) != 2:
                raise MapFormatError(lineno, "expected: vertex <id>")
            vertices.append(tok[1])
        elif kind == "edge":
            if len(tok) != 5:
                raise MapFormatError(lineno, "expected: edge <id> <v1> <v2> <length>")
            edges.append((tok[1], (tok[2], tok[3]), _num(tok[4], lineno)))
        elif kind == "piece":
            if len(tok) != 8 or tok[4] != "->":
                raise MapFormatError(lineno, "expected: piece <edge> <t0> <t1> -> <edge> <s0> <s1>")
            pieces.append(Piece(tok[1], _num(tok[2], lineno), _num(tok[3], lineno), tok[5],
                                _num(tok[6], lineno), _num(tok[7], lineno), lineno))
        elif kind == "name":
            name = " ".join(tok[1:])
        else:
            raise MapFormatError(lineno, f"unknown directive {kind!r}")
    if not edges:
        raise MapFormatError(0, "no edges defined")
    try:
        graph = MetricGraph(vertices, edges)
    except MapFormatError:
        raise
    except InputError as exc:
        raise MapFormatError(0, str(exc)) from None
    try:
        return PLGraphMap(graph, pieces, name=name)
    except ContinuityError as exc:
        raise MapFormatError(exc.line or 0, exc.detail) from None


def load_map(path: str | Path) -> PLGraphMap:
    path = Path(path)
    return parse_map(path.read_text(), name=path.stem)


def dump_map(m: PLGraphMap) -> str:
    lines = [f"name {m.name}"]
    lines += [f"vertex {v}" for v in m.graph.vertices]
    lines += [f"edge {e.id} {e.u} {e.v} {e.length}" for e in m.graph.edges]
    for e, ps in m.pieces.items():
        for p in ps:
            lines.append(f"piece {e} {p.t0} {p.t1} -> {p.target} {p.s0} {p.s1}")
    return "\n".join(lines) + "\n"
