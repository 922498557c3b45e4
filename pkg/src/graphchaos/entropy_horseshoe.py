"""Topological entropy: separated-set estimates, a spectral oracle for Markov
maps, and exact horseshoe certificates."""
from __future__ import annotations

import bisect
import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse.csgraph import connected_components

from .graph_map import ArcUnion, Branch, PLGraphMap
from .metric_graph import Arc, MetricGraph

GOLDEN = (math.sqrt(5) - 1) / 2
EXTRAPOLATION_RULE = "h_est = max over eps of the slope of log s_n(eps) between the two largest n"


# -- separated sets ----------------------------------------------------------------------------
@dataclass
class EntropyEstimate:
    n_list: list[int]
    eps_list: list[float]
    s: dict[tuple[int, float], int]
    h_est: float
    method: str = "separated"
    metadata: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "eps", "s_n", "log s_n / n"])
        for (n, eps), s in sorted(self.s.items()):
            w.writerow([n, f"{eps:.6g}", s, f"{math.log(s) / n:.6f}"])
        return buf.getvalue()

    def as_dict(self) -> dict:
        return {
            "method": self.method,
            "h_est": self.h_est,
            "table": [{"n": n, "eps": e, "s_n": s} for (n, e), s in sorted(self.s.items())],
            **self.metadata,
        }


def _seed_grid(m: PLGraphMap, eps: float, n_top: int, density: int, target: int):
    """Uniform grids on short seed arcs (one per edge) fine enough that
    consecutive points are ``eps / density`` apart after n_top - 1 steps of
    maximal expansion."""
    g = m.graph
    lip = max(1.0, float(m.lipschitz))
    spacing = eps / (density * lip ** (n_top - 1))
    edges, offs = [], []
    for k, e in enumerate(g.edges):
        length = float(e.length)
        width = min(0.5 * length, spacing * density * target)
        start = GOLDEN * (length - width)
        count = int(round(width / spacing)) + 1
        offs.append(start + spacing * np.arange(count))
        edges.append(np.full(count, k, dtype=np.int64))
    return np.concatenate(edges), np.concatenate(offs)


def _float_orbits(m: PLGraphMap, e0: np.ndarray, o0: np.ndarray, n: int):
    E = np.empty((len(e0), n), dtype=np.int64)
    O = np.empty((len(e0), n))
    E[:, 0], O[:, 0] = e0, o0
    for i in range(1, n):
        E[:, i], O[:, i] = m.evaluate_arrays(E[:, i - 1], O[:, i - 1])
    return E, O


def greedy_separated_count(graph: MetricGraph, E: np.ndarray, O: np.ndarray, n: int, eps: float) -> int:
    """Size of the lexicographic greedy (n, eps)-separated subset of the sampled orbits."""
    last_e, last_o = E[:, n - 1], O[:, n - 1]
    lengths = graph._edge_arrays[2]
    buckets: dict[tuple[int, int], list[int]] = {}
    ends: dict[str, list[tuple[int, int]]] = {}
    for e in graph.edges:
        k = graph.edge_index[e.id]
        top = int(lengths[k] // eps)
        ends.setdefault(e.u, []).append((k, 0))
        ends.setdefault(e.v, []).append((k, top))
    vertex_of_bucket = {}
    for v, lst in ends.items():
        for key in lst:
            vertex_of_bucket.setdefault(key, []).append(v)

    def neighbours(key):
        k, b = key
        out = [(k, b - 1), (k, b), (k, b + 1)]
        for kk, bb in ((k, b), (k, b - 1), (k, b + 1)):
            for v in vertex_of_bucket.get((kk, bb), ()):
                out.extend(ends[v])
        return set(out)

    selected: list[int] = []
    Es, Os = E[:, :n], O[:, :n]
    for i in range(len(last_e)):
        key = (int(last_e[i]), int(last_o[i] // eps))
        cands = [j for nb in neighbours(key) for j in buckets.get(nb, ())]
        if cands:
            cj = np.asarray(cands)
            d = graph.distance_arrays(
                np.broadcast_to(Es[i], (len(cj), n)).ravel(), np.broadcast_to(Os[i], (len(cj), n)).ravel(),
                Es[cj].ravel(), Os[cj].ravel(),
            ).reshape(len(cj), n)
            if np.any(d.max(axis=1) <= eps):
                continue
        selected.append(i)
        buckets.setdefault(key, []).append(i)
    return len(selected)


def separated_entropy(m: PLGraphMap, n_list: Sequence[int] = (6, 10, 14, 17, 18),
                      eps_list: Sequence[float] = (1e-3,), sample_density: int = 10,
                      target: int = 400) -> EntropyEstimate:
    """Greedy (n, eps)-separated sets on dense seed grids; s_n values are lower bounds."""
    if not n_list or not eps_list:
        raise ValueError("n_list and eps_list must be nonempty")
    if sample_density < 10:
        raise ValueError("sample_density must be at least 10 points per eps")
    n_list = sorted(set(int(n) for n in n_list))
    eps_list = sorted(set(float(e) for e in eps_list))
    n_top = n_list[-1]
    raw: dict[tuple[int, float], int] = {}
    for eps in eps_list:
        e0, o0 = _seed_grid(m, eps, n_top, sample_density, target)
        E, O = _float_orbits(m, e0, o0, n_top)
        for n in n_list:
            raw[(n, eps)] = greedy_separated_count(m.graph, E, O, n, eps)
    # s_n(eps) is nonincreasing in eps; a lower bound at a larger eps is one at a smaller eps too
    s = {}
    for n in n_list:
        best = 0
        for eps in reversed(eps_list):
            best = max(best, raw[(n, eps)])
            s[(n, eps)] = best
    h = 0.0
    if len(n_list) >= 2:
        n1, n2 = n_list[-2], n_list[-1]
        h = max(max((math.log(s[(n2, e)]) - math.log(s[(n1, e)])) / (n2 - n1) for e in eps_list), 0.0)
    return EntropyEstimate(n_list, eps_list, s, h, "separated",
                           {"rule": EXTRAPOLATION_RULE, "lower_bound": True, "sample_density": sample_density})


# -- spectral oracle ---------------------------------------------------------------------------------
def spectral_radius(A, tol: float = 1e-12, max_iter: int = 10_000) -> float:
    """Perron root of a nonnegative matrix.

    Each strongly connected block B is handled by power iteration on B + I
    (primitive, so it converges) with Collatz-Wielandt bounds as the stopping test.
    """
    A = np.asarray(A, dtype=float)
    if A.size == 0:
        return 0.0
    ncomp, labels = connected_components(A > 0, directed=True, connection="strong")
    best = 0.0
    for c in range(ncomp):
        idx = np.nonzero(labels == c)[0]
        B = A[np.ix_(idx, idx)]
        if len(idx) == 1 and B[0, 0] == 0:
            continue
        M = B + np.eye(len(idx))
        v = np.ones(len(idx))
        lo, hi = 0.0, np.inf
        for _ in range(max_iter):
            w = M @ v
            r = w / v
            lo, hi = r.min(), r.max()
            if hi - lo <= tol * hi:
                break
            v = w / w.max()
        best = max(best, 0.5 * (lo + hi) - 1.0)
    return best


def spectral_entropy_oracle(m: PLGraphMap) -> float | None:
    """log of the Perron root of the Markov transition matrix.

    Non-Markov maps return None, except maps with Lipschitz constant <= 1,
    whose entropy is 0 regardless of Markov structure.
    """
    md = m.markov_data()
    if md is None:
        return 0.0 if m.lipschitz <= 1 else None
    return math.log(max(spectral_radius(md.transition_matrix), 1.0))


def oracle_method(m: PLGraphMap) -> str:
    if m.markov_data() is not None:
        return "spectral"
    return "lipschitz<=1" if m.lipschitz <= 1 else "not Markov"


# -- horseshoes ------------------------------------------------------------------------------------
@dataclass
class HorseshoeCertificate:
    n: int
    U: Arc
    V: Arc
    image_U: ArcUnion
    image_V: ArcUnion
    # (a, b) -> branch of f^n on a sub-arc of A_a mapping onto a superset of A_b
    branches: dict = field(default_factory=dict, repr=False)
    notes: list[str] = field(default_factory=list)

    def arcs(self) -> tuple[Arc, Arc]:
        return self.U, self.V

    def as_dict(self) -> dict:
        def arc(a):
            return [a.edge, str(a.lo), str(a.hi)]
        return {
            "n": self.n,
            "U": arc(self.U),
            "V": arc(self.V),
            "f^n(U)": [[e, str(lo), str(hi)] for e, lo, hi in self.image_U.items()],
            "f^n(V)": [[e, str(lo), str(hi)] for e, lo, hi in self.image_V.items()],
            "notes": self.notes,
        }


def verify_certificate(m: PLGraphMap, cert: HorseshoeCertificate) -> bool:
    """Independent exact re-check of disjointness and both covering relations."""
    if not m.graph.arcs_disjoint(cert.U, cert.V):
        return False
    for a in (cert.U, cert.V):
        img = m.iterated_image(a, cert.n)
        if not (img.covers(cert.U) and img.covers(cert.V)):
            return False
    return True


def covering_branch(m: PLGraphMap, source: Arc, target: Arc, n: int) -> Branch | None:
    """A branch of f^n on ``source`` whose image contains ``target``, restricted so it maps onto it."""
    for br in m.branches(source, n):
        tgt, lo, hi = br.image
        if br.alpha != 0 and tgt == target.edge and lo <= target.lo and target.hi <= hi:
            u, w = br.inverse(target.lo), br.inverse(target.hi)
            return Branch(br.edge, min(u, w), max(u, w), br.target, br.alpha, br.beta)
    return None


def _shrunk(cell: Arc, fractions=(Fraction(0), Fraction(1, 64), Fraction(1, 32))) -> list[Arc]:
    out = []
    for f in fractions:
        d = cell.length * f
        variants = [(cell.lo, cell.hi)] if d == 0 else [
            (cell.lo + d, cell.hi - d), (cell.lo, cell.hi - d), (cell.lo + d, cell.hi)]
        for lo, hi in variants:
            a = Arc(cell.edge, lo, hi)
            if a not in out:
                out.append(a)
    return out


def candidate_cells(m: PLGraphMap, level: int) -> list[Arc]:
    md = m.refined_markov(level, resolution=0.0, cap=4000) if level else m.markov_data()
    if md is not None:
        return list(md.partition)
    cells = []
    for e in m.graph.edges:
        pts = sorted({Fraction(j, 2 ** (level + 1)) * e.length for j in range(2 ** (level + 1) + 1)}
                     | set(m.breakpoints[e.id]))
        cells.extend(Arc(e.id, a, b) for a, b in zip(pts, pts[1:]))
    return cells


def _find_pair(m: PLGraphMap, cands: list[Arc], images: list[ArcUnion], n: int) -> HorseshoeCertificate | None:
    by_edge: dict[str, list[tuple]] = {}
    for i, c in enumerate(cands):
        by_edge.setdefault(c.edge, []).append((c.lo, c.hi, i))
    for lst in by_edge.values():
        lst.sort()
    keys = {e: [x[0] for x in lst] for e, lst in by_edge.items()}
    covered = []
    for img in images:
        cov = set()
        for e, lo, hi in img.items():
            lst = by_edge.get(e)
            if not lst:
                continue
            k = bisect.bisect_left(keys[e], lo)
            for clo, chi, j in lst[k:]:
                if clo > hi:
                    break
                if chi <= hi:
                    cov.add(j)
        covered.append(cov)
    g = m.graph
    for i, U in enumerate(cands):
        if i not in covered[i]:
            continue
        for j in sorted(covered[i]):
            if j <= i or j not in covered[j] or i not in covered[j]:
                continue
            V = cands[j]
            if not g.arcs_disjoint(U, V):
                continue
            branches = {}
            for a, A in ((0, U), (1, V)):
                for b, B in ((0, U), (1, V)):
                    br = covering_branch(m, A, B, n)
                    if br is None:
                        break
                    branches[(a, b)] = br
            if len(branches) < 4:
                continue
            return HorseshoeCertificate(n, U, V, images[i], images[j], branches)
    return None


def detect_horseshoe(m: PLGraphMap, n_max: int = 6, candidate_source: Iterable[Arc] | None = None,
                     max_level: int = 2) -> HorseshoeCertificate | None:
    """Smallest iterate n <= n_max with a verified horseshoe among candidate arcs.

    Candidates are Markov cells (refined up to ``max_level``) shrunk by 0, 1/64
    and 1/32 of their length, or the given ``candidate_source``. None means no
    certificate at this depth, not absence of a horseshoe.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if candidate_source is not None:
        levels = [list(candidate_source)]
    else:
        levels, seen_sizes = [], set()
        for level in range(max_level + 1):
            cells = candidate_cells(m, level)
            if len(cells) in seen_sizes:
                continue
            seen_sizes.add(len(cells))
            levels.append(cells)
    cand_lists = [[a for c in cells for a in _shrunk(c)] if candidate_source is None else cells
                  for cells in levels]
    images = [[ArcUnion.from_intervals([a.as_tuple()]) for a in cands] for cands in cand_lists]
    for n in range(1, n_max + 1):
        for k, cands in enumerate(cand_lists):
            images[k] = [m.image_of_union(u) for u in images[k]]
            cert = _find_pair(m, cands, images[k], n)
            if cert is not None:
                if not verify_certificate(m, cert):  # pragma: no cover - soundness guard
                    raise AssertionError("horseshoe certificate failed re-verification")
                return cert
    return None


@dataclass
class EntropyEvidence:
    positive: bool
    oracle: float | None
    oracle_method: str
    certificate: HorseshoeCertificate | None
    separated: EntropyEstimate | None

    def as_dict(self) -> dict:
        return {
            "positive": self.positive,
            "h_oracle": self.oracle,
            "oracle_method": self.oracle_method,
            "horseshoe": self.certificate.as_dict() if self.certificate else None,
            "separated": self.separated.as_dict() if self.separated else None,
        }


def entropy_positive(m: PLGraphMap, thresholds: dict | None = None, with_separated: bool = True,
                     certificate: HorseshoeCertificate | None = None) -> EntropyEvidence:
    th = {"oracle_min": 1e-9, "horseshoe_n_max": 6, **(thresholds or {})}
    oracle = spectral_entropy_oracle(m)
    cert = certificate or detect_horseshoe(m, th["horseshoe_n_max"])
    positive = (oracle is not None and oracle > th["oracle_min"]) or cert is not None
    sep = separated_entropy(m) if with_separated else None
    return EntropyEvidence(positive, oracle, oracle_method(m), cert, sep)
