"""Equivalence harness over a corpus of maps and single-map analysis reports."""
from __future__ import annotations

import datetime as _dt
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

from .chaos_stats import (DC1, DC2, DC3, ChaosParams, GraphSystem, classify_pair, distributional_functions,
                          verify_scrambled_set)
from .corpus import CorpusEntry
from .entropy_horseshoe import (detect_horseshoe, entropy_positive, oracle_method, separated_entropy,
                                spectral_entropy_oracle, verify_certificate)
from .graph_map import PLGraphMap
from .metric_graph import InputError
from .omega_limits import BASIC, OmegaParams, basic_set_property_check, classify_maximal_omega, seed_points
from .shift_space import DecodedSystem, build_scrambled_family, decoded_invariance, family_params

PREDICATES = ("entropy_positive", "horseshoe", "invariant_li_yorke", "uniform_invariant_dc1", "dc_pair")
DC_KINDS = (DC1, DC2, DC3)


@dataclass(frozen=True)
class SuiteParams:
    horseshoe_n_max: int = 8
    n_max: int = 100_000
    sample_k: int = 5
    sample_J: int = 0
    depth: int = 30
    pair_search: int = 4
    with_separated: bool = False
    workers: int = 1


@dataclass
class EquivalenceRow:
    map: str
    values: dict = field(default_factory=dict)  # predicate name -> bool
    evidence: dict = field(default_factory=dict)
    error: str | None = None

    @property
    def complete(self) -> bool:
        return self.error is None and all(isinstance(self.values.get(p), bool) for p in PREDICATES)

    @property
    def verdict(self) -> str:
        if not self.complete:
            return "FAIL"
        return "PASS" if len({self.values[p] for p in PREDICATES}) == 1 else "FAIL"

    def as_dict(self) -> dict:
        return {"map": self.map, "verdict": self.verdict, "values": self.values,
                "evidence": self.evidence, "error": self.error}


def decoded_sample_report(m: PLGraphMap, cert, k: int = 5, J: int = 0, depth: int = 30,
                          n_max: int = 100_000) -> dict:
    """Scrambled-family sample decoded through a horseshoe, verified as an orbit set of f^n."""
    fam = build_scrambled_family(k, J=J)
    system = DecodedSystem(m, cert, depth)
    eps_shift = 0.5
    params = family_params(n_max, eps_shift, system.diameter)
    report = verify_scrambled_set(system, fam.sample, fam.closure_hint, params)
    containment = all(decoded_invariance(m, cert, w, depth) for w in fam.sample)
    return {"report": report, "containment": containment, "power": cert.n, "system": system, "family": fam}


def _dc_pair_search(m: PLGraphMap, pairs: int, n_max: int) -> tuple[bool, list]:
    system = GraphSystem(m)
    pts = seed_points(m, 2 * pairs)
    found, kinds = False, []
    for i in range(pairs):
        c = classify_pair(system, pts[2 * i], pts[2 * i + 1], ChaosParams(n_max=n_max))
        kinds.append(c.kind)
        found = found or c.kind in DC_KINDS
    return found, kinds


def evaluate_entry(entry: CorpusEntry, params: SuiteParams) -> EquivalenceRow:
    m = entry.map
    row = EquivalenceRow(entry.name)
    try:
        cert = detect_horseshoe(m, params.horseshoe_n_max)
        ent = entropy_positive(m, {"horseshoe_n_max": params.horseshoe_n_max},
                               with_separated=params.with_separated, certificate=cert)
        row.values["entropy_positive"] = bool(ent.positive)
        row.evidence["entropy"] = ent.as_dict()
        row.values["horseshoe"] = cert is not None and verify_certificate(m, cert)
        row.evidence["horseshoe"] = cert.as_dict() if cert else f"none for n <= {params.horseshoe_n_max}"
        if cert is not None:
            dec = decoded_sample_report(m, cert, params.sample_k, params.sample_J, params.depth, params.n_max)
            rep = dec["report"]
            row.values["invariant_li_yorke"] = bool(rep.scrambled and rep.invariant and dec["containment"])
            row.values["uniform_invariant_dc1"] = bool(rep.dc1_scrambled and rep.uniform and rep.invariant
                                                       and dec["containment"])
            kinds = sorted({c.kind for c in rep.classes.values()})
            row.values["dc_pair"] = any(k in DC_KINDS for k in kinds)
            row.evidence["decoded_sample"] = {"power": dec["power"], "containment": dec["containment"],
                                              "pair_kinds": kinds, **rep.as_dict()}
        else:
            row.values["invariant_li_yorke"] = False
            row.values["uniform_invariant_dc1"] = False
            row.evidence["decoded_sample"] = "no horseshoe certificate, nothing to decode"
            found, kinds = _dc_pair_search(m, params.pair_search, params.n_max)
            row.values["dc_pair"] = found
            row.evidence["dc_pair_search"] = {"pairs": params.pair_search, "kinds": kinds}
    except Exception as err:  # recorded in the row, the suite continues
        row.error = f"{type(err).__name__}: {err}"
    return row


def run_equivalence_suite(corpus: Sequence[CorpusEntry], params: SuiteParams | None = None) -> list[EquivalenceRow]:
    params = params or SuiteParams()
    if not corpus:
        raise InputError("corpus is empty")
    entries = sorted(corpus, key=lambda e: e.name)
    if params.workers > 1:
        with ProcessPoolExecutor(max_workers=min(params.workers, len(entries))) as pool:
            rows = list(pool.map(evaluate_entry, entries, [params] * len(entries)))
    else:
        rows = [evaluate_entry(e, params) for e in entries]
    return rows


def format_table(rows: Sequence[EquivalenceRow]) -> str:
    head = ["map", "P1", "P2", "P3", "P4", "P5", "verdict"]
    lines = ["  ".join(f"{h:<17}" if i == 0 else f"{h:<7}" for i, h in enumerate(head))]
    for r in rows:
        vals = ["T" if r.values.get(p) else ("F" if p in r.values else "?") for p in PREDICATES]
        lines.append("  ".join([f"{r.map:<17}"] + [f"{v:<7}" for v in vals] + [r.verdict]))
        if r.error:
            lines.append(f"    error: {r.error}")
    lines.append("P1 entropy>0, P2 horseshoe for some f^n, P3 invariant Li-Yorke sample, "
                 "P4 uniform invariant DC1 sample, P5 DC pair")
    return "\n".join(lines)


def suite_document(rows: Sequence[EquivalenceRow], params: SuiteParams) -> dict:
    return {"generated_at": _now(), "params": asdict(params), "rows": [r.as_dict() for r in rows],
            "fail_rows": sum(r.verdict == "FAIL" for r in rows)}


# -- single map analysis ---------------------------------------------------------------------------
@dataclass(frozen=True)
class AnalyzeParams:
    n_max: int = 100_000
    eps_grid: tuple[float, ...] = (1e-3,)
    n_list: tuple[int, ...] = (6, 10, 14, 17, 18)
    horseshoe_n_max: int = 6
    pairs: int = 2
    omega_seeds: int = 2
    omega: OmegaParams = OmegaParams()
    depth: int = 30


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def map_summary(m: PLGraphMap) -> dict:
    g = m.graph
    md = m.markov_data()
    return {
        "name": m.name,
        "vertices": list(g.vertices),
        "edges": [[e.id, e.u, e.v, str(e.length)] for e in g.edges],
        "pieces": sum(len(p) for p in m.pieces.values()),
        "lipschitz": str(m.lipschitz),
        "markov": md is not None,
        "partition_size": len(md.partition) if md else None,
    }


def analyze_map(m: PLGraphMap, params: AnalyzeParams | None = None) -> tuple[dict, dict]:
    """Report dict plus CSV tables (name -> text)."""
    params = params or AnalyzeParams()
    csv: dict[str, str] = {}
    report: dict = {"generated_at": _now(), "map": map_summary(m)}

    est = separated_entropy(m, params.n_list, params.eps_grid)
    oracle = spectral_entropy_oracle(m)
    report["entropy"] = {"oracle": oracle, "oracle_method": oracle_method(m),
                         "log2": math.log(2), "separated": est.as_dict()}
    csv["entropy"] = est.to_csv()

    cert = detect_horseshoe(m, params.horseshoe_n_max)
    report["horseshoe"] = ({"verified": verify_certificate(m, cert), **cert.as_dict()} if cert
                           else {"found": False, "searched_n_max": params.horseshoe_n_max})

    system = GraphSystem(m)
    cp = ChaosParams(n_max=params.n_max)
    pairs = []
    pts = seed_points(m, 2 * params.pairs)
    for i in range(params.pairs):
        x, y = pts[2 * i], pts[2 * i + 1]
        stats = distributional_functions(system, x, y, cp.n_max, cp.grid(system), cp.window_ratio)
        c = classify_pair(system, x, y, cp)
        pairs.append({"x": [x.edge, str(x.offset)], "y": [y.edge, str(y.offset)], **c.as_dict()})
        csv[f"pair{i}"] = stats.to_csv()
    if cert is not None:
        dec = decoded_sample_report(m, cert, k=2, J=0, depth=params.depth, n_max=params.n_max)
        rep = dec["report"]
        c = rep.classes[(0, 1)]
        pairs.append({"decoded_words": [w.description for w in dec["family"].sample[:2]],
                      "power": cert.n, **c.as_dict()})
    report["pairs"] = pairs

    classes = [classify_maximal_omega(m, x, params.omega) for x in seed_points(m, params.omega_seeds)]
    report["omega"] = [c.as_dict() for c in classes]
    basic = next((c for c in classes if c.kind == BASIC), None)
    report["basic_set_properties"] = basic_set_property_check(m, basic, params.omega) if basic else None
    return report, csv


def analyze(mapfile: str | os.PathLike, params: AnalyzeParams | None = None) -> tuple[dict, dict]:
    from .mapfile import load_map
    return analyze_map(load_map(mapfile), params)
