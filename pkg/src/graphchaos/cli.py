"""Command line: analyze, equivalence, scrambled, omega.

Exit codes: 0 success, 2 any FAIL, 1 input error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import corpus as corpus_mod
from .harness import (AnalyzeParams, SuiteParams, analyze_map, decoded_sample_report, format_table,
                      run_equivalence_suite, suite_document)
from .entropy_horseshoe import detect_horseshoe
from .mapfile import load_map
from .metric_graph import InputError
from .omega_limits import OmegaParams, classify_maximal_omega, seed_points
from .shift_space import parse_word, shift_distance

EXIT_OK, EXIT_INPUT, EXIT_FAIL = 0, 1, 2


def _dump(doc: dict, out: str | None):
    text = json.dumps(doc, indent=2, sort_keys=True, default=str)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def cmd_analyze(args) -> int:
    m = load_map(args.map)
    params = AnalyzeParams(n_max=args.nmax, eps_grid=tuple(args.eps_grid))
    report, tables = analyze_map(m, params)
    _dump(report, args.out)
    if args.csv_prefix:
        for name, text in tables.items():
            Path(f"{args.csv_prefix}_{name}.csv").write_text(text)
    return EXIT_OK


def cmd_equivalence(args) -> int:
    if args.corpus != "builtin":
        raise InputError(f"unknown corpus {args.corpus!r} (only 'builtin')")
    params = SuiteParams(workers=args.workers)
    t0 = time.perf_counter()
    rows = run_equivalence_suite(corpus_mod.builtin_corpus(), params)
    print(format_table(rows))
    print(f"elapsed {time.perf_counter() - t0:.1f}s", file=sys.stderr)
    if args.out:
        _dump(suite_document(rows, params), args.out)
    return EXIT_FAIL if any(r.verdict == "FAIL" for r in rows) else EXIT_OK


def cmd_scrambled(args) -> int:
    m = load_map(args.map)
    cert = detect_horseshoe(m, args.horseshoe_nmax)
    if cert is None:
        print(f"FAIL: no horseshoe certificate for n <= {args.horseshoe_nmax}")
        return EXIT_FAIL
    dec = decoded_sample_report(m, cert, k=args.k, J=args.J, depth=args.depth, n_max=args.nmax)
    rep = dec["report"]
    ok = rep.dc1_scrambled and rep.uniform and rep.invariant and dec["containment"]
    doc = {"map": m.name, "certificate": cert.as_dict(), "power": cert.n, "depth": args.depth,
           "containment": dec["containment"], "verdict": "PASS" if ok else "FAIL", **rep.as_dict()}
    _dump(doc, args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_omega(args) -> int:
    m = load_map(args.map)
    params = OmegaParams(eps=args.eps, refinement_depth=args.depth)
    classes = [classify_maximal_omega(m, x, params) for x in seed_points(m, args.seed_points)]
    _dump({"map": m.name, "omega": [c.as_dict() for c in classes]}, args.out)
    return EXIT_OK


def cmd_word(args) -> int:
    u, v = parse_word(args.u), parse_word(args.v)
    print(shift_distance(u, v, args.precision))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="graphchaos", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="full report for one map file")
    a.add_argument("--map", required=True)
    a.add_argument("--nmax", type=int, default=100_000)
    a.add_argument("--eps-grid", type=float, nargs="+", default=[1e-3])
    a.add_argument("--out")
    a.add_argument("--csv-prefix", help="also write <prefix>_entropy.csv and <prefix>_pair<i>.csv")
    a.set_defaults(func=cmd_analyze)

    e = sub.add_parser("equivalence", help="five-predicate agreement over a corpus")
    e.add_argument("--corpus", default="builtin")
    e.add_argument("--out")
    e.add_argument("--workers", type=int, default=1)
    e.set_defaults(func=cmd_equivalence)

    s = sub.add_parser("scrambled", help="decoded uniform DC1 sample through a horseshoe")
    s.add_argument("--map", required=True)
    s.add_argument("--depth", type=int, default=30)
    s.add_argument("--k", type=int, default=3)
    s.add_argument("--J", type=int, default=0)
    s.add_argument("--nmax", type=int, default=100_000)
    s.add_argument("--horseshoe-nmax", type=int, default=6)
    s.add_argument("--out")
    s.set_defaults(func=cmd_scrambled)

    o = sub.add_parser("omega", help="classify omega-limit sets of seed points")
    o.add_argument("--map", required=True)
    o.add_argument("--seed-points", type=int, default=4)
    o.add_argument("--eps", type=float, default=0.01)
    o.add_argument("--depth", type=int, default=6)
    o.add_argument("--out")
    o.set_defaults(func=cmd_omega)

    w = sub.add_parser("word-distance", help="shift distance of two word patterns, e.g. 01(001)*")
    w.add_argument("u")
    w.add_argument("v")
    w.add_argument("--precision", type=int, default=64)
    w.set_defaults(func=cmd_word)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
