"""Five-predicate agreement table over the built-in corpus, with timing."""
import argparse
import json
import time

from graphchaos import corpus
from graphchaos.harness import SuiteParams, format_table, run_equivalence_suite, suite_document


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nmax", type=int, default=100_000)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--separated", action="store_true", help="attach separated-set estimates as evidence")
    ap.add_argument("--out")
    args = ap.parse_args()
    params = SuiteParams(n_max=args.nmax, workers=args.workers, with_separated=args.separated)
    t0 = time.perf_counter()
    rows = run_equivalence_suite(corpus.builtin_corpus(), params)
    print(format_table(rows))
    print(f"{time.perf_counter() - t0:.1f}s")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(suite_document(rows, params), fh, indent=2, default=str)


if __name__ == "__main__":
    main()
