"""Separated-set entropy against the spectral oracle for every corpus map."""
import argparse
import math

from graphchaos import corpus
from graphchaos.entropy_horseshoe import oracle_method, separated_entropy, spectral_entropy_oracle


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[6, 10, 14, 17, 18])
    ap.add_argument("--eps", type=float, nargs="+", default=[1e-3])
    args = ap.parse_args()
    print(f"{'map':<18}{'oracle':>9}  {'method':<13}{'h_est':>8}  s_n at largest n")
    for e in corpus.builtin_corpus():
        est = separated_entropy(e.map, args.n, args.eps)
        h = spectral_entropy_oracle(e.map)
        top = {eps: est.s[(max(args.n), eps)] for eps in est.eps_list}
        shown = "nan" if h is None else f"{h:.4f}"
        print(f"{e.name:<18}{shown:>9}  {oracle_method(e.map):<13}{est.h_est:>8.4f}  {top}")
    print(f"log 2 = {math.log(2):.4f}, log 3 = {math.log(3):.4f}")


if __name__ == "__main__":
    main()
