"""Uniform DC1 family in the shift, and its image through a map's horseshoe."""
import argparse

from graphchaos import corpus
from graphchaos.entropy_horseshoe import detect_horseshoe
from graphchaos.harness import decoded_sample_report
from graphchaos.shift_space import build_scrambled_family, verify_family_dc1


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--J", type=int, default=2)
    ap.add_argument("--nmax", type=int, default=100_000)
    ap.add_argument("--map", default="tent", choices=sorted(corpus.corpus_by_name()))
    ap.add_argument("--depth", type=int, default=30)
    args = ap.parse_args()
    fam = build_scrambled_family(args.k, J=args.J)
    print(f"phases chaos_a={fam.phases_a} chaos_b={fam.phases_b}")
    rep = verify_family_dc1(fam, args.nmax)
    print(f"shift: {len(rep.classes)} pairs, DC1 {rep.dc1_scrambled}, uniform eps {rep.uniform_epsilon}, "
          f"invariant {rep.invariant}")
    m = corpus.corpus_by_name()[args.map].map
    cert = detect_horseshoe(m, 6)
    if cert is None:
        print(f"{args.map}: no horseshoe for n <= 6")
        return
    dec = decoded_sample_report(m, cert, args.k, args.J, args.depth, args.nmax)
    r = dec["report"]
    print(f"{args.map} via f^{cert.n} on U=[{cert.U.lo},{cert.U.hi}] V=[{cert.V.lo},{cert.V.hi}]: "
          f"DC1 {r.dc1_scrambled}, uniform eps {r.uniform_epsilon}, containment {dec['containment']}")
    for w in fam.sample[:3]:
        print(f"   {w.description} -> {dec['system'].point(w)}")


if __name__ == "__main__":
    main()
