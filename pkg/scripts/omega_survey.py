"""Omega-limit classes, P_omega, B-sets and basic-set checks across the corpus."""
import argparse

from graphchaos import corpus
from graphchaos.graph_map import ArcUnion
from graphchaos.omega_limits import (BASIC, OmegaParams, UnsupportedInput, basic_set_property_check,
                                     classify_maximal_omega, compute_B_set, cycle_plus_witness, seed_points)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=2)
    ap.add_argument("--eps", type=float, default=0.01)
    ap.add_argument("--depth", type=int, default=6)
    args = ap.parse_args()
    params = OmegaParams(eps=args.eps, refinement_depth=args.depth)
    for e in corpus.builtin_corpus():
        m = e.map
        kinds = []
        for x in seed_points(m, args.seeds):
            c = classify_maximal_omega(m, x, params)
            kinds.append(c.kind)
        print(f"== {e.name}: {kinds}")
        if c.p_omega is not None:
            print(f"   P_omega {c.p_omega.triples()[:4]}{' ...' if len(c.p_omega.triples()) > 4 else ''}"
                  f" components={c.p_omega.components}")
        M = c.p_omega.arcs if c.p_omega else ArcUnion.from_intervals(
            [(ed.id, 0, ed.length) for ed in m.graph.edges])
        try:
            B = compute_B_set(m, M, args.depth, args.eps)
            print(f"   B-set measure {float(B.measure):.4f} of {float(M.measure()):.4f}")
        except UnsupportedInput as err:
            print(f"   B-set: {err}")
        if c.kind == BASIC:
            rep = basic_set_property_check(m, c, params)
            print("   checks " + ", ".join(f"{k}={v['pass']}" for k, v in rep.items()))
        w = cycle_plus_witness(m, params)
        print(f"   cycle plus witness: {'none' if w is None else w['cycle']}")


if __name__ == "__main__":
    main()
