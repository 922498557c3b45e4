"""Entropy, horseshoes, distributional chaos and omega-limit sets of
piecewise-linear maps on metric graphs."""
from .chaos_stats import (ChaosParams, GraphSystem, PairClass, PairStatistics, ScrambledSetReport, classify_pair,
                          distributional_functions, is_li_yorke_pair, verify_scrambled_set, xi)
from .corpus import CorpusEntry, builtin_corpus, corpus_by_name
from .entropy_horseshoe import (HorseshoeCertificate, detect_horseshoe, entropy_positive, separated_entropy,
                                spectral_entropy_oracle, verify_certificate)
from .graph_map import ArcUnion, ContinuityError, MarkovData, Piece, PLGraphMap, evaluate, image_of_arc, iterate
from .harness import EquivalenceRow, analyze, analyze_map, run_equivalence_suite
from .mapfile import MapFormatError, dump_map, load_map, parse_map
from .metric_graph import Arc, GraphPoint, InputError, MetricGraph, arcs_disjoint, circle, distance, interval, star
from .omega_limits import (BSet, OmegaApprox, OmegaClass, OmegaParams, POmega, UnsupportedInput,
                           basic_set_property_check, classify_maximal_omega, compute_B_set, compute_P_omega,
                           cycle_plus_witness, omega_limit_approx, periodic_points_in)
from .shift_space import (ScrambledFamily, ShiftSystem, SymbolSequence, build_scrambled_family, itinerary_decode,
                          parse_word, shift, shift_distance, verify_family_dc1)

__all__ = [name for name in dir() if not name.startswith("_")]
