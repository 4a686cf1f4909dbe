"""strata: certified star- and comb-shaped butterfly minors of strongly
connected digraphs.

The pipeline takes a strongly connected digraph D and a vertex set U and
produces a butterfly minor shaped by a star or by a comb with many teeth in
U, together with a replayable contraction trace and a machine-checkable shape
certificate.  Every intermediate object (laced path pairs, cycle chains,
centre structures) carries its own witness.
"""
from .butterfly import (
    MinorTrace,
    TraceBuilder,
    apply_trace,
    check_minor_reachability,
    compose,
    contract,
    contract_arborescence,
    is_butterfly_contractible,
    verify_trace,
)
from .centre import (
    Attachment,
    CentreStructure,
    MainStructure,
    centre_minor,
    critical_tooth,
    edge_minimal_for_u,
    main_structure,
)
from .digraph import (
    Arborescence,
    CycleChain,
    DiCycle,
    Digraph,
    DiPath,
    StrataError,
    dfs_out_arborescence,
    is_strongly_connected,
    path_concat,
    path_segment,
    reaches,
    strong_components,
)
from .extract import (
    EdgeColoring,
    ExtractResult,
    FrameResult,
    IntervalProfile,
    extract_star_or_comb,
    in_out_arborescences,
    ramsey_clique,
    three_vertex_frame,
    unavoidable,
)
from .laced import LacedWitness, check_laced, cycle_chain_of, double_path_of, lace
from .oracle import (
    BudgetExceededError,
    SearchBudget,
    canonical_form,
    is_butterfly_minor_bruteforce,
    recognize_bruteforce,
)
from .shapes import ShapeCertificate, build_comb, build_star, recognize, teeth_of, \
    verify_certificate
from .starcomb import Comb, Insufficient, SubdividedStar, UGraph, double, star_or_comb

__version__ = "0.1.0"

__all__ = [
    "Arborescence", "Attachment", "BudgetExceededError", "CentreStructure",
    "Comb", "CycleChain", "DiCycle", "Digraph", "DiPath", "EdgeColoring",
    "ExtractResult", "FrameResult", "Insufficient", "IntervalProfile",
    "LacedWitness", "MainStructure", "MinorTrace", "SearchBudget",
    "ShapeCertificate", "StrataError", "SubdividedStar", "TraceBuilder",
    "UGraph", "apply_trace", "build_comb", "build_star", "canonical_form",
    "centre_minor", "check_laced", "check_minor_reachability", "compose",
    "contract", "contract_arborescence", "critical_tooth", "cycle_chain_of",
    "dfs_out_arborescence", "double", "double_path_of", "edge_minimal_for_u",
    "extract_star_or_comb", "in_out_arborescences", "is_butterfly_contractible",
    "is_butterfly_minor_bruteforce", "is_strongly_connected", "lace",
    "main_structure", "path_concat", "path_segment", "ramsey_clique",
    "reaches", "recognize", "recognize_bruteforce", "star_or_comb",
    "strong_components", "teeth_of", "three_vertex_frame", "unavoidable",
    "verify_certificate", "verify_trace",
]
