"""Incidence structures with no complete m-by-n grid.

Construction, completion, amalgamation, and analysis of K_{m,n}-free
point/line incidence structures: staged free completions with provenance,
closure operators, safe-diagram extensions and free amalgams, independence
relation checkers, a branching family of type-separating configurations,
and exhaustive search for finite projective planes.
"""

from .core import (
    BudgetError,
    FreenessViolationError,
    FreenessWitness,
    IncidenceStructure,
    ParameterError,
    PreconditionError,
    Sort,
    SortError,
    StructParams,
    StructureBuilder,
    common_neighbors,
    induced,
    is_kmn_free,
    isomorphic_over,
    satisfies_complete,
)
from .completion import (
    CompletionStage,
    FreeCompletionRun,
    LazyCompletion,
    RelativeCompletion,
    deficient_sets,
    free_completion,
    relative_free_completion,
)
from .closure import Ternary, closure_stages, generates, i_closure, is_i_closed
from .amalgam import (
    ExistentialPattern,
    GlueHypothesisError,
    GlueProblem,
    PatternStatus,
    SafeDiagram,
    extension_witness,
    free_amalgam,
    independence_glue,
    pattern_consistent,
)
from .gamma import (
    HTerm,
    bm_witness,
    fano_plane,
    gamma,
    gamma_invariants,
    h_eval,
    h_term_eval,
    nonfree_completion_probe,
    separating_check,
    tp2_pattern,
)
from .indep import IndepQuery, Relation, Status, Verdict, check, indep_sequence
from .finsearch import (
    SearchStatus,
    embed_in_finite_plane,
    embed_search_general,
    enumerate_projective_planes,
    find_projective_plane,
)
from .cli import emit_structure, parse_structure

__version__ = "0.1.0"

__all__ = [
    "BudgetError",
    "CompletionStage",
    "ExistentialPattern",
    "FreeCompletionRun",
    "FreenessViolationError",
    "FreenessWitness",
    "GlueHypothesisError",
    "GlueProblem",
    "HTerm",
    "IncidenceStructure",
    "IndepQuery",
    "LazyCompletion",
    "ParameterError",
    "PatternStatus",
    "PreconditionError",
    "Relation",
    "RelativeCompletion",
    "SafeDiagram",
    "SearchStatus",
    "Sort",
    "SortError",
    "Status",
    "StructParams",
    "StructureBuilder",
    "Ternary",
    "Verdict",
    "bm_witness",
    "check",
    "closure_stages",
    "common_neighbors",
    "deficient_sets",
    "embed_in_finite_plane",
    "embed_search_general",
    "emit_structure",
    "enumerate_projective_planes",
    "extension_witness",
    "fano_plane",
    "find_projective_plane",
    "free_amalgam",
    "free_completion",
    "gamma",
    "gamma_invariants",
    "generates",
    "h_eval",
    "h_term_eval",
    "i_closure",
    "independence_glue",
    "indep_sequence",
    "induced",
    "is_i_closed",
    "is_kmn_free",
    "isomorphic_over",
    "nonfree_completion_probe",
    "parse_structure",
    "pattern_consistent",
    "relative_free_completion",
    "satisfies_complete",
    "separating_check",
    "tp2_pattern",
]
