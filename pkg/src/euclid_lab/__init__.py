"""Verification laboratory for Euclidean domains.

Exact arithmetic in several concrete rings, enumeration of all valid
Euclidean divisions, windowed and exhaustive predicate checking,
refinement of size functions with exactness certificates, and a
counterexample search pipeline.
"""

from .division import (
    CandidateDivision,
    Decomposition,
    EnumerationResult,
    canonical_divide,
    decompose_by,
    enumerate_valid_divisions,
    gcd_extended,
    is_valid_division,
)
from .domains import (
    DomainKind,
    DomainSpec,
    Element,
    Window,
    enumerate_nonzero,
    units_in_window,
)
from .functions import EuclideanFnSpec, FnKind, default_fn, evaluate, validate_fspec
from .properties import (
    MatrixReport,
    PropertyKind,
    PropertyReport,
    Verdict,
    Witness,
    check_property,
    check_unit_lemmas,
    replay_witness,
    theorem_matrix,
    unit_field_closure,
)
from .refinement import (
    CertifiedValue,
    Certainty,
    CertReason,
    RefinementReports,
    RefinementTable,
    check_refinement_properties,
    refine_eval,
    refine_function,
)
from .search import (
    CandidateEvaluation,
    FamilySpec,
    GeneratorKind,
    SearchReport,
    enumerate_family,
    run_search,
    verify_candidate,
)

__all__ = [
    "CandidateDivision",
    "CandidateEvaluation",
    "CertReason",
    "Certainty",
    "CertifiedValue",
    "Decomposition",
    "DomainKind",
    "DomainSpec",
    "Element",
    "EnumerationResult",
    "EuclideanFnSpec",
    "FamilySpec",
    "FnKind",
    "GeneratorKind",
    "MatrixReport",
    "PropertyKind",
    "PropertyReport",
    "RefinementReports",
    "RefinementTable",
    "SearchReport",
    "Verdict",
    "Window",
    "Witness",
    "canonical_divide",
    "check_property",
    "check_refinement_properties",
    "check_unit_lemmas",
    "decompose_by",
    "default_fn",
    "enumerate_family",
    "enumerate_nonzero",
    "enumerate_valid_divisions",
    "evaluate",
    "gcd_extended",
    "is_valid_division",
    "refine_eval",
    "refine_function",
    "replay_witness",
    "run_search",
    "theorem_matrix",
    "unit_field_closure",
    "units_in_window",
    "validate_fspec",
]
