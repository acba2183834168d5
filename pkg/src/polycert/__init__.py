"""Verified construction of string C-groups of 2-power order.

The package builds finitely presented groups whose generators are
involutions, enumerates them onto concrete coset tables, certifies the
string and intersection properties, and realizes the face lattices of the
abstract regular polytopes they encode. Everything is deterministic and
every expensive computation is re-checked by an independent pass.
"""

from .certificates import (
    ATLAS_COLUMNS,
    SCHEMA_VERSION,
    AtlasRow,
    CertificateDocument,
    build_certificate_document,
    certificate_from_json,
    certificate_to_json,
    evidence_digest,
    format_atlas,
    order_log2,
    parse_atlas,
    row_from_document,
)
from .coset import (
    DEFAULT_MAX_COSETS,
    CosetTable,
    EnumerationLimits,
    EnumerationStats,
    enumerate_cosets,
    group_order,
    subgroup_index,
)
from .errors import (
    CapacityError,
    FormatError,
    HomomorphismError,
    InvalidGeneratorError,
    InvalidWordError,
    LimitExceededError,
    ParameterError,
    PolycertError,
    TableNotClosedError,
    UncertifiedInputError,
)
from .families import (
    a_parameter_tuples,
    coxeter_string_presentation,
    family_a,
    family_g,
    family_h,
    family_k,
    family_l,
    family_m,
    subgroup_n_words,
    tight_quotient_presentation,
)
from .perms import Permutation, PermutationGroup
from .polytope import (
    FaceLattice,
    FlagGraph,
    build_lattice,
    check_diamond,
    check_flag_connectivity,
    check_flag_matchings,
    check_section_connectivity,
    export_hasse,
    flag_graph,
)
from .realize import (
    RealizedGroup,
    parabolic_intersection_order,
    realize,
)
from .verify import (
    IntersectionEvidence,
    QuotientCheckResult,
    SggiCertificate,
    SggiSpec,
    certify,
    check_homomorphism,
    check_intersection_property_full,
    check_intersection_property_recursive,
    check_involutions,
    check_string_property,
    identity_generator_images,
    quotient_criterion,
    schlafli_type,
)
from .words import (
    Letter,
    Presentation,
    Word,
    commutator,
    conjugate,
    evaluate,
    generator,
    pair,
    power,
    presentation_from_text,
    reduce,
    word,
    word_from_text,
    word_to_text,
)

__version__ = "0.1.0"

__all__ = [
    "ATLAS_COLUMNS",
    "SCHEMA_VERSION",
    "AtlasRow",
    "CapacityError",
    "CertificateDocument",
    "CosetTable",
    "DEFAULT_MAX_COSETS",
    "EnumerationLimits",
    "EnumerationStats",
    "FaceLattice",
    "FlagGraph",
    "FormatError",
    "HomomorphismError",
    "IntersectionEvidence",
    "InvalidGeneratorError",
    "InvalidWordError",
    "Letter",
    "LimitExceededError",
    "ParameterError",
    "Permutation",
    "PermutationGroup",
    "PolycertError",
    "Presentation",
    "QuotientCheckResult",
    "RealizedGroup",
    "SggiCertificate",
    "SggiSpec",
    "TableNotClosedError",
    "UncertifiedInputError",
    "Word",
    "a_parameter_tuples",
    "build_certificate_document",
    "build_lattice",
    "certificate_from_json",
    "certificate_to_json",
    "certify",
    "check_diamond",
    "check_flag_connectivity",
    "check_flag_matchings",
    "check_homomorphism",
    "check_intersection_property_full",
    "check_intersection_property_recursive",
    "check_involutions",
    "check_section_connectivity",
    "check_string_property",
    "commutator",
    "conjugate",
    "coxeter_string_presentation",
    "enumerate_cosets",
    "evaluate",
    "evidence_digest",
    "export_hasse",
    "family_a",
    "family_g",
    "family_h",
    "family_k",
    "family_l",
    "family_m",
    "flag_graph",
    "format_atlas",
    "generator",
    "group_order",
    "identity_generator_images",
    "order_log2",
    "pair",
    "parabolic_intersection_order",
    "parse_atlas",
    "power",
    "presentation_from_text",
    "quotient_criterion",
    "realize",
    "reduce",
    "row_from_document",
    "schlafli_type",
    "subgroup_index",
    "subgroup_n_words",
    "tight_quotient_presentation",
    "word",
    "word_from_text",
    "word_to_text",
]
