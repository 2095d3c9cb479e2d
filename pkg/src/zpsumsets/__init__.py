"""Sumset arithmetic over Z/pZ and exhaustive/sampled theorem verification."""

from .core import (
    AffineMap,
    ApDescriptor,
    EmptySetError,
    ModulusMismatchError,
    PrimeModulus,
    ResidueSet,
    affine_image,
    companion_set,
    complement,
    deficiency,
    diameter,
    double,
    is_ap,
    is_short_covered,
    min_cover_ap,
    parse_set_literal,
    prime_modulus,
    residues_from_csv,
    restricted_sumset,
    sumset,
)
from .davenport import (
    DavenportSplit,
    HypothesisError,
    TransformContext,
    anchored_at_zero,
    build_context,
    check_containment,
    check_descent,
    lemma1_check,
    split,
    splits,
)
from .harness import (
    CardinalityFilters,
    ConfigError,
    RunConfig,
    VerificationReport,
    extremal_search,
    run_verification,
)
from .theorems import (
    THEOREM_IDS,
    cauchy_davenport,
    distinct_sum_chain,
    erdos_heilbronn,
    freiman_24,
    freiman_3k3,
    hsz,
    lemma2_two_point,
    symmetry_identity,
    theorem_con,
    vosper,
)
from .verdict import TheoremVerdict

__version__ = "0.1.0"

__all__ = [
    "AffineMap",
    "ApDescriptor",
    "CardinalityFilters",
    "ConfigError",
    "DavenportSplit",
    "EmptySetError",
    "HypothesisError",
    "ModulusMismatchError",
    "PrimeModulus",
    "ResidueSet",
    "RunConfig",
    "THEOREM_IDS",
    "TheoremVerdict",
    "TransformContext",
    "VerificationReport",
    "affine_image",
    "anchored_at_zero",
    "build_context",
    "cauchy_davenport",
    "check_containment",
    "check_descent",
    "companion_set",
    "complement",
    "deficiency",
    "diameter",
    "distinct_sum_chain",
    "double",
    "erdos_heilbronn",
    "extremal_search",
    "freiman_24",
    "freiman_3k3",
    "hsz",
    "is_ap",
    "is_short_covered",
    "lemma1_check",
    "lemma2_two_point",
    "min_cover_ap",
    "parse_set_literal",
    "prime_modulus",
    "residues_from_csv",
    "restricted_sumset",
    "run_verification",
    "split",
    "splits",
    "sumset",
    "symmetry_identity",
    "theorem_con",
    "vosper",
    "__version__",
]
