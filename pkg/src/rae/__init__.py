"""Recourse-aware ensembling under model multiplicity."""

from .baf import BAF, Semantics, parse_baf_text
from .ensemble import (
    ArgMap,
    TieBreak,
    argumentative_ensemble,
    argumentative_solutions,
    augmented_ensemble,
    build_baf,
    ensemble,
    naive_ensemble,
    robust_ensemble,
    s_preferred_sets,
)
from .errors import CapacityError, InputError, RAEError, UsageError
from .instance import (
    RAEInstance,
    Solution,
    TieBreakRecord,
    dump_instance,
    instance_from_dict,
    instance_to_dict,
    load_instance,
)
from .preferences import (
    Comparison,
    ModelPreference,
    identity_preference,
    lexicographic_preference,
    preference_from_ranks,
)
from .properties import PropertyReport, check_all, majority_label

__version__ = "0.1.0"

__all__ = [
    "BAF",
    "Semantics",
    "parse_baf_text",
    "ArgMap",
    "TieBreak",
    "argumentative_ensemble",
    "argumentative_solutions",
    "augmented_ensemble",
    "build_baf",
    "ensemble",
    "naive_ensemble",
    "robust_ensemble",
    "s_preferred_sets",
    "CapacityError",
    "InputError",
    "RAEError",
    "UsageError",
    "RAEInstance",
    "Solution",
    "TieBreakRecord",
    "dump_instance",
    "instance_from_dict",
    "instance_to_dict",
    "load_instance",
    "Comparison",
    "ModelPreference",
    "identity_preference",
    "lexicographic_preference",
    "preference_from_ranks",
    "PropertyReport",
    "check_all",
    "majority_label",
    "__version__",
]
