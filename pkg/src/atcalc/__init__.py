"""Attack tree metrics: operad composition, bottom-up and BDD algorithms."""

from .bdd import Robdd, bdd_bu, bdd_metric, build_robdd, check_psi_conditions, semiring_plugin, tap_plugin
from .bu import bu, bu_trace, check_scoperad_morphism, check_treelike_theorem, is_treelike
from .canon import anchor_isomorphic, canonical_form
from .dsl import DslError, format_tree, parse, print_document
from .extensions import (
    ADT_MINCOST,
    MINTIME,
    AttributeDomain,
    DynamicSemiring,
    adt_bottom_up,
    adt_compose,
    dat_bottom_up,
    dat_compose,
    validate_adt,
    validate_dat,
)
from .metrics import MAXDAMAGE, MINCOST, MINSKILL, SAT, Metric, Semiring, get_metric
from .operad import Surjection, eval_decomposition, identity, prime, prime_decompose, star, substitute, tau
from .tree import (
    AnchoredAT,
    AttackTree,
    Gate,
    InvalidTreeError,
    minimal_attacks,
    structure_function,
    successful_attacks,
    term,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "Robdd",
    "bdd_bu",
    "bdd_metric",
    "build_robdd",
    "check_psi_conditions",
    "semiring_plugin",
    "tap_plugin",
    "bu",
    "bu_trace",
    "check_scoperad_morphism",
    "check_treelike_theorem",
    "is_treelike",
    "anchor_isomorphic",
    "canonical_form",
    "DslError",
    "format_tree",
    "parse",
    "print_document",
    "ADT_MINCOST",
    "MINTIME",
    "AttributeDomain",
    "DynamicSemiring",
    "adt_bottom_up",
    "adt_compose",
    "dat_bottom_up",
    "dat_compose",
    "validate_adt",
    "validate_dat",
    "MAXDAMAGE",
    "MINCOST",
    "MINSKILL",
    "SAT",
    "Metric",
    "Semiring",
    "get_metric",
    "Surjection",
    "eval_decomposition",
    "identity",
    "prime",
    "prime_decompose",
    "star",
    "substitute",
    "tau",
    "AnchoredAT",
    "AttackTree",
    "Gate",
    "InvalidTreeError",
    "minimal_attacks",
    "structure_function",
    "successful_attacks",
    "term",
    "validate",
]
