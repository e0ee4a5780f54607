"""Forward-chaining inference, consistency checks and explanations."""

from .consistency import (
    CARDINALITY,
    DISJOINT,
    FUNCTIONAL,
    RANGE,
    Constraints,
    Inconsistency,
    check_consistency,
    new_violations,
)
from .engine import BUILTIN_RULE_NAMES, Derivation, Saturation, closure, saturate
from .explain import Explanation, NotFound, explain
from .kernel import BACKEND
from .rules import Pattern, Rule, RuleError, Var, load_rules, parse_rules

__all__ = [
    "BACKEND",
    "BUILTIN_RULE_NAMES",
    "CARDINALITY",
    "DISJOINT",
    "FUNCTIONAL",
    "RANGE",
    "Constraints",
    "Derivation",
    "Explanation",
    "Inconsistency",
    "NotFound",
    "Pattern",
    "Rule",
    "RuleError",
    "Saturation",
    "Var",
    "check_consistency",
    "closure",
    "explain",
    "load_rules",
    "new_violations",
    "parse_rules",
    "saturate",
]
