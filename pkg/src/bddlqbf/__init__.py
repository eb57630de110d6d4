"""BDDL board-game models, their QBF winning-strategy encodings, and tools
to cross-check and interactively validate those encodings."""

from .parser import (
    BddlError,
    BddlSemanticError,
    BddlSyntaxError,
    Diagnostic,
    parse_domain,
    parse_problem,
    validate_instance,
)
from .syntax import (
    ActionDef,
    Bounds,
    Condition,
    CoordExpr,
    GameDomain,
    GameInstance,
    Pred,
    SubCondition,
    action_bounds,
    bounds_of_condition,
    bounds_of_subcondition,
)

__all__ = [
    "ActionDef",
    "BddlError",
    "BddlSemanticError",
    "BddlSyntaxError",
    "Bounds",
    "Condition",
    "CoordExpr",
    "Diagnostic",
    "GameDomain",
    "GameInstance",
    "Pred",
    "SubCondition",
    "action_bounds",
    "bounds_of_condition",
    "bounds_of_subcondition",
    "parse_domain",
    "parse_problem",
    "validate_instance",
]
