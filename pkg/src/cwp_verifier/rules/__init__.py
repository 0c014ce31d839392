"""SPIN-style constraints, constructors and transition rules."""

from cwp_verifier.rules.constraints import check_constraints, run_constructors
from cwp_verifier.rules.engine import apply_rule_once, run_incremental, run_to_fixpoint
from cwp_verifier.rules.model import (
    AskConstraint,
    Constructor,
    Firing,
    FireTrace,
    RuleSet,
    RunStatus,
    TransitionRule,
    Violation,
)

__all__ = [
    "AskConstraint",
    "Constructor",
    "Firing",
    "FireTrace",
    "RuleSet",
    "RunStatus",
    "TransitionRule",
    "Violation",
    "apply_rule_once",
    "check_constraints",
    "run_constructors",
    "run_incremental",
    "run_to_fixpoint",
]
