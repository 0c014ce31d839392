"""State machine verification and scenario simulation.

``simulation`` and ``confluence`` depend on :mod:`cwp_verifier.workmodel`
and are imported from their modules directly.
"""

from cwp_verifier.statechart.cohesion import check_cohesion
from cwp_verifier.statechart.deadlock import check_deadlock
from cwp_verifier.statechart.graph import check_reachability, extract_state_graph, rule_transition
from cwp_verifier.statechart.machine import (
    CoverageGap,
    DeclaredTransition,
    DomainKind,
    DomainValue,
    Finding,
    Mutability,
    PropertyMutability,
    Severity,
    SolvabilityReport,
    StateGraph,
    StateMachineDecl,
    TypeReport,
)
from cwp_verifier.statechart.scenario import (
    At,
    CheckConstraints,
    ClearValue,
    Create,
    ExpectState,
    Run,
    Scenario,
    SetValue,
)
from cwp_verifier.statechart.solvability import verify_solvability

__all__ = [
    "At",
    "CheckConstraints",
    "ClearValue",
    "CoverageGap",
    "Create",
    "DeclaredTransition",
    "DomainKind",
    "DomainValue",
    "ExpectState",
    "Finding",
    "Mutability",
    "PropertyMutability",
    "Run",
    "Scenario",
    "SetValue",
    "Severity",
    "SolvabilityReport",
    "StateGraph",
    "StateMachineDecl",
    "TypeReport",
    "check_cohesion",
    "check_deadlock",
    "check_reachability",
    "extract_state_graph",
    "rule_transition",
    "verify_solvability",
]
