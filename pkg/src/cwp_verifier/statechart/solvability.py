"""Solvability verification: cohesion, reachability and deadlock freedom."""

import logging
from typing import Optional, Sequence

from cwp_verifier.query.clock import Clock
from cwp_verifier.rules.model import TransitionRule
from cwp_verifier.schema.semantic import SemanticSchema
from cwp_verifier.statechart.cohesion import MALFORMED_RULE, check_cohesion
from cwp_verifier.statechart.deadlock import check_deadlock
from cwp_verifier.statechart.graph import check_reachability, extract_state_graph
from cwp_verifier.statechart.lint import lint_type_state_exclusions
from cwp_verifier.statechart.machine import (
    PropertyMutability,
    SolvabilityReport,
    StateMachineDecl,
    TypeReport,
)
from cwp_verifier.triples.terms import PrefixTable

logger = logging.getLogger(__name__)


def verify_solvability(
    rules: Sequence[TransitionRule],
    decl: StateMachineDecl,
    schema: SemanticSchema,
    mutability: PropertyMutability,
    prefixes: Optional[PrefixTable] = None,
    clock: Optional[Clock] = None,
    offset_days: int = 1,
    workers: int = 1,
) -> SolvabilityReport:
    """Run every state machine check and merge the results by type.

    Graph analyses are skipped when a rule is malformed, since no graph can be
    extracted; the cohesion errors explain why.

    Raises:
        UnclassifiedProperty: If a guard reads a property with no mutability class
    """
    prefixes = prefixes or PrefixTable()
    report = SolvabilityReport()
    report.cohesion = check_cohesion(rules, decl, schema, mutability, prefixes)
    if any(f.code == MALFORMED_RULE for f in report.cohesion):
        logger.warning("skipping graph analysis of %s: malformed rules", decl.name)
        return report

    graph = extract_state_graph(rules, decl, schema)
    reachability = check_reachability(graph, decl)
    reachable = {t: r for t, (r, _) in reachability.items()}
    deadlocks = check_deadlock(
        graph, decl, rules, schema, mutability, reachable, clock, offset_days, workers
    )
    for type_ in graph.types():
        reach, unreach = reachability[type_]
        result = deadlocks[type_]
        report.types[type_] = TypeReport(
            type=type_,
            reachable=reach,
            unreachable=unreach,
            deadlocks=result.deadlocks,
            coverage_gaps=result.coverage_gaps,
        )
    report.notes = lint_type_state_exclusions(decl, reachable, prefixes)
    logger.info(
        "verified %s over %d type(s): %s",
        decl.name,
        len(report.types),
        "solvable" if report.solvable else "not solvable",
    )
    return report
