"""Command implementations behind ``cwp-verify``.

Each command takes parsed inputs and returns a :class:`Report`, plus the
text it produces when it has one. Reading files and exit codes are the
business of :mod:`cwp_verifier.cli.main`.
"""

import logging
from typing import Optional, Sequence, Union

from rdflib import URIRef

from cwp_verifier.cli.printer import print_model, print_scenario
from cwp_verifier.cli.report import Report
from cwp_verifier.query.clock import Clock
from cwp_verifier.rules.constraints import check_constraints
from cwp_verifier.rules.engine import DEFAULT_MAX_ITERATIONS
from cwp_verifier.rules.model import RunStatus
from cwp_verifier.schema.export import export_schema
from cwp_verifier.schema.materialize import materialize
from cwp_verifier.schema.semantic import SemanticSchema, TranslationOptions
from cwp_verifier.schema.structural import check_structural
from cwp_verifier.statechart.cohesion import check_cohesion
from cwp_verifier.statechart.confluence import probe_confluence
from cwp_verifier.statechart.lint import (
    lint_now_comparisons,
    lint_split_properties,
    lint_unused_properties,
)
from cwp_verifier.statechart.machine import Severity
from cwp_verifier.statechart.scenario import Scenario
from cwp_verifier.statechart.simulation import simulate
from cwp_verifier.statechart.solvability import verify_solvability
from cwp_verifier.triples.store import TripleStore
from cwp_verifier.triples.terms import PrefixTable
from cwp_verifier.triples.textformat import serialize
from cwp_verifier.workmodel import WorkModel

logger = logging.getLogger(__name__)

ABSTRACT_INSTANCE = "ABSTRACT_INSTANCE"
DEADLOCK = "DEADLOCK"
COVERAGE_GAP = "COVERAGE_GAP"
UNREACHABLE_STATE = "UNREACHABLE_STATE"
NOT_CONFLUENT = "NOT_CONFLUENT"
NOT_CONVERGED = "NOT_CONVERGED"


def _abstract_instances(store: TripleStore, schema: SemanticSchema) -> list[tuple[URIRef, URIRef]]:
    """(instance, class) pairs whose most specific type is abstract."""
    found = []
    for subject in sorted({s for s in store.terms() if isinstance(s, URIRef)}):
        types = [t for t in store.types_of(subject) if schema.has_class(t)]
        for cls in types:
            specific = not any(o != cls and schema.is_subclass(o, cls) for o in types)
            if specific and schema.classes[cls].abstract:
                found.append((subject, cls))
    return found


def cmd_check(model: WorkModel, data: TripleStore, clock: Optional[Clock] = None) -> Report:
    """Check instance data against the model.

    Runs materialization, the structural checks, every ASK constraint and
    the cohesion check of each state machine.
    """
    report = Report("check")
    render = model.prefixes.render
    schema = model.schema()
    store = data.copy()
    materialize(store, schema)

    for warning in schema.warnings:
        report.add(Severity.WARNING, warning.code, render(URIRef(warning.subject)), warning.message)
    for violation in check_structural(store, schema):
        report.add(Severity.ERROR, violation.code, render(violation.subject), violation.detail)
    for violation in check_constraints(store, model.rules.constraints, schema, clock):
        report.add(
            Severity.ERROR,
            f"CONSTRAINT:{violation.constraint_id}",
            render(violation.instance),
            violation.message,
        )
    for decl in model.machines:
        report.extend(check_cohesion(model.rules.rules, decl, schema, model.mutability, model.prefixes))
    for instance, cls in _abstract_instances(store, schema):
        report.add(
            Severity.ERROR,
            ABSTRACT_INSTANCE,
            render(instance),
            f"most specific type {render(cls)} is abstract",
        )
    logger.info("check: %s", report.summary())
    return report


def cmd_translate(model: WorkModel, options: Optional[TranslationOptions] = None) -> tuple[Report, str]:
    """Translate the class model, returning translation warnings and the schema triples."""
    if options is not None:
        model = model.with_options(options)
    schema = model.schema()
    report = Report("translate")
    for warning in schema.warnings:
        report.add(
            Severity.WARNING, warning.code, model.prefixes.render(URIRef(warning.subject)), warning.message
        )
    return report, export_schema(schema, model.prefixes, with_prefixes=True)


def cmd_simulate(
    model: WorkModel,
    scenario: Scenario,
    clock: Optional[Clock] = None,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> tuple[Report, str]:
    """Simulate a scenario; failed expectations are Errors. Returns the trace text."""
    trace = simulate(model, scenario, clock, max_iterations)
    report = Report("simulate")
    for failure in trace.failures:
        report.add(Severity.ERROR, failure.code, failure.subject, failure.message)
    for index, run in enumerate(trace.runs, start=1):
        if run.status is not RunStatus.FIXED_POINT:
            report.add(
                Severity.WARNING,
                NOT_CONVERGED,
                f"{scenario.name} run {index}",
                f"run ended with {run.status.value} after {run.iterations} iteration(s)",
            )
    return report, trace.to_text()


def cmd_verify(
    model: WorkModel,
    scenarios: Sequence[Scenario] = (),
    clock: Optional[Clock] = None,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    permutations: int = 20,
    seed: int = 0,
    offset_days: int = 1,
    workers: int = 1,
) -> Report:
    """Verify solvability of every state machine, then lint the model.

    Deadlocks and cohesion errors are Errors, coverage gaps Warnings, and
    per-type unreachable states Notes. With scenarios, each one is also
    replayed under ``permutations`` rule orders.
    """
    report = Report("verify")
    render = model.prefixes.render
    schema = model.schema()
    for decl in model.machines:
        result = verify_solvability(
            model.rules.rules,
            decl,
            schema,
            model.mutability,
            model.prefixes,
            clock,
            offset_days,
            workers,
        )
        report.extend(result.cohesion)
        for type_ in sorted(result.types, key=render):
            type_report = result.types[type_]
            for state in type_report.deadlocks:
                report.add(
                    Severity.ERROR,
                    DEADLOCK,
                    f'{render(type_)} "{state}"',
                    "no transition leaves this non-final state under any environment",
                )
            for gap in type_report.coverage_gaps:
                valuation = ", ".join(f"{render(p)}={v}" for p, v in gap.valuation)
                report.add(
                    Severity.WARNING,
                    COVERAGE_GAP,
                    f'{render(type_)} "{gap.state}"',
                    f"no transition leaves this state when {valuation}",
                )
            for state in type_report.unreachable:
                report.add(
                    Severity.NOTE,
                    UNREACHABLE_STATE,
                    f'{render(type_)} "{state}"',
                    "no rule path from the initial state reaches it",
                )
        report.extend(result.notes)

    report.extend(lint_now_comparisons(model.rules))
    report.extend(lint_split_properties(schema, model.prefixes))
    report.extend(lint_unused_properties(model.rules, model.machines, schema, model.prefixes))

    for scenario in scenarios:
        probe = probe_confluence(model, scenario, permutations, seed, clock, max_iterations)
        if not probe.confluent:
            first, second = probe.divergent
            report.add(
                Severity.ERROR,
                NOT_CONFLUENT,
                scenario.name,
                f"{probe.reason}: [{' '.join(first)}] vs [{' '.join(second)}]",
            )
    logger.info("verify: %s", report.summary())
    return report


def cmd_export(source: Union[WorkModel, TripleStore]) -> str:
    """Triple text of a model's schema, or the canonical form of a store."""
    if isinstance(source, WorkModel):
        return export_schema(source.schema(), source.prefixes, with_prefixes=True)
    return serialize(source, with_prefixes=True)


def cmd_parse(document, prefixes: Optional[PrefixTable] = None) -> str:
    """Canonical text of a parsed model, scenario or store."""
    prefixes = prefixes if prefixes is not None else PrefixTable()
    if isinstance(document, WorkModel):
        return print_model(document)
    if isinstance(document, Scenario):
        return print_scenario(document, prefixes)
    return serialize(document, with_prefixes=True)
