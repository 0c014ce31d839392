"""Scenario simulation of a work model.

A simulator owns one store and one clock. Events are applied in order and
every store change is written to a line-oriented trace, so two runs of the
same scenario under the same clock produce byte-identical text.
"""

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from rdflib import URIRef

from cwp_verifier.errors import (
    AbstractInstantiation,
    ExpectationFailed,
    UnknownClass,
    UnknownObject,
)
from cwp_verifier.query.clock import Clock
from cwp_verifier.query.matcher import binding_text
from cwp_verifier.rules.constraints import check_constraints, run_constructors
from cwp_verifier.rules.engine import DEFAULT_MAX_ITERATIONS, run_incremental, run_to_fixpoint
from cwp_verifier.rules.model import FireTrace, TransitionRule
from cwp_verifier.schema.materialize import apply_defaults, materialize
from cwp_verifier.statechart.scenario import (
    At,
    CheckConstraints,
    ClearValue,
    Create,
    Event,
    ExpectState,
    Run,
    Scenario,
    SetValue,
)
from cwp_verifier.triples.store import Triple, TripleStore, triple_sort_key
from cwp_verifier.triples.terms import TYPE, string_literal
from cwp_verifier.triples.textformat import serialize
from cwp_verifier.workmodel import WorkModel

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StateChange:
    """One observed move of an object between states."""

    subject: URIRef
    source: str
    target: str
    rule_id: str


@dataclass
class SimulationTrace:
    """Everything a simulation did, in order."""

    scenario: str
    clock: str
    lines: list[str] = field(default_factory=list)
    final_store: TripleStore = field(default_factory=TripleStore)
    failures: list[ExpectationFailed] = field(default_factory=list)
    runs: list[FireTrace] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_text(self) -> str:
        """Canonical trace text, ending with the serialized final store."""
        head = [f"scenario {self.scenario}", f"clock {self.clock}"]
        body = "".join(f"{line}\n" for line in head + self.lines)
        return body + "final store\n" + serialize(self.final_store)

    def raise_for_failures(self) -> None:
        """Raise the first failed expectation, if any."""
        if self.failures:
            raise self.failures[0]

    def state_changes(self, state_property: URIRef) -> list[StateChange]:
        """State moves performed by rule firings, in firing order."""
        changes = []
        for run in self.runs:
            for firing in run.firings:
                old = {t.subject: str(t.object) for t in firing.deleted if t.predicate == state_property}
                for t in firing.inserted:
                    if t.predicate == state_property and t.subject in old:
                        changes.append(StateChange(t.subject, old[t.subject], str(t.object), firing.rule_id))
        return changes


class Simulator:
    """Applies scenario events to a fresh store."""

    def __init__(
        self,
        model: WorkModel,
        clock: Optional[Clock] = None,
        max_iterations: int = DEFAULT_MAX_ITERATIONS,
        rules: Optional[Sequence[TransitionRule]] = None,
        incremental: bool = True,
    ):
        """Initialize a simulator.

        Args:
            model: Model whose schema, constraints and rules are simulated
            clock: Starting clock; copied, never shared
            max_iterations: Pass cap for every ``run``
            rules: Rule order to use instead of the model's declaration order
            incremental: Use the dirty-tracking engine (else the naive one)
        """
        self.model = model
        self.schema = model.schema()
        self.clock = clock.copy() if clock is not None else Clock.at()
        self.start = str(self.clock)
        self.max_iterations = max_iterations
        self.rules = list(rules if rules is not None else model.rules.rules)
        self.incremental = incremental
        self.store = TripleStore(model.prefixes)
        self.render = model.prefixes.render
        self.constructed: set[URIRef] = set()
        self.created: set[URIRef] = set()
        self.lines: list[str] = []
        self.failures: list[ExpectationFailed] = []
        self.runs: list[FireTrace] = []

    # ------------------------------------------------------------------
    # Helpers
    # ------------------------------------------------------------------
    def _text(self, triple: Triple) -> str:
        return " ".join(self.store.prefixes.render_triple(*triple))

    def _delta(self, before: frozenset, indent: str = "  ") -> None:
        after = self.store.as_set()

        def order(triple: Triple) -> tuple:
            return triple_sort_key(triple, self.store.prefixes)

        for triple in sorted(before - after, key=order):
            self.lines.append(f"{indent}- {self._text(triple)}")
        for triple in sorted(after - before, key=order):
            self.lines.append(f"{indent}+ {self._text(triple)}")

    def _require(self, name: URIRef) -> None:
        if name not in self.created:
            raise UnknownObject(
                f"{self.render(name)} has not been created", subject=self.render(name)
            )

    def _remove_values(self, name: URIRef, prop: URIRef) -> None:
        inverse = self.schema.inverse(prop)
        for triple in list(self.store.triples(subject=name, predicate=prop)):
            self.store.remove_triple(triple)
            if inverse is not None and isinstance(triple.object, URIRef):
                self.store.remove_triple(Triple(triple.object, inverse, name))

    # ------------------------------------------------------------------
    # Events
    # ------------------------------------------------------------------
    def apply(self, event: Event) -> None:
        if isinstance(event, At):
            self.at(event)
        elif isinstance(event, Create):
            self.create(event)
        elif isinstance(event, SetValue):
            self.set_value(event)
        elif isinstance(event, ClearValue):
            self.clear_value(event)
        elif isinstance(event, Run):
            self.run()
        elif isinstance(event, ExpectState):
            self.expect_state(event)
        elif isinstance(event, CheckConstraints):
            self.check(event)
        else:
            raise TypeError(f"unknown scenario event {event!r}")

    def at(self, event: At) -> None:
        self.clock.advance_to(event.when)
        self.lines.append(f"at {self.clock}")

    def create(self, event: Create) -> None:
        """Assert a new instance, materialize, construct and apply defaults.

        Raises:
            UnknownClass: If the class is not declared
            AbstractInstantiation: If the class is abstract
            DoubleConstruction: If the name was created before
        """
        render = self.render
        axiom = self.schema.classes.get(event.cls)
        if axiom is None:
            raise UnknownClass(f"cannot create {render(event.name)}: unknown class {render(event.cls)}")
        if axiom.abstract:
            raise AbstractInstantiation(
                f"cannot create {render(event.name)} as abstract class {render(event.cls)}",
                subject=render(event.name),
            )
        before = self.store.as_set()
        self.store.add_triple(Triple(event.name, TYPE, event.cls))
        for prop, value in event.properties:
            self.store.add_triple(Triple(event.name, prop, value))
        materialize(self.store, self.schema)
        run_constructors(
            self.store, event.name, event.cls, self.model.rules.constructors, self.clock, self.constructed
        )
        apply_defaults(self.store, event.name, self.schema)
        materialize(self.store, self.schema)
        self.created.add(event.name)
        self.lines.append(f"create {render(event.name)} : {render(event.cls)}")
        self._delta(before)

    def set_value(self, event: SetValue) -> None:
        """Assert a value; a functional property loses its previous value."""
        self._require(event.name)
        before = self.store.as_set()
        if self.schema.is_functional(event.property):
            self._remove_values(event.name, event.property)
        self.store.add_triple(Triple(event.name, event.property, event.value))
        materialize(self.store, self.schema)
        self.lines.append(
            f"set {self.render(event.name)} {self.render(event.property)} {self.render(event.value)}"
        )
        self._delta(before)

    def clear_value(self, event: ClearValue) -> None:
        self._require(event.name)
        before = self.store.as_set()
        self._remove_values(event.name, event.property)
        self.lines.append(f"clear {self.render(event.name)} {self.render(event.property)}")
        self._delta(before)

    def run(self) -> FireTrace:
        diagnostics: list = []
        engine = run_incremental if self.incremental else run_to_fixpoint
        _, trace = engine(self.store, self.rules, self.clock, self.max_iterations, diagnostics)
        self.runs.append(trace)
        self.lines.append(f"run {trace.status.value} iterations={trace.iterations}")
        for firing in trace.firings:
            if not firing.changed:
                continue
            self.lines.append(
                f"  fire {firing.iteration} {firing.rule_id} "
                f"{binding_text(firing.binding, self.store.prefixes)}"
            )
            self.lines.extend(f"    - {self._text(t)}" for t in firing.deleted)
            self.lines.extend(f"    + {self._text(t)}" for t in firing.inserted)
        for diagnostic in diagnostics:
            self.lines.append(f"  diagnostic {diagnostic.code} {diagnostic.message}")
        before = self.store.as_set()
        materialize(self.store, self.schema)
        if self.store.as_set() != before:
            self.lines.append("  materialize")
            self._delta(before, indent="    ")
        return trace

    def expect_state(self, event: ExpectState) -> None:
        self._require(event.name)
        render = self.render
        machine = next(
            (
                m
                for m in self.model.machines
                if Triple(event.name, TYPE, m.subject_class) in self.store
            ),
            None,
        )
        found = self.store.objects(event.name, machine.state_property) if machine else []
        expected = string_literal(event.label)
        head = f'expect {render(event.name)} state "{event.label}"'
        if found == [expected]:
            self.lines.append(f"{head} ok")
            return
        found_text = "[" + ", ".join(render(v) for v in found) + "]"
        self.lines.append(f"{head} FAILED found {found_text}")
        self.failures.append(
            ExpectationFailed(
                f'{render(event.name)} expected in state "{event.label}", found {found_text}',
                subject=render(event.name),
                diff=f'- state "{event.label}"\n+ state {found_text}',
            )
        )

    def check(self, event: CheckConstraints) -> None:
        violations = check_constraints(
            self.store, self.model.rules.constraints, self.schema, self.clock
        )
        found = [v.constraint_id for v in violations]
        expected = sorted(event.expected)
        ok = found == expected
        self.lines.append(
            f"check-constraints expected=[{', '.join(expected)}] found=[{', '.join(found)}] "
            + ("ok" if ok else "FAILED")
        )
        for violation in violations:
            self.lines.append(f"  violation {violation.constraint_id} {self.render(violation.instance)}")
        if not ok:
            self.failures.append(
                ExpectationFailed(
                    f"constraint violations differ: expected [{', '.join(expected)}], "
                    f"found [{', '.join(found)}]",
                    subject="check-constraints",
                    diff="\n".join(
                        [f"- {i}" for i in expected if i not in found]
                        + [f"+ {i}" for i in found if i not in expected]
                    ),
                )
            )

    def trace(self, scenario_name: str) -> SimulationTrace:
        return SimulationTrace(
            scenario=scenario_name,
            clock=self.start,
            lines=list(self.lines),
            final_store=self.store.copy(),
            failures=list(self.failures),
            runs=list(self.runs),
        )


def simulate(
    model: WorkModel,
    scenario: Scenario,
    clock: Optional[Clock] = None,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    rules: Optional[Iterable[TransitionRule]] = None,
    incremental: bool = True,
    strict: bool = False,
) -> SimulationTrace:
    """Run a scenario against a model.

    Args:
        model: Model to simulate
        scenario: Events to apply
        clock: Starting clock (defaults to the fixed default clock)
        max_iterations: Pass cap for every ``run`` event
        rules: Optional rule order overriding declaration order
        incremental: Use the dirty-tracking engine
        strict: Raise the first failed expectation instead of only recording it

    Returns:
        The trace; failed expectations are listed in ``trace.failures``

    Raises:
        UnknownObject: If an event names an object that was never created
        ClockRegression: If the scenario moves time backwards
        ExpectationFailed: In strict mode, for the first failed expectation
    """
    start = clock.copy() if clock is not None else Clock.at()
    scenario.validate(start.current)
    simulator = Simulator(
        model, start, max_iterations, list(rules) if rules is not None else None, incremental
    )
    for event in scenario.events:
        simulator.apply(event)
    trace = simulator.trace(scenario.name)
    logger.info(
        "scenario %s: %d event(s), %d failure(s)", scenario.name, len(scenario.events), len(trace.failures)
    )
    if strict:
        trace.raise_for_failures()
    return trace
