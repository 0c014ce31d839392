"""Deadlock and guard-coverage analysis over bounded property domains.

For every analyzed type and reachable non-final state the checker builds a
small synthetic world: one tracked object of the type in that state and one
driver instance linked to it. Immutable properties are fixed per valuation;
environment properties range over their declared domains. A state is stuck
under a valuation when no outgoing rule's WHERE matches in any environment
world.
"""

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional

from rdflib import Namespace, URIRef

from cwp_verifier.errors import MalformedRule
from cwp_verifier.query.clock import Clock
from cwp_verifier.query.matcher import eval_ask
from cwp_verifier.rules.model import TransitionRule
from cwp_verifier.schema.materialize import materialize
from cwp_verifier.schema.semantic import SemanticSchema
from cwp_verifier.statechart.machine import (
    CoverageGap,
    DomainKind,
    DomainValue,
    Mutability,
    PropertyMutability,
    StateGraph,
    StateMachineDecl,
)
from cwp_verifier.triples.store import Triple, TripleStore
from cwp_verifier.triples.terms import (
    TYPE,
    LiteralTag,
    PrefixTable,
    boolean_literal,
    render_literal,
    string_literal,
)

logger = logging.getLogger(__name__)

PROBE = Namespace("urn:cwp-verifier:probe#")
TRACKED = PROBE.object
DRIVER = PROBE.driver

ABSENT = DomainValue(DomainKind.ABSENT)

_DEFAULT_DOMAINS = {
    LiteralTag.BOOLEAN: (
        DomainValue(DomainKind.VALUE, boolean_literal(True)),
        DomainValue(DomainKind.VALUE, boolean_literal(False)),
    ),
    LiteralTag.DATETIME: (DomainValue(DomainKind.PAST), DomainValue(DomainKind.FUTURE)),
}


def domain_of(prop: URIRef, mutability: PropertyMutability, schema: SemanticSchema) -> tuple[DomainValue, ...]:
    """Declared test domain of ``prop``, else a default from its range."""
    declared = mutability.domains.get(prop)
    if declared:
        return declared
    return _DEFAULT_DOMAINS.get(schema.range_tag(prop), (ABSENT,))


def describe(value: DomainValue) -> str:
    if value.kind is DomainKind.VALUE:
        return render_literal(value.literal)
    return value.kind.value


@dataclass
class DeadlockResult:
    """Stuck states of one type."""

    type: URIRef
    deadlocks: list[str] = field(default_factory=list)
    coverage_gaps: list[CoverageGap] = field(default_factory=list)


class GuardSpace:
    """Classifies the properties a rule's guard reads."""

    def __init__(self, decl: StateMachineDecl, mutability: PropertyMutability, schema: SemanticSchema):
        self.decl = decl
        self.mutability = mutability
        self.schema = schema
        self._implicit = {TYPE, decl.state_property}
        if decl.driver_link is not None:
            self._implicit.add(decl.driver_link)

    def read_properties(self, rule: TransitionRule) -> list[URIRef]:
        """Properties the guard reads, minus the ones the checker controls.

        Raises:
            MalformedRule: If a guard atom has a variable predicate
            UnclassifiedProperty: If a read property has no mutability class
        """
        props = set()
        for tp in rule.effective_where().all_triple_patterns():
            if not isinstance(tp.predicate, URIRef):
                raise MalformedRule(
                    f"rule {rule.id} reads a variable predicate; guards must name properties",
                    subject=rule.id,
                )
            if tp.predicate not in self._implicit:
                self.mutability.require(tp.predicate, subject=rule.id)
                props.add(tp.predicate)
        return sorted(props)

    def split(self, rule: TransitionRule) -> tuple[list[URIRef], list[URIRef]]:
        """(immutable, varying) properties read by the rule's guard."""
        immutable, varying = [], []
        for prop in self.read_properties(rule):
            if self.mutability.kind_of(prop) is Mutability.IMMUTABLE:
                immutable.append(prop)
            else:
                varying.append(prop)
        return immutable, varying


class DeadlockChecker:
    """Bounded brute-force guard satisfiability for one machine."""

    def __init__(
        self,
        graph: StateGraph,
        decl: StateMachineDecl,
        rules: Iterable[TransitionRule],
        schema: SemanticSchema,
        mutability: PropertyMutability,
        clock: Optional[Clock] = None,
        offset_days: int = 1,
    ):
        self.graph = graph
        self.decl = decl
        self.rules = {r.id: r for r in rules}
        self.schema = schema
        self.mutability = mutability
        self.clock = clock or Clock.at()
        self.offset_days = offset_days
        self.space = GuardSpace(decl, mutability, schema)

    def check_type(self, type_: URIRef, reachable: Iterable[str]) -> DeadlockResult:
        result = DeadlockResult(type_)
        finals = set(self.decl.finals)
        edges = [self.rules[k] for _, _, k in self.graph.edges(type_)]
        immutable = sorted({p for rule in edges for p in self.space.split(rule)[0]})
        valuations = list(
            itertools.product(*(domain_of(p, self.mutability, self.schema) for p in immutable))
        )
        for state in sorted(reachable):
            if state in finals:
                continue
            outgoing = [self.rules[k] for _, k in self.graph.outgoing(type_, state)]
            stuck = []
            for values in valuations:
                fixed = dict(zip(immutable, values))
                if not any(self.can_fire(rule, type_, state, fixed) for rule in outgoing):
                    stuck.append(tuple((p, describe(v)) for p, v in fixed.items()))
            if len(stuck) == len(valuations):
                result.deadlocks.append(state)
                logger.info("deadlock: %s stuck in %r", type_, state)
            else:
                result.coverage_gaps.extend(CoverageGap(type_, state, v) for v in stuck)
        return result

    def can_fire(
        self, rule: TransitionRule, type_: URIRef, state: str, fixed: dict[URIRef, DomainValue]
    ) -> bool:
        """True iff some environment valuation satisfies the rule's guard."""
        immutable, varying = self.space.split(rule)
        domains = [domain_of(p, self.mutability, self.schema) for p in varying]
        for values in itertools.product(*domains):
            assignment = {p: fixed.get(p, ABSENT) for p in immutable}
            assignment.update(zip(varying, values))
            world = self.world(type_, state, assignment)
            if eval_ask(world, rule.effective_where(), clock=self.clock):
                return True
        return False

    def world(self, type_: URIRef, state: str, assignment: dict[URIRef, DomainValue]) -> TripleStore:
        """The synthetic store for one tracked object, its driver and ``assignment``."""
        store = TripleStore(PrefixTable())
        store.add_triple(Triple(TRACKED, TYPE, type_))
        store.add_triple(Triple(TRACKED, self.decl.state_property, string_literal(state)))
        driver_class = self.decl.driver_class
        if driver_class is not None:
            store.add_triple(Triple(DRIVER, TYPE, driver_class))
        if self.decl.driver_link is not None:
            store.add_triple(Triple(DRIVER, self.decl.driver_link, TRACKED))
        driver_lineage = (
            {driver_class} | self.schema.ancestors(driver_class) if driver_class else set()
        )
        for prop, value in assignment.items():
            literal = value.resolve(self.clock, self.offset_days)
            if literal is None:
                continue
            prop_def = self.schema.property(prop)
            owner = DRIVER if prop_def is not None and prop_def.domain in driver_lineage else TRACKED
            store.add_triple(Triple(owner, prop, literal))
        return materialize(store, self.schema)


def check_deadlock(
    graph: StateGraph,
    decl: StateMachineDecl,
    rules: Iterable[TransitionRule],
    schema: SemanticSchema,
    mutability: PropertyMutability,
    reachable: dict[URIRef, list[str]],
    clock: Optional[Clock] = None,
    offset_days: int = 1,
    workers: int = 1,
) -> dict[URIRef, DeadlockResult]:
    """Find deadlock states and coverage gaps per type.

    A reachable non-final state is a deadlock when it is stuck under every
    immutable valuation; when it is stuck under only some of them, each such
    valuation is a coverage gap.

    Args:
        graph: Extracted state graphs
        decl: Machine declaration
        rules: Transition rules the graph was extracted from
        schema: Translated schema, used for typing and property owners
        mutability: Property classes and test domains
        reachable: Reachable states per type
        clock: Reference time for ``past``/``future`` domain values
        offset_days: Distance of ``past``/``future`` from the clock
        workers: Types analyzed concurrently

    Returns:
        Results keyed by type

    Raises:
        UnclassifiedProperty: If a guard reads a property with no mutability class
    """
    checker = DeadlockChecker(graph, decl, rules, schema, mutability, clock, offset_days)
    types = graph.types()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda t: checker.check_type(t, reachable[t]), types))
    else:
        results = [checker.check_type(t, reachable[t]) for t in types]
    return {r.type: r for r in results}
