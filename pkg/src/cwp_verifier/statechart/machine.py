"""State machine declarations, mutability classes and analysis results."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import networkx as nx
from rdflib import Literal, URIRef

from cwp_verifier.errors import InvalidModel, UnclassifiedProperty
from cwp_verifier.query.clock import Clock


@dataclass(frozen=True)
class DeclaredTransition:
    """A transition of the machine; ``types`` empty means every analyzed type."""

    id: str
    source: str
    target: str
    types: tuple[URIRef, ...] = ()


@dataclass
class StateMachineDecl:
    """Declared states and transitions of one subject class.

    Objects move between states through a driver instance (``driver_class``)
    linked to them by ``driver_link``; transition rules are attached to the
    driver class.
    """

    name: str
    subject_class: URIRef
    state_property: URIRef
    states: tuple[str, ...] = ()
    initial: str = ""
    finals: tuple[str, ...] = ()
    transitions: list[DeclaredTransition] = field(default_factory=list)
    types: tuple[URIRef, ...] = ()
    driver_class: Optional[URIRef] = None
    driver_link: Optional[URIRef] = None
    exclusions: dict[URIRef, tuple[str, ...]] = field(default_factory=dict)

    def validate(self) -> None:
        """Raise InvalidModel unless initial, finals and endpoints are declared states."""
        states = set(self.states)
        if self.initial not in states:
            raise InvalidModel(f"initial state '{self.initial}' is not declared", subject=self.name)
        for label in self.finals:
            if label not in states:
                raise InvalidModel(f"final state '{label}' is not declared", subject=self.name)
        for t in self.transitions:
            for label in (t.source, t.target):
                if label not in states:
                    raise InvalidModel(
                        f"transition {t.id} uses undeclared state '{label}'", subject=t.id
                    )

    def transitions_named(self, transition_id: str) -> list[DeclaredTransition]:
        return [t for t in self.transitions if t.id == transition_id]


class Mutability(Enum):
    IMMUTABLE = "immutable"
    ENVIRONMENT = "environment"
    RULE_OWNED = "rule-owned"


class DomainKind(Enum):
    VALUE = "value"
    PAST = "past"
    FUTURE = "future"
    ABSENT = "absent"


@dataclass(frozen=True)
class DomainValue:
    """One point of a property's bounded test domain."""

    kind: DomainKind
    literal: Optional[Literal] = None

    def resolve(self, clock: Clock, offset_days: int) -> Optional[Literal]:
        """The literal this point stands for; None means no triple."""
        if self.kind is DomainKind.VALUE:
            return self.literal
        if self.kind is DomainKind.PAST:
            return clock.offset(-offset_days)
        if self.kind is DomainKind.FUTURE:
            return clock.offset(offset_days)
        return None


@dataclass
class PropertyMutability:
    """Who may change each property, and the values it can take."""

    kinds: dict[URIRef, Mutability] = field(default_factory=dict)
    domains: dict[URIRef, tuple[DomainValue, ...]] = field(default_factory=dict)

    def declare(self, prop: URIRef, kind: Mutability, domain: tuple[DomainValue, ...] = ()) -> None:
        self.kinds[prop] = kind
        if domain:
            self.domains[prop] = domain

    def kind_of(self, prop: URIRef) -> Optional[Mutability]:
        return self.kinds.get(prop)

    def require(self, prop: URIRef, subject: str = "") -> Mutability:
        kind = self.kinds.get(prop)
        if kind is None:
            raise UnclassifiedProperty(
                f"property {prop} is read by a transition guard but has no mutability class",
                subject=subject or str(prop),
            )
        return kind

    def of_kind(self, kind: Mutability) -> list[URIRef]:
        return sorted(p for p, k in self.kinds.items() if k is kind)


class Severity(Enum):
    ERROR = "Error"
    WARNING = "Warning"
    NOTE = "Note"


@dataclass(frozen=True)
class Finding:
    """A report line produced by any verifier."""

    severity: Severity
    code: str
    subject: str
    message: str


@dataclass
class StateGraph:
    """Per analyzed type, a multigraph over state labels; edge keys are rule ids."""

    graphs: dict[URIRef, nx.MultiDiGraph] = field(default_factory=dict)

    def edges(self, type_: URIRef) -> list[tuple[str, str, str]]:
        graph = self.graphs[type_]
        return sorted((s, t, k) for s, t, k in graph.edges(keys=True))

    def outgoing(self, type_: URIRef, state: str) -> list[tuple[str, str]]:
        """(target, rule id) pairs leaving ``state``."""
        graph = self.graphs[type_]
        if state not in graph:
            return []
        return sorted((t, k) for _, t, k in graph.out_edges(state, keys=True))

    def types(self) -> list[URIRef]:
        return sorted(self.graphs)


@dataclass(frozen=True)
class CoverageGap:
    """A state with no escape under one immutable valuation."""

    type: URIRef
    state: str
    valuation: tuple[tuple[URIRef, str], ...]


@dataclass
class TypeReport:
    type: URIRef
    reachable: list[str] = field(default_factory=list)
    unreachable: list[str] = field(default_factory=list)
    deadlocks: list[str] = field(default_factory=list)
    coverage_gaps: list[CoverageGap] = field(default_factory=list)


@dataclass
class SolvabilityReport:
    """Everything the state machine verifier found, merged by type name."""

    types: dict[URIRef, TypeReport] = field(default_factory=dict)
    cohesion: list[Finding] = field(default_factory=list)
    notes: list[Finding] = field(default_factory=list)

    @property
    def solvable(self) -> bool:
        return not self.cohesion and not any(
            r.deadlocks or r.coverage_gaps for r in self.types.values()
        )
