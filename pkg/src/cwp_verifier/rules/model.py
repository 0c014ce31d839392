"""Constraint, constructor and transition-rule records."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from rdflib import URIRef

from cwp_verifier.query.pattern import (
    THIS,
    Binding,
    ConstructTemplate,
    GraphPattern,
    TriplePattern,
)
from cwp_verifier.triples.store import Triple, TripleStore
from cwp_verifier.triples.terms import TYPE


@dataclass(frozen=True)
class AskConstraint:
    """A per-class ASK body. A match is a violation (it finds a counterexample)."""

    id: str
    attached_class: URIRef
    message: str
    body: GraphPattern


@dataclass(frozen=True)
class Constructor:
    """Template fired once per instance when it is created."""

    attached_class: URIRef
    template: ConstructTemplate
    where: GraphPattern


@dataclass(frozen=True)
class TransitionRule:
    """DELETE/INSERT/WHERE rewrite evaluated with ``?this`` over ``attached_class``.

    Variables that occur only in DELETE are wildcards: the atom is matched
    against the store when the rule fires and every match is removed.
    """

    id: str
    attached_class: URIRef
    delete: ConstructTemplate
    insert: ConstructTemplate
    where: GraphPattern
    comment: str = ""

    def effective_where(self) -> GraphPattern:
        return self.where.prepend(TriplePattern(THIS, TYPE, self.attached_class))

    def dependency_keys(self) -> frozenset:
        return frozenset(self.effective_where().dependency_keys())

    def check_templates(self) -> None:
        """Raise UnboundTemplateVariable for INSERT variables WHERE never binds."""
        self.insert.check_bound(self.effective_where().variables(), context="INSERT")

    def base_id(self) -> str:
        """Identifier with variant primes removed (``T3'`` -> ``T3``)."""
        return self.id.rstrip("'")


@dataclass
class RuleSet:
    """Behavioral part of a model."""

    constraints: list[AskConstraint] = field(default_factory=list)
    constructors: list[Constructor] = field(default_factory=list)
    rules: list[TransitionRule] = field(default_factory=list)

    def rule(self, rule_id: str) -> Optional[TransitionRule]:
        return next((r for r in self.rules if r.id == rule_id), None)

    def without_rule(self, rule_id: str) -> "RuleSet":
        return RuleSet(
            list(self.constraints),
            list(self.constructors),
            [r for r in self.rules if r.id != rule_id],
        )


class RunStatus(Enum):
    """Terminal status of a rule run."""

    FIXED_POINT = "FixedPoint"
    ITERATION_CAP_HIT = "IterationCapHit"
    CYCLE_DETECTED = "CycleDetected"


@dataclass
class Firing:
    """One matched binding of one rule and its effective changes."""

    iteration: int
    rule_id: str
    binding: Binding
    deleted: list[Triple]
    inserted: list[Triple]

    @property
    def changed(self) -> bool:
        return bool(self.deleted or self.inserted)


@dataclass
class FireTrace:
    """Ordered firings of a run plus its terminal status."""

    firings: list[Firing] = field(default_factory=list)
    status: RunStatus = RunStatus.FIXED_POINT
    iterations: int = 0

    def replay(self, initial: TripleStore) -> TripleStore:
        """Apply the recorded changes to a copy of ``initial``."""
        store = initial.copy()
        for firing in self.firings:
            for triple in firing.deleted:
                store.remove_triple(triple)
            for triple in firing.inserted:
                store.add_triple(triple)
        return store

    def rule_ids(self) -> list[str]:
        return [f.rule_id for f in self.firings if f.changed]


@dataclass(frozen=True)
class Violation:
    """A constraint whose ASK body matched for an instance."""

    constraint_id: str
    instance: URIRef
    message: str
    witness: tuple = ()
