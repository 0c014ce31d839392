"""Agreement between transition rules, the class schema and the machine declaration."""

import logging
from typing import Iterable, Optional

from rdflib import Literal, URIRef

from cwp_verifier.errors import MalformedRule
from cwp_verifier.rules.model import TransitionRule
from cwp_verifier.schema.semantic import DatatypeProperty, SemanticSchema
from cwp_verifier.statechart.graph import rule_transition
from cwp_verifier.statechart.machine import (
    Finding,
    Mutability,
    PropertyMutability,
    Severity,
    StateMachineDecl,
)
from cwp_verifier.triples.terms import TYPE, PrefixTable, literal_tag

logger = logging.getLogger(__name__)

UNDECLARED_PROPERTY = "UNDECLARED_PROPERTY"
RANGE_MISMATCH = "RANGE_MISMATCH"
UNKNOWN_CLASS = "UNKNOWN_CLASS"
UNDECLARED_STATE = "UNDECLARED_STATE"
MISSING_RULE = "MISSING_RULE"
UNDECLARED_TRANSITION = "UNDECLARED_TRANSITION"
IMMUTABLE_WRITE = "IMMUTABLE_WRITE"
MALFORMED_RULE = "MALFORMED_RULE"


class CohesionChecker:
    """Collects cohesion errors for one machine and its rules."""

    def __init__(
        self,
        decl: StateMachineDecl,
        schema: SemanticSchema,
        mutability: Optional[PropertyMutability] = None,
        prefixes: Optional[PrefixTable] = None,
    ):
        self.decl = decl
        self.schema = schema
        self.mutability = mutability or PropertyMutability()
        self.render = (prefixes or PrefixTable()).render
        self.findings: list[Finding] = []
        self._seen: set[tuple[str, str, str]] = set()

    def _error(self, code: str, subject: str, message: str) -> None:
        key = (code, subject, message)
        if key not in self._seen:
            self._seen.add(key)
            self.findings.append(Finding(Severity.ERROR, code, subject, message))

    def check_declaration(self) -> None:
        decl = self.decl
        for cls in (decl.subject_class, decl.driver_class, *decl.types):
            if cls is not None and not self.schema.has_class(cls):
                self._error(UNKNOWN_CLASS, decl.name, f"machine refers to unknown class {self.render(cls)}")
        for prop in (decl.state_property, decl.driver_link):
            if prop is not None and not self.schema.has_property(prop):
                self._error(
                    UNDECLARED_PROPERTY, decl.name, f"machine refers to undeclared property {self.render(prop)}"
                )

    def check_rule(self, rule: TransitionRule) -> None:
        render = self.render
        if not self.schema.has_class(rule.attached_class):
            self._error(UNKNOWN_CLASS, rule.id, f"rule is attached to unknown class {render(rule.attached_class)}")
        patterns = (
            rule.where.all_triple_patterns()
            + list(rule.delete.triple_patterns)
            + list(rule.insert.triple_patterns)
        )
        for tp in patterns:
            predicate, obj = tp.predicate, tp.object
            if not isinstance(predicate, URIRef):
                continue
            if predicate == TYPE:
                if isinstance(obj, URIRef) and not self.schema.has_class(obj):
                    self._error(UNKNOWN_CLASS, rule.id, f"rule tests unknown class {render(obj)}")
                continue
            prop = self.schema.property(predicate)
            if prop is None:
                self._error(UNDECLARED_PROPERTY, rule.id, f"rule uses undeclared property {render(predicate)}")
                continue
            if isinstance(obj, Literal):
                expected = prop.range.value if isinstance(prop, DatatypeProperty) else "name"
                if expected != literal_tag(obj).value:
                    self._error(
                        RANGE_MISMATCH,
                        rule.id,
                        f"{render(predicate)} expects a {expected} value, rule uses {render(obj)}",
                    )
            if predicate == self.decl.state_property and isinstance(obj, Literal):
                if str(obj) not in self.decl.states:
                    self._error(UNDECLARED_STATE, rule.id, f"state {render(obj)} is not declared")
        for tp in rule.insert.triple_patterns:
            if isinstance(tp.predicate, URIRef) and (
                self.mutability.kind_of(tp.predicate) is Mutability.IMMUTABLE
            ):
                self._error(IMMUTABLE_WRITE, rule.id, f"rule writes immutable property {render(tp.predicate)}")

    def check_transitions(self, rules: list[TransitionRule]) -> None:
        decl = self.decl
        states = set(decl.states)
        implemented: set[tuple[str, str, str]] = set()
        for rule in rules:
            try:
                transition = rule_transition(rule, decl)
            except MalformedRule as exc:
                self._error(MALFORMED_RULE, rule.id, exc.message)
                continue
            if transition is None:
                continue
            if transition.source not in states or transition.target not in states:
                continue
            edge = (rule.base_id(), transition.source, transition.target)
            implemented.add(edge)
            if not any((t.id, t.source, t.target) == edge for t in decl.transitions):
                self._error(
                    UNDECLARED_TRANSITION,
                    rule.id,
                    f'rule moves "{transition.source}" -> "{transition.target}" '
                    f"but {decl.name} declares no such transition {rule.base_id()}",
                )
        for t in decl.transitions:
            if (t.id, t.source, t.target) not in implemented:
                self._error(
                    MISSING_RULE,
                    t.id,
                    f'declared transition "{t.source}" -> "{t.target}" has no implementing rule',
                )


def check_cohesion(
    rules: Iterable[TransitionRule],
    decl: StateMachineDecl,
    schema: SemanticSchema,
    mutability: Optional[PropertyMutability] = None,
    prefixes: Optional[PrefixTable] = None,
) -> list[Finding]:
    """Report every disagreement between rules, schema and declaration.

    A rule implements a declared transition when its id without primes equals
    the transition id and it moves between the same two states. Rules whose
    endpoints are undeclared states are reported once, as UNDECLARED_STATE.

    Returns:
        Error findings ordered by (code, subject, message)
    """
    rules = list(rules)
    checker = CohesionChecker(decl, schema, mutability, prefixes)
    checker.check_declaration()
    for rule in rules:
        checker.check_rule(rule)
    checker.check_transitions(rules)
    findings = sorted(checker.findings, key=lambda f: (f.code, f.subject, f.message))
    logger.info("cohesion check of %s found %d error(s)", decl.name, len(findings))
    return findings
