"""Advisory notes about modeling smells in a work model."""

import re
from collections import defaultdict
from typing import Iterable

from rdflib import URIRef, Variable

from cwp_verifier.query.pattern import (
    ORDERED_OPERATORS,
    And,
    Comparison,
    FilterExpr,
    Not,
    NowExpr,
    Or,
    TermExpr,
)
from cwp_verifier.rules.model import RuleSet
from cwp_verifier.schema.semantic import SemanticSchema
from cwp_verifier.statechart.machine import Finding, Severity, StateMachineDecl
from cwp_verifier.triples.terms import TYPE, PrefixTable

NOW_COMPARISON = "NOW_COMPARISON"
SPLIT_PROPERTY = "SPLIT_PROPERTY"
UNUSED_PROPERTY = "UNUSED_PROPERTY"
TYPE_STATE_EXCLUSION = "TYPE_STATE_EXCLUSION"

_TRAILING_DIGITS = re.compile(r"^(.*?)\d+$")

# How "?x <op> now()" reads once the date is known.
_NOW_READING = {
    "<": "has passed",
    "<=": "has arrived",
    ">": "is still in the future",
    ">=": "has not passed yet",
}
_FLIPPED = {"<": ">", ">": "<", "<=": ">=", ">=": "<="}


def _note(code: str, subject: str, message: str) -> Finding:
    return Finding(Severity.NOTE, code, subject, message)


def _now_comparisons(expr: FilterExpr) -> Iterable[tuple[str, Variable]]:
    """(operator, variable) pairs normalized to the ``?var <op> now()`` form."""
    if isinstance(expr, (And, Or)):
        yield from _now_comparisons(expr.left)
        yield from _now_comparisons(expr.right)
    elif isinstance(expr, Not):
        yield from _now_comparisons(expr.operand)
    elif isinstance(expr, Comparison) and expr.op in ORDERED_OPERATORS:
        left, right = expr.left, expr.right
        if isinstance(right, NowExpr) and isinstance(left, TermExpr) and isinstance(left.term, Variable):
            yield expr.op, left.term
        elif isinstance(left, NowExpr) and isinstance(right, TermExpr) and isinstance(right.term, Variable):
            yield _FLIPPED[expr.op], right.term


def lint_now_comparisons(rules: RuleSet) -> list[Finding]:
    """Surface the time direction of every guard comparing a date with ``now()``."""
    notes = []
    for rule in rules.rules:
        for pattern in rule.where.walk():
            for expr in pattern.filters:
                for op, var in _now_comparisons(expr):
                    notes.append(
                        _note(
                            NOW_COMPARISON,
                            rule.id,
                            f"guard ?{var} {op} now() holds once the date {_NOW_READING[op]}",
                        )
                    )
    return notes


def lint_split_properties(schema: SemanticSchema, prefixes: PrefixTable) -> list[Finding]:
    """Properties whose names differ only by a trailing number."""
    indexed = {name for index in schema.ordered_indexes.values() for name in index.indexed}
    groups: dict[str, list[URIRef]] = defaultdict(list)
    for name in schema.property_names():
        if name in indexed:
            continue
        found = _TRAILING_DIGITS.match(str(name))
        groups[found.group(1) if found else str(name)].append(name)
    notes = []
    for stem, names in sorted(groups.items()):
        if len(names) > 1:
            rendered = sorted(prefixes.render(n) for n in names)
            notes.append(
                _note(
                    SPLIT_PROPERTY,
                    rendered[0],
                    f"{', '.join(rendered)} differ only by a trailing number; consider one property",
                )
            )
    return notes


def _used_properties(rules: RuleSet) -> set[URIRef]:
    patterns = []
    for constraint in rules.constraints:
        patterns += constraint.body.all_triple_patterns()
    for constructor in rules.constructors:
        patterns += constructor.where.all_triple_patterns() + list(constructor.template.triple_patterns)
    for rule in rules.rules:
        patterns += (
            rule.where.all_triple_patterns()
            + list(rule.delete.triple_patterns)
            + list(rule.insert.triple_patterns)
        )
    return {tp.predicate for tp in patterns if isinstance(tp.predicate, URIRef) and tp.predicate != TYPE}


def lint_unused_properties(
    rules: RuleSet,
    machines: Iterable[StateMachineDecl],
    schema: SemanticSchema,
    prefixes: PrefixTable,
) -> list[Finding]:
    """Subject- and driver-class properties no constraint, constructor or rule mentions."""
    lineage: set[URIRef] = set()
    for decl in machines:
        for cls in (decl.subject_class, decl.driver_class):
            if cls is not None:
                lineage |= {cls} | schema.ancestors(cls) | schema.descendants(cls)
    used = _used_properties(rules)
    for decl in machines:
        used.add(decl.state_property)
        if decl.driver_link is not None:
            used.add(decl.driver_link)
    candidates = [p for p in schema.datatype_properties.values() if p.domain in lineage]
    candidates += [
        p
        for p in schema.object_properties.values()
        if p.domain in lineage and not p.composition_inverse
    ]
    notes = []
    for prop in sorted(candidates, key=lambda p: prefixes.render(p.name)):
        if prop.name not in used:
            notes.append(
                _note(
                    UNUSED_PROPERTY,
                    prefixes.render(prop.name),
                    "declared but never read or written by any constraint, constructor or rule",
                )
            )
    return notes


def lint_type_state_exclusions(
    decl: StateMachineDecl,
    reachable: dict[URIRef, list[str]],
    prefixes: PrefixTable,
) -> list[Finding]:
    """States a type is said not to have, yet its rules can reach."""
    notes = []
    for type_, excluded in sorted(decl.exclusions.items(), key=lambda i: prefixes.render(i[0])):
        for state in excluded:
            if state in reachable.get(type_, ()):
                notes.append(
                    _note(
                        TYPE_STATE_EXCLUSION,
                        prefixes.render(type_),
                        f'"{state}" is excluded for this type but its rules reach it',
                    )
                )
    return notes
