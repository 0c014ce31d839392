"""Canonical text for models and scenarios.

``parse_model(print_model(m)) == m`` for every parsed model ``m``; the same
holds for scenarios under the model's prefixes.
"""

import re

from rdflib import Literal, URIRef, Variable

from cwp_verifier.query.pattern import (
    And,
    Comparison,
    ConstructTemplate,
    FilterExpr,
    GraphPattern,
    Not,
    NowExpr,
    Or,
    TermExpr,
)
from cwp_verifier.schema.uml import Association
from cwp_verifier.statechart.machine import DomainKind, StateMachineDecl
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
from cwp_verifier.triples.terms import (
    DATETIME_FORMAT,
    TYPE,
    PrefixTable,
    escape_string,
    render_literal,
)
from cwp_verifier.workmodel import WorkModel

INDENT = "    "

# Words the lexer reads as keywords in some position where a name may also
# appear; names spelled like them are printed with a prefix.
RESERVED = frozenset(
    "a true false now FILTER EXISTS NOT driver types states initial final transition exclude for".split()
)

_BARE = re.compile(r"[A-Za-z_]\w*'*")
_PREFIXED = re.compile(r"[A-Za-z_][\w\-]*:[A-Za-z_][\w\-']*")


def print_name(name: URIRef, prefixes: PrefixTable) -> str:
    """Shortest form of ``name`` that parses back to it."""
    if prefixes.default is not None:
        namespace = prefixes.namespace(prefixes.default)
        local = str(name)[len(namespace):]
        if str(name).startswith(namespace) and _BARE.fullmatch(local) and local not in RESERVED:
            return local
    rendered = prefixes.render(name)
    if _PREFIXED.fullmatch(rendered):
        return rendered
    return f"<{name}>"


def _quoted(text: str) -> str:
    return f'"{escape_string(text)}"'


class _Printer:
    def __init__(self, prefixes: PrefixTable):
        self.prefixes = prefixes
        self.lines: list[str] = []

    def name(self, name: URIRef) -> str:
        return print_name(name, self.prefixes)

    def term(self, term) -> str:
        if isinstance(term, Variable):
            return f"?{term}"
        if isinstance(term, Literal):
            return render_literal(term)
        if term == TYPE:
            return "a"
        return self.name(term)

    def emit(self, depth: int, text: str) -> None:
        self.lines.append(f"{INDENT * depth}{text}" if text else "")

    # -- patterns ------------------------------------------------------
    def expr(self, expr: FilterExpr) -> str:
        if isinstance(expr, TermExpr):
            return self.term(expr.term)
        if isinstance(expr, NowExpr):
            return "now()"
        if isinstance(expr, Comparison):
            return f"{self.operand(expr.left)} {expr.op} {self.operand(expr.right)}"
        if isinstance(expr, And):
            return f"{self.operand(expr.left)} && {self.operand(expr.right)}"
        if isinstance(expr, Or):
            return f"{self.operand(expr.left)} || {self.operand(expr.right)}"
        if isinstance(expr, Not):
            return f"!{self.operand(expr.operand)}"
        raise TypeError(f"unknown filter expression {expr!r}")

    def operand(self, expr: FilterExpr) -> str:
        text = self.expr(expr)
        return f"({text})" if isinstance(expr, (Comparison, And, Or, Not)) else text

    def triples(self, depth: int, patterns) -> None:
        for tp in patterns:
            self.emit(depth, f"{self.term(tp.subject)} {self.term(tp.predicate)} {self.term(tp.object)} .")

    def template(self, depth: int, keyword: str, template: ConstructTemplate) -> None:
        self.emit(depth, f"{keyword} {{")
        self.triples(depth + 1, template.triple_patterns)
        self.emit(depth, "}")

    def group(self, depth: int, opener: str, pattern: GraphPattern) -> None:
        self.emit(depth, f"{opener} {{")
        self.triples(depth + 1, pattern.triple_patterns)
        for group in pattern.groups:
            self.group(depth + 1, group.kind.value, group.pattern)
        for expr in pattern.filters:
            self.emit(depth + 1, f"FILTER ({self.expr(expr)})")
        self.emit(depth, "}")

    # -- declarations --------------------------------------------------
    def association(self, assoc: Association) -> str:
        parts = [
            assoc.kind.value,
            f"{self.name(assoc.name)} : {self.name(assoc.source)} {assoc.source_multiplicity}",
            f"-> {self.name(assoc.target)} {assoc.target_multiplicity}",
        ]
        if assoc.inverse is not None:
            parts.append(f"inverse {self.name(assoc.inverse)}")
        if assoc.ordered:
            parts.append("ordered")
        if not assoc.unique:
            parts.append("nonunique")
        if assoc.class_only:
            parts.append("class-only")
        if assoc.source_role or assoc.target_role:
            parts.append(f"roles {_quoted(assoc.source_role)} {_quoted(assoc.target_role)}")
        if assoc.specializes is not None:
            parts.append(f"specializes {self.name(assoc.specializes)}")
        return " ".join(parts)

    def machine(self, decl: StateMachineDecl) -> None:
        self.emit(
            0, f"machine {decl.name} on {self.name(decl.subject_class)}.{self.name(decl.state_property)} {{"
        )
        if decl.driver_class is not None and decl.driver_link is not None:
            self.emit(1, f"driver {self.name(decl.driver_class)} via {self.name(decl.driver_link)}")
        if decl.types:
            self.emit(1, "types " + " ".join(self.name(t) for t in decl.types))
        self.emit(1, "states " + " ".join(_quoted(s) for s in decl.states))
        self.emit(1, f"initial {_quoted(decl.initial)}")
        if decl.finals:
            self.emit(1, "final " + " ".join(_quoted(s) for s in decl.finals))
        for t in decl.transitions:
            line = f"transition {t.id} {_quoted(t.source)} -> {_quoted(t.target)}"
            if t.types:
                line += " for " + " ".join(self.name(c) for c in t.types)
            self.emit(1, line)
        for cls, labels in decl.exclusions.items():
            self.emit(1, f"exclude {self.name(cls)} " + " ".join(_quoted(s) for s in labels))
        self.emit(0, "}")

    def domain_value(self, value) -> str:
        if value.kind is DomainKind.VALUE:
            return render_literal(value.literal)
        return value.kind.value

    def model(self, model: WorkModel) -> str:
        uml = model.uml
        self.emit(0, f"model {model.name}")
        self.emit(0, "")
        for prefix, namespace in self.prefixes.items():
            self.emit(0, f"prefix {prefix}: <{namespace}>")
        if self.prefixes.default is not None:
            self.emit(0, f"default {self.prefixes.default}")

        for cls in uml.classes:
            self.emit(0, "")
            head = ("abstract " if cls.abstract else "") + f"class {self.name(cls.name)}"
            supers = [g.super for g in uml.generalizations if g.sub == cls.name]
            if supers:
                head += " specializes " + ", ".join(self.name(s) for s in supers)
            attributes = [a for a in uml.attributes if a.owner == cls.name]
            if not attributes:
                self.emit(0, head)
                continue
            self.emit(0, head + " {")
            for attr in attributes:
                line = f"{self.name(attr.name)} : {attr.datatype.value} {attr.multiplicity}"
                if attr.default is not None:
                    line += f" = {render_literal(attr.default)}"
                self.emit(1, line)
            self.emit(0, "}")

        if uml.associations:
            self.emit(0, "")
        for assoc in uml.associations:
            self.emit(0, self.association(assoc))

        if uml.value_partitions:
            self.emit(0, "")
        for partition in uml.value_partitions:
            values = " ".join(_quoted(v) for v in partition.values)
            if partition.parent is None:
                self.emit(
                    0,
                    f"partition {self.name(partition.name)} on {self.name(partition.owner)}."
                    f"{self.name(partition.attribute)} {{ {values} }}",
                )
            else:
                parent, value = partition.parent
                self.emit(
                    0,
                    f"partition {self.name(partition.name)} refines {self.name(parent)}."
                    f"{_quoted(value)} {{ {values} }}",
                )

        for constraint in model.rules.constraints:
            self.emit(0, "")
            self.emit(
                0,
                f"constraint {constraint.id} on {self.name(constraint.attached_class)} "
                f"{_quoted(constraint.message)}",
            )
            self.group(0, "ASK WHERE", constraint.body)
        for constructor in model.rules.constructors:
            self.emit(0, "")
            self.emit(0, f"constructor on {self.name(constructor.attached_class)}")
            self.template(0, "CONSTRUCT", constructor.template)
            self.group(0, "WHERE", constructor.where)
        for rule in model.rules.rules:
            self.emit(0, "")
            head = f"rule {rule.id} on {self.name(rule.attached_class)}"
            self.emit(0, head + (f" {_quoted(rule.comment)}" if rule.comment else ""))
            self.template(0, "DELETE", rule.delete)
            self.template(0, "INSERT", rule.insert)
            self.group(0, "WHERE", rule.where)

        for decl in model.machines:
            self.emit(0, "")
            self.machine(decl)

        if model.mutability.kinds:
            self.emit(0, "")
            self.emit(0, "mutability {")
            for prop, kind in model.mutability.kinds.items():
                line = f"{kind.value} {self.name(prop)}"
                domain = model.mutability.domains.get(prop)
                if domain:
                    line += " { " + " ".join(self.domain_value(v) for v in domain) + " }"
                self.emit(1, line)
            self.emit(0, "}")

        options = model.options
        self.emit(0, "")
        self.emit(0, "options {")
        self.emit(1, f"value-partition {options.value_partition_strategy.value}")
        self.emit(1, f"part-whole {options.part_whole_strategy.value}")
        self.emit(1, f"ordered-index-limit {options.ordered_index_limit}")
        self.emit(0, "}")
        return "\n".join(self.lines) + "\n"

    def event(self, event: Event) -> str:
        if isinstance(event, At):
            return f"at {event.when.strftime(DATETIME_FORMAT)}"
        if isinstance(event, Create):
            line = f"create {self.name(event.name)} : {self.name(event.cls)}"
            if event.properties:
                body = " ".join(f"{self.name(p)} {self.term(v)}" for p, v in event.properties)
                line += f" {{ {body} }}"
            return line
        if isinstance(event, SetValue):
            return f"set {self.name(event.name)} {self.name(event.property)} {self.term(event.value)}"
        if isinstance(event, ClearValue):
            return f"clear {self.name(event.name)} {self.name(event.property)}"
        if isinstance(event, Run):
            return "run"
        if isinstance(event, ExpectState):
            return f"expect {self.name(event.name)} state {_quoted(event.label)}"
        if isinstance(event, CheckConstraints):
            return " ".join(["check-constraints", *event.expected])
        raise TypeError(f"unknown scenario event {event!r}")


def print_model(model: WorkModel) -> str:
    """Canonical model text."""
    return _Printer(model.prefixes).model(model)


def print_scenario(scenario: Scenario, prefixes: PrefixTable) -> str:
    """Canonical scenario text, names shortened with ``prefixes``."""
    printer = _Printer(prefixes)
    lines = [f"scenario {scenario.name}"] + [printer.event(e) for e in scenario.events]
    return "\n".join(lines) + "\n"
