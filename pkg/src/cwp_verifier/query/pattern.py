"""Graph patterns, filter expressions and construct templates.

These are the parsed forms of WHERE bodies, ASK bodies, EXISTS groups and
CONSTRUCT/DELETE/INSERT templates. All types are immutable and hashable so
validated patterns can be cached.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Optional, Union

from rdflib import Literal, URIRef, Variable

from cwp_verifier.errors import UnboundFilterVariable, UnboundTemplateVariable
from cwp_verifier.triples.store import Node, Triple
from cwp_verifier.triples.terms import TYPE, Term

Binding = dict[Variable, Node]

THIS = Variable("this")


@dataclass(frozen=True)
class TriplePattern:
    """A triple whose positions may hold variables."""

    subject: Term
    predicate: Term
    object: Term

    def terms(self) -> tuple[Term, Term, Term]:
        return (self.subject, self.predicate, self.object)

    def variables(self) -> set[Variable]:
        return {t for t in self.terms() if isinstance(t, Variable)}

    def instantiate(self, binding: Mapping[Variable, Node]) -> Triple:
        """Replace variables using ``binding``.

        Raises:
            UnboundTemplateVariable: If a variable has no value
        """
        values = []
        for term in self.terms():
            if isinstance(term, Variable):
                try:
                    term = binding[term]
                except KeyError:
                    raise UnboundTemplateVariable(
                        f"template variable ?{term} is not bound", subject=f"?{term}"
                    )
            values.append(term)
        return Triple(*values)


# ----------------------------------------------------------------------
# Filter expressions
# ----------------------------------------------------------------------
COMPARISON_OPERATORS = ("=", "!=", "<", ">", "<=", ">=")
ORDERED_OPERATORS = ("<", ">", "<=", ">=")


@dataclass(frozen=True)
class TermExpr:
    term: Term


@dataclass(frozen=True)
class NowExpr:
    """The zero-argument ``now()`` call."""


@dataclass(frozen=True)
class Comparison:
    op: str
    left: "FilterExpr"
    right: "FilterExpr"

    def __post_init__(self):
        if self.op not in COMPARISON_OPERATORS:
            raise ValueError(f"unknown comparison operator {self.op!r}")


@dataclass(frozen=True)
class And:
    left: "FilterExpr"
    right: "FilterExpr"


@dataclass(frozen=True)
class Or:
    left: "FilterExpr"
    right: "FilterExpr"


@dataclass(frozen=True)
class Not:
    operand: "FilterExpr"


FilterExpr = Union[TermExpr, NowExpr, Comparison, And, Or, Not]


def filter_variables(expr: FilterExpr) -> set[Variable]:
    """Variables referenced anywhere in a filter expression."""
    if isinstance(expr, TermExpr):
        return {expr.term} if isinstance(expr.term, Variable) else set()
    if isinstance(expr, NowExpr):
        return set()
    if isinstance(expr, Not):
        return filter_variables(expr.operand)
    return filter_variables(expr.left) | filter_variables(expr.right)


def uses_now(expr: FilterExpr) -> bool:
    if isinstance(expr, NowExpr):
        return True
    if isinstance(expr, TermExpr):
        return False
    if isinstance(expr, Not):
        return uses_now(expr.operand)
    return uses_now(expr.left) or uses_now(expr.right)


# ----------------------------------------------------------------------
# Patterns
# ----------------------------------------------------------------------
class GroupKind(Enum):
    EXISTS = "EXISTS"
    NOT_EXISTS = "NOT EXISTS"


@dataclass(frozen=True)
class Group:
    """An EXISTS / NOT EXISTS sub-pattern. Its bindings never leave it."""

    kind: GroupKind
    pattern: "GraphPattern"


@dataclass(frozen=True)
class GraphPattern:
    """Basic graph pattern with filters and nested existence groups."""

    triple_patterns: tuple[TriplePattern, ...] = ()
    filters: tuple[FilterExpr, ...] = ()
    groups: tuple[Group, ...] = ()

    def variables(self) -> set[Variable]:
        """Variables this pattern's own triple patterns can bind."""
        found: set[Variable] = set()
        for tp in self.triple_patterns:
            found |= tp.variables()
        return found

    def is_empty(self) -> bool:
        return not (self.triple_patterns or self.filters or self.groups)

    def validate(self, outer: frozenset[Variable] = frozenset()) -> None:
        """Check that every filter variable can be bound.

        Args:
            outer: Variables bound by an enclosing pattern or seed binding

        Raises:
            UnboundFilterVariable: If a filter references an unbindable variable
        """
        available = outer | self.variables()
        for expr in self.filters:
            missing = filter_variables(expr) - available
            if missing:
                name = sorted(str(v) for v in missing)[0]
                raise UnboundFilterVariable(
                    f"filter variable ?{name} is not bound by any triple pattern",
                    subject=f"?{name}",
                )
        for group in self.groups:
            group.pattern.validate(frozenset(available))

    def walk(self):
        """Yield this pattern and every nested group pattern."""
        yield self
        for group in self.groups:
            yield from group.pattern.walk()

    def all_triple_patterns(self) -> list[TriplePattern]:
        return [tp for p in self.walk() for tp in p.triple_patterns]

    def dependency_keys(self) -> set:
        """Predicates (and typed classes) whose change can alter matches.

        Keys are predicate names, plus ``(TYPE, cls)`` for type atoms with a
        constant class.
        """
        keys: set = set()
        for tp in self.all_triple_patterns():
            if isinstance(tp.predicate, Variable):
                keys.add(None)
            elif tp.predicate == TYPE and isinstance(tp.object, URIRef):
                keys.add((TYPE, tp.object))
            else:
                keys.add(tp.predicate)
        return keys

    def prepend(self, *patterns: TriplePattern) -> "GraphPattern":
        return GraphPattern(
            triple_patterns=tuple(patterns) + self.triple_patterns,
            filters=self.filters,
            groups=self.groups,
        )


@dataclass(frozen=True)
class ConstructTemplate:
    """Triple patterns instantiated once per binding."""

    triple_patterns: tuple[TriplePattern, ...] = ()

    def variables(self) -> set[Variable]:
        found: set[Variable] = set()
        for tp in self.triple_patterns:
            found |= tp.variables()
        return found

    def check_bound(self, bound: set[Variable], context: str = "template") -> None:
        """Raise if the template uses a variable outside ``bound``."""
        missing = self.variables() - bound
        if missing:
            name = sorted(str(v) for v in missing)[0]
            raise UnboundTemplateVariable(
                f"{context} variable ?{name} is not bound by WHERE", subject=f"?{name}"
            )


def change_keys(triple: Triple) -> tuple:
    """Dependency keys touched when ``triple`` is added or removed."""
    if triple.predicate == TYPE:
        return (triple.predicate, (TYPE, triple.object), None)
    return (triple.predicate, None)


def is_ground(term: Optional[Term]) -> bool:
    return isinstance(term, (URIRef, Literal))


@dataclass
class Diagnostic:
    """A non-fatal evaluation note, such as a type-mismatched comparison."""

    code: str
    message: str
    context: dict = field(default_factory=dict)
