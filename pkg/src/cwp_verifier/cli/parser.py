"""Parser for model and scenario files.

Both languages share ``grammar.lark``. The transformers below turn the parse
tree into a :class:`WorkModel` or a :class:`Scenario`; names are expanded
while the tree is walked, so a prefix must be declared before it is used.
"""

import dataclasses
import logging
import re
from datetime import datetime
from typing import Optional

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedInput, UnexpectedToken, VisitError
from lark.lexer import PatternStr
from rdflib import URIRef, Variable

from cwp_verifier.errors import InvalidModel, ModelSyntaxError, SyntaxIssue, VerifierError
from cwp_verifier.query.pattern import (
    THIS,
    And,
    Comparison,
    ConstructTemplate,
    GraphPattern,
    Group,
    GroupKind,
    Not,
    NowExpr,
    Or,
    TermExpr,
    TriplePattern,
)
from cwp_verifier.rules.model import AskConstraint, Constructor, RuleSet, TransitionRule
from cwp_verifier.schema.semantic import PartWholeStrategy, TranslationOptions, ValuePartitionStrategy
from cwp_verifier.schema.uml import (
    MANY,
    OPTIONAL,
    Association,
    AssociationKind,
    Attribute,
    Generalization,
    Multiplicity,
    UmlClass,
    UmlClassModel,
    ValuePartition,
    datatype_named,
)
from cwp_verifier.statechart.machine import (
    DeclaredTransition,
    DomainKind,
    DomainValue,
    Mutability,
    PropertyMutability,
    StateMachineDecl,
)
from cwp_verifier.statechart.scenario import (
    At,
    CheckConstraints,
    ClearValue,
    Create,
    ExpectState,
    Run,
    Scenario,
    SetValue,
)
from cwp_verifier.triples.terms import (
    DATETIME_FORMAT,
    TYPE,
    PrefixTable,
    boolean_literal,
    datetime_literal,
    integer_literal,
    literal_tag,
    render_literal,
    string_literal,
    unescape_string,
)
from cwp_verifier.triples.textformat import parse_triples, syntax_issue
from cwp_verifier.workmodel import WorkModel

logger = logging.getLogger(__name__)

MAX_SYNTAX_ISSUES = 20

_parser = Lark.open(
    "grammar.lark",
    rel_to=__file__,
    parser="lalr",
    lexer="contextual",
    start=["model", "scenario"],
    propagate_positions=True,
)

_FIRST_WORD = re.compile(r"\A(?:\s|#[^\n]*)*([A-Za-z@]+)")


def _text(token: Token) -> str:
    return unescape_string(str(token)[1:-1])


def _describe_terminal(name: str) -> str:
    if name == "$END":
        return "end of input"
    try:
        terminal = _parser.get_terminal(name)
    except KeyError:
        return name
    if isinstance(terminal.pattern, PatternStr):
        return f'"{terminal.pattern.value}"'
    return name


@dataclasses.dataclass(frozen=True)
class _Filter:
    expr: object


@v_args(inline=True)
class _TermBuilder(Transformer):
    """Names, variables and literals shared by both languages."""

    def __init__(self, prefixes: PrefixTable):
        super().__init__()
        self.prefixes = prefixes

    def bare(self, token: Token) -> URIRef:
        return self.prefixes.expand_local(str(token))

    def pname(self, token: Token) -> URIRef:
        return self.prefixes.expand(str(token))

    def iri(self, token: Token) -> URIRef:
        return URIRef(str(token)[1:-1])

    def var(self, token: Token) -> Variable:
        return Variable(str(token)[1:])

    def type_kw(self):
        return TYPE

    def datetime_lit(self, text: Token, _suffix: Token):
        return datetime_literal(_text(text))

    def string_lit(self, text: Token):
        return string_literal(_text(text))

    def integer_lit(self, token: Token):
        return integer_literal(int(str(token)))

    def true_lit(self):
        return boolean_literal(True)

    def false_lit(self):
        return boolean_literal(False)


@v_args(inline=True)
class _ModelBuilder(_TermBuilder):
    """Builds a WorkModel declaration by declaration."""

    def __init__(self):
        super().__init__(PrefixTable())
        self.uml = UmlClassModel()
        self.rules = RuleSet()
        self.machines: list[StateMachineDecl] = []
        self.mutability = PropertyMutability()
        self.options = TranslationOptions()

    def model(self, name: Token, *_items) -> WorkModel:
        if self.prefixes.default is not None:
            self.uml.namespace = self.prefixes.namespace(self.prefixes.default)
        return WorkModel(
            name=str(name),
            prefixes=self.prefixes,
            uml=self.uml,
            rules=self.rules,
            machines=self.machines,
            mutability=self.mutability,
            options=self.options,
        )

    # -- prefixes ------------------------------------------------------
    def prefix_decl(self, prefix: Token, iri: Token) -> None:
        self.prefixes.bind(str(prefix)[:-1], str(iri)[1:-1])

    def default_decl(self, prefix: Token) -> None:
        self.prefixes.namespace(str(prefix))
        self.prefixes.default = str(prefix)

    # -- class diagram -------------------------------------------------
    def abstract_flag(self, *tokens: Token) -> bool:
        return bool(tokens)

    def specializes(self, *names: URIRef) -> tuple:
        return names

    def class_body(self, *attributes) -> list:
        return list(attributes)

    def attribute(self, name: URIRef, datatype: Token, *rest):
        multiplicity = next((r for r in rest if isinstance(r, Multiplicity)), OPTIONAL)
        default = next((r for r in rest if not isinstance(r, Multiplicity)), None)
        tag = datatype_named(str(datatype))
        if default is not None and literal_tag(default) is not tag:
            raise InvalidModel(
                f"default {render_literal(default)} of {self.prefixes.render(name)} is not a {tag.value}",
                subject=self.prefixes.render(name),
            )
        return name, tag, multiplicity, default

    def default_value(self, literal):
        return literal

    def multiplicity(self, low: Token, high: Optional[int]) -> Multiplicity:
        return Multiplicity(int(str(low)), high)

    def bound(self, token: Token) -> int:
        return int(str(token))

    def unbounded(self) -> None:
        return None

    def class_decl(self, abstract: bool, name: URIRef, *rest) -> None:
        self.uml.classes.append(UmlClass(name, abstract))
        for part in rest:
            if isinstance(part, tuple):
                self.uml.generalizations.extend(Generalization(name, sup) for sup in part)
            else:
                for attr_name, datatype, multiplicity, default in part:
                    self.uml.attributes.append(
                        Attribute(name, attr_name, datatype, multiplicity, default)
                    )

    def plain(self) -> AssociationKind:
        return AssociationKind.PLAIN

    def aggregation(self) -> AssociationKind:
        return AssociationKind.AGGREGATION

    def composition(self) -> AssociationKind:
        return AssociationKind.COMPOSITION

    def opt_inverse(self, name: URIRef):
        return {"inverse": name}

    def opt_ordered(self):
        return {"ordered": True}

    def opt_nonunique(self):
        return {"unique": False}

    def opt_class_only(self, _keyword: Token):
        return {"class_only": True}

    def opt_roles(self, source_role: Token, target_role: Token):
        return {"source_role": _text(source_role), "target_role": _text(target_role)}

    def opt_specializes(self, name: URIRef):
        return {"specializes": name}

    def assoc_decl(self, kind: AssociationKind, name: URIRef, source: URIRef, *rest) -> None:
        rest = list(rest)
        source_multiplicity = rest.pop(0) if isinstance(rest[0], Multiplicity) else MANY
        target = rest.pop(0)
        target_multiplicity = rest.pop(0) if rest and isinstance(rest[0], Multiplicity) else MANY
        options: dict = {}
        for option in rest:
            options.update(option)
        self.uml.associations.append(
            Association(
                name,
                source,
                target,
                kind,
                source_multiplicity,
                target_multiplicity,
                **options,
            )
        )

    def partition_on(self, name: URIRef, owner: URIRef, attribute: URIRef, *values: Token) -> None:
        self.uml.value_partitions.append(
            ValuePartition(name, owner, attribute, tuple(_text(v) for v in values))
        )

    def partition_refines(self, name: URIRef, parent: URIRef, value: Token, *values: Token) -> None:
        refined = next((p for p in self.uml.value_partitions if p.name == parent), None)
        if refined is None:
            raise InvalidModel(
                f"partition {self.prefixes.render(name)} refines undeclared partition "
                f"{self.prefixes.render(parent)}",
                subject=self.prefixes.render(name),
            )
        if _text(value) not in refined.values:
            raise InvalidModel(
                f"partition {self.prefixes.render(parent)} has no value \"{_text(value)}\"",
                subject=self.prefixes.render(name),
            )
        self.uml.value_partitions.append(
            ValuePartition(
                name,
                refined.owner,
                refined.attribute,
                tuple(_text(v) for v in values),
                parent=(parent, _text(value)),
            )
        )

    # -- behavior ------------------------------------------------------
    def where_kw(self) -> None:
        return None

    def comment(self, *text: Token) -> str:
        return _text(text[0]) if text else ""

    def constraint_decl(self, ident: Token, cls: URIRef, message: Token, _where, body: GraphPattern) -> None:
        body.validate(frozenset({THIS}))
        self.rules.constraints.append(AskConstraint(str(ident), cls, _text(message), body))

    def constructor_decl(self, cls: URIRef, template: ConstructTemplate, where: GraphPattern) -> None:
        where.validate(frozenset({THIS}))
        template.check_bound(where.variables() | {THIS}, "CONSTRUCT")
        self.rules.constructors.append(Constructor(cls, template, where))

    def rule_decl(
        self,
        ident: Token,
        cls: URIRef,
        comment: str,
        delete: ConstructTemplate,
        insert: ConstructTemplate,
        where: GraphPattern,
    ) -> None:
        rule = TransitionRule(str(ident), cls, delete, insert, where, comment)
        rule.effective_where().validate()
        rule.check_templates()
        self.rules.rules.append(rule)

    # -- patterns ------------------------------------------------------
    def template(self, *patterns: TriplePattern) -> ConstructTemplate:
        return ConstructTemplate(tuple(patterns))

    def group_graph(self, *elements) -> GraphPattern:
        return GraphPattern(
            triple_patterns=tuple(e for e in elements if isinstance(e, TriplePattern)),
            filters=tuple(e.expr for e in elements if isinstance(e, _Filter)),
            groups=tuple(e for e in elements if isinstance(e, Group)),
        )

    def triple_pattern(self, subject, predicate, obj) -> TriplePattern:
        return TriplePattern(subject, predicate, obj)

    def filter(self, expr) -> _Filter:
        return _Filter(expr)

    def exists(self, pattern: GraphPattern) -> Group:
        return Group(GroupKind.EXISTS, pattern)

    def not_exists(self, pattern: GraphPattern) -> Group:
        return Group(GroupKind.NOT_EXISTS, pattern)

    def or_(self, left, right) -> Or:
        return Or(left, right)

    def and_(self, left, right) -> And:
        return And(left, right)

    def not_(self, operand) -> Not:
        return Not(operand)

    def compare(self, left, op: Token, right) -> Comparison:
        return Comparison(str(op), left, right)

    def term_expr(self, term) -> TermExpr:
        return TermExpr(term)

    def now(self) -> NowExpr:
        return NowExpr()

    # -- state machines ------------------------------------------------
    def m_driver(self, cls: URIRef, link: URIRef):
        return {"driver_class": cls, "driver_link": link}

    def m_types(self, *names: URIRef):
        return {"types": names}

    def m_states(self, *labels: Token):
        return {"states": tuple(_text(label) for label in labels)}

    def m_initial(self, label: Token):
        return {"initial": _text(label)}

    def m_final(self, *labels: Token):
        return {"finals": tuple(_text(label) for label in labels)}

    def transition_types(self, *names: URIRef) -> tuple:
        return names

    def m_transition(self, ident: Token, source: Token, target: Token, types: tuple):
        return DeclaredTransition(str(ident), _text(source), _text(target), types)

    def m_exclude(self, cls: URIRef, *labels: Token):
        return (cls, tuple(_text(label) for label in labels))

    def machine_decl(self, name: Token, subject: URIRef, state_property: URIRef, *items) -> None:
        decl = StateMachineDecl(str(name), subject, state_property)
        for item in items:
            if isinstance(item, DeclaredTransition):
                decl.transitions.append(item)
            elif isinstance(item, tuple):
                decl.exclusions[item[0]] = decl.exclusions.get(item[0], ()) + item[1]
            else:
                for key, value in item.items():
                    setattr(decl, key, value)
        decl.validate()
        self.machines.append(decl)

    # -- mutability ----------------------------------------------------
    def past(self) -> DomainValue:
        return DomainValue(DomainKind.PAST)

    def future(self) -> DomainValue:
        return DomainValue(DomainKind.FUTURE)

    def absent(self) -> DomainValue:
        return DomainValue(DomainKind.ABSENT)

    def domain(self, *values) -> tuple[DomainValue, ...]:
        return tuple(
            v if isinstance(v, DomainValue) else DomainValue(DomainKind.VALUE, v) for v in values
        )

    def mut_immutable(self, prop: URIRef, domain: tuple = ()):
        return prop, Mutability.IMMUTABLE, domain

    def mut_environment(self, prop: URIRef, domain: tuple = ()):
        return prop, Mutability.ENVIRONMENT, domain

    def mut_rule_owned(self, _keyword: Token, prop: URIRef):
        return prop, Mutability.RULE_OWNED, ()

    def mutability_decl(self, *items) -> None:
        for prop, kind, domain in items:
            self.mutability.declare(prop, kind, domain)

    # -- options -------------------------------------------------------
    def opt_value_partition(self, _keyword: Token, strategy: Token):
        try:
            return {"value_partition_strategy": ValuePartitionStrategy(str(strategy))}
        except ValueError:
            raise InvalidModel(f"unknown value-partition strategy '{strategy}'", subject=str(strategy))

    def opt_part_whole(self, _keyword: Token, strategy: Token):
        try:
            return {"part_whole_strategy": PartWholeStrategy(str(strategy))}
        except ValueError:
            raise InvalidModel(f"unknown part-whole strategy '{strategy}'", subject=str(strategy))

    def opt_ordered_index_limit(self, _keyword: Token, limit: Token):
        return {"ordered_index_limit": int(str(limit))}

    def options_decl(self, *items) -> None:
        for item in items:
            self.options = dataclasses.replace(self.options, **item)


@v_args(inline=True)
class _ScenarioBuilder(_TermBuilder):
    """Builds a Scenario; names expand against the model's prefixes."""

    def scenario(self, name: Token, *events) -> Scenario:
        return Scenario(str(name), list(events))

    @v_args(meta=True)
    def at(self, meta, children) -> At:
        return At(datetime.strptime(str(children[0]), DATETIME_FORMAT), line=meta.line)

    def create_body(self, *items) -> tuple:
        return tuple(zip(items[0::2], items[1::2]))

    @v_args(meta=True)
    def create(self, meta, children) -> Create:
        name, cls = children[0], children[1]
        properties = children[2] if len(children) > 2 else ()
        return Create(name, cls, properties, line=meta.line)

    @v_args(meta=True)
    def set_value(self, meta, children) -> SetValue:
        return SetValue(*children, line=meta.line)

    @v_args(meta=True)
    def clear_value(self, meta, children) -> ClearValue:
        return ClearValue(*children, line=meta.line)

    @v_args(meta=True)
    def run(self, meta, _children) -> Run:
        return Run(line=meta.line)

    @v_args(meta=True)
    def expect_state(self, meta, children) -> ExpectState:
        return ExpectState(children[0], _text(children[1]), line=meta.line)

    @v_args(meta=True)
    def check_constraints(self, meta, children) -> CheckConstraints:
        return CheckConstraints(tuple(str(t) for t in children[1:]), line=meta.line)


def _parse_tree(text: str, start: str):
    issues: list[SyntaxIssue] = []

    def record(exc: UnexpectedInput) -> bool:
        issue = syntax_issue(exc, _describe_terminal)
        if issue not in issues:
            issues.append(issue)
        at_end = isinstance(exc, UnexpectedToken) and exc.token.type == "$END"
        return not at_end and len(issues) < MAX_SYNTAX_ISSUES

    try:
        tree = _parser.parse(text, start=start, on_error=record)
    except UnexpectedInput as exc:
        record(exc)
        raise ModelSyntaxError(issues) from exc
    if issues:
        raise ModelSyntaxError(issues)
    return tree


def _transform(tree, builder: Transformer):
    try:
        return builder.transform(tree)
    except VisitError as exc:
        original = exc.orig_exc
        meta = getattr(exc.obj, "meta", None)
        line = getattr(meta, "line", None)
        column = getattr(meta, "column", None)
        if isinstance(original, VerifierError):
            if original.line is None:
                original.line, original.column = line, column
            raise original
        raise ModelSyntaxError([SyntaxIssue(line or 0, column or 0, str(original))]) from original


def parse_model(text: str) -> WorkModel:
    """Parse and validate a model file.

    Args:
        text: Model source text

    Returns:
        The validated work model

    Raises:
        ModelSyntaxError: With every positioned syntax issue found
        VerifierError: For semantic problems, positioned at the declaration
    """
    model = _transform(_parse_tree(text, "model"), _ModelBuilder())
    model.validate()
    logger.info(
        "parsed model %s: %d class(es), %d rule(s)", model.name, len(model.uml.classes), len(model.rules.rules)
    )
    return model


def parse_scenario(text: str, prefixes: PrefixTable) -> Scenario:
    """Parse a scenario file; bare names use the model's default prefix."""
    return _transform(_parse_tree(text, "scenario"), _ScenarioBuilder(prefixes))


def document_kind(text: str) -> str:
    """``model``, ``scenario`` or ``triples``, judged by the first keyword."""
    match = _FIRST_WORD.match(text)
    word = match.group(1) if match else ""
    return word if word in ("model", "scenario") else "triples"


def parse_document(text: str, prefixes: Optional[PrefixTable] = None):
    """Parse a model, scenario or triple file.

    Scenarios and triple text expand names with ``prefixes``, normally the
    table of the model they belong to.
    """
    kind = document_kind(text)
    if kind == "model":
        return parse_model(text)
    prefixes = prefixes if prefixes is not None else PrefixTable()
    if kind == "scenario":
        return parse_scenario(text, prefixes)
    return parse_triples(text, prefixes.copy())
