"""Canonical line-per-triple text format.

One triple per line, ``<subject> <predicate> <object> .``, lines in canonical
order. Names are written ``prefix:local`` (``a`` for the type predicate),
literals as ``"text"``, ``12``, ``true``/``false`` or
``"2016-01-05T09:00:00"^^dateTime``. Files may open with
``@prefix p: <namespace> .`` lines; ``serialize`` writes them only on request.
"""

from typing import Callable, Optional

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError
from rdflib import URIRef

from cwp_verifier.errors import ModelSyntaxError, SyntaxIssue, VerifierError
from cwp_verifier.triples.store import Triple, TripleStore
from cwp_verifier.triples.terms import (
    TYPE,
    PrefixTable,
    boolean_literal,
    datetime_literal,
    integer_literal,
    string_literal,
    unescape_string,
)

TRIPLE_GRAMMAR = r"""
    start: (prefix_decl | triple)*

    prefix_decl: "@prefix" PREFIX_NS IRIREF "."
    triple: name verb object "."

    ?verb: name
         | TYPE_KW -> type_kw
    ?object: name
           | literal

    name: PNAME    -> pname
        | IRIREF   -> iri

    literal: STRING DT_SUFFIX -> datetime_lit
           | STRING           -> string_lit
           | INT              -> integer_lit
           | BOOL             -> boolean_lit

    PNAME: /[A-Za-z_][\w\-]*:[\w\-']*/
    PREFIX_NS: /[A-Za-z_][\w\-]*:/
    IRIREF: /<[^<>"{}|^`\\\s]*>/
    STRING: /"(?:[^"\\\n]|\\.)*"/
    DT_SUFFIX: "^^dateTime"
    INT: /[+-]?\d+/
    BOOL: /(true|false)(?![\w:\-])/
    TYPE_KW: /a(?![\w:\-])/

    COMMENT: /#[^\n]*/
    %import common.WS
    %ignore WS
    %ignore COMMENT
"""

_parser = Lark(TRIPLE_GRAMMAR, parser="lalr", propagate_positions=True)


@v_args(inline=True)
class _TripleBuilder(Transformer):
    def __init__(self, prefixes: PrefixTable):
        super().__init__()
        self.prefixes = prefixes
        self.triples: list[Triple] = []

    def start(self, *_items):
        return self.triples

    def prefix_decl(self, prefix: Token, iri: Token):
        self.prefixes.bind(str(prefix)[:-1], str(iri)[1:-1])

    def triple(self, subject, predicate, obj):
        self.triples.append(Triple(subject, predicate, obj))

    def pname(self, token: Token):
        return self.prefixes.expand(str(token))

    def iri(self, token: Token):
        return URIRef(str(token)[1:-1])

    def type_kw(self, _token: Token):
        return TYPE

    def datetime_lit(self, text: Token, _suffix: Token):
        return datetime_literal(unescape_string(str(text)[1:-1]))

    def string_lit(self, text: Token):
        return string_literal(unescape_string(str(text)[1:-1]))

    def integer_lit(self, token: Token):
        return integer_literal(int(str(token)))

    def boolean_lit(self, token: Token):
        return boolean_literal(str(token) == "true")


def serialize(store: TripleStore, with_prefixes: bool = False) -> str:
    """Render a store as canonical, sorted, line-per-triple text.

    Args:
        store: Store to render
        with_prefixes: Start with an ``@prefix`` line per bound prefix, so the
            text parses back without the model
    """
    render = store.prefixes.render_triple
    header = ""
    if with_prefixes:
        header = "".join(f"@prefix {p}: <{ns}> .\n" for p, ns in store.prefixes.items())
    return header + "".join(
        " ".join(render(*t)) + " .\n"
        for t in store.sorted_triples()
    )


def parse_triples(text: str, prefixes: Optional[PrefixTable] = None) -> TripleStore:
    """Parse triple text into a new store.

    Args:
        text: Triple text (UTF-8 decoded)
        prefixes: Prefix table for expanding names; ``@prefix`` lines in the
            text are added to it.

    Returns:
        A store holding exactly the parsed triples

    Raises:
        ModelSyntaxError: If the text is malformed or a literal is out of range
    """
    prefixes = prefixes if prefixes is not None else PrefixTable()
    try:
        tree = _parser.parse(text)
    except UnexpectedInput as exc:
        raise ModelSyntaxError([syntax_issue(exc)]) from exc
    try:
        triples = _TripleBuilder(prefixes).transform(tree)
    except VisitError as exc:
        original = exc.orig_exc
        if isinstance(original, VerifierError):
            raise original
        meta = getattr(exc.obj, "meta", None)
        line = getattr(meta, "line", 0) or 0
        column = getattr(meta, "column", 0) or 0
        raise ModelSyntaxError([SyntaxIssue(line, column, str(original))]) from original
    return TripleStore(prefixes, triples)


def syntax_issue(exc: UnexpectedInput, describe: Callable[[str], str] = str) -> SyntaxIssue:
    """Convert a lark error into a positioned issue.

    Args:
        exc: The parser or lexer error
        describe: Maps a terminal name to the text shown after "expected"
    """
    expected = getattr(exc, "expected", None) or getattr(exc, "allowed", None) or ()
    expected_text = ", ".join(sorted({describe(str(e)) for e in expected})) or "valid input"
    return SyntaxIssue(exc.line or 0, exc.column or 0, expected_text)
