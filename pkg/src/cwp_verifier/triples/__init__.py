"""Terms, triples and the indexed closed-world triple store."""

from cwp_verifier.triples.store import Node, Triple, TripleStore, triple_sort_key
from cwp_verifier.triples.terms import (
    TYPE,
    LiteralTag,
    Name,
    PrefixTable,
    Term,
    boolean_literal,
    datetime_literal,
    integer_literal,
    literal_tag,
    literal_value,
    string_literal,
)
from cwp_verifier.triples.textformat import parse_triples, serialize

__all__ = [
    "TYPE",
    "LiteralTag",
    "Name",
    "Node",
    "PrefixTable",
    "Term",
    "Triple",
    "TripleStore",
    "boolean_literal",
    "datetime_literal",
    "integer_literal",
    "literal_tag",
    "literal_value",
    "parse_triples",
    "serialize",
    "string_literal",
    "triple_sort_key",
]
