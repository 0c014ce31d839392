"""Unit tests for the canonical triple text format."""

import pytest
from rdflib import Namespace, URIRef

from cwp_verifier.errors import ModelSyntaxError, UnknownPrefix
from cwp_verifier.triples.store import Triple, TripleStore
from cwp_verifier.triples.terms import (
    TYPE,
    PrefixTable,
    boolean_literal,
    datetime_literal,
    integer_literal,
    string_literal,
)
from cwp_verifier.triples.textformat import parse_triples, serialize

EX = Namespace("http://example.org/test#")

SAMPLE = """\
# orders
@prefix ex: <http://example.org/test#> .
ex:lab1 a ex:LabTest .
ex:lab1 ex:state "Waiting for report" .
ex:lab1 ex:patientNumber -7 .
ex:lab1 ex:reportreleased false .
ex:lab1 ex:dateAdded "2016-01-04T09:00:00"^^dateTime .
ex:lab1 ex:note "line\\nbreak" .
<http://other.org/x> ex:seeAlso ex:lab1 .
"""


class TestParseTriples:
    """Tests for parse_triples."""

    def test_parses_every_literal_kind(self):
        """Verify names, the type keyword and each literal tag."""
        store = parse_triples(SAMPLE)

        assert Triple(EX.lab1, TYPE, EX.LabTest) in store
        assert Triple(EX.lab1, EX.state, string_literal("Waiting for report")) in store
        assert Triple(EX.lab1, EX.patientNumber, integer_literal(-7)) in store
        assert Triple(EX.lab1, EX.reportreleased, boolean_literal(False)) in store
        assert Triple(EX.lab1, EX.dateAdded, datetime_literal("2016-01-04T09:00:00")) in store
        assert Triple(EX.lab1, EX.note, string_literal("line\nbreak")) in store
        assert Triple(URIRef("http://other.org/x"), EX.seeAlso, EX.lab1) in store

    def test_prefix_lines_extend_the_given_table(self):
        """Verify @prefix lines bind into the caller's table."""
        table = PrefixTable()
        parse_triples(SAMPLE, table)
        assert table.namespace("ex") == str(EX)

    def test_undeclared_prefix(self):
        """Verify a name with an unknown prefix is refused."""
        with pytest.raises(UnknownPrefix):
            parse_triples("ex:a ex:b ex:c .")

    def test_syntax_error_is_positioned(self):
        """Verify a missing terminator reports its line."""
        text = '@prefix ex: <http://example.org/test#> .\nex:a ex:b "c"\nex:d ex:e ex:f .\n'
        with pytest.raises(ModelSyntaxError) as exc_info:
            parse_triples(text)
        assert exc_info.value.issues[0].line == 3

    def test_integer_overflow_is_a_syntax_error(self):
        """Verify out-of-range integers fail as positioned input errors."""
        text = "@prefix ex: <http://example.org/test#> .\nex:a ex:n 99999999999999999999 .\n"
        with pytest.raises(ModelSyntaxError):
            parse_triples(text)


class TestSerialize:
    """Tests for serialize."""

    @pytest.fixture
    def store(self):
        store = TripleStore(PrefixTable({"ex": str(EX)}))
        store.add_triple(Triple(EX.b, EX.state, string_literal("Initial")))
        store.add_triple(Triple(EX.a, EX.flag, boolean_literal(True)))
        store.add_triple(Triple(EX.a, TYPE, EX.Thing))
        return store

    def test_lines_are_sorted(self, store):
        """Verify canonical order by rendered subject, predicate, object."""
        assert serialize(store) == (
            "ex:a a ex:Thing .\n"
            "ex:a ex:flag true .\n"
            'ex:b ex:state "Initial" .\n'
        )

    def test_prefix_header_on_request(self, store):
        """Verify the @prefix header makes the text self-contained."""
        text = serialize(store, with_prefixes=True)
        assert text.startswith("@prefix ex: <http://example.org/test#> .\n")
        assert parse_triples(text) == store

    def test_names_outside_prefixed_charset_parse_back(self):
        """Verify dotted, slashed and type-valued names survive serialize then parse."""
        store = TripleStore(PrefixTable({"ex": str(EX)}))
        store.add_triple(Triple(URIRef(str(EX) + "o1.v2"), EX.p, string_literal("v")))
        store.add_triple(Triple(EX.o1, EX.p, URIRef(str(EX) + "a/b")))
        store.add_triple(Triple(EX.o1, EX.kind, TYPE))
        store.add_triple(Triple(TYPE, EX.label, string_literal("type")))
        text = serialize(store)
        assert f"<{EX}o1.v2> ex:p \"v\" .\n" in text
        assert "ex:o1 ex:kind <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> .\n" in text
        assert parse_triples(text, PrefixTable({"ex": str(EX)})) == store

    def test_empty_store(self):
        """Verify an empty store serializes to nothing."""
        assert serialize(TripleStore()) == ""
