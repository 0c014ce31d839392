"""Unit tests for the term model."""

from datetime import datetime, timedelta, timezone

import pytest
from rdflib import Literal, URIRef, Variable
from rdflib.namespace import XSD

from cwp_verifier.errors import UnknownPrefix
from cwp_verifier.triples.terms import (
    TYPE,
    LiteralTag,
    PrefixTable,
    boolean_literal,
    datetime_literal,
    integer_literal,
    literal_tag,
    literal_value,
    string_literal,
)

NS = "http://example.org/test#"


class TestLiterals:
    """Tests for the literal constructors."""

    def test_each_constructor_pins_its_tag(self):
        """Verify every helper produces the matching tag."""
        assert literal_tag(string_literal("x")) is LiteralTag.STRING
        assert literal_tag(integer_literal(3)) is LiteralTag.INTEGER
        assert literal_tag(boolean_literal(True)) is LiteralTag.BOOLEAN
        assert literal_tag(datetime_literal("2016-01-05T09:00:00")) is LiteralTag.DATETIME

    def test_no_coercion_between_tags(self):
        """Verify "1" and 1 are different terms."""
        assert string_literal("1") != integer_literal(1)
        assert string_literal("true") != boolean_literal(True)

    def test_integer_range_is_64_bit(self):
        """Verify integers outside the signed 64-bit range are refused."""
        assert literal_value(integer_literal(2**63 - 1)) == 2**63 - 1
        assert literal_value(integer_literal(-(2**63))) == -(2**63)
        with pytest.raises(OverflowError):
            integer_literal(2**63)

    def test_datetime_drops_microseconds(self):
        """Verify dateTime literals have second precision."""
        literal = datetime_literal(datetime(2016, 1, 5, 9, 0, 0, 123456))
        assert str(literal) == "2016-01-05T09:00:00"
        assert literal.datatype == XSD.dateTime

    def test_datetime_rejects_timezone(self):
        """Verify timezone-aware datetimes are refused."""
        with pytest.raises(ValueError):
            datetime_literal(datetime(2016, 1, 5, tzinfo=timezone.utc))

    def test_datetime_rejects_malformed_text(self):
        """Verify a non ISO-8601 string is refused."""
        with pytest.raises(ValueError):
            datetime_literal("05/01/2016")

    def test_literal_values(self):
        """Verify Python values come back from each tag."""
        assert literal_value(boolean_literal(False)) is False
        assert literal_value(string_literal("done")) == "done"
        when = literal_value(datetime_literal("2016-01-05T09:00:00"))
        assert when + timedelta(hours=1) == datetime(2016, 1, 5, 10, 0, 0)

    def test_unsupported_datatype(self):
        """Verify foreign datatypes are rejected."""
        with pytest.raises(ValueError):
            literal_tag(Literal("1.5", datatype=XSD.decimal))


class TestPrefixTable:
    """Tests for PrefixTable."""

    @pytest.fixture
    def table(self):
        return PrefixTable({"ex": NS}, default="ex")

    def test_expand_prefixed_name(self, table):
        """Verify prefix:local expansion."""
        assert table.expand("ex:Order") == URIRef(NS + "Order")

    def test_expand_bare_name_uses_default(self, table):
        """Verify bare identifiers take the default prefix."""
        assert table.expand("Order") == URIRef(NS + "Order")

    def test_undeclared_prefix(self, table):
        """Verify an unknown prefix raises UnknownPrefix."""
        with pytest.raises(UnknownPrefix) as exc_info:
            table.expand("other:Order")
        assert exc_info.value.code == "UNKNOWN_PREFIX"

    def test_bare_name_without_default(self):
        """Verify a bare name needs a default prefix."""
        with pytest.raises(UnknownPrefix):
            PrefixTable({"ex": NS}).expand("Order")

    def test_render_terms(self, table):
        """Verify the canonical rendering of each kind of term."""
        assert table.render(URIRef(NS + "lab1")) == "ex:lab1"
        assert table.render_predicate(TYPE) == "a"
        assert table.render(TYPE) == "<http://www.w3.org/1999/02/22-rdf-syntax-ns#type>"
        assert table.render(URIRef("http://elsewhere.org/x")) == "<http://elsewhere.org/x>"
        assert table.render(Variable("this")) == "?this"
        assert table.render(string_literal('say "hi"')) == '"say \\"hi\\""'
        assert table.render(integer_literal(-7)) == "-7"
        assert table.render(boolean_literal(True)) == "true"
        assert table.render(datetime_literal("2016-01-05T09:00:00")) == '"2016-01-05T09:00:00"^^dateTime'

    def test_unwritable_local_part_keeps_full_name(self, table):
        """Verify local parts outside the prefixed-name charset render as <iri>."""
        assert table.render(URIRef(NS + "o1.v2")) == f"<{NS}o1.v2>"
        assert table.render(URIRef(NS + "a/b")) == f"<{NS}a/b>"
        assert table.render(URIRef(NS + "T3'")) == "ex:T3'"

    def test_longest_namespace_wins(self):
        """Verify nested namespaces render with the more specific prefix."""
        table = PrefixTable({"a": "http://x.org/", "b": "http://x.org/y#"})
        assert table.render(URIRef("http://x.org/y#z")) == "b:z"
        assert table.local_name(URIRef("http://x.org/y#z")) == "z"

    def test_rebinding_clears_render_cache(self, table):
        """Verify renders follow a later bind."""
        name = URIRef("http://other.org/n")
        assert table.render(name) == "<http://other.org/n>"
        table.bind("o", "http://other.org/")
        assert table.render(name) == "o:n"

    def test_copy_is_independent(self, table):
        """Verify binding on a copy leaves the original alone."""
        clone = table.copy()
        clone.bind("o", "http://other.org/")
        assert clone != table
        assert table.items() == [("ex", NS)]
