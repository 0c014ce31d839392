"""Unit tests for schema export."""

import pytest
from rdflib import Namespace

from cwp_verifier.schema import (
    CWP,
    Association,
    AssociationKind,
    Attribute,
    Generalization,
    Multiplicity,
    PartWholeStrategy,
    TranslationOptions,
    UmlClass,
    UmlClassModel,
    ValuePartition,
    export_schema,
    schema_to_store,
    translate,
)
from cwp_verifier.triples.store import Triple
from cwp_verifier.triples.terms import (
    TYPE,
    LiteralTag,
    PrefixTable,
    boolean_literal,
    integer_literal,
    string_literal,
)
from cwp_verifier.triples.textformat import parse_triples

NS = "http://example.org/test#"
EX = Namespace(NS)


def model() -> UmlClassModel:
    return UmlClassModel(
        namespace=NS,
        classes=[UmlClass(EX.Case), UmlClass(EX.Plan), UmlClass(EX.Order, abstract=True), UmlClass(EX.LabTest)],
        attributes=[Attribute(EX.Order, EX.launched, LiteralTag.BOOLEAN, default=boolean_literal(False))],
        associations=[
            Association(EX.hasPlan, EX.Case, EX.Plan, AssociationKind.COMPOSITION, Multiplicity(1, 1)),
            Association(EX.hasOrder, EX.Plan, EX.Order, AssociationKind.COMPOSITION, Multiplicity(1, 1),
                        target_role="orders"),
        ],
        generalizations=[Generalization(EX.LabTest, EX.Order)],
        value_partitions=[ValuePartition(EX.PlanState, EX.Plan, EX.planState, ("open", "closed"))],
    )


@pytest.fixture
def prefixes():
    return PrefixTable({"ex": NS})


class TestSchemaToStore:
    """Tests for schema_to_store."""

    @pytest.fixture
    def store(self, prefixes):
        return schema_to_store(translate(model()), prefixes)

    def test_class_axioms(self, store):
        """Verify classes, subclass links and abstractness."""
        assert Triple(EX.Order, TYPE, CWP.Class) in store
        assert Triple(EX.LabTest, CWP.subClassOf, EX.Order) in store
        assert Triple(EX.Order, CWP.abstract, boolean_literal(True)) in store

    def test_property_axioms(self, store):
        """Verify domain, range, inverse, characteristics and cardinality."""
        assert Triple(EX.launched, CWP.rangeTag, string_literal("boolean")) in store
        assert Triple(EX.hasOrder, CWP.inverseOf, EX.hasOrder_inv) in store
        assert Triple(EX.hasOrder, CWP.characteristic, string_literal("Irreflexive")) in store
        assert Triple(EX.hasOrder_inv, CWP.minCardinality, integer_literal(1)) in store
        assert Triple(EX.hasOrder, CWP.comment, string_literal("target role: orders")) in store

    def test_defaults_and_enumerations(self, store):
        """Verify default values and partition individuals."""
        assert Triple(EX.launched, CWP.hasValue, boolean_literal(False)) in store
        assert store.objects(EX.planState, CWP.oneOf) == [EX.closed, EX.open]

    def test_chain_node(self, store):
        """Verify chains get a named node in the cwp namespace."""
        node = CWP.chain_hasPlan_hasOrder
        assert Triple(node, TYPE, CWP.PropertyChain) in store
        assert Triple(node, CWP.entails, EX.hasPart_generated) in store

    def test_restriction_node(self, prefixes):
        """Verify allValuesFrom restrictions under single hasPart."""
        options = TranslationOptions(part_whole_strategy=PartWholeStrategy.SINGLE_HAS_PART)
        store = schema_to_store(translate(model(), options), prefixes)
        node = CWP.allValuesFrom_Plan_hasOrder
        assert Triple(node, CWP.filler, EX.Order) in store

    def test_caller_prefixes_untouched(self, prefixes):
        """Verify the cwp prefix is bound on a copy."""
        schema_to_store(translate(model()), prefixes)
        assert "cwp" not in dict(prefixes.items())


class TestExportSchema:
    """Tests for export_schema."""

    def test_deterministic(self, prefixes):
        """Verify two exports of the same model are identical."""
        assert export_schema(translate(model()), prefixes) == export_schema(translate(model()), prefixes)

    def test_self_contained_text_parses_back(self, prefixes):
        """Verify the prefixed export reads back into the same triples."""
        schema = translate(model())
        text = export_schema(schema, prefixes, with_prefixes=True)
        assert "@prefix cwp: <http://cwp-verifier.org/ns#> ." in text
        assert parse_triples(text) == schema_to_store(schema, prefixes)
