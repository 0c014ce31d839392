"""Unit tests for the model and scenario languages."""

import pytest
from rdflib import Namespace, Variable

from cwp_verifier.cli.parser import document_kind, parse_document, parse_model, parse_scenario
from cwp_verifier.cli.printer import print_model, print_scenario
from cwp_verifier.errors import (
    InvalidModel,
    ModelSyntaxError,
    UnboundTemplateVariable,
    UnknownClass,
    UnknownDatatype,
    UnknownPrefix,
)
from cwp_verifier.query.pattern import Comparison, TermExpr
from cwp_verifier.schema import (
    AssociationKind,
    Attribute,
    Generalization,
    Multiplicity,
    PartWholeStrategy,
    ValuePartition,
    ValuePartitionStrategy,
)
from cwp_verifier.statechart import (
    At,
    CheckConstraints,
    Create,
    DeclaredTransition,
    DomainKind,
    DomainValue,
    ExpectState,
    Mutability,
    Run,
    SetValue,
)
from cwp_verifier.triples.store import Triple, TripleStore
from cwp_verifier.triples.terms import LiteralTag, integer_literal, string_literal

NS = "http://example.org/test#"
EX = Namespace(NS)

SHOP = """\
model shop
prefix ex: <http://example.org/test#>
default ex

class Plan
abstract class Order {
    state : string
    total : integer [1..1] = 0
}
class LabTest specializes Order

composition hasOrder : Plan [1..1] -> Order [0..*] inverse orderOf
association next : Order -> Order [0..1] ordered roles "before" "after"
partition PlanState on Plan.planState { "open" "closed" }

constraint positive on Order "total must not be negative"
ASK WHERE {
    ?this total ?t .
    FILTER (?t < 0)
}

rule R1 on Order "open to closed"
DELETE { ?this state "open" . }
INSERT { ?this state "closed" . }
WHERE { ?this state "open" . }

machine Life on Order.state {
    states "open" "closed"
    initial "open"
    final "closed"
    transition R1 "open" -> "closed"
}

mutability {
    rule-owned state
    environment total { 1 absent }
}

options {
    part-whole single-haspart
}
"""

HEADER = "model m\nprefix ex: <http://example.org/test#>\ndefault ex\n"


class TestParseModel:
    """Tests for parse_model."""

    @pytest.fixture(scope="class")
    def model(self):
        return parse_model(SHOP)

    def test_header(self, model):
        """Verify the model name, prefixes and namespace."""
        assert model.name == "shop"
        assert model.prefixes.default == "ex"
        assert model.uml.namespace == NS

    def test_classes_and_attributes(self, model):
        """Verify abstractness, generalizations, multiplicities and defaults."""
        uml = model.uml
        assert uml.get_class(EX.Order).abstract is True
        assert uml.generalizations == [Generalization(EX.LabTest, EX.Order)]
        assert Attribute(EX.Order, EX.total, LiteralTag.INTEGER, Multiplicity(1, 1), integer_literal(0)) in uml.attributes
        assert Attribute(EX.Order, EX.state, LiteralTag.STRING, Multiplicity(0, 1)) in uml.attributes

    def test_associations(self, model):
        """Verify association kind, multiplicities and options."""
        composition, plain = model.uml.associations
        assert composition.kind is AssociationKind.COMPOSITION
        assert composition.inverse == EX.orderOf
        assert composition.source_multiplicity == Multiplicity(1, 1)
        assert plain.ordered and plain.unique
        assert (plain.source_role, plain.target_role) == ("before", "after")
        assert plain.source_multiplicity == Multiplicity(0, None)
        assert plain.target_multiplicity == Multiplicity(0, 1)

    def test_partition(self, model):
        """Verify a value partition declaration."""
        assert model.uml.value_partitions == [
            ValuePartition(EX.PlanState, EX.Plan, EX.planState, ("open", "closed"))
        ]

    def test_behavior(self, model):
        """Verify constraints and rules keep their ids, messages and patterns."""
        constraint = model.rules.constraints[0]
        assert (constraint.id, constraint.attached_class) == ("positive", EX.Order)
        assert constraint.body.filters == (
            Comparison("<", TermExpr(Variable("t")), TermExpr(integer_literal(0))),
        )
        rule = model.rules.rules[0]
        assert (rule.id, rule.comment) == ("R1", "open to closed")
        assert rule.insert.triple_patterns[0].object == string_literal("closed")

    def test_machine_mutability_options(self, model):
        """Verify the state machine, mutability classes and options."""
        machine = model.machines[0]
        assert (machine.subject_class, machine.state_property) == (EX.Order, EX.state)
        assert machine.transitions == [DeclaredTransition("R1", "open", "closed")]
        assert model.mutability.kind_of(EX.state) is Mutability.RULE_OWNED
        assert model.mutability.domains[EX.total] == (
            DomainValue(DomainKind.VALUE, integer_literal(1)),
            DomainValue(DomainKind.ABSENT),
        )
        assert model.options.part_whole_strategy is PartWholeStrategy.SINGLE_HAS_PART
        assert model.options.value_partition_strategy is ValuePartitionStrategy.DISJOINT_INDIVIDUALS

    def test_fixture_model(self, casemgmt):
        """Verify the case-management model parses completely."""
        assert casemgmt.name == "casemgmt"
        assert len(casemgmt.rules.constraints) == 7
        assert len(casemgmt.rules.rules) == 17
        assert len(casemgmt.rules.constructors) == 1
        assert [r.id for r in casemgmt.rules.rules][:5] == ["T0", "T1", "T2", "T3", "T3'"]


class TestModelErrors:
    """Tests for parse_model failures."""

    def test_syntax_error_is_positioned(self):
        """Verify a missing colon is reported on its line."""
        with pytest.raises(ModelSyntaxError) as exc_info:
            parse_model(HEADER + "class Order {\n    state string\n}\n")
        assert exc_info.value.issues[0].line == 5
        assert exc_info.value.code == "SYNTAX_ERROR"

    def test_unknown_datatype_carries_position(self):
        """Verify semantic errors get the line of their declaration."""
        with pytest.raises(UnknownDatatype) as exc_info:
            parse_model(HEADER + "class Order {\n    total : float\n}\n")
        assert exc_info.value.line == 5

    def test_default_of_wrong_type(self):
        """Verify attribute defaults must match the datatype."""
        with pytest.raises(InvalidModel):
            parse_model(HEADER + 'class Order {\n    total : integer = "zero"\n}\n')

    def test_bare_name_needs_default_prefix(self):
        """Verify bare names are refused without a default prefix."""
        with pytest.raises(UnknownPrefix):
            parse_model("model m\nclass Order\n")

    def test_behavior_on_unknown_class(self):
        """Verify constraints must attach to declared classes."""
        text = HEADER + 'class Order\nconstraint c on Ghost "m"\nASK WHERE { ?this a Ghost . }\n'
        with pytest.raises(UnknownClass):
            parse_model(text)

    def test_unbound_insert_variable(self):
        """Verify INSERT may only use variables WHERE binds."""
        text = HEADER + (
            "class Order\n"
            "rule R on Order\n"
            "DELETE { }\n"
            "INSERT { ?this state ?new . }\n"
            "WHERE { ?this a Order . }\n"
        )
        with pytest.raises(UnboundTemplateVariable):
            parse_model(text)

    def test_undeclared_machine_state(self):
        """Verify transitions must use declared states."""
        text = HEADER + (
            "class Order\n"
            'machine M on Order.state {\n    states "a"\n    initial "a"\n    transition T "a" -> "b"\n}\n'
        )
        with pytest.raises(InvalidModel):
            parse_model(text)


class TestPrintModel:
    """Tests for print_model."""

    def test_round_trip(self):
        """Verify the printed model parses back to an equal model."""
        model = parse_model(SHOP)
        assert parse_model(print_model(model)) == model

    def test_fixture_round_trip(self, casemgmt):
        """Verify the case-management model survives printing."""
        text = print_model(casemgmt)
        assert parse_model(text) == casemgmt
        assert print_model(parse_model(text)) == text

    def test_names_are_shortened(self):
        """Verify names in the default namespace print bare."""
        text = print_model(parse_model(SHOP))
        assert "composition hasOrder : Plan [1..1] -> Order [0..*] inverse orderOf" in text


class TestScenarios:
    """Tests for parse_scenario and print_scenario."""

    TEXT = """\
scenario demo
at 2016-01-04T09:00:00
create o1 : LabTest { total 3 }
set o1 state "open"
run
expect o1 state "closed"
check-constraints positive
"""

    @pytest.fixture
    def prefixes(self):
        return parse_model(SHOP).prefixes

    def test_events(self, prefixes):
        """Verify each event kind and its line."""
        scenario = parse_scenario(self.TEXT, prefixes)
        assert scenario.name == "demo"
        kinds = [type(e) for e in scenario.events]
        assert kinds == [At, Create, SetValue, Run, ExpectState, CheckConstraints]
        create = scenario.events[1]
        assert create.properties == ((EX.total, integer_literal(3)),)
        assert create.line == 3
        assert scenario.events[-1].expected == ("positive",)

    def test_round_trip(self, prefixes):
        """Verify printing then parsing gives the same events."""
        scenario = parse_scenario(self.TEXT, prefixes)
        assert parse_scenario(print_scenario(scenario, prefixes), prefixes) == scenario

    def test_fixture_scenario(self, casemgmt, manifest):
        """Verify a fixture scenario parses with the model prefixes."""
        text = manifest.scenario("labtest").file.read_text(encoding="utf-8")
        scenario = parse_scenario(text, casemgmt.prefixes)
        assert sum(isinstance(e, Run) for e in scenario.events) == 3


class TestDocuments:
    """Tests for document_kind and parse_document."""

    @pytest.mark.parametrize(
        "text, kind",
        [
            ("model m\n", "model"),
            ("# leading comment\n\nscenario s\nrun\n", "scenario"),
            ("@prefix ex: <http://example.org/test#> .\n", "triples"),
            ("", "triples"),
        ],
    )
    def test_document_kind(self, text, kind):
        """Verify the first keyword decides the language."""
        assert document_kind(text) == kind

    def test_triples_use_model_prefixes(self):
        """Verify triple text is read with the model's prefix table."""
        prefixes = parse_model(SHOP).prefixes
        store = parse_document('ex:o1 ex:state "open" .\n', prefixes)
        assert isinstance(store, TripleStore)
        assert Triple(EX.o1, EX.state, string_literal("open")) in store
