"""Unit tests for scenario simulation and the confluence probe."""

import pytest
from rdflib import Namespace

from cwp_verifier.cli.parser import parse_model, parse_scenario
from cwp_verifier.errors import (
    AbstractInstantiation,
    ClockRegression,
    ExpectationFailed,
    UnknownObject,
)
from cwp_verifier.query.clock import Clock
from cwp_verifier.rules.model import RunStatus
from cwp_verifier.statechart.confluence import probe_confluence
from cwp_verifier.statechart.simulation import StateChange, simulate
from cwp_verifier.triples.store import Triple
from cwp_verifier.triples.terms import boolean_literal, string_literal

NS = "http://example.org/test#"
EX = Namespace(NS)

LAMP_RULE = """
rule On on Switch "switch on when powered"
DELETE { ?l state "off" . }
INSERT { ?l state "on" . }
WHERE { ?this controls ?l . ?l power true . ?l state "off" . }
"""

BROKEN_RULE = """
rule Broken on Switch
DELETE { ?l state "off" . }
INSERT { ?l state "broken" . }
WHERE { ?this controls ?l . ?l power true . ?l state "off" . }
"""

OFF_RULE = """
rule Off on Switch
DELETE { ?l state "on" . }
INSERT { ?l state "off" . }
WHERE { ?this controls ?l . ?l power true . ?l state "on" . }
"""

MACHINE = """
machine L on Lamp.state {
    driver Switch via controls
    states "off" "on" "broken"
    initial "off"
    final "on"
    transition On "off" -> "on"
}
mutability {
    rule-owned state
    environment power { true false }
}
"""


def lamp_model(rules=LAMP_RULE):
    return parse_model(
        "model lamps\nprefix ex: <http://example.org/test#>\ndefault ex\n"
        "class Lamp {\n    state : string\n    power : boolean\n}\n"
        "abstract class Device\nclass Switch\n"
        "association controls : Switch -> Lamp [1..1]\n"
        'constraint powered on Lamp "a lamp must have power"\nASK WHERE { ?this power false . }\n'
        'constructor on Lamp\nCONSTRUCT { ?this state "off" . }\nWHERE { ?this a Lamp . }\n'
        + rules
        + MACHINE
    )


SCENARIO = """\
scenario switching
at 2016-01-02T00:00:00
create l1 : Lamp { power false }
create s1 : Switch { controls l1 }
run
expect l1 state "off"
check-constraints powered
at 2016-01-03T00:00:00
set l1 power true
run
expect l1 state "on"
check-constraints
"""


@pytest.fixture(scope="module")
def model():
    return lamp_model()


def scenario_for(model, text=SCENARIO):
    return parse_scenario(text, model.prefixes)


class TestSimulate:
    """Tests for simulate."""

    @pytest.fixture(scope="class")
    def trace(self, model):
        return simulate(model, scenario_for(model))

    def test_expectations_hold(self, trace):
        """Verify every expectation of the scenario passes."""
        assert trace.ok
        assert trace.failures == []

    def test_state_changes(self, trace):
        """Verify rule firings are reported as state moves."""
        assert trace.state_changes(EX.state) == [StateChange(EX.l1, "off", "on", "On")]

    def test_runs_reach_fixed_points(self, trace):
        """Verify both runs converge and only the second fires."""
        assert [r.status for r in trace.runs] == [RunStatus.FIXED_POINT, RunStatus.FIXED_POINT]
        assert trace.runs[0].firings == []
        assert trace.runs[1].rule_ids() == ["On"]

    def test_final_store(self, trace):
        """Verify constructed, materialized and replaced values."""
        store = trace.final_store
        assert store.objects(EX.l1, EX.state) == [string_literal("on")]
        assert store.objects(EX.l1, EX.power) == [boolean_literal(True)]
        assert Triple(EX.l1, EX.controls_inv, EX.s1) in store

    def test_trace_text(self, trace):
        """Verify the header, event lines and deltas of the trace text."""
        text = trace.to_text()
        assert text.startswith("scenario switching\nclock 2016-01-01T00:00:00\nat 2016-01-02T00:00:00\n")
        assert "create ex:l1 : ex:Lamp\n" in text
        assert '  + ex:l1 ex:state "off"\n' in text
        assert "run FixedPoint iterations=1\n" in text
        assert "  fire 1 On ?l=ex:l1 ?this=ex:s1\n" in text
        assert "check-constraints expected=[powered] found=[powered] ok\n" in text
        assert "final store\n" in text

    def test_deterministic(self, model, trace):
        """Verify two simulations give identical text."""
        assert simulate(model, scenario_for(model)).to_text() == trace.to_text()

    def test_naive_engine_agrees(self, model, trace):
        """Verify the naive engine reaches the same final store."""
        naive = simulate(model, scenario_for(model), incremental=False)
        assert naive.final_store == trace.final_store


class TestSimulateFailures:
    """Tests for simulate error reporting."""

    def test_failed_expectation_is_recorded(self, model):
        """Verify a wrong state is listed with a diff, not raised."""
        text = SCENARIO.replace('expect l1 state "off"', 'expect l1 state "on"')
        trace = simulate(model, scenario_for(model, text))
        assert len(trace.failures) == 1
        assert trace.failures[0].diff == '- state "on"\n+ state ["off"]'
        assert 'expect ex:l1 state "on" FAILED found ["off"]' in trace.lines

    def test_strict_raises(self, model):
        """Verify strict mode raises the first failure."""
        text = SCENARIO.replace("check-constraints powered", "check-constraints")
        with pytest.raises(ExpectationFailed) as exc_info:
            simulate(model, scenario_for(model, text), strict=True)
        assert exc_info.value.diff == "+ powered"

    def test_abstract_class(self, model):
        """Verify abstract classes cannot be instantiated."""
        with pytest.raises(AbstractInstantiation):
            simulate(model, scenario_for(model, "scenario s\ncreate d1 : Device\n"))

    def test_unknown_object(self, model):
        """Verify objects must be created before use."""
        with pytest.raises(UnknownObject):
            simulate(model, scenario_for(model, "scenario s\nset l9 power true\n"))

    def test_clock_regression(self, model):
        """Verify the scenario clock only moves forward."""
        text = "scenario s\nat 2016-02-01T00:00:00\nat 2016-01-15T00:00:00\n"
        with pytest.raises(ClockRegression):
            simulate(model, scenario_for(model, text))

    def test_clock_before_start(self, model):
        """Verify the first time point may not precede the starting clock."""
        with pytest.raises(ClockRegression):
            simulate(model, scenario_for(model, "scenario s\nat 2015-12-31T00:00:00\n"))

    def test_starting_clock_is_not_shared(self, model):
        """Verify the caller's clock is left untouched."""
        clock = Clock.at("2016-01-01T00:00:00")
        simulate(model, scenario_for(model), clock)
        assert str(clock) == "2016-01-01T00:00:00"


class TestProbeConfluence:
    """Tests for probe_confluence."""

    def test_single_rule_is_confluent(self, model):
        """Verify one rule cannot depend on its order."""
        result = probe_confluence(model, scenario_for(model), permutations=3)
        assert result.confluent
        assert result.orders_checked == 3
        assert set(result.statuses) == {"FixedPoint"}

    def test_competing_rules_diverge(self):
        """Verify two rules racing for the same state are reported."""
        model = lamp_model(LAMP_RULE + BROKEN_RULE)
        text = SCENARIO.replace('expect l1 state "on"\n', "")
        result = probe_confluence(model, scenario_for(model, text), permutations=20, seed=1)
        assert not result.confluent
        assert result.reason == "final stores differ"
        first, second = result.divergent
        assert first == ["On", "Broken"] and second == ["Broken", "On"]

    def test_cycle_is_not_confluent(self):
        """Verify a run that does not converge fails the probe."""
        model = lamp_model(LAMP_RULE + OFF_RULE)
        text = SCENARIO.replace('expect l1 state "on"\n', "")
        result = probe_confluence(model, scenario_for(model, text), permutations=2)
        assert not result.confluent
        assert result.reason == "run ended with CycleDetected"
        assert result.orders_checked == 1

    def test_needs_two_orders(self, model):
        """Verify at least two orders are compared."""
        with pytest.raises(ValueError):
            probe_confluence(model, scenario_for(model), permutations=1)
