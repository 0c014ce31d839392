"""Step definitions for the order lifecycle feature."""

from behave import given, when, then
from behave.runner import Context
from rdflib import Namespace

from cwp_verifier.cli.parser import parse_scenario
from cwp_verifier.fixture import fixture_clock, golden_trace, load_fixture, load_manifest, load_scenario
from cwp_verifier.statechart.simulation import simulate
from cwp_verifier.triples.terms import string_literal

CM = Namespace("http://example.org/casemanager#")


@given("the case-management model is loaded")
def step_model_loaded(context: Context):
    """Parse the bundled model once per scenario."""
    context.manifest = load_manifest()
    context.model = load_fixture(context.manifest)


@when('I simulate the "{name}" scenario')
def step_simulate_bundled(context: Context, name: str):
    scenario = load_scenario(name, context.model, context.manifest)
    context.trace = simulate(context.model, scenario, fixture_clock(context.manifest))


@when("I simulate the scenario")
def step_simulate_text(context: Context):
    """Simulate the scenario given as the step's doc string."""
    scenario = parse_scenario(context.text, context.model.prefixes)
    context.trace = simulate(context.model, scenario, fixture_clock(context.manifest))


@then("every expectation of the scenario holds")
def step_all_expectations_hold(context: Context):
    assert context.trace.ok, [str(f) for f in context.trace.failures]


@then('every order ends in state "{state}"')
def step_orders_end_in(context: Context, state: str):
    store = context.trace.final_store
    orders = store.instances_of(CM.Order)
    assert orders
    for order in orders:
        assert store.objects(order, CM.state) == [string_literal(state)], order


@then('the trace matches the golden trace of "{name}"')
def step_trace_is_golden(context: Context, name: str):
    assert context.trace.to_text() == golden_trace(name, context.manifest)


@then('"{name}" is in state "{state}"')
def step_object_in_state(context: Context, name: str, state: str):
    assert context.trace.final_store.objects(CM[name], CM.state) == [string_literal(state)]


@then('"{name}" has no state')
def step_object_without_state(context: Context, name: str):
    assert context.trace.final_store.objects(CM[name], CM.state) == []


@then('the order "{name}" moved through these states:')
def step_state_moves(context: Context, name: str):
    """Compare the observed state changes of one order with the table."""
    moves = [
        (c.source, c.target, c.rule_id)
        for c in context.trace.state_changes(CM.state)
        if c.subject == CM[name]
    ]
    expected = [(row["source"], row["target"], row["rule"]) for row in context.table]
    assert moves == expected, moves


@then("the simulation reports {count:d} failed expectation")
def step_failure_count(context: Context, count: int):
    assert len(context.trace.failures) == count
