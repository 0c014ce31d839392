"""Step definitions for the model verification feature."""

from behave import given, when, then
from behave.runner import Context
from rdflib import Namespace

from cwp_verifier.cli.commands import cmd_check
from cwp_verifier.fixture import fixture_clock, load_population
from cwp_verifier.statechart import Severity, verify_solvability

CM = Namespace("http://example.org/casemanager#")


@given('rule "{rule_id}" is removed')
def step_remove_rule(context: Context, rule_id: str):
    context.model = context.model.with_rules(context.model.rules.without_rule(rule_id))


@when("I verify the state machine")
def step_verify(context: Context):
    model = context.model
    context.result = verify_solvability(
        model.rules.rules,
        model.machines[0],
        model.schema(),
        model.mutability,
        model.prefixes,
        fixture_clock(context.manifest),
    )


@then("no order type has a deadlock")
def step_no_deadlock(context: Context):
    assert all(not r.deadlocks for r in context.result.types.values())


@then('"{type_name}" has a coverage gap in state "{state}"')
def step_coverage_gap(context: Context, type_name: str, state: str):
    gaps = context.result.types[CM[type_name]].coverage_gaps
    assert [g.state for g in gaps] == [state]


@then("the unreachable states are:")
def step_unreachable(context: Context):
    """Each table row names one type and its only unreachable state."""
    for row in context.table:
        assert context.result.types[CM[row["type"]]].unreachable == [row["state"]]


@then('every order type deadlocks in state "{state}"')
def step_every_type_deadlocks(context: Context, state: str):
    assert context.result.types
    for report in context.result.types.values():
        assert report.deadlocks == [state], report


@when('I check the "{population}" population')
def step_check(context: Context, population: str):
    data = load_population(population, context.model, context.manifest)
    context.report = cmd_check(context.model, data, fixture_clock(context.manifest))


@then('the check reports "{code}"')
def step_check_reports(context: Context, code: str):
    codes = {f.code for f in context.report.findings if f.severity is Severity.ERROR}
    assert code in codes, codes


@then("the check reports no errors")
def step_check_clean(context: Context):
    assert not context.report.has_errors, context.report.to_text()
