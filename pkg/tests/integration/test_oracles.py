"""Randomized oracle tests.

Every harness draws its inputs from a seeded ``random.Random`` so failures
reproduce. The brute-force oracles here share no code with the engine.
"""

import itertools
import random
import time

import pytest
from rdflib import Namespace, Variable

from cwp_verifier.fixture import fixture_clock
from cwp_verifier.query import (
    Comparison,
    GraphPattern,
    Group,
    GroupKind,
    Not,
    TermExpr,
    TriplePattern,
    match,
)
from cwp_verifier.rules.engine import run_incremental, run_to_fixpoint
from cwp_verifier.rules.model import RunStatus
from cwp_verifier.statechart.solvability import verify_solvability
from cwp_verifier.triples.store import Triple, TripleStore
from cwp_verifier.triples.terms import TYPE, PrefixTable, boolean_literal, integer_literal, string_literal

EX = Namespace("http://example.org/test#")
CM = Namespace("http://example.org/casemanager#")

NODES = [EX[f"n{i}"] for i in range(5)]
PREDICATES = [EX[f"p{i}"] for i in range(3)]
INTEGERS = {integer_literal(n): n for n in (1, 2, 3)}
LITERALS = [string_literal("a"), string_literal("b"), *INTEGERS]
VARIABLES = [Variable("x"), Variable("y"), Variable("z")]
# Only ever bound inside a NOT EXISTS group
INNER = Variable("w")

ORDER_TYPES = (CM.LabTest, CM.Imaging, CM.Consult)
STATES = (
    "Initial",
    "Approved",
    "Waiting for appointment to be scheduled",
    "Appointment scheduled",
    "Waiting for appointment",
    "Patient examined",
    "Image or specimen obtained",
    "Waiting for report",
    "Resolved",
)


# ----------------------------------------------------------------------
# Pattern matching
# ----------------------------------------------------------------------
def random_store(rng: random.Random) -> TripleStore:
    store = TripleStore(PrefixTable({"ex": str(EX)}))
    for _ in range(rng.randint(0, 30)):
        store.add_triple(
            Triple(rng.choice(NODES), rng.choice(PREDICATES), rng.choice(NODES + LITERALS))
        )
    return store


def random_filter(rng: random.Random, variables: list):
    subject = TermExpr(rng.choice(variables))
    if rng.random() < 0.5:
        other = rng.choice(variables + NODES + LITERALS)
        expr = Comparison(rng.choice(("=", "!=")), subject, TermExpr(other))
    else:
        expr = Comparison(rng.choice(("<", ">")), subject, TermExpr(rng.choice(list(INTEGERS))))
    return Not(expr) if rng.random() < 0.2 else expr


def random_pattern(rng: random.Random) -> GraphPattern:
    def pick(constants, variables=VARIABLES):
        return rng.choice(variables) if rng.random() < 0.5 else rng.choice(constants)

    atoms = tuple(
        TriplePattern(pick(NODES), pick(PREDICATES), pick(NODES + LITERALS))
        for _ in range(rng.randint(1, 4))
    )
    bound = sorted({v for tp in atoms for v in tp.variables()}, key=str)
    filters = ()
    if bound and rng.random() < 0.5:
        filters = tuple(random_filter(rng, bound) for _ in range(rng.randint(1, 2)))
    groups = ()
    if rng.random() < 0.4:
        inner = bound + [INNER]
        absent = TriplePattern(pick(NODES, inner), pick(PREDICATES, inner), pick(NODES + LITERALS, inner))
        groups = (Group(GroupKind.NOT_EXISTS, GraphPattern((absent,))),)
    return GraphPattern(atoms, filters, groups)


def oracle_value(expr: TermExpr, binding: dict):
    return binding[expr.term] if isinstance(expr.term, Variable) else expr.term


def oracle_filter(expr, binding: dict) -> bool:
    if isinstance(expr, Not):
        return not oracle_filter(expr.operand, binding)
    left, right = oracle_value(expr.left, binding), oracle_value(expr.right, binding)
    if expr.op == "=":
        return left == right
    if expr.op == "!=":
        return left != right
    if left not in INTEGERS or right not in INTEGERS:
        return False
    if expr.op == "<":
        return INTEGERS[left] < INTEGERS[right]
    return INTEGERS[left] > INTEGERS[right]


def oracle_absent(store: TripleStore, universe: list, group: Group, binding: dict) -> bool:
    (tp,) = group.pattern.triple_patterns
    for value in universe:
        if tp.instantiate({**binding, INNER: value}) in store:
            return False
    return True


def brute_force(store: TripleStore, pattern: GraphPattern) -> set:
    universe = sorted({term for triple in store for term in triple}, key=str)
    variables = sorted(pattern.variables(), key=str)
    found = set()
    for values in itertools.product(universe, repeat=len(variables)):
        binding = dict(zip(variables, values))
        if not all(tp.instantiate(binding) in store for tp in pattern.triple_patterns):
            continue
        if not all(oracle_filter(expr, binding) for expr in pattern.filters):
            continue
        if all(oracle_absent(store, universe, group, binding) for group in pattern.groups):
            found.add(frozenset(binding.items()))
    return found


@pytest.mark.integration
@pytest.mark.slow
class TestMatcherOracle:
    """Tests comparing match with assignment enumeration."""

    def test_random_patterns(self):
        """Verify 500 random patterns with filters and NOT EXISTS agree with the oracle."""
        rng = random.Random(7)
        for case in range(500):
            store, pattern = random_store(rng), random_pattern(rng)
            bindings = match(store, pattern)
            got = {frozenset(b.items()) for b in bindings}
            assert len(got) == len(bindings), f"duplicate bindings in case {case}"
            assert got == brute_force(store, pattern), f"case {case}: {pattern}"

    def test_generator_covers_filters_and_groups(self):
        """Verify the random patterns exercise filters and NOT EXISTS groups."""
        rng = random.Random(7)
        patterns = [random_pattern(rng) for _ in range(200)]
        assert any(p.filters for p in patterns)
        assert any(p.groups for p in patterns)
        assert any(isinstance(f, Not) for p in patterns for f in p.filters)


# ----------------------------------------------------------------------
# Engine equivalence
# ----------------------------------------------------------------------
def random_population(rng: random.Random, clock) -> TripleStore:
    store = TripleStore(PrefixTable({"casemanager": str(CM)}, default="casemanager"))
    for i in range(rng.randint(1, 50)):
        order, driver = CM[f"o{i}"], CM[f"t{i}"]
        store.add_triple(Triple(order, TYPE, rng.choice(ORDER_TYPES)))
        store.add_triple(Triple(order, TYPE, CM.Order))
        store.add_triple(Triple(order, CM.state, string_literal(rng.choice(STATES))))
        store.add_triple(Triple(driver, TYPE, CM.OrderTransition))
        store.add_triple(Triple(driver, CM.changeState, order))
        optional = [
            (CM.dateAdded, clock.offset(-3)),
            (CM.dateExpected, clock.offset(-1)),
            (CM.approvedBy, string_literal("dr")),
            (CM.needsAppointment, boolean_literal(rng.random() < 0.5)),
            (CM.patientAppointmentDateTime, clock.offset(rng.choice((-1, 1)))),
            (CM.status, string_literal("done")),
            (CM.reportreleased, boolean_literal(rng.random() < 0.5)),
        ]
        for prop, value in optional:
            if rng.random() < 0.6:
                store.add_triple(Triple(order, prop, value))
    return store


@pytest.mark.integration
@pytest.mark.slow
class TestEngineOracle:
    """Tests comparing the incremental engine with the naive one."""

    def test_random_populations(self, casemgmt):
        """Verify 100 random populations reach identical fixed points."""
        rng = random.Random(11)
        clock = fixture_clock()
        rules = casemgmt.rules.rules
        for case in range(100):
            population = random_population(rng, clock)
            naive, naive_trace = run_to_fixpoint(population.copy(), rules, clock)
            fast, fast_trace = run_incremental(population.copy(), rules, clock)
            assert fast_trace.status is naive_trace.status, f"case {case}"
            assert fast.sorted_triples() == naive.sorted_triples(), f"case {case}"


# ----------------------------------------------------------------------
# Deadlock soundness
# ----------------------------------------------------------------------
ENVIRONMENT = {
    CM.status: ("done", None),
    CM.reportreleased: (True, False, None),
    CM.patientAppointmentDateTime: ("past", "future", None),
    CM.dateAdded: ("past", None),
    CM.dateExpected: ("past", None),
    CM.approvedBy: ("dr", None),
}


def literal_for(value, clock):
    if value == "past":
        return clock.offset(-1)
    if value == "future":
        return clock.offset(1)
    if isinstance(value, bool):
        return boolean_literal(value)
    return string_literal(value)


def order_world(type_, state, needs, environment, clock) -> TripleStore:
    store = TripleStore(PrefixTable({"casemanager": str(CM)}, default="casemanager"))
    store.add_triple(Triple(CM.o, TYPE, type_))
    store.add_triple(Triple(CM.o, TYPE, CM.Order))
    store.add_triple(Triple(CM.t, TYPE, CM.OrderTransition))
    store.add_triple(Triple(CM.t, CM.changeState, CM.o))
    store.add_triple(Triple(CM.o, CM.state, string_literal(state)))
    store.add_triple(Triple(CM.o, CM.needsAppointment, boolean_literal(needs)))
    for prop, value in environment.items():
        if value is not None:
            store.add_triple(Triple(CM.o, prop, literal_for(value, clock)))
    return store


def set_environment(store: TripleStore, environment, clock) -> None:
    for prop, value in environment.items():
        for triple in list(store.triples(subject=CM.o, predicate=prop)):
            store.remove_triple(triple)
        if value is not None:
            store.add_triple(Triple(CM.o, prop, literal_for(value, clock)))


@pytest.mark.integration
@pytest.mark.slow
class TestDeadlockSoundness:
    """Tests replaying random environment walks against the deadlock report."""

    def test_random_walks(self, casemgmt):
        """Verify walks only get stuck where the verifier reports a gap."""
        clock = fixture_clock()
        rules = casemgmt.rules.rules
        decl = casemgmt.machines[0]
        report = verify_solvability(
            rules, decl, casemgmt.schema(), casemgmt.mutability, casemgmt.prefixes, clock
        )
        gaps = {
            (gap.type, gap.state, gap.valuation)
            for type_report in report.types.values()
            for gap in type_report.coverage_gaps
        }
        assert all(not r.deadlocks for r in report.types.values())

        stuck_cache: dict = {}

        def stuck(type_, state, needs) -> bool:
            key = (type_, state, needs)
            if key not in stuck_cache:
                choices = itertools.product(*ENVIRONMENT.values())
                stuck_cache[key] = not any(
                    match(
                        order_world(type_, state, needs, dict(zip(ENVIRONMENT, values)), clock),
                        rule.effective_where(),
                        clock=clock,
                    )
                    for values in choices
                    for rule in rules
                )
            return stuck_cache[key]

        rng = random.Random(3)
        for type_ in ORDER_TYPES:
            for _ in range(1000):
                needs = rng.random() < 0.5
                store = order_world(type_, "Initial", needs, {}, clock)
                for _ in range(15):
                    set_environment(store, {p: rng.choice(d) for p, d in ENVIRONMENT.items()}, clock)
                    _, trace = run_incremental(store, rules, clock)
                    assert trace.status is RunStatus.FIXED_POINT
                    state = str(store.objects(CM.o, CM.state)[0])
                    if state in decl.finals:
                        break
                    if stuck(type_, state, needs):
                        valuation = ((CM.needsAppointment, "true" if needs else "false"),)
                        assert (type_, state, valuation) in gaps
                        break


# ----------------------------------------------------------------------
# Scale
# ----------------------------------------------------------------------
@pytest.mark.integration
@pytest.mark.slow
class TestScale:
    """Tests for the engine on a large population."""

    def test_thousand_lab_tests(self, casemgmt):
        """Verify 1,000 lab tests run through their lifecycle within 10 seconds."""
        clock = fixture_clock()
        rules = casemgmt.rules.rules
        store = TripleStore(PrefixTable({"casemanager": str(CM)}, default="casemanager"))
        orders = [CM[f"lab{i}"] for i in range(1000)]
        for i, order in enumerate(orders):
            driver = CM[f"tr{i}"]
            for triple in (
                Triple(order, TYPE, CM.LabTest),
                Triple(order, TYPE, CM.Order),
                Triple(order, CM.state, string_literal("Initial")),
                Triple(order, CM.dateAdded, clock.offset(-2)),
                Triple(order, CM.dateExpected, clock.offset(-1)),
                Triple(order, CM.approvedBy, string_literal("dr")),
                Triple(order, CM.needsAppointment, boolean_literal(False)),
                Triple(order, CM.status, string_literal("done")),
                Triple(order, CM.reportreleased, boolean_literal(False)),
                Triple(driver, TYPE, CM.OrderTransition),
                Triple(driver, CM.changeState, order),
            ):
                store.add_triple(triple)

        started = time.perf_counter()
        _, first = run_incremental(store, rules, clock)
        for order in orders:
            store.remove_triple(Triple(order, CM.reportreleased, boolean_literal(False)))
            store.add_triple(Triple(order, CM.reportreleased, boolean_literal(True)))
        _, second = run_incremental(store, rules, clock)
        elapsed = time.perf_counter() - started

        assert first.status is RunStatus.FIXED_POINT
        assert second.status is RunStatus.FIXED_POINT
        assert all(store.objects(o, CM.state) == [string_literal("Resolved")] for o in orders)
        assert elapsed < 10.0
