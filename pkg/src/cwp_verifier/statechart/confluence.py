"""Rule-order independence probe."""

import logging
import random
from dataclasses import dataclass, field
from typing import Optional

from cwp_verifier.query.clock import Clock
from cwp_verifier.rules.engine import DEFAULT_MAX_ITERATIONS
from cwp_verifier.rules.model import RunStatus
from cwp_verifier.statechart.scenario import Scenario
from cwp_verifier.statechart.simulation import simulate
from cwp_verifier.workmodel import WorkModel

logger = logging.getLogger(__name__)


@dataclass
class ConfluenceResult:
    """Outcome of a permutation probe.

    ``divergent`` holds the first pair of rule orders whose outcomes differ;
    a single order is reported twice when its own run did not converge.
    """

    confluent: bool
    orders_checked: int
    divergent: Optional[tuple[list[str], list[str]]] = None
    reason: str = ""
    statuses: list[str] = field(default_factory=list)


def probe_confluence(
    model: WorkModel,
    scenario: Scenario,
    permutations: int,
    seed: int = 0,
    clock: Optional[Clock] = None,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> ConfluenceResult:
    """Simulate ``scenario`` under sampled rule orders and compare the final stores.

    The declaration order is always the first sample; the rest are drawn
    from a ``random.Random(seed)`` shuffle, so results are reproducible.

    Args:
        model: Model to simulate
        scenario: Scenario to replay under each order
        permutations: Number of orders to try (at least 2)
        seed: Shuffle seed
        clock: Starting clock
        max_iterations: Pass cap for every ``run`` event

    Returns:
        Confluent iff every order reaches a fixed point on every run and all
        final stores are identical

    Raises:
        ValueError: If fewer than 2 permutations are requested
    """
    if permutations < 2:
        raise ValueError("permutations must be at least 2")
    rng = random.Random(seed)
    baseline_rules = list(model.rules.rules)
    orders = [baseline_rules]
    for _ in range(permutations - 1):
        shuffled = list(baseline_rules)
        rng.shuffle(shuffled)
        orders.append(shuffled)

    reference = None
    reference_ids: list[str] = []
    statuses: list[str] = []
    for checked, rules in enumerate(orders, start=1):
        ids = [r.id for r in rules]
        trace = simulate(model, scenario, clock, max_iterations, rules=rules)
        run_statuses = [run.status for run in trace.runs]
        statuses.extend(s.value for s in run_statuses)
        stuck = next((s for s in run_statuses if s is not RunStatus.FIXED_POINT), None)
        if stuck is not None:
            logger.info("order %s does not converge: %s", ids, stuck.value)
            return ConfluenceResult(False, checked, (ids, ids), f"run ended with {stuck.value}", statuses)
        outcome = trace.final_store.as_set()
        if reference is None:
            reference, reference_ids = outcome, ids
        elif outcome != reference:
            logger.info("rule orders %s and %s diverge", reference_ids, ids)
            return ConfluenceResult(
                False, checked, (reference_ids, ids), "final stores differ", statuses
            )
    return ConfluenceResult(True, len(orders), None, "", statuses)
