"""Forward-chaining execution of transition rules.

A pass evaluates the rules in declaration order. Each rule computes all of
its WHERE bindings against the store as it stands when the rule starts, then
applies them one by one (DELETE before INSERT), so later bindings see the
mutations of earlier ones. Passes repeat until nothing changes, a store
digest recurs, or the iteration cap is reached.
"""

import logging
from typing import Optional, Sequence

from cwp_verifier.query.clock import Clock
from cwp_verifier.query.matcher import binding_text, match
from cwp_verifier.query.pattern import (
    Binding,
    ConstructTemplate,
    GraphPattern,
    change_keys,
)
from cwp_verifier.rules.model import Firing, FireTrace, RunStatus, TransitionRule
from cwp_verifier.triples.store import Triple, TripleStore, triple_sort_key

logger = logging.getLogger(__name__)

DEFAULT_MAX_ITERATIONS = 10000


def _delete_targets(store: TripleStore, template: ConstructTemplate, binding: Binding) -> set[Triple]:
    targets: set[Triple] = set()
    for tp in template.triple_patterns:
        if tp.variables() <= set(binding):
            targets.add(tp.instantiate(binding))
            continue
        # Wildcard atom: delete whatever currently matches it.
        for extended in match(store, GraphPattern((tp,)), binding):
            targets.add(tp.instantiate(extended))
    return targets


def apply_rule_once(
    store: TripleStore,
    rule: TransitionRule,
    clock: Optional[Clock] = None,
    iteration: int = 1,
    diagnostics: Optional[list] = None,
) -> tuple[bool, list[Firing]]:
    """Evaluate one rule against ``store`` and apply every binding.

    Triples that a binding both deletes and inserts are left in place.

    Returns:
        (changed, firings) where ``changed`` is True iff any triple was
        actually added or removed
    """
    def order(triple: Triple) -> tuple:
        return triple_sort_key(triple, store.prefixes)

    changed = False
    firings: list[Firing] = []
    for binding in match(store, rule.effective_where(), clock=clock, diagnostics=diagnostics):
        inserts = {tp.instantiate(binding) for tp in rule.insert.triple_patterns}
        deletes = _delete_targets(store, rule.delete, binding) - inserts
        deleted = [t for t in sorted(deletes, key=order) if store.remove_triple(t)]
        inserted = [t for t in sorted(inserts, key=order) if store.add_triple(t)]
        firing = Firing(iteration, rule.id, binding, deleted, inserted)
        firings.append(firing)
        changed = changed or firing.changed
        logger.debug(
            "pass %d: %s fired with %s (-%d +%d)",
            iteration,
            rule.id,
            binding_text(binding, store.prefixes),
            len(deleted),
            len(inserted),
        )
    return changed, firings


def _finish(trace: FireTrace, status: RunStatus, iteration: int) -> FireTrace:
    trace.status = status
    trace.iterations = iteration
    if status is RunStatus.FIXED_POINT:
        logger.info("fixed point reached after %d pass(es)", iteration)
    else:
        logger.warning("rule run stopped: %s after %d pass(es)", status.value, iteration)
    return trace


def run_to_fixpoint(
    store: TripleStore,
    rules: Sequence[TransitionRule],
    clock: Optional[Clock] = None,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    diagnostics: Optional[list] = None,
) -> tuple[TripleStore, FireTrace]:
    """Run every rule on every pass until the store stops changing.

    The store is modified in place and returned.

    Args:
        store: Store to rewrite
        rules: Rules in declaration order
        clock: Source of ``now()``
        max_iterations: Maximum number of passes (at least 1)
        diagnostics: Optional list collecting filter diagnostics

    Returns:
        (store, trace); non-FixedPoint outcomes are reported in
        ``trace.status``, never raised
    """
    return _run(store, rules, clock, max_iterations, diagnostics, incremental=False)


def run_incremental(
    store: TripleStore,
    rules: Sequence[TransitionRule],
    clock: Optional[Clock] = None,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    diagnostics: Optional[list] = None,
) -> tuple[TripleStore, FireTrace]:
    """Like :func:`run_to_fixpoint`, re-evaluating only rules that can fire.

    A rule is re-evaluated when a triple touching one of its WHERE predicates
    (or typed classes) changed since its last evaluation, or when it matched
    on that evaluation. Results are identical to the naive run.
    """
    return _run(store, rules, clock, max_iterations, diagnostics, incremental=True)


def _run(store, rules, clock, max_iterations, diagnostics, incremental: bool):
    if max_iterations < 1:
        raise ValueError("max_iterations must be at least 1")
    rules = list(rules)
    keys = [rule.dependency_keys() for rule in rules]
    dirty = [True] * len(rules)
    trace = FireTrace()
    seen = {store.digest()}

    for iteration in range(1, max_iterations + 1):
        changed = False
        for index, rule in enumerate(rules):
            if incremental and not dirty[index]:
                continue
            dirty[index] = False
            rule_changed, firings = apply_rule_once(store, rule, clock, iteration, diagnostics)
            trace.firings.extend(firings)
            changed = changed or rule_changed
            if not incremental:
                continue
            if firings:
                dirty[index] = True
            touched = {key for f in firings for t in f.deleted + f.inserted for key in change_keys(t)}
            if touched:
                for other, other_keys in enumerate(keys):
                    if None in other_keys or other_keys & touched:
                        dirty[other] = True
        if not changed:
            return store, _finish(trace, RunStatus.FIXED_POINT, iteration)
        digest = store.digest()
        if digest in seen:
            return store, _finish(trace, RunStatus.CYCLE_DETECTED, iteration)
        seen.add(digest)
    return store, _finish(trace, RunStatus.ITERATION_CAP_HIT, max_iterations)
