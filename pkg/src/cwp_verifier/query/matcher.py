"""Graph-pattern matching over a triple store.

Triple patterns are joined left to right in declared order (nested loops over
the store indexes). A filter runs as soon as all of its variables are bound;
EXISTS / NOT EXISTS groups run once the pattern's own atoms are matched.
Results are sorted by their canonical text so every caller sees the same
order.
"""

from functools import lru_cache
from typing import Iterator, Mapping, Optional

from rdflib import URIRef, Variable

from cwp_verifier.query.clock import Clock
from cwp_verifier.query.filters import eval_filter
from cwp_verifier.query.pattern import (
    Binding,
    ConstructTemplate,
    FilterExpr,
    GraphPattern,
    GroupKind,
    filter_variables,
)
from cwp_verifier.triples.store import Node, Triple, TripleStore
from cwp_verifier.triples.terms import PrefixTable


@lru_cache(maxsize=1024)
def _plan(pattern: GraphPattern, seeded: frozenset) -> tuple[tuple[FilterExpr, ...], ...]:
    """Validate ``pattern`` and group its filters by the step that binds them.

    Slot ``i`` holds the filters runnable once ``i`` triple patterns have
    matched.
    """
    pattern.validate(seeded)
    bound = set(seeded)
    ready_at: list[int] = []
    steps = [set(bound)]
    for tp in pattern.triple_patterns:
        bound |= tp.variables()
        steps.append(set(bound))
    for expr in pattern.filters:
        needed = filter_variables(expr)
        ready_at.append(next(i for i, vars_ in enumerate(steps) if needed <= vars_))
    slots: list[list[FilterExpr]] = [[] for _ in steps]
    for expr, index in zip(pattern.filters, ready_at):
        slots[index].append(expr)
    return tuple(tuple(s) for s in slots)


def _unify(terms, triple: Triple, binding: Binding) -> Optional[Binding]:
    extended = binding
    for term, value in zip(terms, triple):
        if isinstance(term, Variable):
            current = extended.get(term)
            if current is None:
                if extended is binding:
                    extended = dict(binding)
                extended[term] = value
            elif current != value:
                return None
        elif term != value:
            return None
    return extended


def _resolve(term, binding: Binding):
    if isinstance(term, Variable):
        return binding.get(term)
    return term


def _solutions(
    store: TripleStore,
    pattern: GraphPattern,
    seed: Binding,
    clock: Optional[Clock],
    diagnostics: Optional[list],
) -> Iterator[Binding]:
    slots = _plan(pattern, frozenset(seed))
    patterns = pattern.triple_patterns

    def passes(index: int, binding: Binding) -> bool:
        return all(eval_filter(f, binding, clock, diagnostics) for f in slots[index])

    def groups_hold(binding: Binding) -> bool:
        for group in pattern.groups:
            found = _has_solution(store, group.pattern, binding, clock, diagnostics)
            if found != (group.kind is GroupKind.EXISTS):
                return False
        return True

    def extend(index: int, binding: Binding) -> Iterator[Binding]:
        if index == len(patterns):
            if groups_hold(binding):
                yield binding
            return
        tp = patterns[index]
        subject = _resolve(tp.subject, binding)
        predicate = _resolve(tp.predicate, binding)
        obj = _resolve(tp.object, binding)
        if subject is not None and not isinstance(subject, URIRef):
            return
        if predicate is not None and not isinstance(predicate, URIRef):
            return
        for triple in store.triples(subject, predicate, obj):
            extended = _unify(tp.terms(), triple, binding)
            if extended is not None and passes(index + 1, extended):
                yield from extend(index + 1, extended)

    start = dict(seed)
    if passes(0, start):
        yield from extend(0, start)


def _has_solution(store, pattern, seed, clock, diagnostics) -> bool:
    return next(_solutions(store, pattern, seed, clock, diagnostics), None) is not None


def binding_text(binding: Mapping[Variable, Node], prefixes: PrefixTable) -> str:
    """Canonical text of a binding: ``?var=value`` pairs sorted by variable."""
    return " ".join(
        f"?{var}={prefixes.render(binding[var])}" for var in sorted(binding, key=str)
    )


def match(
    store: TripleStore,
    pattern: GraphPattern,
    seed: Optional[Mapping[Variable, Node]] = None,
    clock: Optional[Clock] = None,
    diagnostics: Optional[list] = None,
) -> list[Binding]:
    """Return every binding extending ``seed`` that satisfies ``pattern``.

    Args:
        store: Store to match against (not modified)
        pattern: Pattern to evaluate
        seed: Pre-bound variables, such as ``?this``
        clock: Source of ``now()``
        diagnostics: Optional list collecting filter diagnostics

    Returns:
        Bindings sorted by canonical binding text

    Raises:
        UnboundFilterVariable: If a filter can never have its variables bound
    """
    seed = dict(seed or {})
    found = list(_solutions(store, pattern, seed, clock, diagnostics))
    return sorted(found, key=lambda b: binding_text(b, store.prefixes))


def eval_ask(
    store: TripleStore,
    pattern: GraphPattern,
    seed: Optional[Mapping[Variable, Node]] = None,
    clock: Optional[Clock] = None,
    diagnostics: Optional[list] = None,
) -> bool:
    """True iff ``pattern`` has at least one match."""
    return _has_solution(store, pattern, dict(seed or {}), clock, diagnostics)


def eval_construct(
    store: TripleStore,
    template: ConstructTemplate,
    where: GraphPattern,
    clock: Optional[Clock] = None,
    seed: Optional[Mapping[Variable, Node]] = None,
) -> set[Triple]:
    """Instantiate ``template`` once per WHERE binding.

    Raises:
        UnboundTemplateVariable: If the template uses a variable WHERE cannot bind
    """
    seed = dict(seed or {})
    template.check_bound(where.variables() | set(seed), context="CONSTRUCT")
    produced: set[Triple] = set()
    for binding in match(store, where, seed, clock):
        for tp in template.triple_patterns:
            produced.add(tp.instantiate(binding))
    return produced
