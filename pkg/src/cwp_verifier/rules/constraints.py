"""ASK constraint checking and per-instance constructors."""

import logging
from typing import Iterable, Optional, Protocol

from rdflib import URIRef

from cwp_verifier.errors import DoubleConstruction, UnknownClass
from cwp_verifier.query.clock import Clock
from cwp_verifier.query.matcher import eval_construct, match
from cwp_verifier.query.pattern import THIS
from cwp_verifier.rules.model import AskConstraint, Constructor, Violation
from cwp_verifier.triples.store import Triple, TripleStore

logger = logging.getLogger(__name__)


class ClassCatalog(Protocol):
    def has_class(self, name: URIRef) -> bool: ...


def check_constraints(
    store: TripleStore,
    constraints: Iterable[AskConstraint],
    schema: Optional[ClassCatalog] = None,
    clock: Optional[Clock] = None,
    diagnostics: Optional[list] = None,
) -> list[Violation]:
    """Evaluate every constraint for every instance of its class.

    The store should already be materialized so subclass instances carry
    their superclass types.

    Args:
        store: Instance data
        constraints: ASK constraints to evaluate
        schema: When given, attached classes must be declared in it
        clock: Source of ``now()``
        diagnostics: Optional list collecting filter diagnostics

    Returns:
        Violations ordered by (constraint id, instance)

    Raises:
        UnknownClass: If a constraint is attached to an undeclared class
    """
    render = store.prefixes.render
    violations: list[Violation] = []
    for constraint in constraints:
        if schema is not None and not schema.has_class(constraint.attached_class):
            raise UnknownClass(
                f"constraint '{constraint.id}' is attached to unknown class "
                f"{render(constraint.attached_class)}",
                subject=constraint.id,
            )
        for instance in store.instances_of(constraint.attached_class):
            witnesses = match(store, constraint.body, {THIS: instance}, clock, diagnostics)
            if witnesses:
                witness = tuple(
                    sorted((str(var), value) for var, value in witnesses[0].items())
                )
                violations.append(
                    Violation(constraint.id, instance, constraint.message, witness)
                )
    violations.sort(key=lambda v: (v.constraint_id, render(v.instance)))
    logger.info("constraint check found %d violation(s)", len(violations))
    return violations


def run_constructors(
    store: TripleStore,
    instance: URIRef,
    cls: URIRef,
    constructors: Iterable[Constructor],
    clock: Optional[Clock],
    constructed: set[URIRef],
) -> set[Triple]:
    """Fire the constructors applicable to a newly created instance.

    A constructor applies when ``instance`` is typed with its attached class
    (directly or through materialized subclass typing).

    Args:
        store: Store holding the instance; template triples are inserted here
        instance: The created instance
        cls: The class it was created as
        constructors: Model constructors
        clock: Source of ``now()``
        constructed: Instances already constructed; updated in place

    Returns:
        The triples that were newly inserted

    Raises:
        DoubleConstruction: If ``instance`` was constructed before
    """
    if instance in constructed:
        raise DoubleConstruction(
            f"constructors already ran for {store.prefixes.render(instance)}",
            subject=store.prefixes.render(instance),
        )
    constructed.add(instance)
    types = set(store.types_of(instance)) | {cls}
    inserted: set[Triple] = set()
    for constructor in constructors:
        if constructor.attached_class not in types:
            continue
        produced = eval_construct(
            store, constructor.template, constructor.where, clock, seed={THIS: instance}
        )
        inserted |= {t for t in produced if store.add_triple(t)}
    return inserted
