"""Closed-world closure of a store under a schema's entailments."""

import logging

from rdflib import URIRef

from cwp_verifier.schema.semantic import SemanticSchema
from cwp_verifier.triples.store import Triple, TripleStore
from cwp_verifier.triples.terms import TYPE

logger = logging.getLogger(__name__)


def materialize(store: TripleStore, schema: SemanticSchema) -> TripleStore:
    """Close ``store`` under the schema and return it.

    Applied until nothing new is derived: subclass typing, subproperty
    propagation, inverse symmetry (name objects only), transitive closure and
    property chains. All entailments are monotone over the store's finite term
    universe, so the loop terminates. The store is modified in place.
    """
    ancestors = {cls: schema.ancestors(cls) for cls in schema.classes}
    superprops = {p: schema.superproperties(p) for p in schema.property_names()}
    inverses = {
        p.name: p.inverse_of for p in schema.object_properties.values() if p.inverse_of
    }
    transitive = schema.transitive_properties()

    rounds = 0
    added = 0
    while True:
        rounds += 1
        derived: set[Triple] = set()
        for s, p, o in store.triples():
            if p == TYPE:
                for sup in ancestors.get(o, ()):
                    derived.add(Triple(s, TYPE, sup))
                continue
            for sup in superprops.get(p, ()):
                derived.add(Triple(s, sup, o))
            inverse = inverses.get(p)
            if inverse is not None and isinstance(o, URIRef):
                derived.add(Triple(o, inverse, s))
        for prop in transitive:
            derived |= _transitive_step(store, prop)
        for chain in schema.chains:
            for a, _, b in store.triples(predicate=chain.first):
                for _, _, c in store.triples(subject=b, predicate=chain.second):
                    derived.add(Triple(a, chain.entails, c))
        new = store.add_all(t for t in derived if t not in store)
        if not new:
            break
        added += len(new)
    logger.debug("materialize derived %d triple(s) in %d round(s)", added, rounds)
    return store


def _transitive_step(store: TripleStore, prop: URIRef) -> set[Triple]:
    derived = set()
    for a, _, b in store.triples(predicate=prop):
        if not isinstance(b, URIRef):
            continue
        for _, _, c in store.triples(subject=b, predicate=prop):
            derived.add(Triple(a, prop, c))
    return derived


def apply_defaults(store: TripleStore, instance: URIRef, schema: SemanticSchema) -> set[Triple]:
    """Assert default values for properties ``instance`` does not have yet.

    Defaults come from the value axioms of every class the instance is typed
    with (after materialization).
    """
    added: set[Triple] = set()
    for cls in store.types_of(instance):
        for axiom in schema.defaults_for(cls):
            if not store.objects(instance, axiom.property):
                triple = Triple(instance, axiom.property, axiom.value)
                if store.add_triple(triple):
                    added.add(triple)
    return added
