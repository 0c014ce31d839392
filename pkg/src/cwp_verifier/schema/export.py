"""Schema export as triples in the ``cwp:`` axiom vocabulary.

Vocabulary (namespace ``CWP``):

    C a cwp:Class ; cwp:subClassOf S ; cwp:abstract true
    A cwp:disjointWith B                       (each declared pair once)
    p a cwp:DatatypeProperty ; cwp:domain C ; cwp:rangeTag "integer"
    p a cwp:ObjectProperty ; cwp:domain C ; cwp:range D ; cwp:inverseOf q
    p cwp:characteristic "Irreflexive"
    p cwp:minCardinality 1 ; cwp:maxCardinality 1
    p cwp:subPropertyOf q ; p cwp:orderIndex 2
    p cwp:hasValue v                            (attribute default)
    p cwp:oneOf i                               (partition individual)
    p cwp:comment "..." ; p cwp:classOnly true
    cwp:chain_p_q a cwp:PropertyChain ; cwp:chainFirst p ; cwp:chainSecond q ;
        cwp:entails r
    cwp:allValuesFrom_C_p a cwp:AllValuesFrom ; cwp:onClass C ;
        cwp:onProperty p ; cwp:filler D
"""

from rdflib import Namespace, URIRef

from cwp_verifier.schema.semantic import SemanticSchema
from cwp_verifier.schema.translator import disjoint_pairs
from cwp_verifier.triples.store import Triple, TripleStore
from cwp_verifier.triples.terms import (
    TYPE,
    PrefixTable,
    boolean_literal,
    integer_literal,
    string_literal,
)
from cwp_verifier.triples.textformat import serialize

CWP = Namespace("http://cwp-verifier.org/ns#")
CWP_PREFIX = "cwp"


def _export_prefixes(prefixes: PrefixTable) -> PrefixTable:
    table = prefixes.copy()
    table.bind(CWP_PREFIX, str(CWP))
    return table


def schema_to_store(schema: SemanticSchema, prefixes: PrefixTable) -> TripleStore:
    """Encode a schema as a triple store using the ``cwp:`` vocabulary."""
    table = _export_prefixes(prefixes)
    store = TripleStore(table)
    add = store.add_triple
    local = table.local_name

    for name, axiom in schema.classes.items():
        add(Triple(name, TYPE, CWP.Class))
        for sup in axiom.superclasses:
            add(Triple(name, CWP.subClassOf, sup))
        if axiom.abstract:
            add(Triple(name, CWP.abstract, boolean_literal(True)))
    for a, b in disjoint_pairs(schema):
        add(Triple(a, CWP.disjointWith, b))

    for name, prop in schema.datatype_properties.items():
        add(Triple(name, TYPE, CWP.DatatypeProperty))
        if prop.domain is not None:
            add(Triple(name, CWP.domain, prop.domain))
        add(Triple(name, CWP.rangeTag, string_literal(prop.range.value)))
        _cardinality(store, name, prop.min_cardinality, prop.max_cardinality)

    for name, prop in schema.object_properties.items():
        add(Triple(name, TYPE, CWP.ObjectProperty))
        if prop.domain is not None:
            add(Triple(name, CWP.domain, prop.domain))
        if prop.range is not None:
            add(Triple(name, CWP.range, prop.range))
        if prop.inverse_of is not None:
            add(Triple(name, CWP.inverseOf, prop.inverse_of))
        for characteristic in prop.characteristics:
            add(Triple(name, CWP.characteristic, string_literal(characteristic.value)))
        for sup in prop.superproperties:
            add(Triple(name, CWP.subPropertyOf, sup))
        if prop.comment:
            add(Triple(name, CWP.comment, string_literal(prop.comment)))
        if prop.class_only:
            add(Triple(name, CWP.classOnly, boolean_literal(True)))
        _cardinality(store, name, prop.min_cardinality, prop.max_cardinality)

    for index in schema.ordered_indexes.values():
        for position, name in enumerate(index.indexed, start=1):
            add(Triple(name, CWP.orderIndex, integer_literal(position)))

    for axiom in schema.value_axioms:
        add(Triple(axiom.property, CWP.hasValue, axiom.value))

    for enumeration in schema.enumerations.values():
        for individual in enumeration.individuals:
            add(Triple(enumeration.property, CWP.oneOf, individual))

    for chain in schema.chains:
        node = CWP[f"chain_{local(chain.first)}_{local(chain.second)}"]
        add(Triple(node, TYPE, CWP.PropertyChain))
        add(Triple(node, CWP.chainFirst, chain.first))
        add(Triple(node, CWP.chainSecond, chain.second))
        add(Triple(node, CWP.entails, chain.entails))

    for restriction in schema.restrictions:
        node = CWP[f"allValuesFrom_{local(restriction.cls)}_{local(restriction.property)}"]
        add(Triple(node, TYPE, CWP.AllValuesFrom))
        add(Triple(node, CWP.onClass, restriction.cls))
        add(Triple(node, CWP.onProperty, restriction.property))
        add(Triple(node, CWP.filler, restriction.filler))
    return store


def _cardinality(store: TripleStore, name: URIRef, low, high) -> None:
    if low is not None:
        store.add_triple(Triple(name, CWP.minCardinality, integer_literal(low)))
    if high is not None:
        store.add_triple(Triple(name, CWP.maxCardinality, integer_literal(high)))


def export_schema(schema: SemanticSchema, prefixes: PrefixTable, with_prefixes: bool = False) -> str:
    """Canonical triple text of :func:`schema_to_store`."""
    return serialize(schema_to_store(schema, prefixes), with_prefixes)
