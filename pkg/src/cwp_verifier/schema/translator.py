"""Class model to semantic schema translation.

Mapping summary:

    class                -> class axiom (+ subclass-of per generalization)
    attribute            -> datatype property, cardinality from multiplicity,
                            default value -> value axiom
    association          -> object property + inverse (``<name>_inv`` when
                            none is declared); cardinality only for unique
                            associations; ordered -> indexed subproperties
    value partition      -> enumeration of individuals, or disjoint subclasses
    aggregation/composition
        per-association  -> irreflexive, inverse-functional properties;
                            composition inverses fixed to exactly one
                            whole; property chains across levels
        single hasPart   -> one transitive ``partOf`` / ``hasPart`` pair,
                            association properties as subproperties and
                            allValuesFrom class restrictions
"""

import logging
from itertools import combinations
from typing import Iterable, Optional

import networkx as nx
from rdflib import URIRef

from cwp_verifier.errors import (
    DuplicateProperty,
    EmptyPartition,
    InvalidModel,
    SubPartitionNotSupported,
)
from cwp_verifier.schema.semantic import (
    AllValuesFrom,
    Characteristic,
    ClassAxiom,
    DatatypeProperty,
    Enumeration,
    ObjectProperty,
    OrderedIndex,
    PartWholeStrategy,
    PropertyChain,
    SemanticSchema,
    TranslationOptions,
    TranslationWarning,
    ValueAxiom,
    ValuePartitionStrategy,
)
from cwp_verifier.schema.uml import Association, AssociationKind, UmlClassModel, ValuePartition

logger = logging.getLogger(__name__)

TRANSITIVE_CARDINALITY_CONFLICT = "TRANSITIVE_CARDINALITY_CONFLICT"

GENERATED_PART = "hasPart_generated"
PART_OF = "partOf"
HAS_PART = "hasPart"


def inverse_name(association: Association) -> URIRef:
    return association.inverse or URIRef(f"{association.name}_inv")


def partition_value_class(namespace: str, value: str) -> URIRef:
    """Subclass generated for a partition value: the value, capitalized."""
    return URIRef(namespace + value[:1].upper() + value[1:])


def partition_individual(namespace: str, value: str) -> URIRef:
    return URIRef(namespace + value)


class SchemaFragment(SemanticSchema):
    """A partial schema, merged into a full one by :func:`translate`."""

    def merge_into(self, schema: SemanticSchema) -> None:
        for name, axiom in self.classes.items():
            existing = schema.classes.get(name)
            if existing:
                existing.superclasses |= axiom.superclasses
            else:
                schema.classes[name] = axiom
        schema.disjoint_sets.extend(self.disjoint_sets)
        schema.enumerations.update(self.enumerations)
        for name, prop in self.object_properties.items():
            _add_property(schema, prop)


def _add_property(schema: SemanticSchema, prop) -> None:
    if schema.has_property(prop.name):
        raise DuplicateProperty(f"property {prop.name} declared twice", subject=str(prop.name))
    if isinstance(prop, DatatypeProperty):
        schema.datatype_properties[prop.name] = prop
    else:
        schema.object_properties[prop.name] = prop


def translate_value_partition(
    owner: URIRef,
    attribute: URIRef,
    values: Iterable[str],
    strategy: ValuePartitionStrategy,
    name: Optional[URIRef] = None,
    namespace: Optional[str] = None,
    parent: Optional[tuple[URIRef, str]] = None,
) -> SchemaFragment:
    """Translate one value partition.

    Args:
        owner: Class owning the partitioned attribute
        attribute: The partitioned attribute (becomes an object property)
        values: Value labels, distinct and non-empty
        strategy: Individuals or subclasses
        name: Partition class name (defaults to ``<attribute>Partition``)
        namespace: Namespace for generated subclasses and individuals
        parent: ``(partition, value)`` this partition refines

    Raises:
        EmptyPartition: If ``values`` is empty
        SubPartitionNotSupported: If ``parent`` is given for individuals
    """
    values = list(values)
    name = name or URIRef(f"{attribute}Partition")
    if namespace is None:
        namespace = str(name)[: -len(_local(name))]
    if not values:
        raise EmptyPartition(f"partition {name} has no values", subject=str(name))
    if len(set(values)) != len(values):
        raise InvalidModel(f"partition {name} repeats a value", subject=str(name))

    fragment = SchemaFragment()
    if strategy is ValuePartitionStrategy.DISJOINT_INDIVIDUALS:
        if parent is not None:
            raise SubPartitionNotSupported(
                f"partition {name} refines {parent[1]}; sub-partitions need disjoint subclasses",
                subject=str(name),
            )
        individuals = tuple(partition_individual(namespace, v) for v in values)
        fragment.classes[name] = ClassAxiom(name)
        fragment.enumerations[attribute] = Enumeration(attribute, name, individuals)
        fragment.object_properties[attribute] = ObjectProperty(
            attribute, domain=owner, max_cardinality=1
        )
        return fragment

    root = partition_value_class(namespace, parent[1]) if parent else name
    fragment.classes[root] = ClassAxiom(root)
    subclasses = [partition_value_class(namespace, v) for v in values]
    for cls in subclasses:
        fragment.classes[cls] = ClassAxiom(cls, superclasses={root})
    if len(subclasses) > 1:
        fragment.disjoint_sets.append(frozenset(subclasses))
    if parent is None:
        fragment.object_properties[attribute] = ObjectProperty(
            attribute, domain=owner, range=name, max_cardinality=1
        )
    return fragment


def _local(name: URIRef) -> str:
    text = str(name)
    for sep in ("#", "/", ":"):
        if sep in text:
            text = text.rsplit(sep, 1)[1]
    return text


def build_property_chains(model: UmlClassModel, options: Optional[TranslationOptions] = None) -> list[PropertyChain]:
    """Chain axioms for consecutive part-whole associations.

    For ``p: A -> B`` and ``q: B' -> C`` with ``B`` a subclass of (or equal
    to) ``B'``, emit ``p o q => hasPart_generated``. Only the per-association
    strategy uses chains.
    """
    options = options or TranslationOptions()
    if options.part_whole_strategy is not PartWholeStrategy.PER_ASSOCIATION:
        return []
    graph = model.generalization_graph()
    entails = URIRef(model.namespace + GENERATED_PART)
    parts = [a for a in model.associations if a.kind.is_part_whole]
    chains = []
    for p in parts:
        lineage = {p.target} | nx.descendants(graph, p.target)
        for q in parts:
            if q.source in lineage:
                chains.append(PropertyChain(p.name, q.name, entails))
    return chains


def translate(model: UmlClassModel, options: Optional[TranslationOptions] = None) -> SemanticSchema:
    """Translate a class model into a semantic schema.

    Args:
        model: Validated class model
        options: Strategy selection (defaults: disjoint individuals,
            per-association part-whole)

    Returns:
        A new schema; translation is deterministic

    Raises:
        DuplicateProperty: If two attributes/associations share a name
        EmptyPartition: If a value partition has no values
        SubPartitionNotSupported: If a partition is refined under individuals
    """
    options = options or TranslationOptions()
    model.validate()
    schema = SemanticSchema(options=options)

    for cls in model.classes:
        schema.classes[cls.name] = ClassAxiom(cls.name, abstract=cls.abstract)
    for g in model.generalizations:
        schema.classes[g.sub].superclasses.add(g.super)

    for partition in model.value_partitions:
        _translate_partition(schema, model, partition, options)

    for attribute in model.attributes:
        mult = attribute.multiplicity
        _add_property(
            schema,
            DatatypeProperty(
                attribute.name,
                domain=attribute.owner,
                range=attribute.datatype,
                min_cardinality=mult.min or None,
                max_cardinality=mult.max,
            ),
        )
        if attribute.default is not None:
            schema.value_axioms.append(ValueAxiom(attribute.owner, attribute.name, attribute.default))

    single_has_part = options.part_whole_strategy is PartWholeStrategy.SINGLE_HAS_PART
    if single_has_part and any(a.kind.is_part_whole for a in model.associations):
        part_of = URIRef(model.namespace + PART_OF)
        has_part = URIRef(model.namespace + HAS_PART)
        _add_property(
            schema,
            ObjectProperty(part_of, inverse_of=has_part, characteristics={Characteristic.TRANSITIVE}),
        )
        _add_property(
            schema,
            ObjectProperty(
                has_part,
                inverse_of=part_of,
                characteristics={Characteristic.TRANSITIVE},
                part_whole=True,
            ),
        )

    for association in model.associations:
        _translate_association(schema, model, association, options)

    for association in model.associations:
        if association.specializes is not None:
            parent = next((a for a in model.associations if a.name == association.specializes), None)
            if parent is None:
                raise InvalidModel(
                    f"association {association.name} specializes unknown {association.specializes}",
                    subject=str(association.name),
                )
            schema.object_properties[association.name].superproperties.add(parent.name)
            schema.object_properties[inverse_name(association)].superproperties.add(
                inverse_name(parent)
            )

    chains = build_property_chains(model, options)
    if chains:
        generated = chains[0].entails
        _add_property(schema, ObjectProperty(generated, part_whole=True))
        schema.chains.extend(chains)

    for warning in schema.warnings:
        logger.warning("%s: %s", warning.code, warning.message)
    return schema


def _translate_partition(schema, model, partition: ValuePartition, options) -> None:
    fragment = translate_value_partition(
        partition.owner,
        partition.attribute,
        partition.values,
        options.value_partition_strategy,
        name=partition.name,
        namespace=model.namespace,
        parent=partition.parent,
    )
    fragment.merge_into(schema)


def _translate_association(schema, model, association: Association, options) -> None:
    inverse = inverse_name(association)
    part_whole = association.kind.is_part_whole
    composition = association.kind is AssociationKind.COMPOSITION
    single_has_part = options.part_whole_strategy is PartWholeStrategy.SINGLE_HAS_PART

    comment = "; ".join(
        text
        for text in (
            f"source role: {association.source_role}" if association.source_role else "",
            f"target role: {association.target_role}" if association.target_role else "",
        )
        if text
    )
    forward = ObjectProperty(
        association.name,
        domain=association.source,
        range=association.target,
        inverse_of=inverse,
        part_whole=part_whole,
        composition=composition,
        comment=comment,
        class_only=association.class_only,
    )
    backward = ObjectProperty(
        inverse,
        domain=association.target,
        range=association.source,
        inverse_of=association.name,
        composition_inverse=composition,
        class_only=association.class_only,
    )

    if association.unique:
        forward.min_cardinality = association.target_multiplicity.min or None
        forward.max_cardinality = association.target_multiplicity.max
        backward.min_cardinality = association.source_multiplicity.min or None
        backward.max_cardinality = association.source_multiplicity.max

    if part_whole and not single_has_part:
        forward.characteristics.add(Characteristic.IRREFLEXIVE)
        forward.characteristics.add(Characteristic.INVERSE_FUNCTIONAL)
        if composition:
            backward.min_cardinality = 1
            backward.max_cardinality = 1
    elif part_whole:
        has_part = URIRef(model.namespace + HAS_PART)
        part_of = URIRef(model.namespace + PART_OF)
        forward.superproperties.add(has_part)
        backward.superproperties.add(part_of)
        schema.restrictions.append(AllValuesFrom(association.source, association.name, association.target))
        schema.restrictions.append(AllValuesFrom(association.target, inverse, association.source))
        forward.domain = forward.range = None
        backward.domain = backward.range = None
        if composition:
            backward.min_cardinality = backward.max_cardinality = None
            forward.min_cardinality = forward.max_cardinality = None
            schema.warnings.append(
                TranslationWarning(
                    TRANSITIVE_CARDINALITY_CONFLICT,
                    str(inverse),
                    f"composition {_local(association.name)} asks for exactly one whole, "
                    f"but {PART_OF} is transitive and cannot carry a cardinality restriction",
                )
            )

    _add_property(schema, forward)
    _add_property(schema, backward)

    if association.ordered:
        count = association.target_multiplicity.max or options.ordered_index_limit
        indexed = tuple(URIRef(f"{association.name}_{i}") for i in range(1, count + 1))
        schema.ordered_indexes[association.name] = OrderedIndex(association.name, indexed)
        for name in indexed:
            _add_property(
                schema,
                ObjectProperty(
                    name,
                    domain=association.source,
                    range=association.target,
                    characteristics={Characteristic.FUNCTIONAL},
                    superproperties={association.name},
                ),
            )


def disjoint_pairs(schema: SemanticSchema) -> list[tuple[URIRef, URIRef]]:
    """Every declared disjoint pair, each pair sorted."""
    pairs = set()
    for group in schema.disjoint_sets:
        for a, b in combinations(sorted(group), 2):
            pairs.add((a, b))
    return sorted(pairs)
