"""Semantic schema: the axioms a class model translates into."""

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Optional, Union

import networkx as nx
from rdflib import Literal, URIRef

from cwp_verifier.triples.terms import LiteralTag


class ValuePartitionStrategy(Enum):
    DISJOINT_INDIVIDUALS = "disjoint-individuals"
    DISJOINT_SUBCLASSES = "disjoint-subclasses"


class PartWholeStrategy(Enum):
    PER_ASSOCIATION = "per-association"
    SINGLE_HAS_PART = "single-haspart"


@dataclass(frozen=True)
class TranslationOptions:
    value_partition_strategy: ValuePartitionStrategy = ValuePartitionStrategy.DISJOINT_INDIVIDUALS
    part_whole_strategy: PartWholeStrategy = PartWholeStrategy.PER_ASSOCIATION
    ordered_index_limit: int = 8


class Characteristic(Enum):
    IRREFLEXIVE = "Irreflexive"
    INVERSE_FUNCTIONAL = "InverseFunctional"
    FUNCTIONAL = "Functional"
    TRANSITIVE = "Transitive"


@dataclass
class ClassAxiom:
    name: URIRef
    superclasses: set[URIRef] = field(default_factory=set)
    abstract: bool = False


@dataclass
class DatatypeProperty:
    name: URIRef
    domain: Optional[URIRef]
    range: LiteralTag
    min_cardinality: Optional[int] = None
    max_cardinality: Optional[int] = None


@dataclass
class ObjectProperty:
    """An object property.

    ``part_whole`` marks whole-to-part properties, ``composition`` the
    composition ones and ``composition_inverse`` their part-to-whole inverse.
    """

    name: URIRef
    domain: Optional[URIRef] = None
    range: Optional[URIRef] = None
    inverse_of: Optional[URIRef] = None
    characteristics: set[Characteristic] = field(default_factory=set)
    min_cardinality: Optional[int] = None
    max_cardinality: Optional[int] = None
    superproperties: set[URIRef] = field(default_factory=set)
    part_whole: bool = False
    composition: bool = False
    composition_inverse: bool = False
    comment: str = ""
    class_only: bool = False

    @property
    def transitive(self) -> bool:
        return Characteristic.TRANSITIVE in self.characteristics


Property = Union[DatatypeProperty, ObjectProperty]


@dataclass(frozen=True)
class PropertyChain:
    """``first`` followed by ``second`` entails ``entails``."""

    first: URIRef
    second: URIRef
    entails: URIRef


@dataclass(frozen=True)
class Enumeration:
    property: URIRef
    partition: URIRef
    individuals: tuple[URIRef, ...]


@dataclass(frozen=True)
class OrderedIndex:
    base: URIRef
    indexed: tuple[URIRef, ...]


@dataclass(frozen=True)
class ValueAxiom:
    """Default value assigned to ``property`` on new instances of ``cls``."""

    cls: URIRef
    property: URIRef
    value: Literal


@dataclass(frozen=True)
class AllValuesFrom:
    cls: URIRef
    property: URIRef
    filler: URIRef


@dataclass(frozen=True)
class TranslationWarning:
    code: str
    subject: str
    message: str


@dataclass
class SemanticSchema:
    """Class axioms, properties and the extra axioms the checks rely on."""

    classes: dict[URIRef, ClassAxiom] = field(default_factory=dict)
    disjoint_sets: list[frozenset[URIRef]] = field(default_factory=list)
    datatype_properties: dict[URIRef, DatatypeProperty] = field(default_factory=dict)
    object_properties: dict[URIRef, ObjectProperty] = field(default_factory=dict)
    chains: list[PropertyChain] = field(default_factory=list)
    enumerations: dict[URIRef, Enumeration] = field(default_factory=dict)
    ordered_indexes: dict[URIRef, OrderedIndex] = field(default_factory=dict)
    value_axioms: list[ValueAxiom] = field(default_factory=list)
    restrictions: list[AllValuesFrom] = field(default_factory=list)
    warnings: list[TranslationWarning] = field(default_factory=list)
    options: TranslationOptions = field(default_factory=TranslationOptions)

    # ------------------------------------------------------------------
    # Classes
    # ------------------------------------------------------------------
    def has_class(self, name: URIRef) -> bool:
        return name in self.classes

    @cached_property
    def _class_graph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        for axiom in self.classes.values():
            graph.add_node(axiom.name)
            graph.add_edges_from((axiom.name, sup) for sup in axiom.superclasses)
        return graph

    def ancestors(self, cls: URIRef) -> set[URIRef]:
        """Strict superclasses of ``cls``."""
        if cls not in self._class_graph:
            return set()
        return nx.descendants(self._class_graph, cls)

    def descendants(self, cls: URIRef) -> set[URIRef]:
        """Strict subclasses of ``cls``."""
        if cls not in self._class_graph:
            return set()
        return nx.ancestors(self._class_graph, cls)

    def is_subclass(self, sub: URIRef, sup: URIRef) -> bool:
        """Reflexive subclass test."""
        return sub == sup or sup in self.ancestors(sub)

    def concrete_subclasses(self, cls: URIRef) -> list[URIRef]:
        found = {cls} | self.descendants(cls)
        return sorted(c for c in found if c in self.classes and not self.classes[c].abstract)

    # ------------------------------------------------------------------
    # Properties
    # ------------------------------------------------------------------
    def property(self, name: URIRef) -> Optional[Property]:
        return self.datatype_properties.get(name) or self.object_properties.get(name)

    def has_property(self, name: URIRef) -> bool:
        return name in self.datatype_properties or name in self.object_properties

    def property_names(self) -> set[URIRef]:
        return set(self.datatype_properties) | set(self.object_properties)

    def range_tag(self, name: URIRef) -> Optional[LiteralTag]:
        prop = self.datatype_properties.get(name)
        return prop.range if prop else None

    def is_functional(self, name: URIRef) -> bool:
        prop = self.property(name)
        if prop is None:
            return False
        if isinstance(prop, ObjectProperty) and Characteristic.FUNCTIONAL in prop.characteristics:
            return True
        return prop.max_cardinality == 1

    def inverse(self, name: URIRef) -> Optional[URIRef]:
        prop = self.object_properties.get(name)
        return prop.inverse_of if prop else None

    def superproperties(self, name: URIRef) -> set[URIRef]:
        """Transitive superproperties of ``name`` (strict)."""
        found: set[URIRef] = set()
        pending = [name]
        while pending:
            prop = self.object_properties.get(pending.pop())
            for sup in prop.superproperties if prop else ():
                if sup not in found:
                    found.add(sup)
                    pending.append(sup)
        return found

    def transitive_properties(self) -> list[URIRef]:
        return sorted(p.name for p in self.object_properties.values() if p.transitive)

    def part_whole_properties(self) -> list[URIRef]:
        """Whole-to-part properties, including chain and hasPart properties."""
        return sorted(p.name for p in self.object_properties.values() if p.part_whole)

    def defaults_for(self, cls: URIRef) -> list[ValueAxiom]:
        """Value axioms that apply to ``cls`` or any of its superclasses."""
        lineage = {cls} | self.ancestors(cls)
        return [v for v in self.value_axioms if v.cls in lineage]

    def properties_of(self, cls: URIRef) -> list[URIRef]:
        """Properties whose domain is ``cls`` or one of its superclasses."""
        lineage = {cls} | self.ancestors(cls)
        props = [p for p in self.datatype_properties.values() if p.domain in lineage]
        props += [p for p in self.object_properties.values() if p.domain in lineage]
        return sorted(p.name for p in props)
