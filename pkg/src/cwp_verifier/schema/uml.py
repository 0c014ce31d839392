"""Class-model records: classes, attributes, associations, partitions."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import networkx as nx
from rdflib import Literal, URIRef

from cwp_verifier.errors import InvalidModel, UnknownClass, UnknownDatatype
from cwp_verifier.triples.terms import LiteralTag

DATATYPE_NAMES = {tag.value: tag for tag in LiteralTag}


def datatype_named(name: str) -> LiteralTag:
    """Resolve ``string``, ``integer``, ``boolean`` or ``dateTime``.

    Raises:
        UnknownDatatype: For any other name
    """
    try:
        return DATATYPE_NAMES[name]
    except KeyError:
        raise UnknownDatatype(f"unknown datatype '{name}'", subject=name)


@dataclass(frozen=True)
class Multiplicity:
    """``[min..max]``; ``max`` None means unbounded (``*``)."""

    min: int = 0
    max: Optional[int] = None

    def __post_init__(self):
        if self.min < 0 or (self.max is not None and self.max < self.min):
            raise InvalidModel(f"invalid multiplicity {self}")

    def __str__(self) -> str:
        upper = "*" if self.max is None else str(self.max)
        return f"[{self.min}..{upper}]"


OPTIONAL = Multiplicity(0, 1)
MANY = Multiplicity(0, None)


class AssociationKind(Enum):
    PLAIN = "association"
    AGGREGATION = "aggregation"
    COMPOSITION = "composition"

    @property
    def is_part_whole(self) -> bool:
        return self is not AssociationKind.PLAIN


@dataclass(frozen=True)
class UmlClass:
    name: URIRef
    abstract: bool = False


@dataclass(frozen=True)
class Attribute:
    owner: URIRef
    name: URIRef
    datatype: LiteralTag
    multiplicity: Multiplicity = OPTIONAL
    default: Optional[Literal] = None


@dataclass(frozen=True)
class Association:
    """A binary association read from source (whole) to target (part)."""

    name: URIRef
    source: URIRef
    target: URIRef
    kind: AssociationKind = AssociationKind.PLAIN
    source_multiplicity: Multiplicity = MANY
    target_multiplicity: Multiplicity = MANY
    ordered: bool = False
    unique: bool = True
    inverse: Optional[URIRef] = None
    source_role: str = ""
    target_role: str = ""
    class_only: bool = False
    specializes: Optional[URIRef] = None


@dataclass(frozen=True)
class Generalization:
    sub: URIRef
    super: URIRef


@dataclass(frozen=True)
class ValuePartition:
    """An attribute whose values are an enumerated, mutually exclusive set.

    ``parent`` names the partition value this partition refines, as
    ``(partition name, value)``; refinement needs disjoint subclasses.
    """

    name: URIRef
    owner: URIRef
    attribute: URIRef
    values: tuple[str, ...]
    parent: Optional[tuple[URIRef, str]] = None


@dataclass
class UmlClassModel:
    """A parsed class diagram."""

    namespace: str = ""
    classes: list[UmlClass] = field(default_factory=list)
    attributes: list[Attribute] = field(default_factory=list)
    associations: list[Association] = field(default_factory=list)
    generalizations: list[Generalization] = field(default_factory=list)
    value_partitions: list[ValuePartition] = field(default_factory=list)

    def class_names(self) -> set[URIRef]:
        return {c.name for c in self.classes}

    def get_class(self, name: URIRef) -> Optional[UmlClass]:
        return next((c for c in self.classes if c.name == name), None)

    def generalization_graph(self) -> nx.DiGraph:
        """Edges point from subclass to superclass."""
        graph = nx.DiGraph()
        graph.add_nodes_from(self.class_names())
        graph.add_edges_from((g.sub, g.super) for g in self.generalizations)
        return graph

    def validate(self) -> None:
        """Check model invariants.

        Raises:
            InvalidModel: Duplicate class names or a generalization cycle
            UnknownClass: A reference to an undeclared class
        """
        names = [c.name for c in self.classes]
        duplicates = sorted({str(n) for n in names if names.count(n) > 1})
        if duplicates:
            raise InvalidModel(f"class declared twice: {duplicates[0]}", subject=duplicates[0])
        declared = set(names)

        def require(cls: URIRef, where: str) -> None:
            if cls not in declared:
                raise UnknownClass(f"{where} refers to unknown class {cls}", subject=str(cls))

        for g in self.generalizations:
            require(g.sub, "generalization")
            require(g.super, "generalization")
        for a in self.attributes:
            require(a.owner, f"attribute {a.name}")
        for assoc in self.associations:
            require(assoc.source, f"association {assoc.name}")
            require(assoc.target, f"association {assoc.name}")
        for p in self.value_partitions:
            require(p.owner, f"partition {p.name}")
        if not nx.is_directed_acyclic_graph(self.generalization_graph()):
            raise InvalidModel("class generalization graph has a cycle")
