"""Structural consistency checks of instance data against a schema."""

import logging
import re
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import networkx as nx
from rdflib import Literal, URIRef

from cwp_verifier.schema.semantic import DatatypeProperty, ObjectProperty, SemanticSchema
from cwp_verifier.triples.store import Triple, TripleStore
from cwp_verifier.triples.terms import TYPE, literal_tag

logger = logging.getLogger(__name__)


class ViolationKind(Enum):
    DOMAIN_RANGE = "DomainRange"
    CARDINALITY = "Cardinality"
    COMPOSITION_MULTI_OWNER = "CompositionMultiOwner"
    PART_WHOLE_CYCLE = "PartWholeCycle"
    DISJOINTNESS = "Disjointness"
    ENUMERATION = "Enumeration"
    ORDER_INDEX = "OrderIndex"


@dataclass(frozen=True)
class StructuralViolation:
    kind: ViolationKind
    subject: URIRef
    detail: str
    witnesses: tuple[Triple, ...]

    @property
    def code(self) -> str:
        return f"STRUCTURAL:{self.kind.value}"


_INDEX_SUFFIX = re.compile(r"_(\d+)$")


class StructuralChecker:
    """Runs every structural check over one materialized store."""

    def __init__(self, store: TripleStore, schema: SemanticSchema):
        self.store = store
        self.schema = schema
        self.render = store.prefixes.render
        self.violations: list[StructuralViolation] = []

    def _report(self, kind: ViolationKind, subject, detail: str, *witnesses: Triple) -> None:
        self.violations.append(StructuralViolation(kind, subject, detail, tuple(witnesses)))

    def _typed(self, node, cls: Optional[URIRef]) -> bool:
        return cls is None or Triple(node, TYPE, cls) in self.store

    def _part_whole_link(self, prop) -> bool:
        """Whether ``prop`` is a part-whole property or the inverse of one."""
        if not isinstance(prop, ObjectProperty):
            return False
        if prop.part_whole:
            return True
        inverse = self.schema.property(prop.inverse_of) if prop.inverse_of else None
        return isinstance(inverse, ObjectProperty) and inverse.part_whole

    def run(self) -> list[StructuralViolation]:
        self.check_domain_range()
        self.check_cardinality()
        self.check_composition_owners()
        self.check_part_whole_cycles()
        self.check_disjointness()
        self.check_enumerations()
        self.check_order_indexes()
        self.violations.sort(
            key=lambda v: (v.kind.value, self.render(v.subject), v.detail)
        )
        return self.violations

    def check_domain_range(self) -> None:
        store, schema, render = self.store, self.schema, self.render
        for triple in store.sorted_triples():
            s, p, o = triple
            if p == TYPE:
                continue
            prop = schema.property(p)
            if prop is None:
                continue
            if s == o and self._part_whole_link(prop):
                # reported once, as a PartWholeCycle
                continue
            if not self._typed(s, prop.domain):
                self._report(
                    ViolationKind.DOMAIN_RANGE,
                    s,
                    f"{render(s)} uses {render(p)} but is not a {render(prop.domain)}",
                    triple,
                )
            if isinstance(prop, DatatypeProperty):
                if not isinstance(o, Literal) or literal_tag(o) is not prop.range:
                    self._report(
                        ViolationKind.DOMAIN_RANGE,
                        s,
                        f"{render(p)} expects a {prop.range.value} value, got {render(o)}",
                        triple,
                    )
            elif not isinstance(o, URIRef) or not self._typed(o, prop.range):
                self._report(
                    ViolationKind.DOMAIN_RANGE,
                    s,
                    f"{render(p)} expects a {render(prop.range) if prop.range else 'name'}, "
                    f"got {render(o)}",
                    triple,
                )
        for restriction in schema.restrictions:
            for instance in store.instances_of(restriction.cls):
                for o in store.objects(instance, restriction.property):
                    if not self._typed(o, restriction.filler):
                        self._report(
                            ViolationKind.DOMAIN_RANGE,
                            instance,
                            f"{render(restriction.property)} values of a {render(restriction.cls)} "
                            f"must be {render(restriction.filler)}, got {render(o)}",
                            Triple(instance, restriction.property, o),
                        )

    def check_cardinality(self) -> None:
        store, render = self.store, self.render
        props = list(self.schema.datatype_properties.values()) + [
            p for p in self.schema.object_properties.values() if not p.composition_inverse
        ]
        for prop in sorted(props, key=lambda p: render(p.name)):
            low, high = prop.min_cardinality, prop.max_cardinality
            if (low is None and high is None) or prop.domain is None:
                continue
            for instance in store.instances_of(prop.domain):
                values = store.objects(instance, prop.name)
                if (low is not None and len(values) < low) or (
                    high is not None and len(values) > high
                ):
                    bounds = f"[{low or 0}..{'*' if high is None else high}]"
                    witness = (
                        [Triple(instance, prop.name, v) for v in values]
                        or [Triple(instance, TYPE, prop.domain)]
                    )
                    self._report(
                        ViolationKind.CARDINALITY,
                        instance,
                        f"{render(instance)} has {len(values)} {render(prop.name)} value(s), "
                        f"expected {bounds}",
                        *witness,
                    )

    def check_composition_owners(self) -> None:
        store, render = self.store, self.render
        for prop in sorted(self.schema.object_properties.values(), key=lambda p: render(p.name)):
            if not prop.composition or prop.range is None:
                continue
            for part in store.instances_of(prop.range):
                wholes = store.subjects(prop.name, part)
                if len(wholes) != 1:
                    witness = [Triple(w, prop.name, part) for w in wholes] or [
                        Triple(part, TYPE, prop.range)
                    ]
                    self._report(
                        ViolationKind.COMPOSITION_MULTI_OWNER,
                        part,
                        f"{render(part)} is a part of {len(wholes)} whole(s) via "
                        f"{render(prop.name)}, expected exactly 1",
                        *witness,
                    )

    def check_part_whole_cycles(self) -> None:
        graph = nx.DiGraph()
        edges = defaultdict(list)
        for prop in self.schema.part_whole_properties():
            for triple in self.store.triples(predicate=prop):
                if isinstance(triple.object, URIRef):
                    graph.add_edge(triple.subject, triple.object)
                    edges[(triple.subject, triple.object)].append(triple)
        for component in nx.strongly_connected_components(graph):
            nodes = sorted(component, key=self.render)
            if len(nodes) == 1 and not graph.has_edge(nodes[0], nodes[0]):
                continue
            witnesses = sorted(
                (t for (a, b), ts in edges.items() if a in component and b in component for t in ts),
                key=lambda t: (self.render(t.subject), self.render(t.predicate), self.render(t.object)),
            )
            self._report(
                ViolationKind.PART_WHOLE_CYCLE,
                nodes[0],
                "part-whole cycle through " + ", ".join(self.render(n) for n in nodes),
                *witnesses,
            )

    def check_disjointness(self) -> None:
        render = self.render
        for group in self.schema.disjoint_sets:
            members = sorted(group, key=render)
            instances = {i for cls in members for i in self.store.instances_of(cls)}
            for instance in sorted(instances, key=render):
                typed = [c for c in members if Triple(instance, TYPE, c) in self.store]
                if len(typed) > 1:
                    self._report(
                        ViolationKind.DISJOINTNESS,
                        instance,
                        f"{render(instance)} is typed in disjoint classes "
                        + ", ".join(render(c) for c in typed),
                        *(Triple(instance, TYPE, c) for c in typed),
                    )

    def check_enumerations(self) -> None:
        render = self.render
        for prop, enumeration in sorted(self.schema.enumerations.items(), key=lambda i: render(i[0])):
            allowed = set(enumeration.individuals)
            for triple in sorted(self.store.triples(predicate=prop), key=lambda t: render(t.subject)):
                if triple.object not in allowed:
                    self._report(
                        ViolationKind.ENUMERATION,
                        triple.subject,
                        f"{render(triple.object)} is not a value of {render(enumeration.partition)}",
                        triple,
                    )

    def check_order_indexes(self) -> None:
        render = self.render
        for base, index in sorted(self.schema.ordered_indexes.items(), key=lambda i: render(i[0])):
            positions = {}
            for name in index.indexed:
                found = _INDEX_SUFFIX.search(str(name))
                positions[name] = int(found.group(1))
            by_subject = defaultdict(list)
            for name in index.indexed:
                for triple in self.store.triples(predicate=name):
                    by_subject[triple.subject].append(triple)
            for subject in sorted(by_subject, key=render):
                triples = by_subject[subject]
                used = sorted({positions[t.predicate] for t in triples})
                per_object = defaultdict(list)
                per_index = defaultdict(list)
                for t in triples:
                    per_object[t.object].append(t)
                    per_index[t.predicate].append(t)
                duplicates = [ts for ts in per_object.values() if len(ts) > 1]
                duplicates += [ts for ts in per_index.values() if len(ts) > 1]
                for ts in duplicates:
                    self._report(
                        ViolationKind.ORDER_INDEX,
                        subject,
                        f"duplicate index entries on {render(base)} for {render(subject)}",
                        *sorted(ts, key=lambda t: (render(t.predicate), render(t.object))),
                    )
                missing = [i for i in range(1, used[-1] + 1) if i not in used] if used else []
                if missing:
                    self._report(
                        ViolationKind.ORDER_INDEX,
                        subject,
                        f"{render(base)} of {render(subject)} skips position(s) "
                        + ", ".join(str(i) for i in missing),
                        *sorted(triples, key=lambda t: render(t.predicate)),
                    )


def check_structural(store: TripleStore, schema: SemanticSchema) -> list[StructuralViolation]:
    """Report structural problems in a materialized store.

    Cardinality is not reported for composition inverses; a part with other
    than one whole is reported once as CompositionMultiOwner instead.
    A part-whole link from an instance to itself is reported once as a
    PartWholeCycle, without DomainRange violations for it or its inverse.
    """
    violations = StructuralChecker(store, schema).run()
    logger.info("structural check found %d violation(s)", len(violations))
    return violations
