"""Indexed, duplicate-free triple store with closed-world semantics."""

import hashlib
from typing import Iterable, Iterator, NamedTuple, Optional, Union

from rdflib import Literal, URIRef, Variable

from cwp_verifier.errors import VariableInData
from cwp_verifier.triples.terms import TYPE, PrefixTable, Term

Node = Union[URIRef, Literal]

_DIGEST_BITS = 256


class Triple(NamedTuple):
    """A ground (subject, predicate, object) statement."""

    subject: URIRef
    predicate: URIRef
    object: Node


def triple_sort_key(triple: Triple, prefixes: PrefixTable) -> tuple[str, str, str]:
    """Canonical total order: subject, predicate, object by rendered text."""
    return prefixes.render_triple(*triple)


def _identity_text(term: Term) -> str:
    if isinstance(term, Literal):
        return f'"{term}"^^<{term.datatype}>'
    return f"<{term}>"


def _triple_hash(triple: Triple) -> int:
    text = "\x1f".join(_identity_text(term) for term in triple)
    return int.from_bytes(hashlib.sha256(text.encode("utf-8")).digest(), "big")


class TripleStore:
    """A set of ground triples with subject, predicate and object indexes.

    Absent triples are false (closed world). Every successful mutation bumps
    ``revision``; no-op inserts and removals leave it untouched. The digest is
    maintained incrementally as the XOR of per-triple SHA-256 values, so it
    does not depend on insertion order.
    """

    def __init__(
        self,
        prefixes: Optional[PrefixTable] = None,
        triples: Iterable[Triple] = (),
    ):
        """Initialize a store.

        Args:
            prefixes: Prefix table used for canonical rendering and ordering.
            triples: Optional initial content.
        """
        self.prefixes = prefixes or PrefixTable()
        self.revision = 0
        self._triples: set[Triple] = set()
        self._spo: dict[URIRef, dict[URIRef, set[Node]]] = {}
        self._pos: dict[URIRef, dict[Node, set[URIRef]]] = {}
        self._osp: dict[Node, dict[URIRef, set[URIRef]]] = {}
        self._digest = 0
        for triple in triples:
            self.add_triple(triple)

    # ------------------------------------------------------------------
    # Mutation
    # ------------------------------------------------------------------
    def add_triple(self, triple: Triple) -> bool:
        """Insert a triple.

        Args:
            triple: Ground triple to insert

        Returns:
            True if the store changed, False if the triple was already present

        Raises:
            VariableInData: If any position holds a variable
        """
        triple = _check_ground(triple)
        if triple in self._triples:
            return False
        s, p, o = triple
        self._triples.add(triple)
        self._spo.setdefault(s, {}).setdefault(p, set()).add(o)
        self._pos.setdefault(p, {}).setdefault(o, set()).add(s)
        self._osp.setdefault(o, {}).setdefault(s, set()).add(p)
        self._digest ^= _triple_hash(triple)
        self.revision += 1
        return True

    def remove_triple(self, triple: Triple) -> bool:
        """Remove a triple.

        Returns:
            True if the triple was present
        """
        triple = Triple(*triple)
        if triple not in self._triples:
            return False
        s, p, o = triple
        self._triples.discard(triple)
        _discard(self._spo, s, p, o)
        _discard(self._pos, p, o, s)
        _discard(self._osp, o, s, p)
        self._digest ^= _triple_hash(triple)
        self.revision += 1
        return True

    def add_all(self, triples: Iterable[Triple]) -> set[Triple]:
        """Insert several triples, returning the ones that were new."""
        return {t for t in triples if self.add_triple(t)}

    # ------------------------------------------------------------------
    # Lookup
    # ------------------------------------------------------------------
    def triples(
        self,
        subject: Optional[URIRef] = None,
        predicate: Optional[URIRef] = None,
        obj: Optional[Node] = None,
    ) -> Iterator[Triple]:
        """Yield triples matching the given positions (None is a wildcard).

        The order is unspecified; callers needing determinism sort.
        """
        if subject is not None:
            by_pred = self._spo.get(subject)
            if not by_pred:
                return
            if predicate is not None:
                objects = by_pred.get(predicate, ())
                if obj is not None:
                    if obj in objects:
                        yield Triple(subject, predicate, obj)
                    return
                for o in list(objects):
                    yield Triple(subject, predicate, o)
                return
            if obj is not None:
                for p in list(self._osp.get(obj, {}).get(subject, ())):
                    yield Triple(subject, p, obj)
                return
            for p, objects in list(by_pred.items()):
                for o in list(objects):
                    yield Triple(subject, p, o)
            return
        if predicate is not None:
            by_obj = self._pos.get(predicate)
            if not by_obj:
                return
            if obj is not None:
                for s in list(by_obj.get(obj, ())):
                    yield Triple(s, predicate, obj)
                return
            for o, subjects in list(by_obj.items()):
                for s in list(subjects):
                    yield Triple(s, predicate, o)
            return
        if obj is not None:
            for s, preds in list(self._osp.get(obj, {}).items()):
                for p in list(preds):
                    yield Triple(s, p, obj)
            return
        yield from list(self._triples)

    def objects(self, subject: URIRef, predicate: URIRef) -> list[Node]:
        """Sorted objects of (subject, predicate)."""
        found = self._spo.get(subject, {}).get(predicate, ())
        return sorted(found, key=self.prefixes.render)

    def subjects(self, predicate: URIRef, obj: Node) -> list[URIRef]:
        """Sorted subjects of (predicate, obj)."""
        found = self._pos.get(predicate, {}).get(obj, ())
        return sorted(found, key=self.prefixes.render)

    def instances_of(self, cls: URIRef) -> list[URIRef]:
        """Sorted subjects asserted (or materialized) to be of ``cls``."""
        return self.subjects(TYPE, cls)

    def types_of(self, subject: URIRef) -> list[URIRef]:
        return self.objects(subject, TYPE)  # type: ignore[return-value]

    def predicates(self) -> list[URIRef]:
        return sorted(self._pos, key=self.prefixes.render_predicate)

    def terms(self) -> set[Node]:
        """Every term appearing in any position."""
        universe: set[Node] = set(self._spo)
        universe.update(self._pos)
        universe.update(self._osp)
        return universe

    # ------------------------------------------------------------------
    # Whole-store views
    # ------------------------------------------------------------------
    def sorted_triples(self) -> list[Triple]:
        """All triples in canonical order."""
        return sorted(self._triples, key=lambda t: triple_sort_key(t, self.prefixes))

    def digest(self) -> str:
        """Fixed-length, insertion-order independent content digest."""
        return f"{self._digest:0{_DIGEST_BITS // 4}x}"

    def copy(self) -> "TripleStore":
        """Clone the store; the clone shares no mutable state."""
        clone = TripleStore(self.prefixes)
        for triple in self._triples:
            clone.add_triple(triple)
        clone.revision = self.revision
        return clone

    def as_set(self) -> frozenset[Triple]:
        return frozenset(self._triples)

    def __len__(self) -> int:
        return len(self._triples)

    def __contains__(self, triple: object) -> bool:
        return triple in self._triples

    def __iter__(self) -> Iterator[Triple]:
        return iter(self.sorted_triples())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TripleStore):
            return NotImplemented
        return self._triples == other._triples

    def __repr__(self) -> str:
        return f"TripleStore(size={len(self)}, revision={self.revision})"


def _check_ground(triple: Union[Triple, tuple]) -> Triple:
    triple = Triple(*triple)
    for term in triple:
        if isinstance(term, Variable):
            raise VariableInData(
                f"variable ?{term} cannot be stored", subject=f"?{term}"
            )
    if not isinstance(triple.subject, URIRef) or not isinstance(triple.predicate, URIRef):
        raise TypeError("triple subject and predicate must be names")
    if not isinstance(triple.object, (URIRef, Literal)):
        raise TypeError("triple object must be a name or a literal")
    return triple


def _discard(index: dict, a, b, c) -> None:
    inner = index[a]
    leaf = inner[b]
    leaf.discard(c)
    if not leaf:
        del inner[b]
        if not inner:
            del index[a]
