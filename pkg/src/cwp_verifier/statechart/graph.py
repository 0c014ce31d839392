"""State graph extraction from transition rules, and reachability."""

import logging
from dataclasses import dataclass
from typing import Iterable, Optional

import networkx as nx
from rdflib import Literal, URIRef, Variable

from cwp_verifier.errors import MalformedRule
from cwp_verifier.rules.model import TransitionRule
from cwp_verifier.schema.semantic import SemanticSchema
from cwp_verifier.statechart.machine import StateGraph, StateMachineDecl
from cwp_verifier.triples.terms import TYPE

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RuleTransition:
    """The state change one rule performs on its tracked object."""

    rule_id: str
    tracked: Variable
    source: str
    target: str
    type_guards: tuple[URIRef, ...]


def rule_transition(rule: TransitionRule, decl: StateMachineDecl) -> Optional[RuleTransition]:
    """Read the source and target state off a rule.

    Returns None for rules that never write the state property.

    Raises:
        MalformedRule: If the rule deletes or inserts other than exactly one
            state triple with a literal label
    """
    prop = decl.state_property
    deletes = [tp for tp in rule.delete.triple_patterns if tp.predicate == prop]
    inserts = [tp for tp in rule.insert.triple_patterns if tp.predicate == prop]
    if not deletes and not inserts:
        return None
    if len(deletes) != 1 or len(inserts) != 1:
        raise MalformedRule(
            f"rule {rule.id} must delete and insert exactly one state triple "
            f"(deletes {len(deletes)}, inserts {len(inserts)})",
            subject=rule.id,
        )
    deleted, inserted = deletes[0], inserts[0]
    if not isinstance(deleted.object, Literal) or not isinstance(inserted.object, Literal):
        raise MalformedRule(f"rule {rule.id} must use literal state labels", subject=rule.id)
    if deleted.subject != inserted.subject or not isinstance(inserted.subject, Variable):
        raise MalformedRule(
            f"rule {rule.id} must delete and insert the state of one object", subject=rule.id
        )
    tracked = inserted.subject
    guards = tuple(
        sorted(
            tp.object
            for tp in rule.where.triple_patterns
            if tp.subject == tracked and tp.predicate == TYPE and isinstance(tp.object, URIRef)
        )
    )
    return RuleTransition(rule.id, tracked, str(deleted.object), str(inserted.object), guards)


def analyzed_types(decl: StateMachineDecl, schema: SemanticSchema) -> list[URIRef]:
    if decl.types:
        return sorted(decl.types)
    return schema.concrete_subclasses(decl.subject_class)


def applies_to(transition: RuleTransition, type_: URIRef, schema: SemanticSchema) -> bool:
    return all(schema.is_subclass(type_, guard) for guard in transition.type_guards)


def extract_state_graph(
    rules: Iterable[TransitionRule],
    decl: StateMachineDecl,
    schema: SemanticSchema,
) -> StateGraph:
    """Build one state graph per analyzed type.

    Each rule contributes an edge (source -> target, keyed by rule id) to the
    graph of every type its ``?o a <Type>`` guards admit. Edges whose
    endpoints are not declared states are left out; cohesion reports them.
    """
    transitions = [t for t in (rule_transition(r, decl) for r in rules) if t is not None]
    declared = set(decl.states)
    graph = StateGraph()
    for type_ in analyzed_types(decl, schema):
        g = nx.MultiDiGraph()
        g.add_nodes_from(decl.states)
        for t in transitions:
            if t.source in declared and t.target in declared and applies_to(t, type_, schema):
                g.add_edge(t.source, t.target, key=t.rule_id)
        graph.graphs[type_] = g
        logger.debug("state graph for %s: %d edge(s)", type_, g.number_of_edges())
    return graph


def check_reachability(
    graph: StateGraph, decl: StateMachineDecl
) -> dict[URIRef, tuple[list[str], list[str]]]:
    """Breadth-first reachability from the initial state, per type.

    Returns:
        type -> (reachable labels, unreachable labels), each sorted
    """
    result = {}
    for type_ in graph.types():
        g = graph.graphs[type_]
        reachable = {decl.initial} | nx.descendants(g, decl.initial)
        result[type_] = (
            sorted(reachable),
            sorted(s for s in decl.states if s not in reachable),
        )
    return result
