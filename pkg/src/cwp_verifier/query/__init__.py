"""Restricted graph-pattern language: BGPs, FILTER, EXISTS, ASK and CONSTRUCT."""

from cwp_verifier.query.clock import Clock
from cwp_verifier.query.filters import TYPE_MISMATCH, eval_filter
from cwp_verifier.query.matcher import binding_text, eval_ask, eval_construct, match
from cwp_verifier.query.pattern import (
    THIS,
    And,
    Binding,
    Comparison,
    ConstructTemplate,
    Diagnostic,
    FilterExpr,
    GraphPattern,
    Group,
    GroupKind,
    Not,
    NowExpr,
    Or,
    TermExpr,
    TriplePattern,
)

__all__ = [
    "THIS",
    "TYPE_MISMATCH",
    "And",
    "Binding",
    "Clock",
    "Comparison",
    "ConstructTemplate",
    "Diagnostic",
    "FilterExpr",
    "GraphPattern",
    "Group",
    "GroupKind",
    "Not",
    "NowExpr",
    "Or",
    "TermExpr",
    "TriplePattern",
    "binding_text",
    "eval_ask",
    "eval_construct",
    "eval_filter",
    "match",
]
