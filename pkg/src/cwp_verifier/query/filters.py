"""FILTER expression evaluation.

Comparisons never coerce between literal tags. A comparison that cannot be
evaluated (mixed tags, or a name under an ordered operator) is false and
produces a ``TYPE_MISMATCH`` diagnostic instead of aborting the match.
"""

import logging
import operator
from typing import Mapping, Optional

from rdflib import Literal, URIRef, Variable

from cwp_verifier.errors import UnboundFilterVariable
from cwp_verifier.query.clock import Clock
from cwp_verifier.query.pattern import (
    And,
    Comparison,
    Diagnostic,
    FilterExpr,
    Not,
    NowExpr,
    Or,
    TermExpr,
)
from cwp_verifier.triples.store import Node
from cwp_verifier.triples.terms import LiteralTag, literal_tag, literal_value

logger = logging.getLogger(__name__)

TYPE_MISMATCH = "TYPE_MISMATCH"

_ORDERED = {
    "<": operator.lt,
    ">": operator.gt,
    "<=": operator.le,
    ">=": operator.ge,
}


def _value(expr: FilterExpr, binding: Mapping[Variable, Node], clock: Optional[Clock]) -> Node:
    if isinstance(expr, NowExpr):
        if clock is None:
            raise ValueError("now() used without a clock")
        return clock.now()
    if isinstance(expr, TermExpr):
        term = expr.term
        if isinstance(term, Variable):
            try:
                return binding[term]
            except KeyError:
                raise UnboundFilterVariable(
                    f"filter variable ?{term} is not bound", subject=f"?{term}"
                )
        return term
    raise TypeError(f"not a value expression: {expr!r}")


def _mismatch(diagnostics: Optional[list], message: str, **context) -> bool:
    logger.warning("type mismatch in filter: %s", message)
    if diagnostics is not None:
        diagnostics.append(Diagnostic(TYPE_MISMATCH, message, context))
    return False


def _compare(
    expr: Comparison,
    binding: Mapping[Variable, Node],
    clock: Optional[Clock],
    diagnostics: Optional[list],
) -> bool:
    left = _value(expr.left, binding, clock)
    right = _value(expr.right, binding, clock)
    if expr.op == "=":
        return left == right
    if expr.op == "!=":
        return left != right
    if isinstance(left, URIRef) or isinstance(right, URIRef):
        return _mismatch(
            diagnostics, f"name used with ordered operator {expr.op}", left=left, right=right
        )
    left_tag, right_tag = literal_tag(left), literal_tag(right)
    if left_tag is not right_tag:
        return _mismatch(
            diagnostics,
            f"cannot compare {left_tag.value} with {right_tag.value} using {expr.op}",
            left=left,
            right=right,
        )
    return _ORDERED[expr.op](literal_value(left), literal_value(right))


def eval_filter(
    expr: FilterExpr,
    binding: Mapping[Variable, Node],
    clock: Optional[Clock] = None,
    diagnostics: Optional[list] = None,
) -> bool:
    """Evaluate a filter expression under a binding.

    Args:
        expr: Filter expression tree
        binding: Values for every variable the expression uses
        clock: Source of ``now()``
        diagnostics: Optional list collecting TYPE_MISMATCH diagnostics

    Returns:
        The truth value of the expression

    Raises:
        UnboundFilterVariable: If a referenced variable is missing from ``binding``
    """
    if isinstance(expr, Comparison):
        return _compare(expr, binding, clock, diagnostics)
    if isinstance(expr, And):
        return eval_filter(expr.left, binding, clock, diagnostics) and eval_filter(
            expr.right, binding, clock, diagnostics
        )
    if isinstance(expr, Or):
        return eval_filter(expr.left, binding, clock, diagnostics) or eval_filter(
            expr.right, binding, clock, diagnostics
        )
    if isinstance(expr, Not):
        return not eval_filter(expr.operand, binding, clock, diagnostics)
    # Bare term: only a boolean literal has a truth value.
    value = _value(expr, binding, clock)
    if isinstance(value, Literal) and literal_tag(value) is LiteralTag.BOOLEAN:
        return bool(literal_value(value))
    return _mismatch(diagnostics, "non-boolean value used as a condition", value=value)
