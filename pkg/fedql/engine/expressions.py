#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Expressions

FILTER expression evaluation. Values are RDF terms; booleans and numbers
produced by operators are typed literals. Evaluation never raises: every
error is the TYPE_ERROR marker, which absorbs through every operator and
excludes the row when it reaches a FILTER.
"""

import re
from decimal import Decimal, DivisionByZero, InvalidOperation
from typing import Dict, Optional, Tuple, Union

from ..core.terms import (
    BlankNode,
    Iri,
    Literal,
    RDF_LANG_STRING,
    Term,
    XSD,
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_FLOAT,
    XSD_INTEGER,
    XSD_STRING,
)
from ..sparql.ast import And, Arith, Compare, FnCall, Not, Or, Variable


class _TypeErrorMarker:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "TYPE_ERROR"

    def __bool__(self) -> bool:
        return False


TYPE_ERROR = _TypeErrorMarker()

Value = Union[Iri, Literal, BlankNode, _TypeErrorMarker]

TRUE = Literal("true", XSD_BOOLEAN)
FALSE = Literal("false", XSD_BOOLEAN)

INTEGER_TYPES = {
    XSD_INTEGER,
    XSD + "int",
    XSD + "long",
    XSD + "short",
    XSD + "byte",
    XSD + "nonNegativeInteger",
    XSD + "positiveInteger",
    XSD + "nonPositiveInteger",
    XSD + "negativeInteger",
    XSD + "unsignedInt",
    XSD + "unsignedLong",
    XSD + "unsignedShort",
    XSD + "unsignedByte",
}
NUMERIC_TYPES = INTEGER_TYPES | {XSD_DECIMAL, XSD_DOUBLE, XSD_FLOAT}

# Promotion ranks: integer < decimal < double
_RANK_TYPE = {0: XSD_INTEGER, 1: XSD_DECIMAL, 2: XSD_DOUBLE}

Row = Dict[str, Term]


def _boolean(flag: bool) -> Literal:
    return TRUE if flag else FALSE


def is_numeric(term) -> bool:
    return isinstance(term, Literal) and term.datatype in NUMERIC_TYPES


def numeric_value(term: Literal) -> Optional[Tuple[Union[Decimal, float], int]]:
    """
    Numeric value and promotion rank of a literal.

    Returns:
        (value, rank) or None if the literal is not a valid number
    """
    if term.datatype in (XSD_DOUBLE, XSD_FLOAT):
        try:
            return float(term.lexical), 2
        except ValueError:
            return None
    try:
        value = Decimal(term.lexical.strip())
    except InvalidOperation:
        return None
    if not value.is_finite():
        return None
    if term.datatype in INTEGER_TYPES:
        if value != value.to_integral_value() or "." in term.lexical:
            return None
        return value, 0
    return value, 1


def _numeric_literal(value: Union[Decimal, float], rank: int) -> Literal:
    if rank == 2:
        return Literal(repr(float(value)), XSD_DOUBLE)
    if rank == 0:
        return Literal(str(int(value)), XSD_INTEGER)
    text = format(value.normalize(), "f") if value == value.to_integral_value() else format(value, "f")
    if "." not in text:
        text += ".0"
    return Literal(text, XSD_DECIMAL)


def _promote(a, b):
    """Bring two (value, rank) pairs to a common representation."""
    (va, ra), (vb, rb) = a, b
    rank = max(ra, rb)
    if rank == 2:
        return float(va), float(vb), rank
    return va, vb, rank


def is_string_like(term) -> bool:
    return isinstance(term, Literal) and term.datatype in (XSD_STRING, RDF_LANG_STRING)


def effective_boolean_value(value: Value):
    """
    Effective boolean value.

    Returns:
        True, False or TYPE_ERROR
    """
    if not isinstance(value, Literal):
        return TYPE_ERROR
    if value.datatype == XSD_BOOLEAN:
        if value.lexical in ("true", "1"):
            return True
        if value.lexical in ("false", "0"):
            return False
        return TYPE_ERROR
    if is_string_like(value):
        return len(value.lexical) > 0
    if value.datatype in NUMERIC_TYPES:
        number = numeric_value(value)
        if number is None:
            return False
        return number[0] != 0 and number[0] == number[0]
    return TYPE_ERROR


def _compare(op: str, left: Value, right: Value) -> Value:
    if left is TYPE_ERROR or right is TYPE_ERROR:
        return TYPE_ERROR

    if is_numeric(left) and is_numeric(right):
        a, b = numeric_value(left), numeric_value(right)
        if a is None or b is None:
            return TYPE_ERROR
        x, y, _ = _promote(a, b)
        return _boolean(_apply_order(op, x, y))

    if isinstance(left, Literal) and isinstance(right, Literal):
        if left.datatype == XSD_STRING and right.datatype == XSD_STRING:
            return _boolean(_apply_order(op, left.lexical, right.lexical))
        if left.datatype == XSD_BOOLEAN and right.datatype == XSD_BOOLEAN:
            a, b = effective_boolean_value(left), effective_boolean_value(right)
            if a is TYPE_ERROR or b is TYPE_ERROR:
                return TYPE_ERROR
            return _boolean(_apply_order(op, a, b))
        if (
            left.datatype == RDF_LANG_STRING
            and right.datatype == RDF_LANG_STRING
            and left.language.lower() == right.language.lower()
        ):
            return _boolean(_apply_order(op, left.lexical, right.lexical))

    if op == "=":
        return _boolean(left == right)
    if op == "!=":
        return _boolean(left != right)
    return TYPE_ERROR


def _apply_order(op: str, x, y) -> bool:
    if op == "=":
        return x == y
    if op == "!=":
        return x != y
    if op == "<":
        return x < y
    if op == "<=":
        return x <= y
    if op == ">":
        return x > y
    return x >= y


def _arith(op: str, left: Value, right: Value) -> Value:
    if not (is_numeric(left) and is_numeric(right)):
        return TYPE_ERROR
    a, b = numeric_value(left), numeric_value(right)
    if a is None or b is None:
        return TYPE_ERROR
    x, y, rank = _promote(a, b)
    try:
        if op == "+":
            result = x + y
        elif op == "-":
            result = x - y
        elif op == "*":
            result = x * y
        else:
            result = x / y
            rank = max(rank, 1)
    except (ZeroDivisionError, DivisionByZero, InvalidOperation):
        return TYPE_ERROR
    return _numeric_literal(result, rank)


_REGEX_CACHE: Dict[str, "re.Pattern"] = {}


def _regex(pattern: str) -> Optional["re.Pattern"]:
    compiled = _REGEX_CACHE.get(pattern)
    if compiled is None:
        try:
            compiled = re.compile(pattern)
        except re.error:
            return None
        _REGEX_CACHE[pattern] = compiled
    return compiled


def _call(call: FnCall, row: Row) -> Value:
    name = call.name

    if name == "BOUND":
        return _boolean(call.args[0].key in row)

    args = [eval_expression(arg, row) for arg in call.args]
    if any(arg is TYPE_ERROR for arg in args):
        return TYPE_ERROR
    first = args[0]

    if name == "STR":
        if isinstance(first, Iri):
            return Literal(first.value)
        if isinstance(first, Literal):
            return Literal(first.lexical)
        return TYPE_ERROR
    if name == "LANG":
        if isinstance(first, Literal):
            return Literal(first.language or "")
        return TYPE_ERROR
    if name == "DATATYPE":
        if isinstance(first, Literal):
            return Iri(first.datatype)
        return TYPE_ERROR
    if name in ("ISIRI", "ISURI"):
        return _boolean(isinstance(first, Iri))
    if name == "ISLITERAL":
        return _boolean(isinstance(first, Literal))

    second = args[1]
    if not (is_string_like(first) and is_string_like(second)):
        return TYPE_ERROR
    if name == "CONTAINS":
        return _boolean(second.lexical in first.lexical)
    if name == "STRSTARTS":
        return _boolean(first.lexical.startswith(second.lexical))
    if name == "REGEX":
        compiled = _regex(second.lexical)
        if compiled is None:
            return TYPE_ERROR
        return _boolean(compiled.search(first.lexical) is not None)
    return TYPE_ERROR


def eval_expression(expr, row: Row) -> Value:
    """
    Evaluate an expression against one binding.

    Args:
        expr: Expression tree
        row: Binding keyed by variable key

    Returns:
        Value: A term, or TYPE_ERROR
    """
    if isinstance(expr, Variable):
        return row.get(expr.key, TYPE_ERROR)
    if isinstance(expr, (Iri, Literal, BlankNode)):
        return expr

    if isinstance(expr, (And, Or)):
        left = effective_boolean_value(eval_expression(expr.left, row))
        right = effective_boolean_value(eval_expression(expr.right, row))
        if left is TYPE_ERROR or right is TYPE_ERROR:
            return TYPE_ERROR
        if isinstance(expr, And):
            return _boolean(left and right)
        return _boolean(left or right)
    if isinstance(expr, Not):
        value = effective_boolean_value(eval_expression(expr.operand, row))
        return TYPE_ERROR if value is TYPE_ERROR else _boolean(not value)
    if isinstance(expr, Compare):
        return _compare(expr.op, eval_expression(expr.left, row), eval_expression(expr.right, row))
    if isinstance(expr, Arith):
        return _arith(expr.op, eval_expression(expr.left, row), eval_expression(expr.right, row))
    if isinstance(expr, FnCall):
        return _call(expr, row)
    return TYPE_ERROR


def filter_passes(expr, row: Row) -> bool:
    """True iff the expression's effective boolean value is true."""
    return effective_boolean_value(eval_expression(expr, row)) is True
