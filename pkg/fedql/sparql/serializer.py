#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Query serializer

Renders a QueryAst back to query text. Every term is written in full IRI
form, expressions are fully parenthesized, and the output parses back to
a structurally equal AST.
"""

from typing import List

from .ast import (
    And,
    Arith,
    Ask,
    Compare,
    Construct,
    FnCall,
    Filter,
    GroupPattern,
    Not,
    OptionalGroup,
    Or,
    QueryAst,
    Select,
    Service,
    TriplePattern,
    Triples,
    Values,
    Variable,
)
from ..core.ntriples import format_term
from ..core.terms import Iri

_INDENT = "  "


def _term(term) -> str:
    if isinstance(term, Variable):
        return str(term)
    return format_term(term)


def serialize_expression(expr) -> str:
    if isinstance(expr, Or):
        return f"({serialize_expression(expr.left)} || {serialize_expression(expr.right)})"
    if isinstance(expr, And):
        return f"({serialize_expression(expr.left)} && {serialize_expression(expr.right)})"
    if isinstance(expr, Not):
        return f"(!{serialize_expression(expr.operand)})"
    if isinstance(expr, (Compare, Arith)):
        return f"({serialize_expression(expr.left)} {expr.op} {serialize_expression(expr.right)})"
    if isinstance(expr, FnCall):
        return f"{expr.name}({', '.join(serialize_expression(a) for a in expr.args)})"
    return _term(expr)


def _pattern(pattern: TriplePattern) -> str:
    return f"{_term(pattern.subject)} {_term(pattern.predicate)} {_term(pattern.object)} ."


def serialize_values(values: Values, depth: int = 1) -> List[str]:
    pad = _INDENT * depth
    header = " ".join(str(v) for v in values.vars)
    lines = [f"{pad}VALUES ({header}) {{"]
    for row in values.rows:
        cells = " ".join("UNDEF" if cell is None else format_term(cell) for cell in row)
        lines.append(f"{pad}{_INDENT}({cells})")
    lines.append(f"{pad}}}")
    return lines


def serialize_group(group: GroupPattern, depth: int = 0) -> List[str]:
    """Render a group as lines, braces included."""
    pad = _INDENT * depth
    inner = _INDENT * (depth + 1)
    lines = [f"{pad}{{"]

    for element in group.elements:
        if isinstance(element, Triples):
            lines.extend(inner + _pattern(p) for p in element.patterns)
        elif isinstance(element, Filter):
            lines.append(f"{inner}FILTER({serialize_expression(element.expression)})")
        elif isinstance(element, OptionalGroup):
            body = serialize_group(element.group, depth + 1)
            lines.append(f"{inner}OPTIONAL {body[0].strip()}")
            lines.extend(body[1:])
        elif isinstance(element, Service):
            keyword = "SERVICE SILENT" if element.silent else "SERVICE"
            body = serialize_group(element.body, depth + 1)
            lines.append(f"{inner}{keyword} {format_term(element.endpoint)} {body[0].strip()}")
            lines.extend(body[1:])
        elif isinstance(element, Values):
            lines.extend(serialize_values(element, depth + 1))

    lines.append(f"{pad}}}")
    return lines


def serialize_query(ast: QueryAst) -> str:
    """
    Render a query.

    Args:
        ast: A valid QueryAst

    Returns:
        str: Query text that parses back to an equal AST
    """
    lines = [f"PREFIX {name}: {format_term(Iri(iri))}" for name, iri in ast.prefixes.items()]

    kind = ast.kind
    if isinstance(kind, Select):
        head = "SELECT DISTINCT" if kind.distinct else "SELECT"
        projection = "*" if kind.projection is None else " ".join(str(v) for v in kind.projection)
        lines.append(f"{head} {projection} WHERE")
    elif isinstance(kind, Construct):
        lines.append("CONSTRUCT {")
        lines.extend(_INDENT + _pattern(p) for p in kind.template)
        lines.append("} WHERE")
    elif isinstance(kind, Ask):
        lines.append("ASK WHERE")

    lines.extend(serialize_group(ast.where))

    if ast.order:
        conditions = " ".join(f"{'ASC' if c.ascending else 'DESC'}({c.var})" for c in ast.order)
        lines.append(f"ORDER BY {conditions}")
    if ast.limit is not None:
        lines.append(f"LIMIT {ast.limit}")
    if ast.offset is not None:
        lines.append(f"OFFSET {ast.offset}")
    return "\n".join(lines) + "\n"
