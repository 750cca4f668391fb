#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Evaluator

Evaluates query ASTs over a frozen Graph. Solution sequences are threaded
through a group's elements left to right; SERVICE elements are handed to a
caller-supplied executor, which is how the federator plugs in remote
dispatch while leaf endpoints reject SERVICE outright.
"""

import itertools
import logging
from collections import defaultdict
from decimal import Decimal
from typing import Callable, Dict, Iterable, List, Optional, Sequence

from .expressions import filter_passes, is_numeric, numeric_value
from ..core.graph import Graph, _maybe_triple
from ..core.terms import BlankNode, Iri, Literal, Term, XSD_INTEGER
from ..errors import ServiceNotAllowedInLeaf
from ..sparql.ast import (
    Ask,
    Construct,
    Filter,
    GroupPattern,
    OptionalGroup,
    QueryAst,
    Select,
    Service,
    TriplePattern,
    Triples,
    Values,
    Variable,
    group_variables,
)
from ..sparql.results import Row, SolutionSequence

logger = logging.getLogger(__name__)

# Called as svc(endpoint, body, incoming, silent=...)
ServiceExecutor = Callable[..., SolutionSequence]

# Not a legal variable name, so it can never clash with query variables.
ROW_ID = " row"


def failing_executor(endpoint: Iri, body: GroupPattern, incoming: SolutionSequence, silent: bool = False):
    """Executor for leaf endpoints: any SERVICE is an error."""
    raise ServiceNotAllowedInLeaf(endpoint.value)


def merge(a: Row, b: Row) -> Optional[Row]:
    """Compatible merge of two bindings, or None if they disagree."""
    if len(b) > len(a):
        a, b = b, a
    merged = None
    for key, value in b.items():
        current = a.get(key)
        if current is None:
            if merged is None:
                merged = dict(a)
            merged[key] = value
        elif current != value:
            return None
    return merged if merged is not None else dict(a)


def _merge_vars(*groups: Iterable[str]) -> List[str]:
    names: Dict[str, None] = {}
    for group in groups:
        for name in group:
            names[name] = None
    return list(names)


def _bound_count(pattern: TriplePattern, row: Row) -> int:
    return sum(1 for term in pattern if not isinstance(term, Variable) or term.key in row)


def _resolve(term, row: Row) -> Optional[Term]:
    if isinstance(term, Variable):
        return row.get(term.key)
    return term


def _extend(row: Row, pattern: TriplePattern, triple) -> Optional[Row]:
    extended = row
    for term, value in zip(pattern, triple):
        if not isinstance(term, Variable):
            continue
        current = extended.get(term.key)
        if current is None:
            if extended is row:
                extended = dict(row)
            extended[term.key] = value
        elif current != value:
            return None
    return extended


def _solve(graph: Graph, patterns: List[TriplePattern], row: Row, out: List[Row]) -> None:
    if not patterns:
        out.append(row)
        return

    # Most bound positions first; max() keeps the earliest on ties.
    best = max(range(len(patterns)), key=lambda i: (_bound_count(patterns[i], row), -i))
    pattern = patterns[best]
    rest = patterns[:best] + patterns[best + 1 :]

    s, p, o = (_resolve(term, row) for term in pattern)
    for triple in graph.match(s, p, o):
        extended = _extend(row, pattern, triple)
        if extended is not None:
            _solve(graph, rest, extended, out)


def eval_bgp(graph: Graph, patterns: Sequence[TriplePattern], seed: SolutionSequence) -> SolutionSequence:
    """
    Evaluate a basic graph pattern.

    Args:
        graph: Frozen graph
        patterns: Triple patterns, joined conjunctively
        seed: Rows to extend

    Returns:
        SolutionSequence: Every extension of a seed row matching all patterns
    """
    rows: List[Row] = []
    for row in seed.rows:
        _solve(graph, list(patterns), row, rows)

    new_vars = []
    for pattern in patterns:
        new_vars.extend(t.key for t in pattern if isinstance(t, Variable))
    return SolutionSequence(_merge_vars(seed.vars, new_vars), rows)


def _join_values(current: SolutionSequence, values: Values) -> SolutionSequence:
    table = []
    for cells in values.rows:
        table.append({var.key: cell for var, cell in zip(values.vars, cells) if cell is not None})

    rows = []
    for row in current.rows:
        for entry in table:
            merged = merge(row, entry)
            if merged is not None:
                rows.append(merged)
    return SolutionSequence(_merge_vars(current.vars, (v.key for v in values.vars)), rows)


def _left_join(graph: Graph, group: GroupPattern, current: SolutionSequence, svc) -> SolutionSequence:
    tagged = []
    for index, row in enumerate(current.rows):
        row = dict(row)
        row[ROW_ID] = Literal(str(index), XSD_INTEGER)
        tagged.append(row)

    inner = eval_group(graph, group, SolutionSequence(current.vars + [ROW_ID], tagged), svc)

    extensions: Dict[int, List[Row]] = defaultdict(list)
    for row in inner.rows:
        row = dict(row)
        index = int(row.pop(ROW_ID).lexical)
        extensions[index].append(row)

    rows = []
    for index, row in enumerate(current.rows):
        rows.extend(extensions.get(index) or [row])
    variables = [v for v in _merge_vars(current.vars, inner.vars) if v != ROW_ID]
    return SolutionSequence(variables, rows)


def eval_group(
    graph: Graph,
    group: GroupPattern,
    seed: SolutionSequence,
    svc: ServiceExecutor = failing_executor,
) -> SolutionSequence:
    """
    Evaluate a group pattern.

    Elements are evaluated left to right, each consuming the previous
    element's solutions. Filters apply to the solutions of the whole group.
    """
    current = seed
    filters = []

    for element in group.elements:
        if isinstance(element, Triples):
            current = eval_bgp(graph, element.patterns, current)
        elif isinstance(element, Filter):
            filters.append(element.expression)
        elif isinstance(element, OptionalGroup):
            current = _left_join(graph, element.group, current, svc)
        elif isinstance(element, Values):
            current = _join_values(current, element)
        elif isinstance(element, Service):
            current = svc(element.endpoint, element.body, current, silent=element.silent)

    if filters:
        rows = [row for row in current.rows if all(filter_passes(f, row) for f in filters)]
        current = SolutionSequence(current.vars, rows)
    return current


def order_key(term: Optional[Term]):
    """Total order: unbound < blank nodes < IRIs < literals, numbers by value."""
    if term is None:
        return (0,)
    if isinstance(term, BlankNode):
        return (1, term.label)
    if isinstance(term, Iri):
        return (2, term.value)
    if is_numeric(term):
        number = numeric_value(term)
        if number is not None and number[0] == number[0]:
            return (3, 0, Decimal(number[0]), term.lexical, term.datatype)
    return (3, 1, term.lexical, term.datatype, term.language or "")


def _modifiers(ast: QueryAst, rows: List[Row]) -> List[Row]:
    for condition in reversed(ast.order):
        key = condition.var.key
        rows.sort(key=lambda row: order_key(row.get(key)), reverse=not condition.ascending)
    return rows


def _slice(ast: QueryAst, rows: List[Row]) -> List[Row]:
    start = ast.offset or 0
    stop = None if ast.limit is None else start + ast.limit
    return rows[start:stop]


def projection(ast: QueryAst) -> List[str]:
    """Projected variable names of a SELECT query."""
    if isinstance(ast.kind, Select) and ast.kind.projection is not None:
        return [v.key for v in ast.kind.projection]
    return group_variables(ast.where)


def eval_select(graph: Graph, ast: QueryAst, svc: ServiceExecutor = failing_executor) -> SolutionSequence:
    """
    Evaluate a SELECT or ASK query.

    Args:
        graph: Frozen graph
        ast: Query with kind Select or Ask
        svc: SERVICE executor

    Returns:
        SolutionSequence: Projected rows, or the ASK answer
    """
    result = eval_group(graph, ast.where, SolutionSequence.unit(), svc)

    if isinstance(ast.kind, Ask):
        found = len(result.rows) > 0
        return SolutionSequence([], [{}] if found else [], boolean=found)
    if not isinstance(ast.kind, Select):
        raise ValueError("eval_select requires a SELECT or ASK query")

    rows = _modifiers(ast, list(result.rows))
    variables = projection(ast)
    projected = [{var: row[var] for var in variables if var in row} for row in rows]

    if ast.kind.distinct:
        seen = set()
        unique = []
        for row in projected:
            marker = frozenset(row.items())
            if marker not in seen:
                seen.add(marker)
                unique.append(row)
        projected = unique

    return SolutionSequence(variables, _slice(ast, projected))


def eval_construct(graph: Graph, ast: QueryAst, svc: ServiceExecutor = failing_executor) -> Graph:
    """
    Evaluate a CONSTRUCT query.

    Template blank nodes are renamed freshly for every solution; template
    instantiations with unbound variables or invalid positions are skipped.

    Returns:
        Graph: The constructed triples (not frozen)
    """
    if not isinstance(ast.kind, Construct):
        raise ValueError("eval_construct requires a CONSTRUCT query")

    result = eval_group(graph, ast.where, SolutionSequence.unit(), svc)
    rows = _slice(ast, _modifiers(ast, list(result.rows)))

    used = {term.label for row in rows for term in row.values() if isinstance(term, BlankNode)}
    counter = itertools.count()

    def fresh() -> BlankNode:
        while True:
            label = f"c{next(counter)}"
            if label not in used:
                return BlankNode(label)

    output = Graph()
    for row in rows:
        renamed: Dict[BlankNode, BlankNode] = {}
        for pattern in ast.kind.template:
            terms = []
            for term in pattern:
                if isinstance(term, BlankNode):
                    if term not in renamed:
                        renamed[term] = fresh()
                    terms.append(renamed[term])
                else:
                    terms.append(_resolve(term, row))
            if any(t is None for t in terms):
                continue
            triple = _maybe_triple(*terms)
            if triple is not None:
                output.insert(triple)
    return output
