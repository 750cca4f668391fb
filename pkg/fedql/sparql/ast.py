#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Query AST

Immutable syntax tree for the supported SPARQL subset. Prefixed names are
expanded by the parser, so every IRI in the tree is absolute.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple, Union

from ..core.terms import BlankNode, Iri, Literal, Term


@dataclass(frozen=True)
class Variable:
    """
    A query variable.

    Anonymous variables come from blank nodes written in query patterns;
    they join like variables but are never projected by SELECT *.
    """

    name: str
    anonymous: bool = False

    @property
    def key(self) -> str:
        """Binding key; anonymous variables never collide with named ones."""
        return f"_:{self.name}" if self.anonymous else self.name

    def __str__(self) -> str:
        return f"_:{self.name}" if self.anonymous else f"?{self.name}"


PatternTerm = Union[Iri, Literal, BlankNode, Variable]


@dataclass(frozen=True)
class TriplePattern:
    subject: PatternTerm
    predicate: PatternTerm
    object: PatternTerm

    def __iter__(self):
        return iter((self.subject, self.predicate, self.object))


# Expressions


@dataclass(frozen=True)
class Or:
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class And:
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Not:
    operand: "Expression"


@dataclass(frozen=True)
class Compare:
    op: str  # one of = != < <= > >=
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Arith:
    op: str  # one of + - * /
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class FnCall:
    name: str  # upper case, e.g. BOUND, STR, REGEX, ISIRI
    args: Tuple["Expression", ...]


Expression = Union[Or, And, Not, Compare, Arith, FnCall, Iri, Literal, Variable]

FUNCTION_ARITY = {
    "BOUND": 1,
    "STR": 1,
    "LANG": 1,
    "DATATYPE": 1,
    "CONTAINS": 2,
    "STRSTARTS": 2,
    "REGEX": 2,
    "ISIRI": 1,
    "ISURI": 1,
    "ISLITERAL": 1,
}

# Group elements


@dataclass(frozen=True)
class Triples:
    patterns: Tuple[TriplePattern, ...]


@dataclass(frozen=True)
class Filter:
    expression: Expression


@dataclass(frozen=True)
class OptionalGroup:
    group: "GroupPattern"


@dataclass(frozen=True)
class Service:
    endpoint: Iri
    silent: bool
    body: "GroupPattern"


@dataclass(frozen=True)
class Values:
    vars: Tuple[Variable, ...]
    rows: Tuple[Tuple[Optional[Term], ...], ...]  # None is UNDEF


Element = Union[Triples, Filter, OptionalGroup, Service, Values]


@dataclass(frozen=True)
class GroupPattern:
    elements: Tuple[Element, ...] = ()


# Query forms


@dataclass(frozen=True)
class Select:
    distinct: bool = False
    projection: Optional[Tuple[Variable, ...]] = None  # None is SELECT *


@dataclass(frozen=True)
class Construct:
    template: Tuple[TriplePattern, ...] = ()


@dataclass(frozen=True)
class Ask:
    pass


@dataclass(frozen=True)
class OrderCondition:
    var: Variable
    ascending: bool = True


@dataclass(frozen=True)
class QueryAst:
    kind: Union[Select, Construct, Ask]
    where: GroupPattern
    prefixes: Dict[str, str] = field(default_factory=dict)
    order: Tuple[OrderCondition, ...] = ()
    limit: Optional[int] = None
    offset: Optional[int] = None
    warnings: Tuple[str, ...] = field(default=(), compare=False)


def iter_elements(group: GroupPattern) -> Iterator[Element]:
    """All elements of a group, depth first, including nested groups."""
    for element in group.elements:
        yield element
        if isinstance(element, OptionalGroup):
            yield from iter_elements(element.group)
        elif isinstance(element, Service):
            yield from iter_elements(element.body)


def iter_services(group: GroupPattern) -> Iterator[Service]:
    for element in iter_elements(group):
        if isinstance(element, Service):
            yield element


def expression_variables(expr: Expression) -> List[Variable]:
    if isinstance(expr, Variable):
        return [expr]
    if isinstance(expr, (Or, And, Compare, Arith)):
        return expression_variables(expr.left) + expression_variables(expr.right)
    if isinstance(expr, Not):
        return expression_variables(expr.operand)
    if isinstance(expr, FnCall):
        found: List[Variable] = []
        for arg in expr.args:
            found.extend(expression_variables(arg))
        return found
    return []


def group_variables(group: GroupPattern, include_anonymous: bool = False) -> List[str]:
    """
    Binding keys of the variables a group can bind, in order of first
    appearance. Variables that only occur inside FILTER expressions are not
    included.
    """
    names: Dict[str, None] = {}

    def note(term) -> None:
        if isinstance(term, Variable) and (include_anonymous or not term.anonymous):
            names[term.key] = None

    for element in iter_elements(group):
        if isinstance(element, Triples):
            for pattern in element.patterns:
                for term in pattern:
                    note(term)
        elif isinstance(element, Values):
            for var in element.vars:
                note(var)
    return list(names)
