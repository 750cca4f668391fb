"""
SPARQL language module.

Lexer, parser, AST and serializers for the supported SPARQL subset, and the
results JSON wire format.
"""

from .ast import QueryAst, Variable
from .parser import parse_query
from .serializer import serialize_query
from .results import (
    RESULTS_JSON,
    SolutionSequence,
    parse_select_results,
    serialize_select_results,
)

__all__ = [
    "QueryAst",
    "Variable",
    "parse_query",
    "serialize_query",
    "RESULTS_JSON",
    "SolutionSequence",
    "parse_select_results",
    "serialize_select_results",
]
