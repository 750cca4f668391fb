"""
Core RDF module.

This module contains the RDF data model, the indexed in-memory triple
store and N-Triples reading and writing.
"""

from .terms import (
    BlankNode,
    Iri,
    Literal,
    Term,
    Triple,
    RDF_TYPE,
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_INTEGER,
    XSD_STRING,
)
from .graph import Graph, insert, match, union
from .ntriples import format_term, parse_ntriples, serialize_ntriples

__all__ = [
    "BlankNode",
    "Iri",
    "Literal",
    "Term",
    "Triple",
    "RDF_TYPE",
    "XSD_BOOLEAN",
    "XSD_DECIMAL",
    "XSD_DOUBLE",
    "XSD_INTEGER",
    "XSD_STRING",
    "Graph",
    "insert",
    "match",
    "union",
    "format_term",
    "parse_ntriples",
    "serialize_ntriples",
]
