#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
N-Triples

Line-oriented parser and canonical serializer for the N-Triples subset
used by fixtures and CONSTRUCT responses: IRIs, blank nodes, plain,
typed and language-tagged literals.
"""

import re
from typing import Dict, List

from .graph import Graph
from .terms import BlankNode, Iri, Literal, Term, Triple, XSD_STRING, RDF_LANG_STRING
from ..errors import MalformedTriple, NTriplesSyntaxError

_UCHAR = r"\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8}"
_IRI = r"<((?:[^<>\"{}|^`\\\x00-\x20]|" + _UCHAR + r")*)>"
_BNODE = r"_:([A-Za-z0-9_](?:[A-Za-z0-9_.-]*[A-Za-z0-9_-])?)"
_LITERAL = (
    r"\"((?:[^\"\\\n\r]|\\[tbnrf\"'\\]|" + _UCHAR + r")*)\""
    r"(?:@([A-Za-z]+(?:-[A-Za-z0-9]+)*)|\^\^" + _IRI + r")?"
)

_SUBJECT = re.compile(r"\s*(?:" + _IRI + "|" + _BNODE + ")")
_PREDICATE = re.compile(r"\s*" + _IRI)
_OBJECT = re.compile(r"\s*(?:" + _IRI + "|" + _BNODE + "|" + _LITERAL + ")")
_END = re.compile(r"\s*\.\s*(?:#.*)?$")

_ESCAPES = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}
_ESCAPE_SEQ = re.compile(r"\\(?:([tbnrf\"'\\])|u([0-9A-Fa-f]{4})|U([0-9A-Fa-f]{8}))")
_ALNUM = re.compile(r"^[A-Za-z0-9]+$")


def _unescape(text: str) -> str:
    def replace(m: "re.Match") -> str:
        if m.group(1):
            return _ESCAPES[m.group(1)]
        return chr(int(m.group(2) or m.group(3), 16))

    return _ESCAPE_SEQ.sub(replace, text)


def _blank(label: str, labels: Dict[str, BlankNode]) -> BlankNode:
    if label not in labels:
        if _ALNUM.match(label):
            labels[label] = BlankNode(label)
        else:
            labels[label] = BlankNode("x" + label.encode("utf-8").hex())
    return labels[label]


def parse_ntriples(text: str) -> Graph:
    """
    Parse an N-Triples document.

    Parsing is all-or-nothing: the graph is only built once every line has
    been read successfully.

    Args:
        text: N-Triples document

    Returns:
        Graph: Mutable graph holding the parsed triples

    Raises:
        NTriplesSyntaxError: On the first malformed line
    """
    labels: Dict[str, BlankNode] = {}
    triples: List[Triple] = []

    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue

        m = _SUBJECT.match(line)
        if not m:
            raise NTriplesSyntaxError(line_no, "expected IRI or blank node as subject")
        try:
            subject: Term = (
                Iri(_unescape(m.group(1))) if m.group(1) is not None else _blank(m.group(2), labels)
            )
        except ValueError as e:
            raise NTriplesSyntaxError(line_no, str(e))
        pos = m.end()

        m = _PREDICATE.match(line, pos)
        if not m:
            raise NTriplesSyntaxError(line_no, "expected IRI as predicate")
        try:
            predicate = Iri(_unescape(m.group(1)))
        except ValueError as e:
            raise NTriplesSyntaxError(line_no, str(e))
        pos = m.end()

        m = _OBJECT.match(line, pos)
        if not m:
            raise NTriplesSyntaxError(line_no, "expected IRI, blank node or literal as object")
        iri, bnode, lexical, lang, datatype = m.groups()
        try:
            if iri is not None:
                obj: Term = Iri(_unescape(iri))
            elif bnode is not None:
                obj = _blank(bnode, labels)
            elif lang is not None:
                obj = Literal(_unescape(lexical), RDF_LANG_STRING, lang)
            else:
                obj = Literal(_unescape(lexical), _unescape(datatype) if datatype else XSD_STRING)
        except ValueError as e:
            raise NTriplesSyntaxError(line_no, str(e))
        pos = m.end()

        if not _END.match(line, pos):
            raise NTriplesSyntaxError(line_no, "expected '.' at end of statement")

        try:
            triples.append(Triple(subject, predicate, obj))
        except MalformedTriple as e:
            raise NTriplesSyntaxError(line_no, str(e))

    return Graph(triples)


def _escape_literal(text: str) -> str:
    out = []
    for ch in text:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        elif ord(ch) < 0x20 or ord(ch) == 0x7F:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def _escape_iri(value: str) -> str:
    return "".join(f"\\u{ord(ch):04X}" if ch in '"{}|^`\\' else ch for ch in value)


def format_term(term: Term) -> str:
    """Render a term in N-Triples syntax."""
    if isinstance(term, Iri):
        return f"<{_escape_iri(term.value)}>"
    if isinstance(term, BlankNode):
        return f"_:{term.label}"
    text = f'"{_escape_literal(term.lexical)}"'
    if term.language is not None:
        return f"{text}@{term.language}"
    if term.datatype != XSD_STRING:
        return f"{text}^^<{_escape_iri(term.datatype)}>"
    return text


def serialize_ntriples(graph: Graph) -> str:
    """
    Serialize a graph deterministically.

    Triples are sorted by the N-Triples forms of (subject, predicate,
    object) and blank nodes are renumbered _:b0, _:b1, ... in order of first
    appearance in the sorted stream.
    """
    rows = sorted(
        (format_term(t.subject), format_term(t.predicate), format_term(t.object), t) for t in graph
    )

    renumbered: Dict[BlankNode, str] = {}

    def render(term: Term) -> str:
        if isinstance(term, BlankNode):
            if term not in renumbered:
                renumbered[term] = f"_:b{len(renumbered)}"
            return renumbered[term]
        return format_term(term)

    lines = []
    for _, _, _, t in rows:
        lines.append(f"{render(t.subject)} {render(t.predicate)} {render(t.object)} .\n")
    return "".join(lines)
