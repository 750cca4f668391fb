#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Results

Solution sequences and the SPARQL results JSON format used on the wire
between the federator and its endpoints.
"""

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional

from ..core.terms import BlankNode, Iri, Literal, Term, XSD_STRING
from ..errors import MalformedResults

RESULTS_JSON = "application/sparql-results+json"

Row = Dict[str, Term]


@dataclass
class SolutionSequence:
    """
    An ordered multiset of bindings.

    Attributes:
        vars: Variable names in projection order
        rows: One dict per solution; unbound variables are absent
        boolean: The answer of an ASK query, None otherwise
    """

    vars: List[str] = field(default_factory=list)
    rows: List[Row] = field(default_factory=list)
    boolean: Optional[bool] = None

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self) -> Iterator[Row]:
        return iter(self.rows)

    def multiset(self) -> Counter:
        """Rows as a multiset, for order-insensitive comparison."""
        return Counter(frozenset(row.items()) for row in self.rows)

    @classmethod
    def unit(cls) -> "SolutionSequence":
        """The join identity: one empty row."""
        return cls([], [{}])


def encode_term(term: Term) -> dict:
    if isinstance(term, Iri):
        return {"type": "uri", "value": term.value}
    if isinstance(term, BlankNode):
        return {"type": "bnode", "value": term.label}
    encoded = {"type": "literal", "value": term.lexical}
    if term.language is not None:
        encoded["xml:lang"] = term.language
    elif term.datatype != XSD_STRING:
        encoded["datatype"] = term.datatype
    return encoded


def serialize_select_results(s: SolutionSequence) -> str:
    """
    Render a solution sequence as SPARQL results JSON.

    ASK answers (s.boolean set) use the {"head": {}, "boolean": ...} form.
    """
    if s.boolean is not None:
        doc = {"head": {}, "boolean": s.boolean}
    else:
        bindings = [{var: encode_term(row[var]) for var in s.vars if var in row} for row in s.rows]
        doc = {"head": {"vars": list(s.vars)}, "results": {"bindings": bindings}}
    return json.dumps(doc, separators=(",", ":"), ensure_ascii=False)


def _blank_label(value: str, scope: Optional[str]) -> str:
    label = value if value.isalnum() and value.isascii() else "x" + value.encode("utf-8").hex()
    return f"{scope}{label}" if scope else label


def decode_term(obj, scope: Optional[str] = None) -> Term:
    """
    Decode one term object.

    Raises:
        MalformedResults: If the object is not a valid term encoding
    """
    if not isinstance(obj, dict):
        raise MalformedResults(f"term must be an object, got {type(obj).__name__}")
    kind = obj.get("type")
    value = obj.get("value")
    if not isinstance(value, str):
        raise MalformedResults("term value must be a string")

    try:
        if kind == "uri":
            return Iri(value)
        if kind == "bnode":
            return BlankNode(_blank_label(value, scope))
        if kind in ("literal", "typed-literal"):
            if "xml:lang" in obj:
                return Literal(value, language=obj["xml:lang"])
            return Literal(value, obj.get("datatype", XSD_STRING))
    except (ValueError, TypeError) as e:
        raise MalformedResults(f"bad {kind} term: {e}")
    raise MalformedResults(f"unknown term type: {kind!r}")


def parse_select_results(text, scope: Optional[str] = None) -> SolutionSequence:
    """
    Parse SPARQL results JSON.

    Args:
        text: JSON text (str or bytes)
        scope: Optional alphanumeric prefix applied to blank node labels so
            that blank nodes from different responses never coincide

    Returns:
        SolutionSequence: The decoded rows, or an ASK answer

    Raises:
        MalformedResults: On invalid JSON or structure
    """
    try:
        doc = json.loads(text)
    except ValueError as e:
        raise MalformedResults(f"invalid JSON: {e}")

    if not isinstance(doc, dict) or not isinstance(doc.get("head"), dict):
        raise MalformedResults("missing head")

    if "boolean" in doc:
        if not isinstance(doc["boolean"], bool):
            raise MalformedResults("boolean must be true or false")
        return SolutionSequence([], [{}] if doc["boolean"] else [], boolean=doc["boolean"])

    variables = doc["head"].get("vars", [])
    if not isinstance(variables, list) or not all(isinstance(v, str) for v in variables):
        raise MalformedResults("head.vars must be a list of names")

    results = doc.get("results")
    if not isinstance(results, dict) or not isinstance(results.get("bindings"), list):
        raise MalformedResults("missing results.bindings")

    known = set(variables)
    rows: List[Row] = []
    for binding in results["bindings"]:
        if not isinstance(binding, dict):
            raise MalformedResults("binding must be an object")
        row = {}
        for var, obj in binding.items():
            if var not in known:
                raise MalformedResults(f"variable {var!r} is not declared in head.vars")
            row[var] = decode_term(obj, scope)
        rows.append(row)
    return SolutionSequence(list(variables), rows)
