#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Terms

RDF terms and triples. Terms are immutable and compare structurally:
two literals are equal only if lexical form, datatype and language tag
are all identical.
"""

import re
from dataclasses import dataclass
from typing import Optional, Union

from ..errors import MalformedTriple

XSD = "http://www.w3.org/2001/XMLSchema#"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"

XSD_STRING = XSD + "string"
XSD_INTEGER = XSD + "integer"
XSD_DECIMAL = XSD + "decimal"
XSD_DOUBLE = XSD + "double"
XSD_FLOAT = XSD + "float"
XSD_BOOLEAN = XSD + "boolean"
RDF_LANG_STRING = RDF + "langString"
RDF_TYPE = RDF + "type"

_IRI_FORBIDDEN = re.compile(r"[\s<>]")
_BLANK_LABEL = re.compile(r"^[A-Za-z0-9]+$")
_LANG_TAG = re.compile(r"^[A-Za-z]+(-[A-Za-z0-9]+)*$")


@dataclass(frozen=True)
class Iri:
    """An absolute IRI."""

    value: str

    def __post_init__(self):
        if not self.value or _IRI_FORBIDDEN.search(self.value):
            raise ValueError(f"invalid IRI: {self.value!r}")

    def __str__(self) -> str:
        return f"<{self.value}>"


@dataclass(frozen=True)
class Literal:
    """
    An RDF literal.

    The datatype is always present; it defaults to xsd:string, and is
    rdf:langString exactly when a language tag is given.
    """

    lexical: str
    datatype: str = XSD_STRING
    language: Optional[str] = None

    def __post_init__(self):
        if self.language is not None:
            if not _LANG_TAG.match(self.language):
                raise ValueError(f"invalid language tag: {self.language!r}")
            if self.datatype == XSD_STRING:
                object.__setattr__(self, "datatype", RDF_LANG_STRING)
            elif self.datatype != RDF_LANG_STRING:
                raise ValueError("a language-tagged literal must have datatype rdf:langString")
        elif self.datatype == RDF_LANG_STRING:
            raise ValueError("rdf:langString literal requires a language tag")

    def __str__(self) -> str:
        from .ntriples import format_term

        return format_term(self)


@dataclass(frozen=True)
class BlankNode:
    """A blank node, identified by its label within one graph or document."""

    label: str

    def __post_init__(self):
        if not _BLANK_LABEL.match(self.label):
            raise ValueError(f"invalid blank node label: {self.label!r}")

    def __str__(self) -> str:
        return f"_:{self.label}"


Term = Union[Iri, Literal, BlankNode]


@dataclass(frozen=True)
class Triple:
    """A subject/predicate/object statement."""

    subject: Term
    predicate: Term
    object: Term

    def __post_init__(self):
        if not isinstance(self.subject, (Iri, BlankNode)):
            raise MalformedTriple(f"subject must be an IRI or blank node: {self.subject!r}")
        if not isinstance(self.predicate, Iri):
            raise MalformedTriple(f"predicate must be an IRI: {self.predicate!r}")
        if not isinstance(self.object, (Iri, Literal, BlankNode)):
            raise MalformedTriple(f"object must be an RDF term: {self.object!r}")

    def __iter__(self):
        return iter((self.subject, self.predicate, self.object))


def is_term(value) -> bool:
    return isinstance(value, (Iri, Literal, BlankNode))


def string_literal(value: str) -> Literal:
    return Literal(value, XSD_STRING)


def typed_literal(value: str, datatype: str) -> Literal:
    return Literal(value, datatype)
