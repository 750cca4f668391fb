#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
JSON lifting

Schema-agnostic translation of a JSON document into RDF:

- the root object or array is the node cfg.root, every other object or
  array is a fresh blank node;
- an object key k holding v gives (node, base+k, lift(v));
- an array under key k gives one base+k triple per element, and object or
  array elements also carry (element, base+"_index", i);
- elements of a root array, or of an array nested in an array, hang off
  their container with the reserved predicate base+"_item";
- strings, numbers and booleans become typed literals, null is dropped.

Scalars under a key listed in cfg.iri_keys become IRIs instead of
literals, so mappings can mint domain IRIs by plain pattern matching.
"""

import json
import re
from dataclasses import dataclass, field
from typing import Any, Dict
from urllib.parse import quote

from ..core.graph import Graph
from ..core.terms import (
    BlankNode,
    Iri,
    Literal,
    Term,
    Triple,
    XSD_BOOLEAN,
    XSD_DOUBLE,
    XSD_INTEGER,
)

ITEM = "_item"
INDEX = "_index"

_INTEGRAL = re.compile(r"^-?[0-9]+$")


class RawNumber(str):
    """A JSON number kept in its exact lexical form."""


def load_json_text(text) -> Any:
    """
    Parse JSON keeping every number as a RawNumber.

    Raises:
        ValueError: If the text is not valid JSON
    """
    return json.loads(text, parse_int=RawNumber, parse_float=RawNumber, parse_constant=RawNumber)


@dataclass
class LiftConfig:
    """
    Lifting parameters.

    Attributes:
        base: IRI prefix of generated predicates, ending in '#' or '/'
        root: IRI of the document root node
        iri_keys: Keys whose scalar values become IRIs, mapped to the IRI prefix
    """

    base: str
    root: str
    iri_keys: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not isinstance(self.base, str) or not self.base.endswith(("#", "/")):
            raise ValueError(f"base must end with '#' or '/': {self.base!r}")
        Iri(self.base)
        if not isinstance(self.root, str) or not self.root:
            raise ValueError("root must be a non-empty IRI")
        if not isinstance(self.iri_keys, dict):
            raise TypeError("iri_keys must be a mapping of key to IRI prefix")


def _scalar_text(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _literal(value) -> Literal:
    if isinstance(value, bool):
        return Literal(_scalar_text(value), XSD_BOOLEAN)
    if isinstance(value, RawNumber):
        return Literal(str(value), XSD_INTEGER if _INTEGRAL.match(value) else XSD_DOUBLE)
    if isinstance(value, int):
        return Literal(str(value), XSD_INTEGER)
    if isinstance(value, float):
        return Literal(repr(value), XSD_DOUBLE)
    return Literal(str(value))


class _Lifter:
    def __init__(self, cfg: LiftConfig):
        self.cfg = cfg
        self.graph = Graph()
        self.blanks = 0

    def fresh(self) -> BlankNode:
        node = BlankNode(f"b{self.blanks}")
        self.blanks += 1
        return node

    def predicate(self, key: str) -> Iri:
        return Iri(self.cfg.base + quote(key, safe=""))

    def scalar(self, value, key) -> Term:
        prefix = self.cfg.iri_keys.get(key) if key is not None else None
        if prefix is not None:
            return Iri(prefix + quote(_scalar_text(value), safe=""))
        return _literal(value)

    def add(self, s, p, o) -> None:
        self.graph.insert(Triple(s, p, o))

    def container(self, node, value) -> None:
        if isinstance(value, dict):
            for key, child in value.items():
                self.attach(node, self.predicate(key), child, key)
        else:
            item = self.predicate(ITEM)
            for index, element in enumerate(value):
                self.element(node, item, element, index, None)

    def attach(self, node, predicate: Iri, value, key) -> None:
        if value is None:
            return
        if isinstance(value, list):
            for index, element in enumerate(value):
                self.element(node, predicate, element, index, key)
        elif isinstance(value, dict):
            child = self.fresh()
            self.add(node, predicate, child)
            self.container(child, value)
        else:
            self.add(node, predicate, self.scalar(value, key))

    def element(self, node, predicate: Iri, value, index: int, key) -> None:
        if value is None:
            return
        if isinstance(value, (dict, list)):
            child = self.fresh()
            self.add(node, predicate, child)
            self.add(child, self.predicate(INDEX), Literal(str(index), XSD_INTEGER))
            self.container(child, value)
        else:
            self.add(node, predicate, self.scalar(value, key))


def lift_json(doc: Any, cfg: LiftConfig) -> Graph:
    """
    Lift a parsed JSON document to RDF.

    Args:
        doc: Parsed JSON (ideally from load_json_text, to keep number lexical forms)
        cfg: Lifting parameters

    Returns:
        Graph: The lifted graph; empty for null, scalar or empty documents
    """
    lifter = _Lifter(cfg)
    if isinstance(doc, (dict, list)):
        lifter.container(Iri(cfg.root), doc)
    return lifter.graph
