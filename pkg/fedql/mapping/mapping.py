#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
CONSTRUCT mappings

A mapping turns the lifted form of one Web API response into
domain-ontology triples. It is a directory holding the CONSTRUCT query
(`mapping.rq`) and a JSON sidecar (`mapping.json`):

    {
        "base": "http://fedql.example/json#",
        "root": "http://fedql.example/doc/{identifiers}",
        "param_vars": {"species": "species"},
        "iri_keys": {"stringId_A": "http://fedql.example/string/protein/"}
    }

API call arguments reach the query as a single-row VALUES block binding
each param var to a plain string literal.
"""

import json
import logging
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Mapping, Optional
from urllib.parse import quote

from .lift import LiftConfig, lift_json
from ..core.graph import Graph
from ..core.terms import Literal
from ..engine.evaluator import eval_construct
from ..errors import MissingParam
from ..sparql.ast import Construct, GroupPattern, QueryAst, Values, Variable, iter_services
from ..sparql.parser import parse_query

logger = logging.getLogger(__name__)

QUERY_FILE = "mapping.rq"
SIDECAR_FILE = "mapping.json"

_PLACEHOLDER = re.compile(r"\{([A-Za-z_][A-Za-z0-9_]*)\}")


@dataclass
class MappingSpec:
    """
    One JSON-to-RDF mapping.

    Attributes:
        lift: Lifting parameters; lift.root may hold {param} placeholders
        construct: The CONSTRUCT query
        param_vars: API parameter name -> query variable name
        source: Directory the mapping was loaded from, if any
    """

    lift: LiftConfig
    construct: QueryAst
    param_vars: Dict[str, str] = field(default_factory=dict)
    source: Optional[str] = None

    def __post_init__(self):
        if not isinstance(self.construct.kind, Construct):
            raise ValueError("a mapping must be a CONSTRUCT query")
        for service in iter_services(self.construct.where):
            raise ValueError(f"a mapping may not contain SERVICE ({service.endpoint.value})")
        for name, var in self.param_vars.items():
            if not isinstance(name, str) or not isinstance(var, str) or not var:
                raise TypeError("param_vars must map parameter names to variable names")

    def __repr__(self) -> str:
        return f"MappingSpec(source={self.source!r}, base={self.lift.base!r}, params={sorted(self.param_vars)})"


def load_mapping_spec(directory) -> MappingSpec:
    """
    Load a mapping directory.

    Args:
        directory: Path holding mapping.rq and mapping.json

    Returns:
        MappingSpec: The validated mapping

    Raises:
        FileNotFoundError: If either file is missing
        QuerySyntaxError: If mapping.rq does not parse
    """
    path = Path(directory)
    query_file = path / QUERY_FILE
    sidecar_file = path / SIDECAR_FILE
    if not query_file.is_file():
        raise FileNotFoundError(f"mapping query not found: {query_file}")
    if not sidecar_file.is_file():
        raise FileNotFoundError(f"mapping sidecar not found: {sidecar_file}")

    sidecar = json.loads(sidecar_file.read_text(encoding="utf-8"))
    lift = LiftConfig(
        base=sidecar.get("base", ""),
        root=sidecar.get("root", ""),
        iri_keys=dict(sidecar.get("iri_keys", {})),
    )
    construct = parse_query(query_file.read_text(encoding="utf-8"))
    spec = MappingSpec(lift, construct, dict(sidecar.get("param_vars", {})), source=str(path))
    logger.debug("Loaded mapping %r", spec)
    return spec


def _with_params(spec: MappingSpec, params: Mapping[str, str]) -> QueryAst:
    if not spec.param_vars:
        return spec.construct

    for name in spec.param_vars:
        if name not in params:
            raise MissingParam(name)

    names = sorted(spec.param_vars)
    values = Values(
        vars=tuple(Variable(spec.param_vars[name]) for name in names),
        rows=(tuple(Literal(str(params[name])) for name in names),),
    )
    where = GroupPattern((values,) + spec.construct.where.elements)
    return replace(spec.construct, where=where)


def apply_mapping(lifted: Graph, spec: MappingSpec, params: Mapping[str, str]) -> Graph:
    """
    Run the mapping's CONSTRUCT over a lifted graph.

    Raises:
        MissingParam: If a parameter named in spec.param_vars is absent
    """
    query = _with_params(spec, params)
    if not lifted.frozen:
        lifted.freeze()
    return eval_construct(lifted, query)


def resolve_root(template: str, params: Mapping[str, str]) -> str:
    """Substitute {param} placeholders of a root IRI template."""

    def substitute(m: "re.Match") -> str:
        name = m.group(1)
        if name not in params:
            raise MissingParam(name)
        return quote(str(params[name]), safe="")

    return _PLACEHOLDER.sub(substitute, template)


def map_response(doc: Any, spec: MappingSpec, params: Mapping[str, str]) -> Graph:
    """
    Lift a Web API response and apply the mapping.

    Returns:
        Graph: The request-local fragment (frozen)
    """
    cfg = replace(spec.lift, root=resolve_root(spec.lift.root, params))
    fragment = apply_mapping(lift_json(doc, cfg), spec, params)
    return fragment.freeze()
