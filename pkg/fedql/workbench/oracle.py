#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Centralized evaluation

Answers a federated query without the federation: every source graph the
query's SERVICE endpoints would expose is materialized, the graphs are
unioned, and the query with its SERVICE frames erased is evaluated
locally. A federated answer must equal this one as a multiset.
"""

import logging
from typing import Dict, Iterable
from urllib.parse import parse_qsl, urlsplit

from .mock_api import lookup
from .runner import MOCK_SCHEME
from .vocabulary import LOGICAL_BASE, SRV_BASE
from ..core.graph import Graph, union
from ..engine.evaluator import eval_construct, eval_select
from ..mapping.lift import load_json_text
from ..mapping.mapping import load_mapping_spec, map_response
from ..sparql.ast import Construct, QueryAst, iter_services
from ..utils.config import DeploymentConfig, ServiceConfig
from ..web.federator import strip_services
from ..web.microservice import build_url, extract_args, invoke_api
from ..web.native import load_graph

logger = logging.getLogger(__name__)


def _service_fragment(deployment: DeploymentConfig, cfg: ServiceConfig, args: Dict[str, str]) -> Graph:
    args = extract_args(cfg, args)
    template = cfg.api_url_template
    if template.startswith(MOCK_SCHEME):
        name, _, rest = template[len(MOCK_SCHEME):].partition("/")
        mock = next(m for m in deployment.mock_apis if m.name == name)
        path = urlsplit("http://mock/" + rest).path
        function = path.rstrip("/").rsplit("/", 1)[-1]
        query = dict(parse_qsl(urlsplit(build_url(cfg, args)).query))
        doc = load_json_text(lookup(mock.fixture_dir, function, query).decode("utf-8"))
    else:
        doc = invoke_api(cfg, args)
    return map_response(doc, load_mapping_spec(cfg.mapping), args)


def materialize_sources(deployment: DeploymentConfig, endpoints: Iterable[str]) -> Dict[str, Graph]:
    """
    The full graph behind each logical endpoint IRI.

    Native endpoints contribute their N-Triples file; micro-service IRIs
    contribute the mapped fragment for the API arguments in their query
    string. Endpoints the deployment does not declare are left out.

    Args:
        deployment: The deployment whose sources are read
        endpoints: Logical endpoint IRIs

    Returns:
        Dict of endpoint IRI -> frozen graph
    """
    natives = {f"{LOGICAL_BASE}{n.route}/sparql": n for n in deployment.native_endpoints}
    services = {s.route: s for s in deployment.services}

    sources = {}
    for endpoint in endpoints:
        bare, _, query = endpoint.partition("?")
        if bare in natives:
            sources[endpoint] = load_graph(natives[bare].nt_file)
        elif bare.startswith(SRV_BASE) and bare.endswith("/sparql"):
            cfg = services.get(bare[len(SRV_BASE):-len("/sparql")])
            if cfg is not None:
                sources[endpoint] = _service_fragment(deployment, cfg, dict(parse_qsl(query)))
        if endpoint not in sources:
            logger.debug(f"No materialized source for {endpoint}")
    return sources


def centralized_eval(ast: QueryAst, deployment: DeploymentConfig):
    """
    Evaluate a federated query over the union of its materialized sources.

    Returns:
        SolutionSequence for SELECT/ASK, Graph for CONSTRUCT
    """
    endpoints = list(dict.fromkeys(s.endpoint.value for s in iter_services(ast.where)))
    sources = materialize_sources(deployment, endpoints)
    graph = union(*sources.values()).freeze()
    local = strip_services(ast, sources.keys())
    if isinstance(local.kind, Construct):
        return eval_construct(graph, local)
    return eval_select(graph, local)
