#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
SPARQL micro-services

Each configured Web API function is served as a SPARQL endpoint at
/srv/<route>/sparql. A request calls the API with the arguments found in
its query string, maps the JSON response into a request-local graph (or
takes it from the cache) and answers the query over that graph.
"""

import logging
import re
import threading
from typing import Dict, Mapping, Optional, Tuple
from urllib.parse import quote

import requests
from flask import Blueprint, current_app, jsonify, request

from .cache import FragmentCache, cache_key
from .protocol import answer
from ..core.graph import Graph
from ..engine.evaluator import eval_construct, eval_select, failing_executor
from ..errors import InvalidJson, MissingParam, ServiceNotAllowedInLeaf, UpstreamError, UpstreamTimeout
from ..mapping.lift import load_json_text
from ..mapping.mapping import MappingSpec, load_mapping_spec, map_response
from ..sparql.ast import Construct, QueryAst, iter_services
from ..utils.config import ServiceConfig

logger = logging.getLogger(__name__)

_PLACEHOLDER = re.compile(r"\{([A-Za-z_][A-Za-z0-9_]*)\}")


class ApiHitCounter:
    """Per-service count of upstream request attempts."""

    def __init__(self):
        self._counts: Dict[str, int] = {}
        self._lock = threading.Lock()

    def increment(self, name: str) -> int:
        with self._lock:
            self._counts[name] = self._counts.get(name, 0) + 1
            return self._counts[name]

    def get(self, name: str) -> int:
        with self._lock:
            return self._counts.get(name, 0)

    def snapshot(self) -> Dict[str, int]:
        with self._lock:
            return dict(self._counts)


def extract_args(cfg: ServiceConfig, query_args: Mapping[str, str]) -> Dict[str, str]:
    """
    Collect API arguments from a request's query string.

    Every parameter except `query` is an API argument; declared defaults
    fill the gaps.

    Raises:
        MissingParam: If a required parameter has neither value nor default
    """
    args = {name: value for name, value in query_args.items() if name != "query"}
    for param in cfg.params:
        if param.name in args:
            continue
        if param.default is not None:
            args[param.name] = param.default
        elif param.required:
            raise MissingParam(param.name)
    return args


def build_url(cfg: ServiceConfig, args: Mapping[str, str]) -> str:
    """Substitute the URL template placeholders, percent-encoding values."""

    def substitute(m: "re.Match") -> str:
        name = m.group(1)
        if name not in args:
            raise MissingParam(name)
        return quote(str(args[name]), safe="")

    return _PLACEHOLDER.sub(substitute, cfg.api_url_template)


def invoke_api(cfg: ServiceConfig, args: Mapping[str, str], hits: Optional[ApiHitCounter] = None, session=None):
    """
    Call the wrapped Web API.

    Args:
        cfg: Service configuration
        args: Complete API arguments
        hits: Counter incremented once per attempt
        session: Optional requests session

    Returns:
        Parsed JSON body, numbers kept in their lexical form

    Raises:
        UpstreamError: On a non-2xx answer or a connection failure
        UpstreamTimeout: If the API does not answer within cfg.timeout
        InvalidJson: If the body is not JSON
    """
    url = build_url(cfg, args)
    http = session or requests
    if hits is not None:
        hits.increment(cfg.name)

    try:
        response = http.request(cfg.method, url, headers=cfg.headers or None, timeout=cfg.timeout)
    except requests.Timeout:
        raise UpstreamTimeout(f"{cfg.name}: no answer within {cfg.timeout}s")
    except requests.RequestException as e:
        raise UpstreamError(None, f"{cfg.name}: {e}")

    if not 200 <= response.status_code < 300:
        raise UpstreamError(response.status_code, f"{cfg.name}: upstream answered {response.status_code}")

    try:
        return load_json_text(response.text)
    except ValueError as e:
        raise InvalidJson(f"{cfg.name}: {e}")


class MicroService:
    """
    One SPARQL micro-service: a ServiceConfig with its loaded mapping.
    """

    def __init__(self, cfg: ServiceConfig, cache: FragmentCache, hits: ApiHitCounter, session=None):
        self.cfg = cfg
        self.cache = cache
        self.hits = hits
        self.session = session
        self.mapping: MappingSpec = load_mapping_spec(cfg.mapping)

    def fragment(self, args: Mapping[str, str]) -> Tuple[Graph, str]:
        """
        The mapped graph for one call.

        Returns:
            (graph, cache state): state is "hit", "miss" or "off"
        """
        if self.cfg.cache_ttl <= 0:
            doc = invoke_api(self.cfg, args, self.hits, self.session)
            return map_response(doc, self.mapping, args), "off"

        key = cache_key(self.cfg.name, args)
        cached = self.cache.get(key)
        if cached is not None:
            return cached, "hit"
        doc = invoke_api(self.cfg, args, self.hits, self.session)
        graph = map_response(doc, self.mapping, args)
        self.cache.put(key, graph, self.cfg.cache_ttl)
        return graph, "miss"

    def evaluate(self, ast: QueryAst, args: Mapping[str, str]):
        for service in iter_services(ast.where):
            raise ServiceNotAllowedInLeaf(service.endpoint.value)

        graph, state = self.fragment(args)
        headers = {"X-Fedql-Cache": state}
        if isinstance(ast.kind, Construct):
            result = eval_construct(graph, ast, failing_executor)
        else:
            result = eval_select(graph, ast, failing_executor)
        headers["X-Fedql-Api-Hits"] = str(self.hits.get(self.cfg.name))
        return result, headers

    def handle_request(self):
        """Answer the current Flask request."""
        args = extract_args(self.cfg, request.args)
        return answer(lambda ast: self.evaluate(ast, args), f"srv/{self.cfg.route}")


def create_microservice_blueprint(
    services, cache: Optional[FragmentCache] = None, hits: Optional[ApiHitCounter] = None, session=None
) -> Blueprint:
    """
    Create a Flask Blueprint serving micro-services under /srv.

    Args:
        services: ServiceConfig list
        cache: Shared fragment cache
        hits: Shared API hit counter
        session: Optional requests session for upstream calls

    Returns:
        Blueprint: Configured Flask Blueprint
    """
    bp = Blueprint("microservices", __name__, url_prefix="/srv")

    cache = cache if cache is not None else FragmentCache()
    hits = hits if hits is not None else ApiHitCounter()
    endpoints = {cfg.route: MicroService(cfg, cache, hits, session) for cfg in services}

    bp.endpoints = endpoints
    bp.cache = cache
    bp.hits = hits

    register_routes(bp, endpoints)
    return bp


def register_routes(bp, endpoints: Dict[str, MicroService]):
    """
    Register all routes on the blueprint.

    Args:
        bp: Flask Blueprint instance
        endpoints: Micro-services by route
    """

    @bp.route("/")
    def list_services():
        """List the configured services."""
        return jsonify(
            {
                "services": [
                    {
                        "name": svc.cfg.name,
                        "endpoint": f"{bp.url_prefix}/{route}/sparql",
                        "params": [p.to_dict() for p in svc.cfg.params],
                        "cache_ttl": svc.cfg.cache_ttl,
                    }
                    for route, svc in endpoints.items()
                ]
            }
        )

    @bp.route("/<route>/sparql", methods=["GET", "POST"])
    def sparql(route):
        """
        SPARQL endpoint of one micro-service.

        Query Parameters:
            query (str): SPARQL query (or POST body application/sparql-query)
            *: Any other parameter is passed to the Web API

        Returns:
            Results JSON or N-Triples; JSON error body on failure
        """
        service = endpoints.get(route)
        if service is None:
            return jsonify({"error": "NotFound", "detail": f"no service at route {route}"}), 404
        try:
            return service.handle_request()
        except MissingParam as e:
            current_app.logger.warning(f"srv/{route}: {e.detail}")
            return jsonify(e.to_dict()), e.http_status
