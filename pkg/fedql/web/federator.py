#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Federator

Evaluates federated queries by dispatching SERVICE blocks to remote SPARQL
endpoints as bound joins: incoming bindings for the variables shared with
the SERVICE body are shipped inline as a VALUES block, in chunks, and the
remote rows are joined back locally. The federator holds no data of its
own; top-level patterns run against an empty graph.
"""

import itertools
import logging
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

import requests
from flask import Blueprint

from .protocol import answer
from ..core.graph import Graph
from ..core.terms import BlankNode, Iri
from ..engine.evaluator import eval_construct, eval_select, merge
from ..errors import EndpointNotAllowed, MalformedResults, QueryBudgetExceeded, RemoteError
from ..sparql.ast import (
    Construct,
    GroupPattern,
    OptionalGroup,
    QueryAst,
    Select,
    Service,
    Triples,
    Values,
    Variable,
    group_variables,
    iter_services,
)
from ..sparql.results import RESULTS_JSON, SolutionSequence, parse_select_results
from ..sparql.serializer import serialize_query
from ..utils.config import FederationConfig

logger = logging.getLogger(__name__)

_EMPTY_GRAPH = Graph().freeze()


class RemoteClient:
    """
    Sends one query to one endpoint per call, as a POST of type
    application/sparql-query, and returns the results JSON text.
    """

    def __init__(self, timeout: float = 10.0, session: Optional[requests.Session] = None, cfg=None):
        self.timeout = timeout
        self.session = session or requests.Session()
        self.cfg = cfg
        self.calls = 0
        self._lock = threading.Lock()

    def __call__(self, endpoint: str, query: str) -> str:
        """
        Raises:
            RemoteError: On transport failure, timeout or a non-2xx answer
        """
        with self._lock:
            self.calls += 1
        url = self.cfg.resolve_endpoint(endpoint) if self.cfg is not None else endpoint
        try:
            response = self.session.post(
                url,
                data=query.encode("utf-8"),
                headers={"Content-Type": "application/sparql-query", "Accept": RESULTS_JSON},
                timeout=self.timeout,
            )
        except requests.Timeout:
            raise RemoteError(endpoint, reason="timeout")
        except requests.RequestException as e:
            raise RemoteError(endpoint, reason=f"unreachable: {type(e).__name__}")
        if not 200 <= response.status_code < 300:
            raise RemoteError(endpoint, status=response.status_code)
        return response.text


@dataclass
class QueryMetrics:
    """Per-query counters, safe to update from chunk worker threads."""

    limit: int = 1000
    remote_calls: int = 0
    service_latency_ms: Dict[str, List[float]] = field(default_factory=dict)
    failures: List[str] = field(default_factory=list)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)
    _scopes: "itertools.count" = field(default_factory=itertools.count, repr=False)

    def charge(self, calls: int) -> None:
        """Reserve remote calls, failing before any I/O if the budget would be exceeded."""
        with self._lock:
            if self.remote_calls + calls > self.limit:
                raise QueryBudgetExceeded(self.limit)
            self.remote_calls += calls

    def record(self, endpoint: str, seconds: float) -> None:
        with self._lock:
            self.service_latency_ms.setdefault(endpoint, []).append(round(seconds * 1000, 3))

    def scope(self) -> str:
        with self._lock:
            return f"r{next(self._scopes)}n"

    def to_dict(self) -> dict:
        with self._lock:
            return {
                "remote_calls": self.remote_calls,
                "service_latency_ms": {k: list(v) for k, v in self.service_latency_ms.items()},
                "failures": list(self.failures),
            }


@dataclass
class ExecutionPlan:
    """Group elements in textual order, plus planning warnings."""

    steps: Tuple = ()
    endpoints: Tuple[str, ...] = ()
    warnings: List[str] = field(default_factory=list)


def plan(ast: QueryAst, cfg: Optional[FederationConfig] = None) -> ExecutionPlan:
    """
    Plan a federated query.

    Raises:
        EndpointNotAllowed: If a SERVICE endpoint is outside the allowlist
    """
    endpoints: Dict[str, None] = {}
    for service in iter_services(ast.where):
        if cfg is not None and not cfg.is_allowed(service.endpoint.value):
            raise EndpointNotAllowed(service.endpoint.value)
        endpoints[service.endpoint.value] = None

    warnings = []
    if any(isinstance(element, Triples) for element in ast.where.elements):
        warnings.append("top-level triple patterns run against the federator's empty graph and match nothing")
    return ExecutionPlan(ast.where.elements, tuple(endpoints), warnings)


def _chunks(items: Sequence, size: int) -> List[Sequence]:
    return [items[i : i + size] for i in range(0, len(items), size)]


def render_service_query(body: GroupPattern, shared: Sequence[str], chunk: Sequence[tuple]) -> str:
    """SELECT * over the body, seeded with a VALUES block when there are shared variables."""
    elements = body.elements
    if shared:
        values = Values(vars=tuple(Variable(v) for v in shared), rows=tuple(tuple(row) for row in chunk))
        elements = (values,) + elements
    return serialize_query(QueryAst(kind=Select(), where=GroupPattern(elements)))


def execute_service(
    endpoint: Iri,
    body: GroupPattern,
    incoming: SolutionSequence,
    cfg: FederationConfig,
    client,
    silent: bool = False,
    metrics: Optional[QueryMetrics] = None,
) -> SolutionSequence:
    """
    Evaluate one SERVICE element as a chunked bound join.

    Args:
        endpoint: Remote endpoint IRI
        body: SERVICE body (no nested SERVICE)
        incoming: Current solutions
        cfg: Federation configuration (chunk size, workers)
        client: Callable (endpoint, query text) -> results JSON text
        silent: Whether failures yield the incoming solutions unchanged
        metrics: Per-query counters and budget

    Returns:
        SolutionSequence: incoming joined with the remote answers

    Raises:
        RemoteError: When the endpoint fails and the SERVICE is not SILENT
        QueryBudgetExceeded: When the query runs out of remote calls
    """
    metrics = metrics if metrics is not None else QueryMetrics(cfg.max_remote_calls)
    if not incoming.rows:
        return SolutionSequence(list(incoming.vars), [])

    body_vars = set(group_variables(body))
    shared = [v for v in incoming.vars if v in body_vars]

    # Distinct projections in first-appearance order; a blank node can never
    # join with a remote answer, so such rows drop out.
    groups: Dict[tuple, List[dict]] = {}
    for row in incoming.rows:
        key = tuple(row.get(v) for v in shared)
        if any(isinstance(term, BlankNode) for term in key):
            continue
        groups.setdefault(key, []).append(row)
    keys = list(groups)
    chunks = _chunks(keys, cfg.chunk_size) if shared else [keys]
    if not keys:
        return SolutionSequence(list(incoming.vars), [])

    metrics.charge(len(chunks))

    def dispatch(chunk) -> SolutionSequence:
        text = render_service_query(body, shared, chunk)
        started = time.perf_counter()
        try:
            payload = client(endpoint.value, text)
        finally:
            metrics.record(endpoint.value, time.perf_counter() - started)
        try:
            return parse_select_results(payload, scope=metrics.scope())
        except MalformedResults as e:
            raise RemoteError(endpoint.value, reason=f"malformed results: {e.reason}")

    try:
        if len(chunks) == 1 or cfg.max_workers == 1:
            answers = [dispatch(chunk) for chunk in chunks]
        else:
            with ThreadPoolExecutor(max_workers=min(cfg.max_workers, len(chunks))) as pool:
                answers = list(pool.map(dispatch, chunks))
    except RemoteError as e:
        if not silent:
            raise
        metrics.failures.append(endpoint.value)
        logger.warning(f"SERVICE SILENT {endpoint.value} failed, passing solutions through: {e.detail}")
        return incoming

    rows = []
    remote_vars: List[str] = []
    for chunk, answer_rows in zip(chunks, answers):
        remote_vars.extend(answer_rows.vars)
        for key in chunk:
            for local in groups[key]:
                for remote in answer_rows.rows:
                    merged = merge(local, remote)
                    if merged is not None:
                        rows.append(merged)

    variables = list(dict.fromkeys(list(incoming.vars) + remote_vars))
    return SolutionSequence(variables, rows)


def eval_federated(
    ast: QueryAst, cfg: FederationConfig, client, metrics: Optional[QueryMetrics] = None
):
    """
    Evaluate a federated query.

    Args:
        ast: Parsed query
        cfg: Federation configuration
        client: Remote client callable
        metrics: Optional metrics object filled in during evaluation

    Returns:
        SolutionSequence for SELECT/ASK, Graph for CONSTRUCT
    """
    metrics = metrics if metrics is not None else QueryMetrics(cfg.max_remote_calls)
    execution = plan(ast, cfg)
    for warning in execution.warnings:
        logger.warning(warning)

    def executor(endpoint, body, incoming, silent=False):
        return execute_service(endpoint, body, incoming, cfg, client, silent=silent, metrics=metrics)

    if isinstance(ast.kind, Construct):
        return eval_construct(_EMPTY_GRAPH, ast, executor)
    return eval_select(_EMPTY_GRAPH, ast, executor)


def _strip(group: GroupPattern, available: Set[str]) -> GroupPattern:
    elements = []
    for element in group.elements:
        if isinstance(element, Service):
            if element.endpoint.value in available:
                elements.extend(element.body.elements)
            elif not element.silent:
                elements.append(element)
        elif isinstance(element, OptionalGroup):
            elements.append(OptionalGroup(_strip(element.group, available)))
        else:
            elements.append(element)
    return GroupPattern(tuple(elements))


def strip_services(ast: QueryAst, available) -> QueryAst:
    """
    The centralized equivalent of a federated query.

    SERVICE frames on available endpoints are erased (their bodies inlined);
    SILENT services on unavailable endpoints are dropped, which is the
    identity their failure contributes. Other services are kept.
    """
    return QueryAst(
        kind=ast.kind,
        where=_strip(ast.where, set(available)),
        prefixes=dict(ast.prefixes),
        order=ast.order,
        limit=ast.limit,
        offset=ast.offset,
    )


class Federator:
    """The federation endpoint: a FederationConfig plus a RemoteClient."""

    def __init__(self, cfg: FederationConfig, client=None):
        self.cfg = cfg
        self.client = client if client is not None else RemoteClient(cfg.timeout, cfg=cfg)

    def execute(self, ast: QueryAst):
        metrics = QueryMetrics(self.cfg.max_remote_calls)
        started = time.perf_counter()
        try:
            result = eval_federated(ast, self.cfg, self.client, metrics)
        except Exception as e:
            e.headers = {"X-Fedql-Remote-Calls": str(metrics.remote_calls)}
            raise
        logger.info(
            "federated query answered",
            extra={
                "remote_calls": metrics.remote_calls,
                "service_latency_ms": metrics.to_dict()["service_latency_ms"],
                "silent_failures": list(metrics.failures),
                "elapsed_ms": round((time.perf_counter() - started) * 1000, 3),
            },
        )
        return result, {"X-Fedql-Remote-Calls": str(metrics.remote_calls)}


def create_federator_blueprint(cfg: FederationConfig, client=None) -> Blueprint:
    """
    Create a Flask Blueprint for the federation endpoint /federate/sparql.

    Args:
        cfg: Federation configuration
        client: Optional remote client (defaults to an HTTP RemoteClient)

    Returns:
        Blueprint: Configured Flask Blueprint
    """
    bp = Blueprint("federator", __name__, url_prefix="/federate")
    federator = Federator(cfg, client)
    bp.federator = federator

    @bp.route("/sparql", methods=["GET", "POST"])
    def sparql():
        return answer(federator.execute, "federate")

    return bp
