#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
SPARQL protocol

Request decoding, content negotiation and response rendering shared by
every SPARQL endpoint (micro-services, native endpoints, the federator).
"""

from typing import Callable, Dict, Optional, Tuple, Union

from flask import Response, current_app, jsonify, request

from ..core.graph import Graph
from ..core.ntriples import serialize_ntriples
from ..errors import FedqlError, MissingParam
from ..sparql.ast import Construct, QueryAst
from ..sparql.parser import parse_query
from ..sparql.results import RESULTS_JSON, SolutionSequence, serialize_select_results

SPARQL_QUERY = "application/sparql-query"
N_TRIPLES = "application/n-triples"

Result = Union[SolutionSequence, Graph]
# An executor evaluates a parsed query and returns the result plus extra response headers.
Executor = Callable[[QueryAst], Tuple[Result, Dict[str, str]]]


def extract_query() -> str:
    """
    Read the query text of the current request.

    The query travels as the `query` GET parameter, as a POST body of type
    application/sparql-query, or as a form-encoded `query` field.

    Raises:
        MissingParam: If the request carries no query
    """
    if request.method == "POST":
        if request.mimetype == SPARQL_QUERY:
            text = request.get_data(as_text=True)
            if text.strip():
                return text
        elif "query" in request.form:
            return request.form["query"]
    text = request.args.get("query")
    if not text:
        raise MissingParam("query")
    return text


def negotiate(ast: QueryAst) -> str:
    """Response type for a query; anything other than the two produced types falls back to the default."""
    if isinstance(ast.kind, Construct):
        offers = [N_TRIPLES, "text/plain"]
    else:
        offers = [RESULTS_JSON, "application/json"]
    return request.accept_mimetypes.best_match(offers, default=offers[0]) or offers[0]


def render_result(ast: QueryAst, result: Result, headers: Optional[Dict[str, str]] = None) -> Response:
    mimetype = negotiate(ast)
    if isinstance(result, Graph):
        body = serialize_ntriples(result)
    else:
        body = serialize_select_results(result)
    response = Response(body, status=200, mimetype=mimetype)
    for name, value in (headers or {}).items():
        response.headers[name] = value
    return response


def error_response(error: FedqlError, headers: Optional[Dict[str, str]] = None):
    response = jsonify(error.to_dict())
    response.status_code = error.http_status
    for name, value in (headers or {}).items():
        response.headers[name] = value
    return response


def answer(execute: Executor, endpoint: str) -> Response:
    """
    Run the full request pipeline for one SPARQL request.

    Args:
        execute: Evaluates a parsed query
        endpoint: Name used in log messages

    Returns:
        Response: Results, or a JSON error body with the error's status
    """
    try:
        ast = parse_query(extract_query())
        result, headers = execute(ast)
        return render_result(ast, result, headers)

    except FedqlError as e:
        level = current_app.logger.error if e.http_status >= 500 else current_app.logger.warning
        level(f"{endpoint}: {type(e).__name__}: {e.detail}")
        return error_response(e, getattr(e, "headers", None))

    except Exception as e:
        current_app.logger.exception(f"{endpoint}: internal error")
        return jsonify({"error": "InternalError", "detail": str(e)}), 500
