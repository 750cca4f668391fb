#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Native SPARQL endpoint

Serves a frozen graph loaded from an N-Triples file at /<route>/sparql.
"""

import logging
from pathlib import Path

from flask import Blueprint, Flask

from .protocol import answer
from .server import ServerThread
from ..core.graph import Graph
from ..core.ntriples import parse_ntriples
from ..engine.evaluator import eval_construct, eval_select, failing_executor
from ..sparql.ast import Construct

logger = logging.getLogger(__name__)


def load_graph(nt_file) -> Graph:
    """
    Load and freeze an N-Triples file.

    Raises:
        FileNotFoundError: If the file does not exist
        NTriplesSyntaxError: If it does not parse
    """
    text = Path(nt_file).read_text(encoding="utf-8")
    graph = parse_ntriples(text).freeze()
    logger.info(f"Loaded {len(graph)} triples from {nt_file}")
    return graph


def create_native_blueprint(graph: Graph, route: str) -> Blueprint:
    """
    Create a Flask Blueprint answering queries over one graph.

    Args:
        graph: Graph to serve; frozen if it is not already
        route: URL path segment

    Returns:
        Blueprint: Configured Flask Blueprint
    """
    bp = Blueprint(f"native_{route}", __name__, url_prefix=f"/{route}")
    graph = graph.freeze()
    bp.graph = graph

    def execute(ast):
        if isinstance(ast.kind, Construct):
            return eval_construct(graph, ast, failing_executor), {}
        return eval_select(graph, ast, failing_executor), {}

    @bp.route("/sparql", methods=["GET", "POST"])
    def sparql():
        return answer(execute, route)

    return bp


def serve_graph(nt_file, route: str, port: int = 0, host: str = "127.0.0.1") -> ServerThread:
    """
    Start a native endpoint in a background thread.

    Returns:
        ServerThread: The running server; its endpoint is url + f"/{route}/sparql"
    """
    app = Flask(f"fedql.native.{route}")
    app.register_blueprint(create_native_blueprint(load_graph(nt_file), route))
    return ServerThread(app, host, port).start()
