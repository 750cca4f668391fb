#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Mock Web API

Serves generated fixture files as a STRING-like Web API:
GET /api/<function>?identifiers=...&species=... answers with the JSON file
fixture_dir/<function>/<species>/<identifier>.json. Several identifiers
may be passed separated by carriage returns; their lists are concatenated.
"""

import json
import logging
import re
import threading
import time
from pathlib import Path
from typing import Dict, Optional

from flask import Blueprint, Flask, Response, current_app, jsonify, request

from ..web.server import ServerThread

logger = logging.getLogger(__name__)

_SAFE = re.compile(r"^[A-Za-z0-9_.-]+$")


class HitCounter:
    """Per-route request counter exposed at /_hits."""

    def __init__(self):
        self._counts: Dict[str, int] = {}
        self._lock = threading.Lock()

    def increment(self, route: str) -> None:
        with self._lock:
            self._counts[route] = self._counts.get(route, 0) + 1

    def snapshot(self) -> dict:
        with self._lock:
            return {"total": sum(self._counts.values()), "routes": dict(self._counts)}

    def reset(self) -> None:
        with self._lock:
            self._counts.clear()


def _fixture_path(fixture_dir: Path, function: str, species: str, identifier: str) -> Optional[Path]:
    if not (_SAFE.match(species) and _SAFE.match(identifier)) or identifier.startswith("."):
        return None
    return fixture_dir / function / species / f"{identifier}.json"


def lookup(fixture_dir, function: str, args) -> bytes:
    """
    The response body for one API call.

    A single known identifier is answered with the fixture bytes verbatim;
    unknown identifiers contribute nothing, so an unknown key yields [].
    """
    fixture_dir = Path(fixture_dir)
    species = args.get("species", "")
    identifiers = [i for i in re.split(r"[\r\n]+", args.get("identifiers", "")) if i]

    paths = [_fixture_path(fixture_dir, function, species, i) for i in identifiers]
    found = [p for p in paths if p is not None and p.is_file()]
    if len(found) == 1 and len(identifiers) == 1:
        return found[0].read_bytes()

    merged = []
    for path in found:
        merged.extend(json.loads(path.read_text(encoding="utf-8")))
    return json.dumps(merged, sort_keys=True).encode("utf-8")


def create_mock_blueprint(fixture_dir, hits: Optional[HitCounter] = None, delay: float = 0.0) -> Blueprint:
    """
    Create a Flask Blueprint serving a fixture directory.

    Args:
        fixture_dir: Directory with one sub-directory per API function
        hits: Shared hit counter
        delay: Seconds to wait before answering each API call

    Returns:
        Blueprint: Configured Flask Blueprint
    """
    bp = Blueprint("mock_api", __name__)
    fixture_dir = Path(fixture_dir)
    hits = hits if hits is not None else HitCounter()
    bp.hits = hits
    bp.delay = delay

    @bp.route("/api/<function>", methods=["GET", "POST"])
    def api(function):
        if not _SAFE.match(function) or not (fixture_dir / function).is_dir():
            return jsonify({"error": "NotFound", "detail": f"unknown function: {function}"}), 404
        hits.increment(function)
        if bp.delay > 0:
            time.sleep(bp.delay)
        try:
            body = lookup(fixture_dir, function, request.values)
        except (OSError, ValueError) as e:
            current_app.logger.error(f"mock {function}: {e}")
            return jsonify({"error": "InternalError", "detail": str(e)}), 500
        return Response(body, status=200, mimetype="application/json")

    @bp.route("/_hits")
    def get_hits():
        return jsonify(hits.snapshot())

    return bp


def serve_mock_api(fixture_dir, port: int = 0, delay: float = 0.0, host: str = "127.0.0.1") -> ServerThread:
    """
    Start a mock Web API in a background thread.

    Returns:
        ServerThread: The running server; the blueprint is app.blueprints["mock_api"]
    """
    app = Flask("fedql.mock")
    app.register_blueprint(create_mock_blueprint(fixture_dir, delay=delay))
    server = ServerThread(app, host, port).start()
    logger.info(f"Mock API over {fixture_dir} at {server.url}")
    return server
