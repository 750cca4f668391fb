#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Errors

Exception hierarchy shared by the store, the SPARQL layer, the mapping
engine and the HTTP endpoints. Every error knows the HTTP status it maps to
and how to render itself as a JSON error body.
"""

from typing import Any, Dict, Optional


class FedqlError(Exception):
    """Base class for all fedql errors."""

    http_status = 500

    def __init__(self, detail: str = ""):
        super().__init__(detail)
        self.detail = detail

    def fields(self) -> Dict[str, Any]:
        """Structured fields added to the JSON error body."""
        return {}

    def to_dict(self) -> dict:
        """
        Render the error as a JSON-serializable body.

        Returns:
            dict: {"error": <class name>, "detail": str, ...fields}
        """
        body = {"error": type(self).__name__, "detail": self.detail}
        body.update(self.fields())
        return body


class QuerySyntaxError(FedqlError):
    """A SPARQL query text could not be parsed."""

    http_status = 400

    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col
        self.message = message

    def fields(self):
        return {"line": self.line, "col": self.col}


class UnsupportedFeature(FedqlError):
    """A recognized SPARQL construct outside the supported subset."""

    http_status = 400

    def __init__(self, keyword: str, line: int = 0, col: int = 0):
        super().__init__(f"{keyword} is not supported (line {line}, column {col})")
        self.keyword = keyword
        self.line = line
        self.col = col

    def fields(self):
        return {"keyword": self.keyword, "line": self.line, "col": self.col}


class NTriplesSyntaxError(FedqlError):
    """An N-Triples document is malformed."""

    http_status = 400

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message

    def fields(self):
        return {"line": self.line}


class MalformedTriple(FedqlError, ValueError):
    """A triple violates the subject/predicate position rules."""

    http_status = 500


class GraphFrozen(FedqlError):
    """Insert attempted on a graph that has been frozen for evaluation."""


class MalformedResults(FedqlError):
    """A SPARQL results document does not have the expected structure."""

    http_status = 502

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class MissingParam(FedqlError):
    """A required Web API parameter was not supplied."""

    http_status = 400

    def __init__(self, name: str):
        super().__init__(f"missing required parameter: {name}")
        self.name = name

    def fields(self):
        return {"name": self.name}


class ServiceNotAllowedInLeaf(FedqlError):
    """A leaf endpoint received a query containing SERVICE."""

    http_status = 400

    def __init__(self, endpoint: str = ""):
        super().__init__(f"SERVICE is not allowed at a leaf endpoint: {endpoint}")
        self.endpoint = endpoint


class UpstreamError(FedqlError):
    """The wrapped Web API answered with a non-2xx status or was unreachable."""

    http_status = 502

    def __init__(self, status: Optional[int], detail: str = ""):
        super().__init__(detail or f"upstream answered {status}")
        self.status = status

    def fields(self):
        return {"status": self.status}


class UpstreamTimeout(FedqlError):
    """The wrapped Web API did not answer within the configured timeout."""

    http_status = 504


class InvalidJson(FedqlError):
    """The wrapped Web API answered with a body that is not JSON."""

    http_status = 502


class RemoteError(FedqlError):
    """A remote SPARQL endpoint failed during SERVICE evaluation."""

    http_status = 502

    def __init__(self, endpoint: str, status: Optional[int] = None, reason: str = ""):
        what = f"status {status}" if status is not None else reason
        super().__init__(f"{endpoint}: {what}")
        self.endpoint = endpoint
        self.status = status
        self.reason = reason or "status"

    def fields(self):
        return {"endpoint": self.endpoint, "status": self.status, "reason": self.reason}


class EndpointNotAllowed(FedqlError):
    """A SERVICE endpoint is not on the federation allowlist."""

    http_status = 403

    def __init__(self, iri: str):
        super().__init__(f"endpoint not allowed: {iri}")
        self.iri = iri

    def fields(self):
        return {"iri": self.iri}


class QueryBudgetExceeded(FedqlError):
    """A federated query would issue more remote calls than allowed."""

    http_status = 422

    def __init__(self, limit: int):
        super().__init__(f"query exceeded the budget of {limit} remote calls")
        self.limit = limit

    def fields(self):
        return {"limit": self.limit}
