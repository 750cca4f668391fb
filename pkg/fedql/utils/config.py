#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Configuration management for fedql deployments.

Every document the CLI reads (deploy.json, bench.json) is loaded into the
dataclasses below. Relative paths are resolved against the directory of
the file they come from.
"""

import json
import os
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Type, TypeVar
from urllib.parse import urlsplit

DISABLE_CACHE_ENV = "FEDQL_DISABLE_CACHE"

_ROUTE = re.compile(r"^[A-Za-z0-9_-]+$")
_PLACEHOLDER = re.compile(r"\{([A-Za-z_][A-Za-z0-9_]*)\}")

T = TypeVar("T")


def cache_disabled() -> bool:
    """True when FEDQL_DISABLE_CACHE forces every cache_ttl to 0."""
    return os.environ.get(DISABLE_CACHE_ENV, "").strip().lower() in ("1", "true", "yes", "on")


def _resolve(path: Optional[str], base_dir: Optional[Path]) -> Optional[str]:
    if path is None or base_dir is None or os.path.isabs(path):
        return path
    return str((base_dir / path).resolve())


def _validate_route(route: str, what: str) -> None:
    if not isinstance(route, str) or not _ROUTE.match(route):
        raise ValueError(f"{what} must be a non-empty path segment of [A-Za-z0-9_-]: {route!r}")


def _validate_duration(value, what: str, allow_zero: bool = False) -> None:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise TypeError(f"{what} must be a number of seconds")
    if value < 0 or (value == 0 and not allow_zero):
        raise ValueError(f"{what} must be {'non-negative' if allow_zero else 'positive'}")


@dataclass
class ParamSpec:
    """
    One Web API parameter.

    Attributes:
        name: Parameter name, as used in the URL template
        required: Whether a request must supply it (when there is no default)
        default: Value used when the request omits it
    """

    name: str
    required: bool = True
    default: Optional[str] = None

    def __post_init__(self):
        if not isinstance(self.name, str) or not self.name or self.name == "query":
            raise ValueError(f"invalid parameter name: {self.name!r}")
        if self.default is not None and not isinstance(self.default, str):
            self.default = str(self.default)

    def to_dict(self) -> dict:
        return {"name": self.name, "required": self.required, "default": self.default}

    @classmethod
    def from_dict(cls, data) -> "ParamSpec":
        if isinstance(data, str):
            return cls(name=data)
        return cls(**data)


@dataclass
class ServiceConfig:
    """
    Configuration of one SPARQL micro-service.

    Attributes:
        name: Identifier of the wrapped Web API function
        route: URL path segment; the endpoint is /srv/<route>/sparql
        api_url_template: Upstream URL with {param} placeholders; a
            "mock://<name>" prefix is resolved to a mock API of the deployment
        mapping: Directory holding mapping.rq and mapping.json
        method: GET or POST
        params: API parameters
        timeout: Upstream timeout in seconds (default: 10)
        cache_ttl: Seconds a mapped fragment stays cached (0 = disabled)
        headers: Static headers sent upstream
    """

    name: str
    route: str
    api_url_template: str
    mapping: str
    method: str = "GET"
    params: List[ParamSpec] = field(default_factory=list)
    timeout: float = 10.0
    cache_ttl: float = 0.0
    headers: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        """Validate configuration after initialization."""
        if not isinstance(self.name, str) or not self.name:
            raise ValueError("name is required")
        _validate_route(self.route, "route")
        self.params = [p if isinstance(p, ParamSpec) else ParamSpec.from_dict(p) for p in self.params]
        self._validate_method()
        self._validate_template()
        _validate_duration(self.timeout, "timeout")
        _validate_duration(self.cache_ttl, "cache_ttl", allow_zero=True)
        self._validate_mapping()
        if cache_disabled():
            self.cache_ttl = 0.0

    def _validate_method(self):
        self.method = str(self.method).upper()
        if self.method not in ("GET", "POST"):
            raise ValueError(f"method must be GET or POST: {self.method}")

    def _validate_template(self):
        if not isinstance(self.api_url_template, str) or "://" not in self.api_url_template:
            raise ValueError(f"api_url_template must be an absolute URL: {self.api_url_template!r}")
        names = {p.name for p in self.params}
        if len(names) != len(self.params):
            raise ValueError(f"duplicate parameter names in service {self.name}")
        for placeholder in _PLACEHOLDER.findall(self.api_url_template):
            if placeholder not in names:
                raise ValueError(f"placeholder {{{placeholder}}} is not a declared parameter")

    def _validate_mapping(self):
        if not self.mapping:
            raise ValueError("mapping is required")
        if not os.path.isdir(self.mapping):
            raise FileNotFoundError(f"Mapping directory not found: {self.mapping}")

    @property
    def placeholders(self) -> List[str]:
        return _PLACEHOLDER.findall(self.api_url_template)

    def to_dict(self) -> dict:
        """
        Convert configuration to dictionary.

        Returns:
            dict: Configuration as dictionary
        """
        return {
            "name": self.name,
            "route": self.route,
            "api_url_template": self.api_url_template,
            "mapping": self.mapping,
            "method": self.method,
            "params": [p.to_dict() for p in self.params],
            "timeout": self.timeout,
            "cache_ttl": self.cache_ttl,
            "headers": dict(self.headers),
        }

    @classmethod
    def from_dict(cls, data: dict, base_dir: Optional[Path] = None) -> "ServiceConfig":
        """
        Create configuration from dictionary.

        Args:
            data: Configuration dictionary
            base_dir: Directory relative mapping paths are resolved against

        Returns:
            ServiceConfig: Configuration instance
        """
        data = dict(data)
        data["mapping"] = _resolve(data.get("mapping"), base_dir)
        data["params"] = [ParamSpec.from_dict(p) for p in data.get("params", [])]
        return cls(**data)

    def __repr__(self) -> str:
        return (
            f"ServiceConfig(name='{self.name}', route='{self.route}', "
            f"method={self.method}, cache_ttl={self.cache_ttl})"
        )


@dataclass
class FederationConfig:
    """
    Configuration of the federator.

    Attributes:
        allowlist: Endpoint IRIs permitted in SERVICE (empty = allow all)
        chunk_size: Incoming bindings per bound-join request (default: 50)
        timeout: Per remote call timeout in seconds
        max_remote_calls: Remote calls allowed per query (default: 1000)
        max_workers: Concurrent chunk requests per SERVICE execution
        aliases: Endpoint IRI prefix -> actual base URL, applied at dispatch
        port: Listen port when served standalone (0 = ephemeral)
    """

    allowlist: List[str] = field(default_factory=list)
    chunk_size: int = 50
    timeout: float = 10.0
    max_remote_calls: int = 1000
    max_workers: int = 4
    aliases: Dict[str, str] = field(default_factory=dict)
    port: int = 0

    def __post_init__(self):
        """Validate configuration after initialization."""
        for name in ("chunk_size", "max_remote_calls", "max_workers"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise TypeError(f"{name} must be an integer")
            if value < 1:
                raise ValueError(f"{name} must be at least 1")
        _validate_duration(self.timeout, "timeout")
        if not isinstance(self.allowlist, (list, tuple, set)):
            raise TypeError("allowlist must be a list of IRIs")
        self.allowlist = list(self.allowlist)

    def is_allowed(self, iri: str) -> bool:
        if not self.allowlist:
            return True
        bare = iri.split("?", 1)[0]
        return iri in self.allowlist or bare in self.allowlist

    def resolve_endpoint(self, iri: str) -> str:
        """Apply the longest matching alias to an endpoint IRI."""
        best = ""
        for prefix in self.aliases:
            if iri.startswith(prefix) and len(prefix) > len(best):
                best = prefix
        if not best:
            return iri
        return self.aliases[best] + iri[len(best):]

    def to_dict(self) -> dict:
        return {
            "allowlist": list(self.allowlist),
            "chunk_size": self.chunk_size,
            "timeout": self.timeout,
            "max_remote_calls": self.max_remote_calls,
            "max_workers": self.max_workers,
            "aliases": dict(self.aliases),
            "port": self.port,
        }

    @classmethod
    def from_dict(cls, data: dict, base_dir: Optional[Path] = None) -> "FederationConfig":
        return cls(**data)

    def __repr__(self) -> str:
        return (
            f"FederationConfig(chunk_size={self.chunk_size}, "
            f"allowlist={len(self.allowlist) or 'all'}, max_remote_calls={self.max_remote_calls})"
        )


@dataclass
class NativeEndpointConfig:
    """A native SPARQL endpoint over an N-Triples file, served at /<route>/sparql."""

    route: str
    nt_file: str
    port: int = 0

    def __post_init__(self):
        _validate_route(self.route, "route")
        if not self.nt_file or not os.path.isfile(self.nt_file):
            raise FileNotFoundError(f"N-Triples file not found: {self.nt_file}")

    def to_dict(self) -> dict:
        return {"route": self.route, "nt_file": self.nt_file, "port": self.port}

    @classmethod
    def from_dict(cls, data: dict, base_dir: Optional[Path] = None) -> "NativeEndpointConfig":
        data = dict(data)
        data["nt_file"] = _resolve(data.get("nt_file"), base_dir)
        return cls(**data)


@dataclass
class MockApiConfig:
    """A mock Web API serving fixture files."""

    fixture_dir: str
    name: str = "string"
    port: int = 0
    delay: float = 0.0

    def __post_init__(self):
        if not self.fixture_dir or not os.path.isdir(self.fixture_dir):
            raise FileNotFoundError(f"Fixture directory not found: {self.fixture_dir}")
        _validate_route(self.name, "name")
        _validate_duration(self.delay, "delay", allow_zero=True)

    def to_dict(self) -> dict:
        return {"name": self.name, "fixture_dir": self.fixture_dir, "port": self.port, "delay": self.delay}

    @classmethod
    def from_dict(cls, data: dict, base_dir: Optional[Path] = None) -> "MockApiConfig":
        data = dict(data)
        data["fixture_dir"] = _resolve(data.get("fixture_dir"), base_dir)
        return cls(**data)


@dataclass
class DeploymentConfig:
    """
    A whole deployment: mock APIs, micro-services, native endpoints and
    the federator, as declared in deploy.json.
    """

    host: str = "127.0.0.1"
    mock_apis: List[MockApiConfig] = field(default_factory=list)
    services: List[ServiceConfig] = field(default_factory=list)
    microservices_port: int = 0
    native_endpoints: List[NativeEndpointConfig] = field(default_factory=list)
    federator: Optional[FederationConfig] = None

    def __post_init__(self):
        routes = [s.route for s in self.services]
        duplicates = {r for r in routes if routes.count(r) > 1}
        if duplicates:
            raise ValueError(f"duplicate service routes: {sorted(duplicates)}")
        natives = [n.route for n in self.native_endpoints]
        if len(set(natives)) != len(natives):
            raise ValueError("duplicate native endpoint routes")
        mocks = [m.name for m in self.mock_apis]
        if len(set(mocks)) != len(mocks):
            raise ValueError("duplicate mock API names")

    def to_dict(self) -> dict:
        return {
            "host": self.host,
            "mock_apis": [m.to_dict() for m in self.mock_apis],
            "microservices": {
                "port": self.microservices_port,
                "services": [s.to_dict() for s in self.services],
            },
            "native_endpoints": [n.to_dict() for n in self.native_endpoints],
            "federator": self.federator.to_dict() if self.federator else None,
        }

    @classmethod
    def from_dict(cls, data: dict, base_dir: Optional[Path] = None) -> "DeploymentConfig":
        micro = data.get("microservices") or {}
        federator = data.get("federator")
        return cls(
            host=data.get("host", "127.0.0.1"),
            mock_apis=[MockApiConfig.from_dict(m, base_dir) for m in data.get("mock_apis", [])],
            services=[ServiceConfig.from_dict(s, base_dir) for s in micro.get("services", [])],
            microservices_port=micro.get("port", 0),
            native_endpoints=[NativeEndpointConfig.from_dict(n, base_dir) for n in data.get("native_endpoints", [])],
            federator=FederationConfig.from_dict(federator, base_dir) if federator is not None else None,
        )

    def __repr__(self) -> str:
        return (
            f"DeploymentConfig(host='{self.host}', mocks={len(self.mock_apis)}, "
            f"services={len(self.services)}, natives={len(self.native_endpoints)}, "
            f"federator={'yes' if self.federator else 'no'})"
        )


@dataclass
class BenchQuery:
    name: str
    file: str

    def __post_init__(self):
        if not os.path.isfile(self.file):
            raise FileNotFoundError(f"Query file not found: {self.file}")


@dataclass
class BenchConfig:
    """
    Benchmark definition (bench.json).

    Attributes:
        federator: URL of the federator endpoint; may be left empty when a
            deployment is given, in which case the started federator is used
        queries: Named query files, run in order
        expected: Path of expected.json
        deployment: Optional deploy.json to start in-process for the run
        latency_target: Mean latency above which a query is flagged
        repetitions: Default number of timed runs per query
    """

    queries: List[BenchQuery]
    expected: str
    federator: str = ""
    deployment: Optional[str] = None
    latency_target: float = 1.0
    repetitions: int = 10

    def __post_init__(self):
        if not self.queries:
            raise ValueError("queries must not be empty")
        if not os.path.isfile(self.expected):
            raise FileNotFoundError(f"Expected results not found: {self.expected}")
        if self.deployment is not None and not os.path.isfile(self.deployment):
            raise FileNotFoundError(f"Deployment file not found: {self.deployment}")
        if not self.federator and self.deployment is None:
            raise ValueError("either federator or deployment is required")
        if self.federator and not urlsplit(self.federator).scheme:
            raise ValueError(f"federator must be a URL: {self.federator}")
        _validate_duration(self.latency_target, "latency_target")
        if not isinstance(self.repetitions, int) or self.repetitions < 1:
            raise ValueError("repetitions must be a positive integer")

    def to_dict(self) -> dict:
        return {
            "federator": self.federator,
            "queries": [{"name": q.name, "file": q.file} for q in self.queries],
            "expected": self.expected,
            "deployment": self.deployment,
            "latency_target": self.latency_target,
            "repetitions": self.repetitions,
        }

    @classmethod
    def from_dict(cls, data: dict, base_dir: Optional[Path] = None) -> "BenchConfig":
        data = dict(data)
        data["queries"] = [
            BenchQuery(name=q["name"], file=_resolve(q["file"], base_dir)) for q in data.get("queries", [])
        ]
        data["expected"] = _resolve(data.get("expected"), base_dir)
        data["deployment"] = _resolve(data.get("deployment"), base_dir)
        return cls(**data)


def load_json_config(path, cls: Type[T]) -> T:
    """
    Load a configuration document.

    Args:
        path: JSON file
        cls: Configuration class with a from_dict(data, base_dir) constructor

    Returns:
        An instance of cls

    Raises:
        FileNotFoundError: If the file does not exist
        ValueError: If the file is not valid JSON or fails validation
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"Configuration file not found: {path}")
    try:
        data: Any = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ValueError(f"{path}: invalid JSON: {e}")
    return cls.from_dict(data, base_dir=path.parent.resolve())
