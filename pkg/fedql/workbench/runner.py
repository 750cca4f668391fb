#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Workbench runner

Starts a whole deployment (mock APIs, micro-services, native endpoints and
the federator) in-process, one threaded server per component.
"""

import dataclasses
import logging
from pathlib import Path
from typing import Dict, Optional
from urllib.parse import urlsplit

from flask import Flask

from .mock_api import serve_mock_api
from .vocabulary import LOGICAL_BASE, SRV_BASE
from .. import Fedql
from ..utils.config import DeploymentConfig, FederationConfig, ServiceConfig, load_json_config
from ..web.native import serve_graph
from ..web.server import ServerThread

logger = logging.getLogger(__name__)

MOCK_SCHEME = "mock://"


class WorkbenchRunner:
    """
    Runs a DeploymentConfig.

    Args:
        deployment: The deployment, or a path to deploy.json
        ephemeral: Bind every server to an ephemeral port instead of the configured one
        cache: When False, every service's cache_ttl is forced to 0
        **federation: FederationConfig fields overriding the deployment's (e.g. chunk_size)

    Example:
        with WorkbenchRunner("fixtures/deploy.json", ephemeral=True) as runner:
            requests.post(runner.federator_url, data=query, headers=...)
    """

    def __init__(self, deployment, ephemeral: bool = False, cache: bool = True, **federation):
        if not isinstance(deployment, DeploymentConfig):
            deployment = load_json_config(Path(deployment), DeploymentConfig)
        self.deployment = deployment
        self.ephemeral = ephemeral
        self.cache_enabled = cache
        self.federation_overrides = federation
        self.servers: Dict[str, ServerThread] = {}
        self.federation: Optional[FederationConfig] = None
        self.extension: Optional[Fedql] = None

    def _port(self, configured: int) -> int:
        return 0 if self.ephemeral else configured

    def _resolve_service(self, cfg: ServiceConfig) -> ServiceConfig:
        template = cfg.api_url_template
        if template.startswith(MOCK_SCHEME):
            name, _, rest = template[len(MOCK_SCHEME):].partition("/")
            server = self.servers.get(f"mock:{name}")
            if server is None:
                raise ValueError(f"service {cfg.name} refers to unknown mock API {name!r}")
            template = f"{server.url}/{rest}"
        return dataclasses.replace(
            cfg, api_url_template=template, cache_ttl=cfg.cache_ttl if self.cache_enabled else 0.0
        )

    def _aliases(self, cfg: FederationConfig) -> Dict[str, str]:
        """Aliases pointing the logical endpoint IRIs at the servers actually started."""
        moved = {}
        for native in self.deployment.native_endpoints:
            moved[native.port] = self.servers[f"native:{native.route}"].url
        if "microservices" in self.servers:
            moved[self.deployment.microservices_port] = self.servers["microservices"].url

        aliases = {}
        for native in self.deployment.native_endpoints:
            url = self.servers[f"native:{native.route}"].url
            aliases[f"{LOGICAL_BASE}{native.route}/sparql"] = f"{url}/{native.route}/sparql"
        if "microservices" in self.servers:
            aliases[SRV_BASE] = self.servers["microservices"].url + "/srv/"

        for prefix, target in cfg.aliases.items():
            parts = urlsplit(target)
            if parts.port and parts.port in moved:
                target = moved[parts.port] + target[len(f"{parts.scheme}://{parts.netloc}"):]
            aliases[prefix] = target
        return aliases

    def start(self) -> "WorkbenchRunner":
        """Start every component; mock APIs first so services can point at them."""
        d = self.deployment
        try:
            for mock in d.mock_apis:
                self.servers[f"mock:{mock.name}"] = serve_mock_api(
                    mock.fixture_dir, self._port(mock.port), mock.delay, d.host
                )
            for native in d.native_endpoints:
                self.servers[f"native:{native.route}"] = serve_graph(
                    native.nt_file, native.route, self._port(native.port), d.host
                )
            if d.services:
                app = Flask("fedql.microservices")
                self.extension = Fedql(app, services=[self._resolve_service(s) for s in d.services])
                self.servers["microservices"] = ServerThread(app, d.host, self._port(d.microservices_port)).start()
            if d.federator is not None:
                cfg = d.federator
                fields = {**cfg.to_dict(), **self.federation_overrides}
                fields["aliases"] = self._aliases(cfg)
                self.federation = FederationConfig(**fields)
                app = Flask("fedql.federator")
                Fedql(app, federation=self.federation)
                self.servers["federator"] = ServerThread(app, d.host, self._port(cfg.port)).start()
        except Exception:
            self.stop()
            raise
        logger.info(f"Workbench started: {', '.join(f'{k}={v.url}' for k, v in self.servers.items())}")
        return self

    def stop_component(self, name: str) -> None:
        """Shut one server down, e.g. "mock:string" to simulate an upstream outage."""
        server = self.servers.pop(name, None)
        if server is not None:
            server.shutdown()
            logger.info(f"Stopped {name}")

    def stop(self) -> None:
        for name in reversed(list(self.servers)):
            self.stop_component(name)

    def mock_blueprint(self, name: str = "string"):
        return self.servers[f"mock:{name}"].app.blueprints["mock_api"]

    @property
    def federator_url(self) -> str:
        return self.servers["federator"].url + "/federate/sparql"

    def service_url(self, route: str) -> str:
        return f"{self.servers['microservices'].url}/srv/{route}/sparql"

    def native_url(self, route: str) -> str:
        return f"{self.servers[f'native:{route}'].url}/{route}/sparql"

    def hits(self, name: str = "string") -> dict:
        """The mock API's /_hits counters."""
        return self.mock_blueprint(name).hits.snapshot()

    @property
    def cache(self):
        return self.extension.cache if self.extension is not None else None

    def __enter__(self) -> "WorkbenchRunner":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.stop()

    def __repr__(self) -> str:
        return f"<WorkbenchRunner {sorted(self.servers)}>"
