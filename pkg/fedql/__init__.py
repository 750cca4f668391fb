#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
fedql
=====

Federated SPARQL querying over SPARQL micro-services (Web APIs exposed as
quasi-virtual knowledge graphs) and native RDF endpoints.

Quick Start:
    from flask import Flask
    from fedql import Fedql, FederationConfig

    app = Flask(__name__)
    Fedql(app, federation=FederationConfig(chunk_size=50))

    app.run()
"""

__version__ = "0.1.0"
__license__ = "MIT"

from typing import List, Optional, Sequence, Tuple

from flask import Flask

from .core.graph import Graph
from .errors import FedqlError
from .utils.config import DeploymentConfig, FederationConfig, ServiceConfig
from .web.cache import FragmentCache
from .web.federator import create_federator_blueprint
from .web.microservice import ApiHitCounter, create_microservice_blueprint
from .web.native import create_native_blueprint


class Fedql:
    """
    Flask extension mounting fedql endpoints on an application.

    Micro-services are served under /srv/<route>/sparql, native graphs under
    /<route>/sparql and the federator under /federate/sparql. Any subset may
    be mounted.

    Examples:
        # Direct initialization
        app = Flask(__name__)
        fedql = Fedql(app, services=[cfg])

        # Factory pattern
        fedql = Fedql()

        def create_app():
            app = Flask(__name__)
            fedql.init_app(app, federation=FederationConfig())
            return app
    """

    def __init__(self, app: Optional[Flask] = None, **kwargs):
        self.app = app
        self.blueprints = []
        self.cache: Optional[FragmentCache] = None
        self.hits: Optional[ApiHitCounter] = None

        if app is not None:
            self.init_app(app, **kwargs)

    def init_app(
        self,
        app: Flask,
        services: Sequence[ServiceConfig] = (),
        federation: Optional[FederationConfig] = None,
        graphs: Sequence[Tuple[Graph, str]] = (),
        cache: Optional[FragmentCache] = None,
        client=None,
        session=None,
    ):
        """
        Register the endpoints on a Flask application.

        Args:
            app: Flask application instance
            services: Micro-service configurations
            federation: Federator configuration; no federator when None
            graphs: (graph, route) pairs served as native endpoints
            cache: Fragment cache shared by the micro-services
            client: Remote client used by the federator
            session: requests session used for upstream API calls

        Raises:
            ValueError: If app is not a Flask instance
            TypeError: If federation is not a FederationConfig
        """
        if not isinstance(app, Flask):
            raise ValueError("app must be a Flask instance")
        if federation is not None and not isinstance(federation, FederationConfig):
            raise TypeError("federation must be a FederationConfig instance")

        self.app = app
        blueprints = []
        if services:
            bp = create_microservice_blueprint(services, cache, session=session)
            self.cache, self.hits = bp.cache, bp.hits
            blueprints.append(bp)
        for graph, route in graphs:
            blueprints.append(create_native_blueprint(graph, route))
        if federation is not None:
            blueprints.append(create_federator_blueprint(federation, client))

        for bp in blueprints:
            app.register_blueprint(bp)
        self.blueprints.extend(blueprints)

        if not hasattr(app, "extensions"):
            app.extensions = {}
        app.extensions["fedql"] = self

        app.logger.info(
            f"fedql initialized: services={len(services)}, graphs={len(graphs)}, "
            f"federator={'yes' if federation is not None else 'no'}"
        )

    def get_endpoint_urls(self) -> List[str]:
        """Relative URLs of every mounted SPARQL endpoint."""
        urls = []
        for bp in self.blueprints:
            if hasattr(bp, "endpoints"):
                urls.extend(f"{bp.url_prefix}/{route}/sparql" for route in bp.endpoints)
            else:
                urls.append(f"{bp.url_prefix}/sparql")
        return urls

    @property
    def is_initialized(self) -> bool:
        return self.app is not None and bool(self.blueprints)


__all__ = [
    "Fedql",
    "FedqlError",
    "DeploymentConfig",
    "FederationConfig",
    "ServiceConfig",
    "__version__",
]
