"""
Web module.

This module contains the Flask blueprints of the SPARQL endpoints
(micro-services, native endpoints, federator), the protocol helpers they
share, the fragment cache and the in-process server thread.
"""

from .cache import FragmentCache, cache_key
from .federator import (
    Federator,
    QueryMetrics,
    RemoteClient,
    create_federator_blueprint,
    eval_federated,
    execute_service,
    plan,
    strip_services,
)
from .microservice import (
    ApiHitCounter,
    MicroService,
    create_microservice_blueprint,
    extract_args,
    invoke_api,
)
from .native import create_native_blueprint, load_graph, serve_graph
from .server import ServerThread

__all__ = [
    "FragmentCache",
    "cache_key",
    "Federator",
    "QueryMetrics",
    "RemoteClient",
    "create_federator_blueprint",
    "eval_federated",
    "execute_service",
    "plan",
    "strip_services",
    "ApiHitCounter",
    "MicroService",
    "create_microservice_blueprint",
    "extract_args",
    "invoke_api",
    "create_native_blueprint",
    "load_graph",
    "serve_graph",
    "ServerThread",
]
