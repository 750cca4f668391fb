"""
Utilities module.

This module contains configuration management and logging helpers.
"""

from .config import (
    BenchConfig,
    DeploymentConfig,
    FederationConfig,
    MockApiConfig,
    NativeEndpointConfig,
    ParamSpec,
    ServiceConfig,
    cache_disabled,
    load_json_config,
)
from .jsonlog import JsonLinesHandler, configure_logging

__all__ = [
    "BenchConfig",
    "DeploymentConfig",
    "FederationConfig",
    "MockApiConfig",
    "NativeEndpointConfig",
    "ParamSpec",
    "ServiceConfig",
    "cache_disabled",
    "load_json_config",
    "JsonLinesHandler",
    "configure_logging",
]
