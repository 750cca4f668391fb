"""
Workbench module.

This module contains the deterministic fixture generator, the mock Web
API, the in-process deployment runner, centralized evaluation and the
benchmark harness.
"""

from .bench import BenchReport, BenchRow, bench_run
from .fixtures import FixtureSet, build_fixture_set, expected_results, gen_fixtures, render_queries
from .mock_api import lookup, serve_mock_api
from .oracle import centralized_eval, materialize_sources
from .runner import WorkbenchRunner

__all__ = [
    "BenchReport",
    "BenchRow",
    "bench_run",
    "FixtureSet",
    "build_fixture_set",
    "expected_results",
    "gen_fixtures",
    "render_queries",
    "lookup",
    "serve_mock_api",
    "centralized_eval",
    "materialize_sources",
    "WorkbenchRunner",
]
