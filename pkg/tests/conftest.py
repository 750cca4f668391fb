"""
Shared fixtures.
"""

import logging

import pytest
from flask import Flask

from fedql.core.ntriples import parse_ntriples
from fedql.workbench.fixtures import build_fixture_set, gen_fixtures

SAMPLE_NT = """\
<http://ex.org/alice> <http://ex.org/knows> <http://ex.org/bob> .
<http://ex.org/alice> <http://ex.org/name> "Alice" .
<http://ex.org/alice> <http://ex.org/age> "30"^^<http://www.w3.org/2001/XMLSchema#integer> .
<http://ex.org/bob> <http://ex.org/knows> <http://ex.org/carol> .
<http://ex.org/bob> <http://ex.org/name> "Bob"@en .
<http://ex.org/bob> <http://ex.org/age> "25"^^<http://www.w3.org/2001/XMLSchema#integer> .
<http://ex.org/carol> <http://ex.org/name> "Carol" .
_:n1 <http://ex.org/knows> <http://ex.org/alice> .
"""


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: timing and load tests")


@pytest.fixture
def sample_graph():
    """A small frozen people graph."""
    return parse_ntriples(SAMPLE_NT).freeze()


@pytest.fixture
def app():
    """Create Flask app for testing."""
    app = Flask(__name__)
    app.config["TESTING"] = True
    return app


@pytest.fixture(scope="session")
def workbench_dir(tmp_path_factory):
    """The default workbench: seed 42, 200 genes, 500 interactions."""
    out = tmp_path_factory.mktemp("workbench")
    gen_fixtures(42, 200, 500, out)
    return out


@pytest.fixture(scope="session")
def workbench_fixtures(workbench_dir):
    return build_fixture_set(42, 200, 500)


@pytest.fixture(autouse=True)
def reset_fedql_logger():
    """Drop handlers configure_logging attached during a test."""
    logger = logging.getLogger("fedql")
    handlers, level = list(logger.handlers), logger.level
    yield
    for handler in list(logger.handlers):
        if handler not in handlers:
            logger.removeHandler(handler)
            handler.close()
    logger.setLevel(level)
