"""
Tests for configuration loading and JSON-lines logging.
"""

import json
import logging

import pytest

from fedql.utils.config import (
    DISABLE_CACHE_ENV,
    DeploymentConfig,
    FederationConfig,
    ParamSpec,
    ServiceConfig,
    load_json_config,
)
from fedql.utils.jsonlog import LOG_LEVEL_ENV, JsonLinesHandler, configure_logging


def service(tmp_path, **overrides):
    data = {
        "name": "people",
        "route": "people",
        "api_url_template": "http://api.test/people?q={q}",
        "mapping": str(tmp_path),
        "params": ["q"],
    }
    data.update(overrides)
    return ServiceConfig.from_dict(data)


class TestServiceConfig:
    """Test micro-service configuration validation."""

    def test_defaults(self, tmp_path):
        cfg = service(tmp_path)
        assert cfg.method == "GET"
        assert cfg.timeout == 10.0
        assert cfg.cache_ttl == 0.0
        assert cfg.params == [ParamSpec("q")]
        assert cfg.placeholders == ["q"]

    def test_method_normalized(self, tmp_path):
        assert service(tmp_path, method="post").method == "POST"

    @pytest.mark.parametrize(
        "overrides",
        [
            {"route": "a/b"},
            {"route": ""},
            {"method": "PUT"},
            {"api_url_template": "people?q={q}"},
            {"api_url_template": "http://api.test/{other}"},
            {"params": ["q", "q"]},
            {"params": ["query"]},
            {"timeout": 0},
            {"cache_ttl": -1},
        ],
    )
    def test_invalid(self, tmp_path, overrides):
        with pytest.raises((ValueError, TypeError)):
            service(tmp_path, **overrides)

    def test_missing_mapping_dir(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            service(tmp_path, mapping=str(tmp_path / "nope"))

    def test_cache_disabled_by_environment(self, tmp_path, monkeypatch):
        monkeypatch.setenv(DISABLE_CACHE_ENV, "1")
        assert service(tmp_path, cache_ttl=60).cache_ttl == 0.0

    def test_round_trip(self, tmp_path):
        cfg = service(tmp_path, cache_ttl=5, headers={"X-Key": "k"})
        assert ServiceConfig.from_dict(cfg.to_dict()) == cfg

    def test_repr(self, tmp_path):
        assert "name='people'" in repr(service(tmp_path))


class TestFederationConfig:
    """Test federator settings."""

    @pytest.mark.parametrize("field", ["chunk_size", "max_remote_calls", "max_workers"])
    def test_positive_integers(self, field):
        with pytest.raises(ValueError):
            FederationConfig(**{field: 0})
        with pytest.raises(TypeError):
            FederationConfig(**{field: True})

    def test_allowlist_ignores_query_string(self):
        cfg = FederationConfig(allowlist=["http://h/srv/a/sparql"])
        assert cfg.is_allowed("http://h/srv/a/sparql?x=1")
        assert not cfg.is_allowed("http://h/srv/b/sparql")
        assert FederationConfig().is_allowed("http://anything/")

    def test_longest_alias_wins(self):
        cfg = FederationConfig(aliases={"http://l/": "http://h:1/", "http://l/srv/": "http://h:2/srv/"})
        assert cfg.resolve_endpoint("http://l/srv/a/sparql?x=1") == "http://h:2/srv/a/sparql?x=1"
        assert cfg.resolve_endpoint("http://l/oma/sparql") == "http://h:1/oma/sparql"
        assert cfg.resolve_endpoint("http://other/sparql") == "http://other/sparql"


class TestLoadJsonConfig:
    """Test reading configuration documents."""

    def test_relative_paths(self, tmp_path):
        (tmp_path / "maps" / "people").mkdir(parents=True)
        (tmp_path / "g.nt").write_text("", encoding="utf-8")
        doc = {
            "microservices": {
                "port": 5001,
                "services": [
                    {
                        "name": "people",
                        "route": "people",
                        "api_url_template": "http://api.test/p",
                        "mapping": "maps/people",
                    }
                ],
            },
            "native_endpoints": [{"route": "g", "nt_file": "g.nt"}],
            "federator": {"chunk_size": 7},
        }
        (tmp_path / "deploy.json").write_text(json.dumps(doc), encoding="utf-8")

        cfg = load_json_config(tmp_path / "deploy.json", DeploymentConfig)
        assert cfg.microservices_port == 5001
        assert cfg.services[0].mapping == str((tmp_path / "maps" / "people").resolve())
        assert cfg.native_endpoints[0].nt_file == str((tmp_path / "g.nt").resolve())
        assert cfg.federator.chunk_size == 7
        assert cfg.to_dict()["microservices"]["services"][0]["route"] == "people"

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_json_config(tmp_path / "deploy.json", DeploymentConfig)

    def test_invalid_json(self, tmp_path):
        (tmp_path / "deploy.json").write_text("{", encoding="utf-8")
        with pytest.raises(ValueError):
            load_json_config(tmp_path / "deploy.json", DeploymentConfig)

    def test_duplicate_routes(self, tmp_path):
        cfg = service(tmp_path)
        with pytest.raises(ValueError):
            DeploymentConfig(services=[cfg, cfg])


class TestJsonLogging:
    """Test the JSON-lines handler and logger setup."""

    def test_extra_fields(self, tmp_path):
        path = tmp_path / "log.jsonl"
        logger = logging.getLogger("fedql.test.jsonlog")
        logger.setLevel(logging.INFO)
        handler = JsonLinesHandler(str(path))
        logger.addHandler(handler)
        try:
            logger.info("query done", extra={"remote_calls": 3})
        finally:
            logger.removeHandler(handler)
            handler.close()

        record = json.loads(path.read_text(encoding="utf-8"))
        assert record["message"] == "query done"
        assert record["level"] == "INFO"
        assert record["remote_calls"] == 3
        assert "ts" in record

    def test_configure_is_idempotent(self, tmp_path, monkeypatch):
        monkeypatch.setenv(LOG_LEVEL_ENV, "debug")
        logger = configure_logging(json_file=str(tmp_path / "a.jsonl"))
        logger = configure_logging(json_file=str(tmp_path / "a.jsonl"))
        assert logger.name == "fedql"
        assert logger.level == logging.DEBUG
        assert len(logger.handlers) == 2
        configure_logging("WARNING")
        assert len(logger.handlers) == 1
        assert logger.level == logging.WARNING
