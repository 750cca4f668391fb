"""
Unit tests for the workbench: fixture generation, the mock API, the
centralized oracle and benchmark reporting.
"""

import json

import pytest
from flask import Flask

from fedql.core.ntriples import format_term, parse_ntriples, serialize_ntriples
from fedql.core.terms import Iri
from fedql.sparql.parser import parse_query
from fedql.sparql.results import SolutionSequence
from fedql.utils.config import BenchConfig, DeploymentConfig, load_json_config
from fedql.workbench import vocabulary as v
from fedql.workbench.bench import BenchReport, BenchRow, _count
from fedql.workbench.fixtures import (
    NETWORK_ROUTE,
    QUERY_NAMES,
    SCORE_THRESHOLD,
    build_fixture_set,
    gen_fixtures,
    network_document,
    oma_graph,
)
from fedql.workbench.mock_api import create_mock_blueprint, lookup
from fedql.workbench.oracle import centralized_eval, materialize_sources


def as_rows(result):
    """Comparable form of a query answer: sorted N-Triples rows or lines."""
    if isinstance(result, SolutionSequence):
        rows = [{k: format_term(t) for k, t in row.items()} for row in result.rows]
        return sorted(rows, key=lambda r: sorted(r.items()))
    return sorted(serialize_ntriples(result).splitlines())


def expected_rows(expected):
    if expected["kind"] == "construct":
        return sorted(expected["rows"])
    return sorted(expected["rows"], key=lambda r: sorted(r.items()))


class TestFixtureGeneration:
    """Test the deterministic fixture generator."""

    def test_expected_counts(self, workbench_fixtures):
        expected = workbench_fixtures.expected
        assert set(expected) == set(QUERY_NAMES)
        assert expected["Q1a"]["count"] == 10
        assert expected["Q2a"]["count"] == 0
        assert expected["Q3a"]["count"] == 3
        assert expected["Q5a"]["count"] == 10
        assert expected["Q7a"]["count"] == 3
        assert expected["Q8a"]["count"] == 10
        assert expected["Q6a"]["count"] >= 4

    def test_q3a_names_only_target(self, workbench_fixtures):
        rows = workbench_fixtures.expected["Q3a"]["rows"]
        assert sum(1 for r in rows if "name" in r) == 1

    def test_q4a_is_threshold_and_ordered(self, workbench_fixtures):
        partners = workbench_fixtures.interactions_of(workbench_fixtures.target.protein_id)
        q4a = workbench_fixtures.expected["Q4a"]
        assert q4a["count"] == sum(1 for _, s in partners if s >= SCORE_THRESHOLD)
        scores = [float(r["score"].split('"')[1]) for r in q4a["rows"]]
        assert scores == sorted(scores, reverse=True)

    def test_byte_identical_trees(self, tmp_path):
        gen_fixtures(7, 60, 120, tmp_path / "a")
        gen_fixtures(7, 60, 120, tmp_path / "b")
        files_a = sorted(p.relative_to(tmp_path / "a") for p in (tmp_path / "a").rglob("*") if p.is_file())
        files_b = sorted(p.relative_to(tmp_path / "b") for p in (tmp_path / "b").rglob("*") if p.is_file())
        assert files_a == files_b
        for rel in files_a:
            assert (tmp_path / "a" / rel).read_bytes() == (tmp_path / "b" / rel).read_bytes()

    def test_seed_matters(self):
        assert build_fixture_set(1, 60, 120).interactions != build_fixture_set(2, 60, 120).interactions

    def test_two_genes(self, tmp_path):
        fixtures = gen_fixtures(42, 2, 500, tmp_path)
        assert fixtures.expected["Q8a"]["count"] == 0
        assert fixtures.expected["Q1a"]["count"] == 0
        assert fixtures.expected["Q7a"]["count"] == 1
        assert (tmp_path / "oma.nt").is_file()

    def test_too_few_genes(self):
        with pytest.raises(ValueError):
            build_fixture_set(42, 1, 10)

    def test_orthology_is_symmetric(self, workbench_fixtures):
        graph = oma_graph(workbench_fixtures)
        has_ortholog = Iri(v.ORTH + "hasOrtholog")
        for t in graph.match(None, has_ortholog):
            assert graph.match(t.object, has_ortholog, t.subject)

    def test_network_document(self, workbench_fixtures):
        target = workbench_fixtures.target
        doc = network_document(workbench_fixtures, target)
        assert len(doc) == 10
        assert {d["stringId_A"] for d in doc} == {target.protein_id}
        assert all(d["ncbiTaxonId"] == 4530 for d in doc)

    def test_written_tree(self, workbench_dir):
        deployment = load_json_config(workbench_dir / "deploy.json", DeploymentConfig)
        assert [s.route for s in deployment.services] == [NETWORK_ROUTE, "string-proteins"]
        bench = load_json_config(workbench_dir / "bench.json", BenchConfig)
        assert [q.name for q in bench.queries] == list(QUERY_NAMES)
        assert bench.deployment == str(workbench_dir / "deploy.json")
        for name in QUERY_NAMES:
            parse_query((workbench_dir / "queries" / f"{name}.rq").read_text(encoding="utf-8"))
        graph = parse_ntriples((workbench_dir / "oma.nt").read_text(encoding="utf-8"))
        assert len(graph.match(None, Iri(v.RDFS + "label"))) == 200


class TestMockApi:
    """Test fixture lookup and the mock API blueprint."""

    def test_single_identifier_verbatim(self, workbench_dir, workbench_fixtures):
        target = workbench_fixtures.target
        body = lookup(workbench_dir / "api", "network", {"identifiers": target.label, "species": target.species})
        path = workbench_dir / "api" / "network" / target.species / f"{target.label}.json"
        assert body == path.read_bytes()

    def test_unknown_identifier(self, workbench_dir):
        assert lookup(workbench_dir / "api", "network", {"identifiers": "NOPE", "species": "4530"}) == b"[]"

    def test_path_traversal(self, workbench_dir):
        assert lookup(workbench_dir / "api", "network", {"identifiers": "../../oma", "species": "4530"}) == b"[]"

    def test_several_identifiers(self, workbench_dir, workbench_fixtures):
        genes = [g for g in workbench_fixtures.genes if g.species == v.RICE][:3]
        args = {"identifiers": "\r".join(g.label for g in genes), "species": v.RICE}
        merged = json.loads(lookup(workbench_dir / "api", "resolve", args))
        assert [d["preferredName"] for d in merged] == [g.label for g in genes]

    def test_blueprint(self, workbench_dir):
        app = Flask(__name__)
        app.register_blueprint(create_mock_blueprint(workbench_dir / "api"))
        client = app.test_client()
        response = client.get("/api/resolve", query_string={"identifiers": v.OMT2, "species": v.WHEAT})
        assert response.status_code == 200
        assert response.get_json()[0]["preferredName"] == v.OMT2
        assert client.get("/api/nothing").status_code == 404
        assert client.get("/_hits").get_json() == {"total": 1, "routes": {"resolve": 1}}


class TestCentralizedOracle:
    """The centralized rewrite of every query reproduces the brute-force answers."""

    @pytest.fixture(scope="class")
    def deployment(self, workbench_dir):
        return load_json_config(workbench_dir / "deploy.json", DeploymentConfig)

    @pytest.mark.parametrize("name", QUERY_NAMES)
    def test_query(self, name, deployment, workbench_dir, workbench_fixtures):
        ast = parse_query((workbench_dir / "queries" / f"{name}.rq").read_text(encoding="utf-8"))
        result = centralized_eval(ast, deployment)
        assert as_rows(result) == expected_rows(workbench_fixtures.expected[name])

    def test_unknown_endpoints_left_out(self, deployment):
        sources = materialize_sources(deployment, [v.OMA_ENDPOINT, v.UNREACHABLE_ENDPOINT])
        assert list(sources) == [v.OMA_ENDPOINT]


class TestBenchReport:
    """Test benchmark statistics and rendering."""

    def test_statistics(self):
        row = BenchRow("Q", seconds=[1.0, 2.0, 3.0], counts=[5, 5, 5], expected=5, latency_target=10)
        assert row.mean == 2.0
        assert row.std == 1.0
        assert row.flags == []

    def test_single_run(self):
        row = BenchRow("Q", seconds=[0.5], counts=[1], expected=1)
        assert row.std == 0.0
        assert row.flags == ["n=1"]

    def test_flags(self):
        row = BenchRow("Q", seconds=[2.0, 2.0], counts=[1, 2], expected=1, latency_target=1.0)
        assert row.flags == ["mismatch(expected 1)", "nondeterministic", "slow"]
        assert not BenchReport([row]).ok

    def test_missing_expected_is_mismatch(self):
        assert BenchRow("Q", seconds=[0.1], counts=[0]).mismatch

    def test_rendering(self):
        report = BenchReport(
            [
                BenchRow("Q1a", seconds=[0.25, 0.35], counts=[10, 10], expected=10),
                BenchRow("Q2a", seconds=[0.125, 0.125], counts=[0, 0], expected=0),
            ]
        )
        assert report.ok
        tsv = report.to_tsv().splitlines()
        assert tsv[0] == "Query\tMean(s)\tStd\tResults\tFlags"
        assert tsv[1].split("\t")[:4] == ["Q1a", "0.300", "0.071", "10"]
        text = report.to_text().splitlines()
        assert text[0].split() == ["Query", "Mean(s)", "Std", "Results"]
        assert set(text[1]) == {"-"}
        assert len(text) == 4
        assert report.rows[1].to_dict()["results"] == 0

    def test_count(self):
        assert _count("<a:x> <a:p> <a:o> .\n<a:x> <a:p> <a:q> .\n", construct=True) == 2
        assert _count('{"head":{"vars":["x"]},"results":{"bindings":[{},{}]}}', construct=False) == 2
        assert _count('{"head":{},"boolean":true}', construct=False) == 1
