"""
Unit tests for JSON lifting and CONSTRUCT mappings.
"""

import json
import random

import pytest

from fedql.core.ntriples import serialize_ntriples
from fedql.core.terms import BlankNode, Iri, Literal, Triple, XSD_BOOLEAN, XSD_DOUBLE, XSD_INTEGER
from fedql.errors import MissingParam
from fedql.mapping.lift import INDEX, ITEM, LiftConfig, RawNumber, lift_json, load_json_text
from fedql.mapping.mapping import apply_mapping, load_mapping_spec, map_response, resolve_root

BASE = "http://fedql.example/json#"
ROOT = "http://fedql.example/doc/1"

PEOPLE_MAPPING = """\
PREFIX j: <http://fedql.example/json#>
PREFIX ex: <http://ex.org/>

CONSTRUCT { ?p ex:name ?name . ?p ex:species ?sp } WHERE {
  ?doc j:_item ?e .
  ?e j:id ?p ;
     j:name ?name .
}
"""


def lift(text, **kwargs):
    return lift_json(load_json_text(text), LiftConfig(BASE, ROOT, **kwargs))


def pred(key):
    return Iri(BASE + key)


@pytest.fixture
def mapping_dir(tmp_path):
    (tmp_path / "mapping.rq").write_text(PEOPLE_MAPPING, encoding="utf-8")
    sidecar = {
        "base": BASE,
        "root": "http://fedql.example/doc/{species}",
        "param_vars": {"species": "sp"},
        "iri_keys": {"id": "http://ex.org/p/"},
    }
    (tmp_path / "mapping.json").write_text(json.dumps(sidecar), encoding="utf-8")
    return tmp_path


class TestLiftRules:
    """Test the shape of the lifted graph."""

    def test_scalars(self):
        graph = lift('{"name": "x", "n": 3, "f": 1.50, "ok": true, "nil": null}')
        root = Iri(ROOT)
        assert Triple(root, pred("name"), Literal("x")) in graph
        assert Triple(root, pred("n"), Literal("3", XSD_INTEGER)) in graph
        assert Triple(root, pred("f"), Literal("1.50", XSD_DOUBLE)) in graph
        assert Triple(root, pred("ok"), Literal("true", XSD_BOOLEAN)) in graph
        assert len(graph) == 4

    def test_number_lexical_form_kept(self):
        doc = load_json_text('{"a": 1e3, "b": -0.0, "c": 12345678901234567890}')
        assert all(isinstance(v, RawNumber) for v in doc.values())
        objects = {t.predicate.value[len(BASE):]: t.object for t in lift_json(doc, LiftConfig(BASE, ROOT))}
        assert objects["a"] == Literal("1e3", XSD_DOUBLE)
        assert objects["b"] == Literal("-0.0", XSD_DOUBLE)
        assert objects["c"] == Literal("12345678901234567890", XSD_INTEGER)

    def test_nested_object_is_blank(self):
        graph = lift('{"inner": {"k": "v"}}')
        (link,) = graph.match(Iri(ROOT), pred("inner"))
        assert isinstance(link.object, BlankNode)
        assert graph.match(link.object, pred("k")) == [Triple(link.object, pred("k"), Literal("v"))]

    def test_array_under_key(self):
        graph = lift('{"tags": ["a", "b"], "rows": [{"x": 1}, {"x": 2}]}')
        assert len(graph.match(Iri(ROOT), pred("tags"))) == 2
        rows = [t.object for t in graph.match(Iri(ROOT), pred("rows"))]
        indexes = sorted(graph.match(row, pred(INDEX))[0].object.lexical for row in rows)
        assert indexes == ["0", "1"]

    def test_root_array_uses_item(self):
        graph = lift('[{"x": 1}, "s", null]')
        items = graph.match(Iri(ROOT), pred(ITEM))
        assert len(items) == 2
        assert Triple(Iri(ROOT), pred(ITEM), Literal("s")) in graph

    def test_array_in_array(self):
        graph = lift('{"m": [[1, 2]]}')
        (link,) = graph.match(Iri(ROOT), pred("m"))
        assert len(graph.match(link.object, pred(ITEM))) == 2

    def test_iri_keys(self):
        graph = lift('{"id": "a b", "other": "a b"}', iri_keys={"id": "http://ex.org/p/"})
        assert Triple(Iri(ROOT), pred("id"), Iri("http://ex.org/p/a%20b")) in graph
        assert Triple(Iri(ROOT), pred("other"), Literal("a b")) in graph

    def test_key_is_quoted(self):
        graph = lift('{"a key": 1}')
        assert graph.match(None, pred("a%20key"))

    @pytest.mark.parametrize("text", ["null", "3", '"s"', "true", "{}", "[]"])
    def test_empty_results(self, text):
        assert len(lift(text)) == 0

    def test_invalid_base(self):
        with pytest.raises(ValueError):
            LiftConfig("http://fedql.example/json", ROOT)

    def test_invalid_json(self):
        with pytest.raises(ValueError):
            load_json_text("{")


# Count oracle over random documents


def random_doc(rng, depth=0, counter=None):
    """Nested document whose scalars are all distinct."""
    counter = counter if counter is not None else iter(range(10**6))
    if depth >= 3 or rng.random() < 0.4:
        n = next(counter)
        return [f"s{n}", n, n + 0.5, None][rng.randrange(4)]
    if rng.random() < 0.5:
        return {f"k{i}": random_doc(rng, depth + 1, counter) for i in range(rng.randint(0, 4))}
    return [random_doc(rng, depth + 1, counter) for _ in range(rng.randint(0, 4))]


def count_attached(value):
    if value is None:
        return 0
    if isinstance(value, dict):
        return 1 + count_container(value)
    if isinstance(value, list):
        return sum(count_element(e) for e in value)
    return 1


def count_element(value):
    if value is None:
        return 0
    if isinstance(value, (dict, list)):
        return 2 + count_container(value)
    return 1


def count_container(value):
    if isinstance(value, dict):
        return sum(count_attached(v) for v in value.values())
    return sum(count_element(e) for e in value)


def expected_count(doc):
    return count_container(doc) if isinstance(doc, (dict, list)) else 0


class TestLiftOracle:
    """Triple counts match an independent walk of the document."""

    @pytest.mark.parametrize("seed", range(50))
    def test_random_document(self, seed):
        rng = random.Random(seed)
        doc = {"root": random_doc(rng)}
        text = json.dumps(doc)
        graph = lift(text)
        assert len(graph) == expected_count(json.loads(text))

    @pytest.mark.parametrize("seed", range(5))
    def test_deterministic(self, seed):
        text = json.dumps({"root": random_doc(random.Random(seed))})
        assert serialize_ntriples(lift(text)) == serialize_ntriples(lift(text))
        assert sorted(map(repr, lift(text))) == sorted(map(repr, lift(text)))


class TestMapping:
    """Test mapping directories and their application."""

    def test_load(self, mapping_dir):
        spec = load_mapping_spec(mapping_dir)
        assert spec.param_vars == {"species": "sp"}
        assert spec.lift.iri_keys == {"id": "http://ex.org/p/"}
        assert "species" in repr(spec)

    def test_missing_files(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_mapping_spec(tmp_path)

    def test_rejects_select(self, mapping_dir):
        (mapping_dir / "mapping.rq").write_text("SELECT * { ?s ?p ?o }", encoding="utf-8")
        with pytest.raises(ValueError):
            load_mapping_spec(mapping_dir)

    def test_rejects_service(self, mapping_dir):
        (mapping_dir / "mapping.rq").write_text(
            "CONSTRUCT { ?s ?p ?o } WHERE { SERVICE <http://x.org/sparql> { ?s ?p ?o } }", encoding="utf-8"
        )
        with pytest.raises(ValueError):
            load_mapping_spec(mapping_dir)

    def test_map_response(self, mapping_dir):
        spec = load_mapping_spec(mapping_dir)
        doc = load_json_text('[{"id": "a", "name": "A"}, {"id": "b", "name": "B"}, {"name": "anonymous"}]')
        fragment = map_response(doc, spec, {"species": "9606"})
        assert fragment.frozen
        assert len(fragment) == 4
        alice = Iri("http://ex.org/p/a")
        assert Triple(alice, Iri("http://ex.org/species"), Literal("9606")) in fragment
        assert Triple(alice, Iri("http://ex.org/name"), Literal("A")) in fragment

    def test_missing_param(self, mapping_dir):
        spec = load_mapping_spec(mapping_dir)
        with pytest.raises(MissingParam):
            map_response([], spec, {})

    def test_apply_mapping_freezes_input(self, mapping_dir):
        spec = load_mapping_spec(mapping_dir)
        lifted = lift('[{"id": "a", "name": "A"}]')
        assert len(apply_mapping(lifted, spec, {"species": "1"})) == 2
        assert lifted.frozen

    def test_resolve_root(self):
        assert resolve_root("http://x.org/{a}/{b}", {"a": "1 2", "b": "x/y"}) == "http://x.org/1%202/x%2Fy"
        with pytest.raises(MissingParam):
            resolve_root("http://x.org/{a}", {})
