#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Fixtures

Deterministic desk-scale stand-ins for an ortholog database (served as a
native SPARQL endpoint) and a protein interaction Web API (served by the
mock API and wrapped by two micro-services), together with the workbench
queries and their expected answers.

Expected answers are computed by brute-force joins over the generated
Python lists, never through the query engine.
"""

import json
import logging
import random
from dataclasses import dataclass, field
from pathlib import Path
from string import Template
from typing import Dict, List, Optional, Tuple

from . import vocabulary as v
from ..core.graph import Graph
from ..core.ntriples import format_term, serialize_ntriples
from ..core.terms import Iri, Literal, RDF_TYPE, Triple, XSD_DOUBLE

logger = logging.getLogger(__name__)

TARGET_INTERACTIONS = 10
EXTRA_OMT2_ORTHOLOGS = 2
SCORE_THRESHOLD = 0.7
QUERY_NAMES = ("Q1a", "Q2a", "Q3a", "Q4a", "Q5a", "Q6a", "Q7a", "Q8a")

NETWORK_ROUTE = "string-network"
PROTEINS_ROUTE = "string-proteins"

DEFAULT_PORTS = {"federator": 8800, "mock": 8801, "microservices": 8802, "oma": 8803}


@dataclass(frozen=True)
class Gene:
    label: str
    species: str

    @property
    def iri(self) -> str:
        return v.gene_iri(self.label)

    @property
    def protein_id(self) -> str:
        return v.protein_id(self.species, self.label)

    @property
    def protein_iri(self) -> str:
        return v.protein_iri(self.species, self.label)


@dataclass(frozen=True)
class Interaction:
    a: str  # protein ids
    b: str
    score: float

    @property
    def score_lexical(self) -> str:
        return json.dumps(self.score)


@dataclass
class FixtureSet:
    """
    A generated fixture set.

    Attributes:
        seed: Generator seed
        genes: Genes in generation order; gene 0 is OMT2, gene 1 its rice ortholog
        orthologs: Unordered gene IRI pairs
        interactions: Protein interactions with combined scores
        expected: Query name -> {"kind", "count", "rows"}
        other_label: The second gene label of the VALUES query
    """

    seed: int
    genes: List[Gene]
    orthologs: List[Tuple[str, str]]
    interactions: List[Interaction]
    expected: Dict[str, dict] = field(default_factory=dict)
    other_label: str = v.RICE_ORTHOLOG

    @property
    def target(self) -> Gene:
        return self.genes[1]

    def gene_by_iri(self) -> Dict[str, Gene]:
        return {g.iri: g for g in self.genes}

    def orthologs_of(self, gene_iri: str) -> List[str]:
        found = []
        for a, b in self.orthologs:
            if a == gene_iri:
                found.append(b)
            elif b == gene_iri:
                found.append(a)
        return found

    def interactions_of(self, protein: str) -> List[Tuple[str, float]]:
        """Partner protein ids and scores, oriented from protein."""
        partners = []
        for i in self.interactions:
            if i.a == protein:
                partners.append((i.b, i.score))
            elif i.b == protein:
                partners.append((i.a, i.score))
        return sorted(partners)


def _gene_labels(rng: random.Random, n_genes: int) -> List[Gene]:
    genes = [Gene(v.OMT2, v.WHEAT), Gene(v.RICE_ORTHOLOG, v.RICE)]
    species = sorted(v.SPECIES)
    for index in range(2, n_genes):
        sp = rng.choice(species)
        genes.append(Gene(f"{v.LABEL_PREFIX[sp]}{index:05d}", sp))
    return genes


def _orthologs(rng: random.Random, genes: List[Gene]) -> List[Tuple[int, int]]:
    pairs = [(0, 1)]
    extra = [i for i in range(2, len(genes)) if genes[i].species not in (v.WHEAT, v.RICE)]
    pairs.extend((0, i) for i in extra[:EXTRA_OMT2_ORTHOLOGS])

    pool = list(range(2, len(genes)))
    target = len(pairs) + len(pool)
    seen = {frozenset(p) for p in pairs}
    attempts = 0
    while len(pairs) < target and len(pool) >= 2 and attempts < 50 * target:
        attempts += 1
        a, b = rng.sample(pool, 2)
        if genes[a].species == genes[b].species or frozenset((a, b)) in seen:
            continue
        seen.add(frozenset((a, b)))
        pairs.append((a, b))
    return pairs


def _interactions(rng: random.Random, genes: List[Gene], n_interactions: int) -> List[Interaction]:
    target = genes[1]
    rice_partners = [g for g in genes[2:] if g.species == v.RICE]
    count = min(TARGET_INTERACTIONS, n_interactions, len(rice_partners))
    interactions = [
        Interaction(target.protein_id, partner.protein_id, round(rng.uniform(0.150, 0.999), 3))
        for partner in rng.sample(rice_partners, count)
    ]

    by_species: Dict[str, List[Gene]] = {}
    for gene in genes[2:]:
        by_species.setdefault(gene.species, []).append(gene)
    pools = [sp for sp in sorted(by_species) if len(by_species[sp]) >= 2]

    seen = {frozenset((i.a, i.b)) for i in interactions}
    remaining = n_interactions - count
    attempts = 0
    while remaining > 0 and pools and attempts < 50 * n_interactions:
        attempts += 1
        sp = rng.choice(pools)
        a, b = rng.sample(by_species[sp], 2)
        key = frozenset((a.protein_id, b.protein_id))
        if key in seen:
            continue
        seen.add(key)
        interactions.append(Interaction(a.protein_id, b.protein_id, round(rng.uniform(0.150, 0.999), 3)))
        remaining -= 1
    return interactions


def build_fixture_set(seed: int = 42, n_genes: int = 200, n_interactions: int = 500) -> FixtureSet:
    """
    Generate the fixture data in memory.

    Raises:
        ValueError: If n_genes < 2 or n_interactions < 0
    """
    if n_genes < 2:
        raise ValueError("n_genes must be at least 2")
    if n_interactions < 0:
        raise ValueError("n_interactions must be non-negative")

    rng = random.Random(seed)
    genes = _gene_labels(rng, n_genes)
    pairs = _orthologs(rng, genes)
    interactions = _interactions(rng, genes, n_interactions)

    fixtures = FixtureSet(
        seed=seed,
        genes=genes,
        orthologs=[(genes[a].iri, genes[b].iri) for a, b in pairs],
        interactions=interactions,
    )
    for gene in genes[2:]:
        if fixtures.orthologs_of(gene.iri):
            fixtures.other_label = gene.label
            break
    fixtures.expected = expected_results(fixtures)
    return fixtures


# Source documents


def oma_graph(fixtures: FixtureSet) -> Graph:
    """The ortholog database as RDF; ortholog links are stated in both directions."""
    graph = Graph()
    label = Iri(v.RDFS + "label")
    for gene in fixtures.genes:
        g = Iri(gene.iri)
        graph.insert(Triple(g, Iri(RDF_TYPE), Iri(v.ORTH + "Gene")))
        graph.insert(Triple(g, label, Literal(gene.label)))
        graph.insert(Triple(g, Iri(v.UP + "organism"), Iri(v.taxon_iri(gene.species))))
        graph.insert(Triple(g, Iri(v.ORTH + "encodes"), Iri(gene.protein_iri)))
    for a, b in fixtures.orthologs:
        graph.insert(Triple(Iri(a), Iri(v.ORTH + "hasOrtholog"), Iri(b)))
        graph.insert(Triple(Iri(b), Iri(v.ORTH + "hasOrtholog"), Iri(a)))
    return graph


def network_document(fixtures: FixtureSet, gene: Gene) -> List[dict]:
    """Interaction API answer for one protein, the queried protein always in position A."""
    names = {g.protein_id: g.label for g in fixtures.genes}
    return [
        {
            "ncbiTaxonId": int(gene.species),
            "preferredName_A": gene.label,
            "preferredName_B": names[partner],
            "score": score,
            "stringId_A": gene.protein_id,
            "stringId_B": partner,
        }
        for partner, score in fixtures.interactions_of(gene.protein_id)
    ]


def proteins_document(gene: Gene) -> List[dict]:
    return [
        {
            "annotation": f"{v.SPECIES[gene.species]} protein encoded by {gene.label}",
            "ncbiTaxonId": int(gene.species),
            "preferredName": gene.label,
            "stringId": gene.protein_id,
        }
    ]


# Mappings and queries

NETWORK_MAPPING = """\
PREFIX j: <http://fedql.example/json#>
PREFIX sdb: <http://fedql.example/stringdb#>

CONSTRUCT {
  ?a sdb:interactsWith ?b .
  _:i a sdb:Interaction ;
      sdb:participantA ?a ;
      sdb:participantB ?b ;
      sdb:combinedScore ?score .
} WHERE {
  ?e j:stringId_A ?a ;
     j:stringId_B ?b ;
     j:score ?score ;
     j:ncbiTaxonId ?taxid .
  FILTER(STR(?taxid) = ?species)
}
"""

PROTEINS_MAPPING = """\
PREFIX j: <http://fedql.example/json#>
PREFIX up: <http://purl.uniprot.org/core/>
PREFIX rdfs: <http://www.w3.org/2000/01/rdf-schema#>

CONSTRUCT {
  ?p a up:Protein ;
     rdfs:label ?name ;
     up:organism ?taxon .
} WHERE {
  ?e j:stringId ?p ;
     j:preferredName ?name ;
     j:ncbiTaxonId ?taxon .
}
"""

MAPPINGS = {
    NETWORK_ROUTE: (
        NETWORK_MAPPING,
        {
            "base": v.JSON_BASE,
            "root": "http://fedql.example/string/network/{species}/{identifiers}",
            "param_vars": {"species": "species"},
            "iri_keys": {"stringId_A": v.PROTEIN, "stringId_B": v.PROTEIN},
        },
    ),
    PROTEINS_ROUTE: (
        PROTEINS_MAPPING,
        {
            "base": v.JSON_BASE,
            "root": "http://fedql.example/string/resolve/{species}/{identifiers}",
            "param_vars": {},
            "iri_keys": {"stringId": v.PROTEIN, "ncbiTaxonId": v.TAXON},
        },
    ),
}

_PREFIXES = """\
PREFIX orth: <http://purl.org/net/orth#>
PREFIX up: <http://purl.uniprot.org/core/>
PREFIX taxon: <http://purl.uniprot.org/taxonomy/>
PREFIX rdfs: <http://www.w3.org/2000/01/rdf-schema#>
PREFIX sdb: <http://fedql.example/stringdb#>
"""

QUERY_TEMPLATES = {
    # single-service SELECT
    "Q1a": """
SELECT ?partner ?score WHERE {
  SERVICE <${network}> {
    ?i sdb:participantA <${target_protein}> ;
       sdb:participantB ?partner ;
       sdb:combinedScore ?score .
  }
}
""",
    # empty result: OMT2 is a wheat gene
    "Q2a": """
SELECT ?gene WHERE {
  SERVICE <${oma}> {
    ?gene rdfs:label "OMT2" ;
          up:organism taxon:4530 .
  }
}
""",
    "Q3a": """
SELECT ?orth ?label ?name WHERE {
  SERVICE <${oma}> {
    ?g rdfs:label "OMT2" ;
       orth:hasOrtholog ?orth .
    ?orth rdfs:label ?label ;
          orth:encodes ?protein .
  }
  OPTIONAL {
    SERVICE <${proteins}> {
      ?protein rdfs:label ?name .
    }
  }
}
""",
    "Q4a": """
SELECT ?partner ?score WHERE {
  SERVICE <${network}> {
    ?i sdb:participantA <${target_protein}> ;
       sdb:participantB ?partner ;
       sdb:combinedScore ?score .
    FILTER(?score >= 0.7)
  }
}
ORDER BY DESC(?score)
""",
    "Q5a": """
CONSTRUCT {
  ?gene sdb:hasInteractionPartner ?partner .
} WHERE {
  SERVICE <${oma}> {
    ?gene rdfs:label "${target_label}" ;
          orth:encodes ?protein .
  }
  SERVICE <${network}> {
    ?protein sdb:interactsWith ?partner .
  }
}
""",
    "Q6a": """
SELECT ?label ?orth WHERE {
  VALUES ?label { "OMT2" "${other_label}" "NOPE" }
  SERVICE <${oma}> {
    ?g rdfs:label ?label ;
       orth:hasOrtholog ?orth .
  }
}
""",
    "Q7a": """
SELECT ?orth ?x WHERE {
  SERVICE <${oma}> {
    ?g rdfs:label "OMT2" ;
       orth:hasOrtholog ?orth .
  }
  SERVICE SILENT <${unreachable}> {
    ?orth rdfs:comment ?x .
  }
}
""",
    # two-service join: interactions of OMT2's rice orthologs
    "Q8a": """
SELECT ?orth ?protein ?partner WHERE {
  SERVICE <${oma}> {
    ?g rdfs:label "OMT2" ;
       orth:hasOrtholog ?orth .
    ?orth up:organism taxon:4530 ;
          orth:encodes ?protein .
  }
  SERVICE <${network}> {
    ?protein sdb:interactsWith ?partner .
  }
}
""",
}


def render_queries(fixtures: FixtureSet) -> Dict[str, str]:
    """The workbench queries for a fixture set, by name."""
    target = fixtures.target
    values = {
        "oma": v.OMA_ENDPOINT,
        "network": v.service_endpoint(NETWORK_ROUTE, identifiers=target.label, species=target.species),
        "proteins": v.service_endpoint(PROTEINS_ROUTE, identifiers=target.label, species=target.species),
        "unreachable": v.UNREACHABLE_ENDPOINT,
        "target_protein": target.protein_iri,
        "target_label": target.label,
        "other_label": fixtures.other_label,
    }
    return {name: _PREFIXES + Template(text).substitute(values) for name, text in QUERY_TEMPLATES.items()}


# Brute-force oracle


def _row(**terms) -> Dict[str, str]:
    return {name: format_term(term) for name, term in terms.items() if term is not None}


def _sorted_rows(rows: List[Dict[str, str]]) -> List[Dict[str, str]]:
    return sorted(rows, key=lambda r: sorted(r.items()))


def expected_results(fixtures: FixtureSet) -> Dict[str, dict]:
    """
    Expected answers of the workbench queries.

    Rows are {variable: N-Triples term}; CONSTRUCT answers are sorted
    N-Triples lines.
    """
    genes = fixtures.gene_by_iri()
    by_label = {g.label: g for g in fixtures.genes}
    omt2 = fixtures.genes[0]
    target = fixtures.target

    def score(value: float) -> Literal:
        return Literal(json.dumps(value), XSD_DOUBLE)

    def protein(pid: str) -> Iri:
        return Iri(v.PROTEIN + pid)

    target_partners = fixtures.interactions_of(target.protein_id)
    omt2_orthologs = [genes[iri] for iri in fixtures.orthologs_of(omt2.iri)]

    q1 = [_row(partner=protein(pid), score=score(s)) for pid, s in target_partners]
    q2 = [_row(gene=Iri(g.iri)) for g in fixtures.genes if g.label == v.OMT2 and g.species == v.RICE]
    q3 = [
        _row(
            orth=Iri(g.iri),
            label=Literal(g.label),
            name=Literal(g.label) if g.protein_id == target.protein_id else None,
        )
        for g in omt2_orthologs
    ]
    strong = sorted((p for p in target_partners if p[1] >= SCORE_THRESHOLD), key=lambda p: -p[1])
    q4 = [_row(partner=protein(pid), score=score(s)) for pid, s in strong]
    q5 = sorted(
        f"{format_term(Iri(target.iri))} {format_term(Iri(v.SDB + 'hasInteractionPartner'))} "
        f"{format_term(protein(pid))} ."
        for pid, _ in target_partners
    )
    q6 = []
    for label in (v.OMT2, fixtures.other_label, "NOPE"):
        gene = by_label.get(label)
        if gene is not None:
            q6.extend(_row(label=Literal(label), orth=Iri(o)) for o in fixtures.orthologs_of(gene.iri))
    q7 = [_row(orth=Iri(g.iri)) for g in omt2_orthologs]
    q8 = []
    for g in omt2_orthologs:
        if g.species != v.RICE or g.protein_id != target.protein_id:
            continue
        q8.extend(_row(orth=Iri(g.iri), protein=protein(g.protein_id), partner=protein(pid)) for pid, _ in target_partners)

    expected = {
        "Q1a": q1,
        "Q2a": q2,
        "Q3a": q3,
        "Q4a": q4,
        "Q6a": q6,
        "Q7a": q7,
        "Q8a": q8,
    }
    result = {
        name: {"kind": "select", "count": len(rows), "rows": rows if name == "Q4a" else _sorted_rows(rows)}
        for name, rows in expected.items()
    }
    result["Q5a"] = {"kind": "construct", "count": len(q5), "rows": q5}
    return dict(sorted(result.items()))


# Writing


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _write_json(path: Path, doc) -> None:
    _write(path, json.dumps(doc, indent=2, sort_keys=True) + "\n")


def deployment_document(ports: Optional[Dict[str, int]] = None) -> dict:
    """deploy.json for a generated fixture directory (paths relative to it)."""
    ports = {**DEFAULT_PORTS, **(ports or {})}
    params = [{"name": "identifiers", "required": True}, {"name": "species", "required": True}]
    services = [
        {
            "name": route,
            "route": route,
            "api_url_template": f"mock://string/api/{function}?identifiers={{identifiers}}&species={{species}}",
            "mapping": f"mappings/{route}",
            "method": "GET",
            "params": params,
            "timeout": 10.0,
            "cache_ttl": 60.0,
        }
        for route, function in ((NETWORK_ROUTE, "network"), (PROTEINS_ROUTE, "resolve"))
    ]
    return {
        "host": "127.0.0.1",
        "mock_apis": [{"name": "string", "fixture_dir": "api", "port": ports["mock"], "delay": 0.0}],
        "microservices": {"port": ports["microservices"], "services": services},
        "native_endpoints": [{"route": "oma", "nt_file": "oma.nt", "port": ports["oma"]}],
        "federator": {
            "port": ports["federator"],
            "chunk_size": 50,
            "timeout": 10.0,
            "max_remote_calls": 1000,
            "aliases": {
                v.OMA_ENDPOINT: f"http://127.0.0.1:{ports['oma']}/oma/sparql",
                v.SRV_BASE: f"http://127.0.0.1:{ports['microservices']}/srv/",
            },
        },
    }


def gen_fixtures(seed: int, n_genes: int, n_interactions: int, out_dir) -> FixtureSet:
    """
    Generate and write a complete workbench directory.

    Writes oma.nt, the mock API files under api/, the two mappings, the
    rendered queries, expected.json, deploy.json and bench.json. The same
    arguments always produce byte-identical trees.

    Returns:
        FixtureSet: The generated data
    """
    out = Path(out_dir)
    fixtures = build_fixture_set(seed, n_genes, n_interactions)

    _write(out / "oma.nt", serialize_ntriples(oma_graph(fixtures)))

    for gene in fixtures.genes:
        network = network_document(fixtures, gene)
        if network:
            _write_json(out / "api" / "network" / gene.species / f"{gene.label}.json", network)
        _write_json(out / "api" / "resolve" / gene.species / f"{gene.label}.json", proteins_document(gene))

    for route, (query, sidecar) in MAPPINGS.items():
        _write(out / "mappings" / route / "mapping.rq", query)
        _write_json(out / "mappings" / route / "mapping.json", sidecar)

    for name, text in render_queries(fixtures).items():
        _write(out / "queries" / f"{name}.rq", text)

    _write_json(out / "expected.json", fixtures.expected)
    _write_json(out / "deploy.json", deployment_document())
    _write_json(
        out / "bench.json",
        {
            "federator": f"http://127.0.0.1:{DEFAULT_PORTS['federator']}/federate/sparql",
            "expected": "expected.json",
            "queries": [{"name": name, "file": f"queries/{name}.rq"} for name in QUERY_NAMES],
            "deployment": "deploy.json",
            "latency_target": 1.0,
            "repetitions": 10,
        },
    )
    logger.info(
        f"Generated fixtures in {out}: {len(fixtures.genes)} genes, "
        f"{len(fixtures.orthologs)} ortholog pairs, {len(fixtures.interactions)} interactions"
    )
    return fixtures
