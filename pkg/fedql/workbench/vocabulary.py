#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Vocabulary

IRIs shared by the fixture generator, the generated mappings and queries,
and the brute-force oracle.
"""

ORTH = "http://purl.org/net/orth#"
UP = "http://purl.uniprot.org/core/"
TAXON = "http://purl.uniprot.org/taxonomy/"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
SDB = "http://fedql.example/stringdb#"
JSON_BASE = "http://fedql.example/json#"

GENE = "http://fedql.example/oma/gene/"
PROTEIN = "http://fedql.example/string/protein/"

# Logical endpoint IRIs used in query files; deployments alias them to
# the URLs the servers actually listen on.
LOGICAL_BASE = "http://fedql.example/"
OMA_ENDPOINT = LOGICAL_BASE + "oma/sparql"
SRV_BASE = LOGICAL_BASE + "srv/"
UNREACHABLE_ENDPOINT = "http://127.0.0.1:1/unreachable/sparql"

SPECIES = {
    "4565": "wheat",
    "4530": "rice",
    "3702": "arabidopsis",
    "4577": "maize",
}
LABEL_PREFIX = {"4565": "TRAES", "4530": "OS", "3702": "AT", "4577": "ZM"}

WHEAT = "4565"
RICE = "4530"
OMT2 = "OMT2"
RICE_ORTHOLOG = "OS01G0700900"


def gene_iri(label: str) -> str:
    return GENE + label


def protein_id(species: str, label: str) -> str:
    return f"{species}.{label}"


def protein_iri(species: str, label: str) -> str:
    return PROTEIN + protein_id(species, label)


def taxon_iri(species: str) -> str:
    return TAXON + species


def service_endpoint(route: str, **args: str) -> str:
    """Logical IRI of a micro-service call with fixed API arguments."""
    query = "&".join(f"{k}={v}" for k, v in args.items())
    return f"{SRV_BASE}{route}/sparql" + (f"?{query}" if query else "")
