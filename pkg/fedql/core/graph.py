#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Graph

Indexed in-memory triple store. Triples are held once in an insertion
ordered set and reachable through three permutation indexes (SPO, POS,
OSP), so any pattern with at least one bound position is answered from
the index whose bound prefix is longest.
"""

import threading
from typing import Dict, Iterable, Iterator, List, Optional

from .terms import BlankNode, Term, Triple
from ..errors import GraphFrozen, MalformedTriple

# Nested dicts keep insertion order, which makes every enumeration
# deterministic for a given insertion history.
_Index = Dict[Term, Dict[Term, Dict[Term, None]]]


class Graph:
    """
    A set of triples with SPO, POS and OSP access paths.

    A graph is mutable until `freeze()` is called; query evaluation only
    ever reads frozen graphs, so readers never need a lock.
    """

    def __init__(self, triples: Optional[Iterable[Triple]] = None):
        self._triples: Dict[Triple, None] = {}
        self._spo: _Index = {}
        self._pos: _Index = {}
        self._osp: _Index = {}
        self._frozen = False
        self._lock = threading.Lock()

        if triples is not None:
            for t in triples:
                self.insert(t)

    @classmethod
    def from_triples(cls, triples: Iterable[Triple], freeze: bool = False) -> "Graph":
        graph = cls(triples)
        return graph.freeze() if freeze else graph

    def insert(self, t: Triple) -> bool:
        """
        Add a triple.

        Args:
            t: Triple to add

        Returns:
            bool: True if the triple was not already present

        Raises:
            MalformedTriple: If t is not a Triple
            GraphFrozen: If the graph has been frozen
        """
        if not isinstance(t, Triple):
            raise MalformedTriple(f"not a triple: {t!r}")

        with self._lock:
            if self._frozen:
                raise GraphFrozen("graph is frozen")
            if t in self._triples:
                return False

            s, p, o = t.subject, t.predicate, t.object
            self._triples[t] = None
            self._spo.setdefault(s, {}).setdefault(p, {})[o] = None
            self._pos.setdefault(p, {}).setdefault(o, {})[s] = None
            self._osp.setdefault(o, {}).setdefault(s, {})[p] = None
            return True

    def match(
        self, s: Optional[Term] = None, p: Optional[Term] = None, o: Optional[Term] = None
    ) -> List[Triple]:
        """
        Return the triples agreeing with every concrete position.

        None is the wildcard.
        """
        if s is not None and p is not None and o is not None:
            t = _maybe_triple(s, p, o)
            return [t] if t is not None and t in self._triples else []

        if s is not None:
            by_p = self._spo.get(s, {})
            if p is not None:
                return [Triple(s, p, obj) for obj in by_p.get(p, {})]
            if o is not None:
                return [Triple(s, pred, o) for pred in self._osp.get(o, {}).get(s, {})]
            return [Triple(s, pred, obj) for pred, objs in by_p.items() for obj in objs]

        if p is not None:
            by_o = self._pos.get(p, {})
            if o is not None:
                return [Triple(subj, p, o) for subj in by_o.get(o, {})]
            return [Triple(subj, p, obj) for obj, subjs in by_o.items() for subj in subjs]

        if o is not None:
            return [
                Triple(subj, pred, o)
                for subj, preds in self._osp.get(o, {}).items()
                for pred in preds
            ]

        return list(self._triples)

    def count(self, s: Optional[Term] = None, p: Optional[Term] = None, o: Optional[Term] = None) -> int:
        """Number of triples matching a pattern."""
        return len(self.match(s, p, o))

    def freeze(self) -> "Graph":
        """Forbid further inserts. Returns the graph itself."""
        with self._lock:
            self._frozen = True
        return self

    @property
    def frozen(self) -> bool:
        return self._frozen

    def blank_nodes(self) -> List[BlankNode]:
        """Distinct blank nodes in first-appearance order."""
        seen: Dict[BlankNode, None] = {}
        for t in self._triples:
            for term in (t.subject, t.object):
                if isinstance(term, BlankNode):
                    seen[term] = None
        return list(seen)

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(list(self._triples))

    def __contains__(self, t: object) -> bool:
        return t in self._triples

    def __repr__(self) -> str:
        state = "frozen" if self._frozen else "mutable"
        return f"<Graph {len(self)} triples, {state}>"


def _maybe_triple(s: Term, p: Term, o: Term) -> Optional[Triple]:
    try:
        return Triple(s, p, o)
    except MalformedTriple:
        return None


def insert(graph: Graph, t: Triple) -> bool:
    return graph.insert(t)


def match(
    graph: Graph, s: Optional[Term] = None, p: Optional[Term] = None, o: Optional[Term] = None
) -> List[Triple]:
    return graph.match(s, p, o)


def union(*graphs: Graph) -> Graph:
    """
    Set union of graphs.

    Blank nodes are namespaced per source graph (label `g<i>x<label>`), so
    blank nodes from different sources never merge.
    """
    result = Graph()
    for index, g in enumerate(graphs):
        renamed: Dict[BlankNode, BlankNode] = {}

        def scoped(term: Term) -> Term:
            if isinstance(term, BlankNode):
                if term not in renamed:
                    renamed[term] = BlankNode(f"g{index}x{term.label}")
                return renamed[term]
            return term

        for t in g:
            result.insert(Triple(scoped(t.subject), t.predicate, scoped(t.object)))
    return result
