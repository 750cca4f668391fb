#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Fragment cache

TTL cache of mapped fragments keyed by service name and call arguments.
Expired entries are evicted lazily on lookup.
"""

import threading
import time
from dataclasses import dataclass
from typing import Callable, Dict, Mapping, Optional
from urllib.parse import quote

from ..core.graph import Graph


def cache_key(name: str, params: Mapping[str, str]) -> str:
    """Canonical key: name + '?' + params sorted by name, percent-encoded."""
    pairs = "&".join(f"{quote(k, safe='')}={quote(str(params[k]), safe='')}" for k in sorted(params))
    return f"{name}?{pairs}"


@dataclass
class CacheEntry:
    key: str
    graph: Graph
    expires_at: float


class FragmentCache:
    """Thread-safe TTL cache; a ttl of 0 stores nothing."""

    def __init__(self, clock: Callable[[], float] = time.monotonic):
        self._entries: Dict[str, CacheEntry] = {}
        self._lock = threading.Lock()
        self._clock = clock

    def get(self, key: str) -> Optional[Graph]:
        """Return the cached graph, or None on a miss or expiry."""
        with self._lock:
            entry = self._entries.get(key)
            if entry is None:
                return None
            if self._clock() >= entry.expires_at:
                del self._entries[key]
                return None
            return entry.graph

    def put(self, key: str, graph: Graph, ttl: float) -> bool:
        """Store a graph for ttl seconds. Returns False when ttl disables caching."""
        if ttl <= 0:
            return False
        with self._lock:
            self._entries[key] = CacheEntry(key, graph.freeze(), self._clock() + ttl)
        return True

    def clear(self) -> None:
        with self._lock:
            self._entries.clear()

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)
