#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Benchmark

Runs each workbench query a fixed number of times against the federator,
timing every execution end to end at the client, and reports mean, sample
standard deviation and result count per query.
"""

import json
import logging
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import requests

from ..errors import RemoteError
from ..sparql.ast import Construct
from ..sparql.parser import parse_query
from ..sparql.results import RESULTS_JSON, parse_select_results
from ..utils.config import BenchConfig
from ..web.protocol import N_TRIPLES, SPARQL_QUERY

logger = logging.getLogger(__name__)

COLUMNS = ("Query", "Mean(s)", "Std", "Results")


@dataclass
class BenchRow:
    """
    Timings of one query.

    Attributes:
        name: Query name
        seconds: Wall-clock duration of each run
        counts: Result count of each run
        expected: Count from expected.json (None when absent)
        latency_target: Mean above which the row is flagged slow
    """

    name: str
    seconds: List[float] = field(default_factory=list)
    counts: List[int] = field(default_factory=list)
    expected: Optional[int] = None
    latency_target: float = 1.0

    @property
    def repetitions(self) -> int:
        return len(self.seconds)

    @property
    def mean(self) -> float:
        return statistics.mean(self.seconds) if self.seconds else 0.0

    @property
    def std(self) -> float:
        # sample deviation; 0 by convention for a single run
        return statistics.stdev(self.seconds) if len(self.seconds) > 1 else 0.0

    @property
    def count(self) -> int:
        return self.counts[0] if self.counts else 0

    @property
    def nondeterministic(self) -> bool:
        return len(set(self.counts)) > 1

    @property
    def mismatch(self) -> bool:
        return self.expected is None or any(c != self.expected for c in self.counts)

    @property
    def slow(self) -> bool:
        return self.mean > self.latency_target

    @property
    def flags(self) -> List[str]:
        flags = []
        if self.repetitions == 1:
            flags.append("n=1")
        if self.mismatch:
            flags.append(f"mismatch(expected {self.expected})")
        if self.nondeterministic:
            flags.append("nondeterministic")
        if self.slow:
            flags.append("slow")
        return flags

    def to_dict(self) -> dict:
        return {
            "query": self.name,
            "mean": self.mean,
            "std": self.std,
            "results": self.count,
            "repetitions": self.repetitions,
            "flags": self.flags,
        }


@dataclass
class BenchReport:
    rows: List[BenchRow] = field(default_factory=list)
    repetitions: int = 10

    @property
    def ok(self) -> bool:
        """True when every count matched the oracle on every run."""
        return all(not row.mismatch and not row.nondeterministic for row in self.rows)

    def _cells(self) -> List[List[str]]:
        return [
            [row.name, f"{row.mean:.3f}", f"{row.std:.3f}", str(row.count), " ".join(row.flags)]
            for row in self.rows
        ]

    def to_tsv(self) -> str:
        lines = ["\t".join(COLUMNS + ("Flags",))]
        lines.extend("\t".join(cells) for cells in self._cells())
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        """Aligned table, numbers right-aligned."""
        header = list(COLUMNS)
        cells = [c[:4] for c in self._cells()]
        widths = [max(len(r[i]) for r in [header] + cells) for i in range(len(header))]

        def line(values, flags=""):
            text = values[0].ljust(widths[0]) + "  " + "  ".join(
                v.rjust(w) for v, w in zip(values[1:], widths[1:])
            )
            return (text + "  " + flags).rstrip()

        out = [line(header), "-" * (sum(widths) + 2 * (len(widths) - 1))]
        out.extend(line(c, " ".join(row.flags)) for c, row in zip(cells, self.rows))
        return "\n".join(out) + "\n"


def _count(response_text: str, construct: bool) -> int:
    if construct:
        return sum(1 for line in response_text.splitlines() if line.strip())
    results = parse_select_results(response_text)
    if results.boolean is not None:
        return int(results.boolean)
    return len(results)


def run_query(url: str, text: str, session: requests.Session, timeout: float = 60.0):
    """
    Execute one query against the federator.

    Returns:
        (seconds, result count)

    Raises:
        QuerySyntaxError: If the query text does not parse
        RemoteError: On a transport failure or a non-2xx answer
        MalformedResults: If a SELECT or ASK answer is not valid results JSON
    """
    construct = isinstance(parse_query(text).kind, Construct)
    accept = N_TRIPLES if construct else RESULTS_JSON
    started = time.perf_counter()
    try:
        response = session.post(
            url,
            data=text.encode("utf-8"),
            headers={"Content-Type": SPARQL_QUERY, "Accept": accept},
            timeout=timeout,
        )
        body = response.text
    except requests.Timeout:
        raise RemoteError(url, reason="timeout")
    except requests.RequestException as e:
        raise RemoteError(url, reason=f"unreachable: {type(e).__name__}")
    elapsed = time.perf_counter() - started
    if not 200 <= response.status_code < 300:
        raise RemoteError(url, status=response.status_code)
    return elapsed, _count(body, construct)


def bench_run(
    cfg: BenchConfig,
    repetitions: Optional[int] = None,
    federator_url: Optional[str] = None,
    session: Optional[requests.Session] = None,
) -> BenchReport:
    """
    Run the benchmark, strictly sequentially.

    Args:
        cfg: Benchmark definition
        repetitions: Timed runs per query (default: cfg.repetitions)
        federator_url: Overrides cfg.federator (used when the deployment runs in-process)
        session: Optional requests session

    Returns:
        BenchReport: Per-query timings; `ok` is False on any count mismatch

    Raises:
        QuerySyntaxError: If a query file does not parse
        RemoteError: On any transport failure
        MalformedResults: If the federator answers with invalid results JSON
    """
    repetitions = repetitions or cfg.repetitions
    if repetitions < 1:
        raise ValueError("repetitions must be at least 1")
    url = federator_url or cfg.federator
    expected = json.loads(Path(cfg.expected).read_text(encoding="utf-8"))
    session = session or requests.Session()

    report = BenchReport(repetitions=repetitions)
    for query in cfg.queries:
        text = Path(query.file).read_text(encoding="utf-8")
        row = BenchRow(
            name=query.name,
            expected=expected.get(query.name, {}).get("count"),
            latency_target=cfg.latency_target,
        )
        for _ in range(repetitions):
            seconds, count = run_query(url, text, session)
            row.seconds.append(seconds)
            row.counts.append(count)
        logger.info(
            f"{query.name}: mean={row.mean:.3f}s std={row.std:.3f}s results={row.count}",
            extra={"query": query.name, "mean": row.mean, "std": row.std, "results": row.count},
        )
        if row.mismatch:
            logger.error(f"{query.name}: counts {sorted(set(row.counts))} != expected {row.expected}")
        report.rows.append(row)
    return report
