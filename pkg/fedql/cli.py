#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
fedql command line

    fedql serve --config deploy.json
    fedql gen-fixtures --seed 42 --genes 200 --interactions 500 --out fixtures/
    fedql query --endpoint URL --file q.rq [--accept TYPE]
    fedql bench --config bench.json --repeat 10 [--cache]

Exit codes: 0 success, 1 usage, 2 verification mismatch, 3 transport.
"""

import logging
import sys
import threading
from pathlib import Path

import click
import requests

from . import __version__
from .errors import FedqlError, RemoteError
from .sparql.results import RESULTS_JSON
from .utils.config import BenchConfig, load_json_config
from .utils.jsonlog import configure_logging
from .web.protocol import SPARQL_QUERY
from .workbench.bench import bench_run
from .workbench.fixtures import gen_fixtures
from .workbench.runner import WorkbenchRunner

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MISMATCH = 2
EXIT_TRANSPORT = 3


def _exit_code(error: FedqlError) -> int:
    """Client errors (ours or the remote's 4xx) exit with 1, everything else with 3."""
    status = error.status if isinstance(error, RemoteError) and error.status is not None else error.http_status
    return EXIT_USAGE if 400 <= status < 500 else EXIT_TRANSPORT


@click.group()
@click.version_option(__version__, prog_name="fedql")
@click.option("--log-level", default=None, help="Log level (default: $FEDQL_LOG_LEVEL or INFO)")
@click.option("--log-file", default=None, type=click.Path(dir_okay=False), help="Also write JSON-lines logs here")
def cli(log_level, log_file):
    """Federated SPARQL over micro-services and native endpoints."""
    configure_logging(log_level, log_file)


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--ephemeral", is_flag=True, help="Bind ephemeral ports instead of the configured ones")
@click.pass_context
def serve(ctx, config_path, ephemeral):
    """Start every component declared in a deploy.json."""
    try:
        runner = WorkbenchRunner(config_path, ephemeral=ephemeral).start()
    except (ValueError, TypeError, FileNotFoundError) as e:
        click.echo(f"Invalid deployment: {e}", err=True)
        ctx.exit(EXIT_USAGE)
    except OSError as e:
        click.echo(f"Could not start servers: {e}", err=True)
        ctx.exit(EXIT_TRANSPORT)

    for name, server in runner.servers.items():
        click.echo(f"{name}\t{server.url}")
    if "federator" in runner.servers:
        click.echo(f"federator endpoint\t{runner.federator_url}")
    try:
        threading.Event().wait()
    except KeyboardInterrupt:
        click.echo("Shutting down")
    finally:
        runner.stop()


@cli.command("gen-fixtures")
@click.option("--seed", default=42, show_default=True, type=int)
@click.option("--genes", default=200, show_default=True, type=click.IntRange(min=2))
@click.option("--interactions", default=500, show_default=True, type=click.IntRange(min=0))
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
def gen_fixtures_command(seed, genes, interactions, out_dir):
    """Write a deterministic workbench directory."""
    fixtures = gen_fixtures(seed, genes, interactions, out_dir)
    click.echo(
        f"Wrote {out_dir}: {len(fixtures.genes)} genes, {len(fixtures.orthologs)} ortholog pairs, "
        f"{len(fixtures.interactions)} interactions"
    )
    for name, expected in fixtures.expected.items():
        click.echo(f"  {name}: {expected['count']} expected results")


@cli.command()
@click.option("--endpoint", required=True, help="SPARQL endpoint URL")
@click.option("--file", "query_file", required=True, type=click.File("r", encoding="utf-8"))
@click.option("--accept", default=None, help=f"Accept header (default: {RESULTS_JSON})")
@click.option("--timeout", default=60.0, show_default=True, type=float)
@click.pass_context
def query(ctx, endpoint, query_file, accept, timeout):
    """Send a query file to an endpoint and print the response body."""
    headers = {"Content-Type": SPARQL_QUERY, "Accept": accept or f"{RESULTS_JSON}, application/n-triples;q=0.9"}
    try:
        response = requests.post(endpoint, data=query_file.read().encode("utf-8"), headers=headers, timeout=timeout)
    except requests.RequestException as e:
        click.echo(f"Transport failure: {e}", err=True)
        ctx.exit(EXIT_TRANSPORT)

    if not 200 <= response.status_code < 300:
        click.echo(response.text, err=True)
        ctx.exit(EXIT_USAGE if 400 <= response.status_code < 500 else EXIT_TRANSPORT)
    click.echo(response.text, nl=not response.text.endswith("\n"))


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--repeat", default=None, type=click.IntRange(min=1), help="Runs per query (default: from config)")
@click.option("--cache/--no-cache", default=False, show_default=True, help="Keep micro-service caching enabled")
@click.option("--tsv", "tsv_path", default=None, type=click.Path(dir_okay=False), help="Also write the report as TSV")
@click.pass_context
def bench(ctx, config_path, repeat, cache, tsv_path):
    """Time the workbench queries and verify their result counts."""
    try:
        cfg = load_json_config(config_path, BenchConfig)
    except (ValueError, TypeError, FileNotFoundError) as e:
        click.echo(f"Invalid bench configuration: {e}", err=True)
        ctx.exit(EXIT_USAGE)

    runner = None
    try:
        if cfg.deployment:
            runner = WorkbenchRunner(cfg.deployment, ephemeral=True, cache=cache).start()
            url = runner.federator_url
        else:
            if cache:
                logger.warning("--cache has no effect on an external deployment")
            url = cfg.federator
        report = bench_run(cfg, repeat, federator_url=url)
    except FedqlError as e:
        click.echo(f"{type(e).__name__}: {e.detail}", err=True)
        ctx.exit(_exit_code(e))
    except OSError as e:
        click.echo(f"Transport failure: {e}", err=True)
        ctx.exit(EXIT_TRANSPORT)
    finally:
        if runner is not None:
            runner.stop()

    click.echo(report.to_text(), nl=False)
    if tsv_path:
        Path(tsv_path).write_text(report.to_tsv(), encoding="utf-8")
    if not report.ok:
        click.echo("Result counts do not match expected.json", err=True)
        ctx.exit(EXIT_MISMATCH)


def main(args=None):
    """Console entry point; maps click usage errors to exit code 1."""
    try:
        rv = cli.main(args=args, prog_name="fedql", standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("Aborted!", err=True)
        sys.exit(EXIT_USAGE)
    except click.ClickException as e:
        e.show()
        sys.exit(EXIT_USAGE)
    sys.exit(rv if isinstance(rv, int) else EXIT_OK)


if __name__ == "__main__":
    main()
