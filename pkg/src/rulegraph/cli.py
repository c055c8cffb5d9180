"""Operator CLI: validate statement files, query them, print metrics,
emit expressivity tables, simulate a conversation, and serve the API.

Exit codes: 0 success, 1 domain failure (invalid statement, no answer),
2 usage or parse error.
"""

from __future__ import annotations

import json
import socket
import sys
from pathlib import Path
from typing import IO, Iterable

import click

from . import metrics
from .matching import (
    Answer,
    InvalidQuery,
    MatchResult,
    MissingParameter,
    NoRule,
    Query,
    extract_query,
    match,
)
from .model import DocumentError, Statement, build_statement, canonical
from .store import StatementStore, StoreError

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2


def _load_statement(path: str) -> Statement:
    """Read and build a statement file, exiting per the CLI contract."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        click.echo(f"error: cannot parse {path}: {exc}", err=True)
        sys.exit(EXIT_USAGE)
    try:
        built = build_statement(doc)
    except DocumentError as exc:
        click.echo(f"error: malformed document: {exc}", err=True)
        sys.exit(EXIT_USAGE)
    if isinstance(built, Statement):
        return built
    for violation in built.violations:
        click.echo(f"{violation.code.value}: {violation.message}")
    sys.exit(EXIT_DOMAIN)


@click.group()
def main() -> None:
    """Knowledge service for parameterized contract statements."""


@main.command()
@click.argument("file", type=click.Path())
def validate(file: str) -> None:
    """Validate a statement file; exit 0 when it is clean."""
    stmt = _load_statement(file)
    click.echo(f"valid: {stmt.id} ({len(stmt.parameters)} parameters, {len(stmt.edges)} rules)")


def _format_result(result: MatchResult) -> str:
    if isinstance(result, Answer):
        return f"{result.http_status} ANSWER {result.label}"
    if isinstance(result, MissingParameter):
        return f"{result.http_status} MISSING {result.parameter}"
    if isinstance(result, InvalidQuery):
        return f"{result.http_status} INVALID {result.reason.value}"
    return f"{result.http_status} NO_RULE false"


@main.command()
@click.argument("file", type=click.Path())
@click.option(
    "--param",
    "params",
    multiple=True,
    metavar="NAME=VALUE",
    help="Parameter-value pair; repeat for several.",
)
def query(file: str, params: tuple[str, ...]) -> None:
    """Run one query against a statement file."""
    stmt = _load_statement(file)
    pairs = []
    for raw in params:
        name, sep, value = raw.partition("=")
        if not sep or not name:
            click.echo(f"error: --param needs NAME=VALUE, got {raw!r}", err=True)
            sys.exit(EXIT_USAGE)
        pairs.append((name, value))
    result = match(stmt, Query.from_items(pairs))
    click.echo(_format_result(result))
    if isinstance(result, Answer):
        sys.exit(EXIT_OK)
    if isinstance(result, InvalidQuery):
        sys.exit(EXIT_USAGE)
    sys.exit(EXIT_DOMAIN)


@main.command("metrics")
@click.argument("file", type=click.Path())
def metrics_command(file: str) -> None:
    """Print sigma, z, t, and the coverage ratio of a statement file."""
    stmt = _load_statement(file)
    m = metrics.statement_metrics(stmt)
    sigma_text = "[" + ",".join(str(c) for c in m.sigma) + "]"
    click.echo(f"sigma={sigma_text} z={m.z} t={m.t} coverage={m.coverage_ratio}")


@main.command()
@click.option("--params", "param_count", type=int, default=2, show_default=True)
@click.option(
    "--vertices",
    default="2",
    show_default=True,
    metavar="V1[,V2,...]",
    help="Vertices per parameter; several values emit one z column each.",
)
@click.option("--responses", type=int, default=3, show_default=True)
@click.option("--max-k", type=int, default=10, show_default=True)
@click.option(
    "--sigma",
    "sigma_text",
    default=None,
    metavar="C1,C2,...",
    help="Skip the scenario and print z for these keyword totals.",
)
def scenario(
    param_count: int, vertices: str, responses: int, max_k: int, sigma_text: str | None
) -> None:
    """Emit a CSV table of statement expressivity versus keyword count."""
    if sigma_text is not None:
        try:
            counts = [int(c) for c in sigma_text.split(",") if c.strip()]
        except ValueError:
            click.echo(f"error: --sigma needs integers, got {sigma_text!r}", err=True)
            sys.exit(EXIT_USAGE)
        click.echo(str(metrics.expressivity_from_sigma(counts)))
        return
    try:
        vertex_counts = [int(v) for v in vertices.split(",") if v.strip()]
        if not vertex_counts:
            raise ValueError("empty")
    except ValueError:
        click.echo(f"error: --vertices needs integers, got {vertices!r}", err=True)
        sys.exit(EXIT_USAGE)
    try:
        tables = [
            metrics.expressivity_scenario(param_count, v, responses, range(1, max_k + 1))
            for v in vertex_counts
        ]
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USAGE)
    if len(tables) == 1:
        click.echo("k,z")
        for k, z in tables[0]:
            click.echo(f"{k},{z}")
    else:
        click.echo("k," + ",".join(f"z_v{v}" for v in vertex_counts))
        for i, (k, _) in enumerate(tables[0]):
            click.echo(f"{k}," + ",".join(str(table[i][1]) for table in tables))


def run_chat(stmt: Statement, lines: Iterable[str], out: IO[str]) -> None:
    """Drive the prompt-and-merge conversation loop over scripted input.

    Each input line is either a fresh question or the reply to a pending
    missing-parameter prompt. Replies are scanned for keywords first; an
    unrecognized reply counts as the literal value for the prompted
    parameter.
    """
    pending = Query()
    prompted: str | None = None
    for raw in lines:
        line = raw.rstrip("\n")
        out.write(f"USER: {line}\n")
        if prompted is None:
            pending = extract_query(stmt, line)
        else:
            already = {canonical(name) for name in pending.names()}
            for name, value in extract_query(stmt, line).pairs:
                if canonical(name) not in already:
                    pending = pending.with_pair(name, value)
            supplied = {canonical(name) for name in pending.names()}
            if canonical(prompted) not in supplied:
                pending = pending.with_pair(prompted, line.strip())
        result = match(stmt, pending)
        if isinstance(result, MissingParameter):
            prompted = result.parameter
            out.write(f"BOT: {result.parameter}?\n")
            continue
        if isinstance(result, Answer):
            out.write(f"BOT: {result.label}\n")
        elif isinstance(result, NoRule):
            out.write("BOT: no rule applies\n")
        else:
            out.write(f"BOT: invalid query ({result.reason.value})\n")
        pending = Query()
        prompted = None


@main.command()
@click.argument("file", type=click.Path())
def chat(file: str) -> None:
    """Simulate the conversation loop on stdin (one utterance per line)."""
    stmt = _load_statement(file)
    run_chat(stmt, sys.stdin, sys.stdout)


@main.command()
@click.option("--addr", default="127.0.0.1:8080", show_default=True, metavar="HOST:PORT")
@click.option(
    "--store",
    "store_dir",
    required=True,
    type=click.Path(),
    metavar="DIR",
    help="Directory holding statement documents.",
)
@click.option("--cors-origin", default="*", show_default=True)
def serve(addr: str, store_dir: str, cors_origin: str) -> None:
    """Serve the knowledge API over HTTP."""
    import uvicorn

    from .api import create_app

    host, sep, port_text = addr.partition(":")
    if not sep or not host or not port_text.isdigit():
        click.echo(f"error: --addr needs HOST:PORT, got {addr!r}", err=True)
        sys.exit(EXIT_USAGE)
    port = int(port_text)
    try:
        store = StatementStore(store_dir)
    except (StoreError, OSError, json.JSONDecodeError, DocumentError) as exc:
        click.echo(f"error: cannot open store: {exc}", err=True)
        sys.exit(EXIT_DOMAIN)
    try:
        probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, port))
        probe.close()
    except OSError as exc:
        click.echo(f"error: cannot bind {addr}: {exc}", err=True)
        sys.exit(EXIT_DOMAIN)
    app = create_app(store, cors_origin=cors_origin)
    uvicorn.run(app, host=host, port=port, log_level="info")


if __name__ == "__main__":
    main()
