"""Running an experiment and writing its report.

A report is a JSON document with sorted keys. Its canonical part (inputs,
seed, sample count, version and result) determines the digest that the
ledger stores; wall time only enters on request, under ``timing``.
"""

from __future__ import annotations

import csv
import json
import math
import sys
import time
from dataclasses import dataclass
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import Any, Callable

import click
import numpy as np
from rich.console import Console
from rich.table import Table

from ..app import App
from ..errors import ConvergenceError, ValidationError
from ..ledger import canonical_json, digest
from ..montecarlo import DEFAULT_CHUNK_SIZE, McEstimate

EXIT_VALIDATION = 2
EXIT_CONVERGENCE = 3
CSV_COLUMNS = ("term_id", "value_re", "value_im", "stderr", "n_samples")


def library_version() -> str:
    try:
        return version("ciltlab")
    except PackageNotFoundError:
        return "unknown"


@dataclass(frozen=True)
class RunSettings:
    seed: int
    n_samples: int
    threads: int | None
    chunk_size: int


@dataclass(frozen=True)
class Outcome:
    """What a subcommand computed: the result payload and an optional term table."""

    result: dict[str, Any]
    table: list[dict[str, Any]] | None = None


def jsonable(value: Any) -> Any:
    """Plain JSON types; complex numbers become [re, im], McEstimates their dicts."""
    match value:
        case McEstimate():
            return jsonable(value.to_dict())
        case bool() | str() | None:
            return value
        case int() | np.integer():
            return int(value)
        case float() | np.floating():
            x = float(value)
            return x if math.isfinite(x) else repr(x)
        case complex() | np.complexfloating():
            return [jsonable(complex(value).real), jsonable(complex(value).imag)]
        case dict():
            return {str(k): jsonable(v) for k, v in value.items()}
        case list() | tuple() | frozenset() | set():
            items = [jsonable(v) for v in value]
            return sorted(items, key=canonical_json) if isinstance(value, (set, frozenset)) else items
        case np.ndarray():
            return jsonable(value.tolist())
    raise TypeError(f"cannot serialize {type(value).__name__} in a report")


def resolve_settings(app: App, seed: int | None, n_samples: int | None, threads: int | None, chunk_size: int | None) -> RunSettings:
    return RunSettings(
        seed=int(app.seed) if seed is None else seed,
        n_samples=int(app.n_samples) if n_samples is None else n_samples,
        threads=app.worker_cap if threads is None else (threads if threads > 0 else None),
        chunk_size=int(app.chunk_size or DEFAULT_CHUNK_SIZE) if chunk_size is None else chunk_size,
    )


def build_report(subcommand: str, inputs: dict[str, Any], settings: RunSettings, outcome: Outcome) -> dict[str, Any]:
    report = {
        "subcommand": subcommand,
        "inputs": jsonable(inputs),
        "seed": settings.seed,
        "n_samples": settings.n_samples,
        "version": library_version(),
        "result": jsonable(outcome.result),
    }
    if outcome.table is not None:
        report["table"] = jsonable(outcome.table)
    report["digest"] = digest(report)
    return report


def write_table(rows: list[dict[str, Any]], path: str) -> Path:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS, extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: jsonable(row.get(k)) for k in CSV_COLUMNS})
    return out


def print_summary(subcommand: str, report: dict[str, Any], console: Console) -> None:
    table = Table(title=f"ciltlab {subcommand}", show_header=True)
    table.add_column("quantity")
    table.add_column("value")
    for key, value in sorted(report["result"].items()):
        if isinstance(value, (dict, list)) and len(canonical_json(value)) > 60:
            value = f"<{type(value).__name__} of {len(value)}>"
        table.add_row(key, str(value))
    table.add_row("seed", str(report["seed"]))
    table.add_row("digest", report["digest"][:16])
    console.print(table)


def run_experiment(
    ctx: click.Context,
    subcommand: str,
    inputs: dict[str, Any],
    compute: Callable[[RunSettings], Outcome],
    seed: int | None,
    n_samples: int | None,
    threads: int | None,
    chunk_size: int | None,
    out: str | None,
    csv_path: str | None,
    timing: bool,
    verify: bool,
) -> dict[str, Any]:
    """Compute, report and record one experiment; exits 2 or 3 on library errors."""
    app: App = ctx.obj
    logger = app.logger
    console = Console(stderr=True)
    settings = resolve_settings(app, seed, n_samples, threads, chunk_size)
    started = time.perf_counter()
    try:
        outcome = compute(settings)
        report = build_report(subcommand, inputs, settings, outcome)
        if verify:
            again = build_report(subcommand, inputs, settings, compute(settings))
            if again["digest"] != report["digest"]:
                raise click.ClickException(f"rerun digest {again['digest'][:16]} differs from {report['digest'][:16]}")
    except ValidationError as err:
        logger.error("Invalid input", {"subcommand": subcommand, "error": str(err)})
        click.echo(f"error: {err}", err=True)
        ctx.exit(EXIT_VALIDATION)
    except ConvergenceError as err:
        logger.error("Numerical failure", {"subcommand": subcommand, "error": str(err)})
        click.echo(f"error: {err}", err=True)
        ctx.exit(EXIT_CONVERGENCE)
    elapsed = time.perf_counter() - started

    if app.store_enabled:
        previous = app.ledger.last_digest(subcommand, report["inputs"])
        if verify and previous is not None and previous != report["digest"]:
            click.echo(f"warning: digest differs from the recorded run {previous[:16]}", err=True)
        app.ledger.store_run(subcommand, report["inputs"], settings.seed, report["digest"])
    written = dict(report)
    if timing:
        written["timing"] = {"wall_seconds": elapsed}
    text = json.dumps(written, sort_keys=True, indent=2)
    if out is None:
        click.echo(text)
    else:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text + "\n")
    if csv_path is not None and outcome.table is not None:
        write_table(outcome.table, csv_path)
    if out is not None or not sys.stdout.isatty():
        print_summary(subcommand, report, console)
    logger.info("Run finished", {"subcommand": subcommand, "digest": report["digest"][:16], "seconds": round(elapsed, 3)})
    return report
