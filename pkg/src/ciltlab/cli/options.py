"""Option parsing shared by the subcommands.

Lists on the command line are comma-separated; in an experiment file they
may also be TOML arrays. An experiment file given with ``--config`` becomes
the command's ``default_map``, so explicit flags always win.
"""

from __future__ import annotations

import tomllib
from pathlib import Path
from typing import Any, Callable

import click

from ..params import ChargeConfig, ParamSet, validate_params


def _items(text: str | None) -> list[str]:
    if text is None:
        return []
    return [t.strip() for t in str(text).split(",") if t.strip()]


def parse_floats(text: str | None) -> list[float]:
    try:
        return [float(t) for t in _items(text)]
    except ValueError:
        raise click.BadParameter(f"expected a comma-separated list of reals, got {text!r}") from None


def parse_ints(text: str | None) -> list[int]:
    try:
        return [int(t) for t in _items(text)]
    except ValueError:
        raise click.BadParameter(f"expected a comma-separated list of integers, got {text!r}") from None


def parse_complex(text: str | None) -> complex:
    if text is None or str(text).strip() == "":
        return 0j
    try:
        return complex(str(text).replace(" ", ""))
    except ValueError:
        raise click.BadParameter(f"expected a complex number such as 0.5+0.2j, got {text!r}") from None


def parse_complexes(text: str | None) -> list[complex]:
    return [parse_complex(t) for t in _items(text)]


def _flatten(value: Any) -> Any:
    if isinstance(value, list):
        return ",".join(str(v) for v in value)
    return value


def load_experiment(ctx: click.Context, param: click.Parameter, value: str | None) -> None:
    """Eager callback: feed the ``[experiment]`` table of a TOML file to ``default_map``."""
    if value is None:
        return
    path = Path(value)
    try:
        with path.open("rb") as f:
            data = tomllib.load(f)
    except (OSError, tomllib.TOMLDecodeError) as err:
        raise click.BadParameter(f"cannot read experiment file {value}: {err}", ctx=ctx, param=param) from None
    table = data.get("experiment", data)
    if not isinstance(table, dict):
        raise click.BadParameter("the [experiment] table must hold key = value pairs", ctx=ctx, param=param)
    defaults = dict(ctx.default_map or {})
    defaults.update({str(k).replace("-", "_"): _flatten(v) for k, v in table.items()})
    ctx.default_map = defaults


def run_options(fn: Callable) -> Callable:
    """Options every experiment accepts."""
    decorators = [
        click.option(
            "--config",
            type=click.Path(exists=True, dir_okay=False),
            callback=load_experiment,
            is_eager=True,
            expose_value=False,
            help="TOML experiment file with an [experiment] table.",
        ),
        click.option("--seed", type=int, default=None, help="Master seed (default: run.seed)."),
        click.option("--n-samples", type=int, default=None, help="Monte Carlo samples (default: run.n_samples)."),
        click.option("--threads", type=int, default=None, help="Worker cap (default: run.threads or CILTLAB_THREADS)."),
        click.option("--chunk-size", type=int, default=None, help="Samples per chunk (default: run.chunk_size)."),
        click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the JSON report here."),
        click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None, help="Write the term table here."),
        click.option("--timing/--no-timing", default=False, help="Add wall time to the report."),
        click.option("--verify/--no-verify", default=False, help="Rerun and compare the report digest."),
    ]
    for decorator in reversed(decorators):
        fn = decorator(fn)
    return fn


def param_options(fn: Callable) -> Callable:
    decorators = [
        click.option("--beta", type=float, required=True, help="Coupling in (0, sqrt 2)."),
        click.option("--radius", type=float, required=True, help="Compactification radius R."),
        click.option("--mu", default="0", help="Bulk cosmological constant (complex)."),
        click.option("--mu-boundary", default="0", help="Boundary cosmological constant (complex)."),
        click.option("--corners/--no-corners", default=False, help="The surface has corners."),
    ]
    for decorator in reversed(decorators):
        fn = decorator(fn)
    return fn


def charge_options(fn: Callable) -> Callable:
    decorators = [
        click.option("--alpha", default="", help="Bulk charges, comma-separated."),
        click.option("--positions", default=None, help="Bulk positions, e.g. 0.5,-0.5+0.1j."),
        click.option("--windings", default=None, help="Magnetic charges m, comma-separated."),
        click.option("--tangents", default=None, help="Tangent angles at the bulk insertions."),
        click.option("--eta", default="", help="Boundary charges, comma-separated."),
        click.option("--boundary-positions", default=None, help="Boundary positions on |z| = 1."),
        click.option("--degree", type=int, default=0, help="Degree n of the test functional."),
    ]
    for decorator in reversed(decorators):
        fn = decorator(fn)
    return fn


def build_params(beta: float, radius: float, mu: str, mu_boundary: str, corners: bool) -> ParamSet:
    return validate_params(beta, radius, parse_complex(mu), parse_complex(mu_boundary), has_corners=corners)


def build_charges(
    alpha: str,
    positions: str | None,
    windings: str | None,
    tangents: str | None,
    eta: str,
    boundary_positions: str | None,
    degree: int,
) -> ChargeConfig:
    return ChargeConfig.from_lists(
        alphas=parse_floats(alpha),
        positions=parse_complexes(positions) if positions else None,
        windings=parse_ints(windings) if windings else None,
        tangents=parse_floats(tangents) if tangents else None,
        etas=parse_floats(eta),
        boundary_positions=parse_complexes(boundary_positions) if boundary_positions else None,
        extra_degree=degree,
    )


def pop_charge_args(kwargs: dict) -> dict:
    return {k: kwargs.pop(k) for k in ("alpha", "positions", "windings", "tangents", "eta", "boundary_positions", "degree")}


def pop_param_args(kwargs: dict) -> dict:
    return {k: kwargs.pop(k) for k in ("beta", "radius", "mu", "mu_boundary", "corners")}
