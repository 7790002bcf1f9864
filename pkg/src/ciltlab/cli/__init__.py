from pathlib import Path

import click
from phdkit.configlib import config
from rich.console import Console
from rich.table import Table

from ..app import DEFAULT_CONFIG_FILE, DEFAULT_ENV_FILE, App
from .commands import COMMANDS


def _existing(path: str | None) -> str | None:
    return path if path is not None and Path(path).is_file() else None


@click.group()
@click.option("--develop/--prod", help="Enable in-development mode.", default=False, hidden=True)
@click.option(
    "config_file",
    "--config",
    "-c",
    default=DEFAULT_CONFIG_FILE,
    show_default=True,
    type=click.Path(dir_okay=False),
)
@click.option(
    "env_file",
    "--env",
    "-e",
    default=DEFAULT_ENV_FILE,
    show_default=True,
    type=click.Path(dir_okay=False),
)
@click.pass_context
def main(ctx: click.Context, develop: bool, config_file: str, env_file: str) -> None:
    """Numerical experiments for compactified imaginary Liouville theory on the disk and annulus."""
    app = App()
    config[app].load(_existing(config_file), _existing(env_file))
    if develop:
        app.log_level = "DEBUG"
    ctx.obj = app
    ctx.call_on_close(app.close)


@main.command("ledger")
@click.option("--subcommand", default=None, help="Only runs of this subcommand.")
@click.pass_obj
def ledger_cmd(app: App, subcommand: str | None) -> None:
    """List the recorded runs."""
    table = Table(title="ciltlab runs")
    for column in ("id", "subcommand", "seed", "digest", "timestamp"):
        table.add_column(column)
    for row in app.ledger.get_runs(subcommand):
        table.add_row(str(row["id"]), row["subcommand"], str(row["seed"]), row["digest"][:16], row["timestamp"])
    Console().print(table)


for command in COMMANDS:
    main.add_command(command)

__all__ = ["main"]
