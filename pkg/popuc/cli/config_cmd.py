"""popuc config - view and edit configuration.

Subcommands:
  popuc config show   Print the effective config (file + POPUC_ env overrides)
  popuc config set    Update one value by dot-path and write the file
  popuc config path   Print the config file path
"""

from __future__ import annotations

import json
from typing import Any

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.panel import Panel
from rich.syntax import Syntax

from popuc.config import PopucConfig, get_config_path, load_config, save_config

console = Console()
config_app = typer.Typer(no_args_is_help=True)


@config_app.command(name="show")
def config_show(
    raw: bool = typer.Option(False, "--json", help="Print plain JSON without a panel."),  # noqa: B008
) -> None:
    """Print current configuration."""
    from popuc.cli.app import state

    config = load_config(state.config_path)
    formatted = json.dumps(config.model_dump(mode="json"), indent=2, ensure_ascii=False)
    if raw:
        typer.echo(formatted)
        return

    console.print(
        Panel(
            Syntax(formatted, "json", theme="monokai"),
            title="[bold cyan]popuc Config[/bold cyan]",
            subtitle=f"[dim]{state.config_path or get_config_path()}[/dim]",
            expand=False,
        )
    )


@config_app.command(name="set")
def config_set(
    key: str = typer.Argument(help="Dot-separated config path (e.g. verification.samples)."),  # noqa: B008
    value: str = typer.Argument(help="New value to set."),  # noqa: B008
) -> None:
    """Update a configuration value by dot-path."""
    from popuc.cli.app import state

    data = load_config(state.config_path).model_dump(mode="json")

    *parents, final_key = key.split(".")
    target = data
    for part in parents:
        if not isinstance(target.get(part), dict):
            console.print(f"[red]Error: Invalid config path '{key}'. '{part}' not found.[/red]")
            raise typer.Exit(1)
        target = target[part]

    if final_key not in target or isinstance(target[final_key], dict):
        console.print(f"[red]Error: Invalid config path '{key}'. '{final_key}' not found.[/red]")
        raise typer.Exit(1)

    try:
        target[final_key] = _coerce_value(value, target[final_key])
        updated = PopucConfig(**data)
    except (ValueError, ValidationError) as exc:
        console.print(f"[red]Validation error: {exc}[/red]")
        raise typer.Exit(1) from exc

    path = save_config(updated, state.config_path)
    console.print(f"[green]Updated[/green] {key} = {value} in {path}")


@config_app.command(name="path")
def config_path() -> None:
    """Print the config file path."""
    from popuc.cli.app import state

    typer.echo(str(state.config_path or get_config_path()))


def _coerce_value(new: str, old: Any) -> Any:
    """Coerce a string value to match the type of the existing value."""
    if isinstance(old, bool):
        return new.lower() in ("true", "1", "yes")
    if isinstance(old, int):
        return int(new)
    if isinstance(old, float):
        return float(new)
    return new
