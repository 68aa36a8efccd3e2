"""Main CLI application: registers all subcommands and global options."""

from __future__ import annotations

from pathlib import Path

import typer
from rich.console import Console

from popuc.config import load_config
from popuc.logging import setup_logging

app = typer.Typer(
    name="popuc",
    help="popuc - paraorthogonal polynomials, their ODEs and electrostatic equilibria.",
    no_args_is_help=True,
    pretty_exceptions_enable=False,
)

_console = Console(stderr=True)


class _GlobalState:
    """Shared state set by the top-level callback, consumed by subcommands."""

    config_path: Path | None = None
    verbose: bool = False
    quiet: bool = False


state = _GlobalState()


@app.callback()
def main(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Show DEBUG-level logs."),  # noqa: B008
    quiet: bool = typer.Option(False, "--quiet", "-q", help="Suppress logs below WARNING."),  # noqa: B008
    config: Path | None = typer.Option(None, "--config", "-c", help="Path to config.json."),  # noqa: B008
) -> None:
    """popuc - paraorthogonal polynomials, their ODEs and electrostatic equilibria."""
    state.verbose = verbose
    state.quiet = quiet
    state.config_path = config
    try:
        logging_config = load_config(config).logging
        log_dir, file_logging = logging_config.log_dir.expanduser(), logging_config.file_logging
    except ValueError:
        # a broken config file is reported by the subcommand as error JSON
        log_dir, file_logging = None, False
    setup_logging(verbose=verbose, quiet=quiet, log_dir=log_dir, file_logging=file_logging)


# Register subcommands (imported at the bottom)
from popuc.cli.compute_cmd import (  # noqa: E402
    equilibrium_command,
    example_command,
    gdj_command,
    ode_command,
    plot_data_command,
    system_command,
    verify_command,
    zeros_command,
)
from popuc.cli.config_cmd import config_app  # noqa: E402

app.command(name="zeros", help="Zeros of the paraorthogonal polynomial Phi_n(z; beta).")(
    zeros_command
)
app.command(name="gdj", help="The rational functions G_n, D_n, J_n on one region.")(gdj_command)
app.command(name="ode", help="Coefficients p, q of the second-order ODE.")(ode_command)
app.command(name="system", help="The 2x2 first-order system for Phi_n(.; beta), Phi_n(.; tau).")(
    system_command
)
app.command(name="verify", help="Residual reports for the ODE and the derivative identity.")(
    verify_command
)
app.command(name="equilibrium", help="Electric field generators and the equilibrium residual.")(
    equilibrium_command
)
app.command(name="example", help="Reproduce a worked closed-form example and check it.")(
    example_command
)
app.command(name="plot-data", help="Data behind one of the four equilibrium pictures.")(
    plot_data_command
)
app.add_typer(config_app, name="config", help="View configuration.")
