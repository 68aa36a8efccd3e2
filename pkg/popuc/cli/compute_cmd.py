"""popuc computation commands.

Subcommands:
  popuc zeros        Zeros of Phi_n(z; beta)
  popuc gdj          G_n, D_n, J_n as rational functions
  popuc ode          p and q of y'' + p y' + q y = 0
  popuc system       The first-order system for a (beta, tau) pair
  popuc verify       ODE and derivative-identity residual reports
  popuc equilibrium  Generators for a point set or a measure
  popuc example      Worked closed-form examples
  popuc plot-data    Rows behind the four equilibrium pictures

Machine output goes to stdout (or --out); the human summary goes to stderr.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any

import typer
from rich.console import Console
from rich.markup import escape

from popuc.cauchy import Region
from popuc.cli.io import render_json
from popuc.cli.runner import CSV_COMMANDS, Subcommand, load_points, make_run_config, run
from popuc.config import PopucConfig, load_config
from popuc.errors import InvalidConfiguration, PopucError, error_payload
from popuc.opuc.measures import parse_measure
from popuc.utils.complexio import parse_complex

console = Console(stderr=True)

_MEASURE = typer.Option(
    None,
    "--measure",
    help="Measure name (lebesgue, bernstein_szego, sieved_bs, single_moment) or JSON.",
)
_ZETA = typer.Option(None, "--zeta", help="Bernstein-Szegő parameter as re,im.")
_M = typer.Option(None, "--M", help="Sieving order.")
_N = typer.Option(None, "--n", help="Degree n.")
_BETA = typer.Option(None, "--beta", help="Boundary parameter beta as re,im.")
_TAU = typer.Option(..., "--tau", help="Second boundary parameter tau as re,im.")
_REGION = typer.Option(Region.EXTERIOR, "--region", help="Continuation region.")
_POINTS = typer.Option(None, "--points", help="JSON file with [[re, im], ...] points.")
_OUT = typer.Option(None, "--out", "-o", help="Write output here instead of stdout.")
_FORMAT = typer.Option(None, "--format", help="json or csv (default from config).")
_SEED = typer.Option(None, "--seed", help="Seed for verification sample placement.")


def _settings() -> PopucConfig:
    from popuc.cli.app import state

    try:
        return load_config(state.config_path)
    except ValueError as exc:
        raise InvalidConfiguration(
            f"Configuration could not be loaded: {exc}",
            hint="Check the file shown by `popuc config path`.",
        ) from exc


def _build(subcommand: Subcommand, settings: PopucConfig, flags: dict[str, Any]) -> Any:
    measure, zeta, M = flags.pop("measure", None), flags.pop("zeta", None), flags.get("M")
    if zeta is not None and measure is None:
        raise InvalidConfiguration("--zeta needs --measure")
    if measure is not None:
        flags["measure"] = parse_measure(
            measure, zeta=parse_complex(zeta) if zeta is not None else None, M=M
        )
        if subcommand is not Subcommand.EXAMPLE:
            flags.pop("M", None)
    for key in ("beta", "tau"):
        if flags.get(key) is not None:
            flags[key] = parse_complex(flags[key])
    if flags.get("points") is not None:
        flags["points"] = load_points(flags["points"])
    if flags.get("format") is None:
        flags["format"] = settings.output.format if subcommand in CSV_COMMANDS else "json"
    if flags.get("seed") is None:
        flags["seed"] = settings.verification.seed
    fields = {k: v for k, v in flags.items() if v is not None}
    return make_run_config(subcommand=subcommand, **fields)


def _dispatch(subcommand: Subcommand, **flags: Any) -> None:
    try:
        settings = _settings()
        config = _build(subcommand, settings, flags)
    except PopucError as exc:
        payload = error_payload(exc)
        typer.echo(render_json(payload), nl=False)
        console.print(f"[red]{payload['error']}:[/red] {escape(str(exc))}", highlight=False)
        raise typer.Exit(1) from exc
    raise typer.Exit(run(config, settings, console=console))


def zeros_command(
    measure: str | None = _MEASURE,
    zeta: str | None = _ZETA,
    M: int | None = _M,
    n: int | None = _N,
    beta: str | None = _BETA,
    points: Path | None = _POINTS,
    out: Path | None = _OUT,
    fmt: str | None = _FORMAT,
) -> None:
    """Zeros of the paraorthogonal polynomial, sorted by argument."""
    _dispatch(
        Subcommand.ZEROS,
        measure=measure,
        zeta=zeta,
        M=M,
        n=n,
        beta=beta,
        points=points,
        out=out,
        format=fmt,
    )


def gdj_command(
    measure: str | None = _MEASURE,
    zeta: str | None = _ZETA,
    M: int | None = _M,
    n: int | None = _N,
    region: Region = _REGION,
    points: Path | None = _POINTS,
    out: Path | None = _OUT,
) -> None:
    """G_n, D_n and J_n as factored rational functions."""
    _dispatch(
        Subcommand.GDJ,
        measure=measure,
        zeta=zeta,
        M=M,
        n=n,
        region=region,
        points=points,
        out=out,
    )


def ode_command(
    measure: str | None = _MEASURE,
    zeta: str | None = _ZETA,
    M: int | None = _M,
    n: int | None = _N,
    beta: str | None = _BETA,
    region: Region = _REGION,
    points: Path | None = _POINTS,
    out: Path | None = _OUT,
) -> None:
    """Coefficients of the ODE solved by Phi_n(z; beta)."""
    _dispatch(
        Subcommand.ODE,
        measure=measure,
        zeta=zeta,
        M=M,
        n=n,
        beta=beta,
        region=region,
        points=points,
        out=out,
    )


def system_command(
    tau: str = _TAU,
    measure: str | None = _MEASURE,
    zeta: str | None = _ZETA,
    M: int | None = _M,
    n: int | None = _N,
    beta: str | None = _BETA,
    region: Region = _REGION,
    points: Path | None = _POINTS,
    out: Path | None = _OUT,
    seed: int | None = _SEED,
) -> None:
    """First-order system for (Phi_n(.; beta), Phi_n(.; tau)), with its residual report."""
    _dispatch(
        Subcommand.SYSTEM,
        tau=tau,
        measure=measure,
        zeta=zeta,
        M=M,
        n=n,
        beta=beta,
        region=region,
        points=points,
        out=out,
        seed=seed,
    )


def verify_command(
    measure: str | None = _MEASURE,
    zeta: str | None = _ZETA,
    M: int | None = _M,
    n: int | None = _N,
    beta: str | None = _BETA,
    region: Region = _REGION,
    points: Path | None = _POINTS,
    out: Path | None = _OUT,
    seed: int | None = _SEED,
) -> None:
    """Check the ODE and the derivative identity; exit 1 if either fails."""
    _dispatch(
        Subcommand.VERIFY,
        measure=measure,
        zeta=zeta,
        M=M,
        n=n,
        beta=beta,
        region=region,
        points=points,
        out=out,
        seed=seed,
    )


def equilibrium_command(
    measure: str | None = _MEASURE,
    zeta: str | None = _ZETA,
    M: int | None = _M,
    n: int | None = _N,
    beta: str | None = _BETA,
    region: Region = _REGION,
    points: Path | None = _POINTS,
    out: Path | None = _OUT,
    fmt: str | None = _FORMAT,
    seed: int | None = _SEED,
) -> None:
    """Generators holding the points (or the zeros of Phi_n) in total equilibrium."""
    _dispatch(
        Subcommand.EQUILIBRIUM,
        measure=measure,
        zeta=zeta,
        M=M,
        n=n,
        beta=beta,
        region=region,
        points=points,
        out=out,
        format=fmt,
        seed=seed,
    )


def example_command(
    name: str = typer.Option(  # noqa: B008
        ..., "--name", help="lebesgue, bernstein_szego, sieved or single_moment."
    ),
    n: int | None = _N,
    region: Region = _REGION,
    M: int | None = _M,
    out: Path | None = _OUT,
    seed: int | None = _SEED,
) -> None:
    """Reproduce a closed-form example; exit 0 only if every check agrees."""
    _dispatch(Subcommand.EXAMPLE, name=name, n=n, region=region, M=M, out=out, seed=seed)


def plot_data_command(
    figure: int = typer.Option(..., "--figure", help="Figure number 1-4."),  # noqa: B008
    out: Path | None = _OUT,
    fmt: str | None = _FORMAT,
    seed: int | None = _SEED,
) -> None:
    """Mobile points, generators and the origin charge for one picture."""
    _dispatch(Subcommand.PLOT_DATA, figure=figure, out=out, format=fmt, seed=seed)
