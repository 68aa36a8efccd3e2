"""Run configuration and subcommand execution, independent of typer.

`execute()` does the numerical work and returns a RunOutcome; `run()`
additionally writes the outcome to stdout or --out and returns the exit
status. Exit status is 0 iff every asserted check passed.
"""

from __future__ import annotations

import json
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import StrEnum
from pathlib import Path
from typing import Any, Literal

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator
from rich.console import Console
from rich.markup import escape

from popuc.algebra.ratfun import RationalFn, partial_fractions
from popuc.algebra.roots import RootOptions
from popuc.cauchy import Region
from popuc.cli.io import emit, render_csv, render_json, resolve_out
from popuc.closed_forms import EXAMPLE_NAMES, PlotRow, figure_data, run_example
from popuc.config import PopucConfig
from popuc.electro import (
    generators_from_measure,
    generators_from_points,
    total_equilibrium_residual,
)
from popuc.errors import InvalidConfiguration, error_payload
from popuc.ode import (
    Sampling,
    derivative_identity_check,
    first_order_system,
    oracle_agreement,
    second_order_ode,
    verify_ode,
    verify_system,
)
from popuc.opuc.measures import (
    ComplexValue,
    DiscreteMeasure,
    MeasureName,
    MeasureSpec,
    NamedMeasure,
    measure_sequence,
)
from popuc.opuc.sequence import beta_from_points, normalize_points, popuc
from popuc.pipeline import Measure, build_problem
from popuc.utils.complexio import complex_pair, complex_pairs, parse_complex

PLOT_FIELDS = ("x", "y", "charge", "kind")
ZERO_FIELDS = ("x", "y")
UNIMODULAR_TOLERANCE = 1e-8

EXAMPLE_DEFAULT_N: dict[str, int] = {
    "lebesgue": 7,
    "bernstein_szego": 6,
    "sieved": 7,
    "single_moment": 6,
}


class Subcommand(StrEnum):
    ZEROS = "zeros"
    GDJ = "gdj"
    ODE = "ode"
    SYSTEM = "system"
    VERIFY = "verify"
    EQUILIBRIUM = "equilibrium"
    EXAMPLE = "example"
    PLOT_DATA = "plot-data"


_MEASURE_COMMANDS = frozenset(
    {
        Subcommand.ZEROS,
        Subcommand.GDJ,
        Subcommand.ODE,
        Subcommand.SYSTEM,
        Subcommand.VERIFY,
        Subcommand.EQUILIBRIUM,
    }
)
CSV_COMMANDS = frozenset({Subcommand.ZEROS, Subcommand.EQUILIBRIUM, Subcommand.PLOT_DATA})


class RunConfig(BaseModel):
    """Everything one invocation needs, checked for consistency up front."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    subcommand: Subcommand
    measure: MeasureSpec | None = None
    n: int | None = Field(default=None, ge=1, le=256)
    beta: ComplexValue | None = None
    tau: ComplexValue | None = None
    region: Region = Region.EXTERIOR
    points: tuple[ComplexValue, ...] | None = None
    out: Path | None = None
    format: Literal["json", "csv"] = "json"
    seed: int = Field(default=0, ge=0)
    name: str | None = None
    figure: int | None = Field(default=None, ge=1, le=4)
    M: int = Field(default=2, ge=1, le=64)

    @model_validator(mode="after")
    def _consistent_flags(self) -> RunConfig:
        sub = self.subcommand
        if self.tau is not None and sub is not Subcommand.SYSTEM:
            raise ValueError("--tau is only used by `system`")
        if sub is Subcommand.SYSTEM and self.tau is None:
            raise ValueError("`system` needs --tau")
        if self.name is not None and sub is not Subcommand.EXAMPLE:
            raise ValueError("--name is only used by `example`")
        if sub is Subcommand.EXAMPLE and self.name is None:
            raise ValueError(f"`example` needs --name, one of {', '.join(EXAMPLE_NAMES)}")
        if self.figure is not None and sub is not Subcommand.PLOT_DATA:
            raise ValueError("--figure is only used by `plot-data`")
        if sub is Subcommand.PLOT_DATA and self.figure is None:
            raise ValueError("`plot-data` needs --figure 1, 2, 3 or 4")
        if self.format == "csv" and sub not in CSV_COMMANDS:
            raise ValueError("CSV output is available for zeros, equilibrium and plot-data")

        if sub in _MEASURE_COMMANDS:
            if self.measure is not None and self.points is not None:
                raise ValueError("Pass either --measure or --points, not both")
            if self.measure is None and self.points is None:
                raise ValueError(f"`{sub.value}` needs --measure or --points")
            if self.points is None and self.n is None:
                raise ValueError("--n is required unless --points is given")
        elif self.measure is not None or self.points is not None:
            raise ValueError(f"`{sub.value}` takes no --measure or --points")
        return self


def make_run_config(**fields: Any) -> RunConfig:
    """Build a RunConfig, reporting validation failures as invalid-configuration."""
    try:
        return RunConfig(**fields)
    except ValidationError as exc:
        messages = "; ".join(e["msg"].removeprefix("Value error, ") for e in exc.errors())
        raise InvalidConfiguration(messages, hint="Run `popuc <command> --help`.") from exc


def load_points(path: Path) -> tuple[complex, ...]:
    """Points from a JSON file: a list of [re, im] pairs, or {"points": [...]}."""
    try:
        data = json.loads(path.expanduser().read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise InvalidConfiguration(f"Points file {path} does not exist") from exc
    except json.JSONDecodeError as exc:
        raise InvalidConfiguration(f"Points file {path} is not valid JSON: {exc.msg}") from exc
    if isinstance(data, dict):
        data = data.get("points")
    if not isinstance(data, list):
        raise InvalidConfiguration(
            f"Points file {path} has no point list",
            hint='Use [[re, im], ...] or {"points": [[re, im], ...]}.',
        )
    return tuple(parse_complex(p) for p in data)


@dataclass(slots=True)
class RunOutcome:
    payload: dict[str, Any]
    passed: bool = True
    rows: list[dict[str, Any]] | None = None
    fieldnames: tuple[str, ...] = PLOT_FIELDS
    summary: list[str] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1


# ===================================================================
# Formatting helpers
# ===================================================================


def format_number(c: complex) -> str:
    c = complex(c)
    if abs(c.imag) <= 1e-12 * max(1.0, abs(c.real)):
        return f"{c.real:.6g}"
    return f"({c.real:.6g}{c.imag:+.6g}i)"


def format_rational(r: RationalFn) -> str:
    """Human-readable partial-fraction form, e.g. -6/z."""
    if r.is_zero:
        return "0"
    polynomial_part, terms = partial_fractions(r)
    parts: list[str] = []
    for k, c in enumerate(polynomial_part.coeffs):
        if abs(c) > 1e-12:
            parts.append(format_number(c) + ("" if k == 0 else "z" if k == 1 else f"z^{k}"))
    for pole, order, c in terms:
        base = "z" if pole == 0 else f"(z - {format_number(pole)})"
        parts.append(f"{format_number(c)}/{base}" + (f"^{order}" if order > 1 else ""))
    return " + ".join(parts) if parts else "0"


def describe_ode(p: RationalFn, q: RationalFn) -> str:
    text = f"y'' + ({format_rational(p)}) y'"
    if q.num.scale() > 1e-12:
        text += f" + ({format_rational(q)}) y"
    return text + " = 0"


# ===================================================================
# Subcommands
# ===================================================================


@dataclass(frozen=True, slots=True)
class _Context:
    settings: PopucConfig
    sampling: Sampling

    @property
    def quadrature_points(self) -> int:
        return self.settings.numerics.szego_quadrature_points

    @property
    def roots(self) -> RootOptions:
        return RootOptions.from_config(self.settings.numerics)


def _measure(config: RunConfig) -> tuple[Measure, int]:
    if config.points is not None:
        n = len(config.points) if config.n is None else config.n
        return DiscreteMeasure(points=config.points), n
    assert config.measure is not None and config.n is not None
    return config.measure, config.n


def _beta(config: RunConfig, n: int) -> complex:
    if config.beta is not None:
        return complex(config.beta)
    if config.points is not None and n == len(config.points):
        return beta_from_points(config.points)
    return 1.0 + 0j


def _run_zeros(config: RunConfig, ctx: _Context) -> RunOutcome:
    measure, n = _measure(config)
    beta = _beta(config, n)
    seq = measure_sequence(measure, n, quadrature_points=ctx.quadrature_points)
    zeros = ctx.roots.roots(popuc(seq, n, beta))
    drift = float(max(abs(abs(z) - 1.0) for z in zeros))
    passed = abs(abs(beta) - 1.0) > UNIMODULAR_TOLERANCE or drift < UNIMODULAR_TOLERANCE
    payload = {
        "n": n,
        "beta": complex_pair(beta),
        "zeros": complex_pairs(zeros),
        "max_modulus_error": drift,
        "passed": passed,
    }
    rows = [{"x": z.real, "y": z.imag} for z in zeros]
    summary = [f"{n} zeros of Phi_{n}(z; {format_number(beta)}), max ||z| - 1| = {drift:.2e}"]
    return RunOutcome(payload, passed, rows, ZERO_FIELDS, summary)


def _run_gdj(config: RunConfig, ctx: _Context) -> RunOutcome:
    measure, n = _measure(config)
    problem = build_problem(measure, n, config.region, quadrature_points=ctx.quadrature_points)
    gdj = problem.gdj
    summary = [
        f"G = {format_rational(gdj.G)}",
        f"D = {format_rational(gdj.D)}",
        f"J = {format_rational(gdj.J)}",
    ]
    return RunOutcome(gdj.to_json(), summary=summary)


def _run_ode(config: RunConfig, ctx: _Context) -> RunOutcome:
    measure, n = _measure(config)
    problem = build_problem(measure, n, config.region, quadrature_points=ctx.quadrature_points)
    ode = second_order_ode(problem.seq, n, problem.gdj, _beta(config, n))
    return RunOutcome(ode.to_json(), summary=[describe_ode(ode.p, ode.q)])


def _run_system(config: RunConfig, ctx: _Context) -> RunOutcome:
    measure, n = _measure(config)
    assert config.tau is not None
    beta, tau = _beta(config, n), complex(config.tau)
    problem = build_problem(measure, n, config.region, quadrature_points=ctx.quadrature_points)
    system = first_order_system(problem.seq, n, problem.gdj, beta, tau)
    tolerance = ctx.settings.verification.identity_tolerance
    report = verify_system(
        system,
        popuc(problem.seq, n, beta),
        popuc(problem.seq, n, tau),
        tolerance=tolerance,
        sampling=ctx.sampling,
    )
    payload = system.to_json() | {"report": report.to_dict()}
    summary = [
        f"a{i}{j} = {format_rational(getattr(system, f'a{i}{j}'))}"
        for i in (1, 2)
        for j in (1, 2)
    ]
    return RunOutcome(payload, report.passed, summary=summary)


def _run_verify(config: RunConfig, ctx: _Context) -> RunOutcome:
    measure, n = _measure(config)
    beta = _beta(config, n)
    problem = build_problem(measure, n, config.region, quadrature_points=ctx.quadrature_points)
    verification = ctx.settings.verification
    ode = second_order_ode(problem.seq, n, problem.gdj, beta)
    reports = [
        verify_ode(
            ode,
            popuc(problem.seq, n, beta),
            tolerance=verification.residual_tolerance,
            sampling=ctx.sampling,
        ),
        derivative_identity_check(
            problem.seq,
            n,
            problem.gdj,
            beta,
            tolerance=verification.identity_tolerance,
            sampling=ctx.sampling,
        ),
        oracle_agreement(
            problem.seq,
            n,
            problem.weight_measure,
            problem.gdj,
            grid=verification.oracle_points,
            sampling=ctx.sampling,
        ),
    ]
    passed = all(r.passed for r in reports)
    payload = {
        "n": n,
        "beta": complex_pair(beta),
        "region": problem.region.value,
        "reports": [r.to_dict() for r in reports],
        "passed": passed,
    }
    summary = [
        f"{r.name}: coefficient ratio {r.coefficient_ratio:.2e}, "
        f"sample residual {r.max_sample_residual:.2e} ({'pass' if r.passed else 'FAIL'})"
        for r in reports
    ]
    return RunOutcome(payload, passed, summary=summary)


def _run_equilibrium(config: RunConfig, ctx: _Context) -> RunOutcome:
    verification = ctx.settings.verification
    diagnostics: list[str]
    if config.points is not None:
        mobile = list(normalize_points(config.points))
        n = len(mobile)
        if config.n is not None and config.n != n:
            raise InvalidConfiguration(
                f"--n {config.n} disagrees with the {n} points given",
                hint="Drop --n or pass exactly n points.",
            )
        if config.beta is not None:
            raise InvalidConfiguration("--beta is fixed by the points; drop it")
        beta = beta_from_points(mobile)
        charges, diagnostics = generators_from_points(
            mobile,
            region=config.region,
            collision_tolerance=verification.collision_tolerance,
            quadrature_points=ctx.quadrature_points,
            roots=ctx.roots,
        )
        reconstruction = 0.0
    else:
        measure, n = _measure(config)
        beta = _beta(config, n)
        charges, form = generators_from_measure(
            measure,
            n,
            beta,
            config.region,
            sampling=ctx.sampling,
            quadrature_points=ctx.quadrature_points,
            roots=ctx.roots,
        )
        seq = measure_sequence(measure, n, quadrature_points=ctx.quadrature_points)
        mobile = ctx.roots.roots(popuc(seq, n, beta))
        diagnostics = list(form.diagnostics)
        reconstruction = form.reconstruction_error

    report = total_equilibrium_residual(
        charges, mobile, tolerance=verification.equilibrium_tolerance
    )
    passed = report.passed and reconstruction < verification.residual_tolerance
    payload = {
        "n": n,
        "beta": complex_pair(beta),
        "region": Region(config.region).value,
        "mobile": complex_pairs(mobile),
        "generators": charges.to_dict()["generators"],
        "total_charge": charges.total_charge,
        "report": report.to_dict(),
        "lame_reconstruction_error": reconstruction,
        "diagnostics": diagnostics,
        "passed": passed,
    }
    rows = [PlotRow(x.real, x.imag, 1.0, "mobile").to_dict() for x in mobile]
    rows.extend(
        PlotRow(
            g.location.real, g.location.imag, g.charge, "origin" if g.is_origin else "generator"
        ).to_dict()
        for g in charges.generators
    )
    summary = [
        f"{len(charges.generators)} generators, total charge {charges.total_charge:g}",
        f"max total force {report.max_total:.2e} (tolerance {report.tolerance:.1e})",
    ]
    return RunOutcome(payload, passed, rows, PLOT_FIELDS, summary)


def _run_example(config: RunConfig, ctx: _Context) -> RunOutcome:
    assert config.name is not None
    if config.name not in EXAMPLE_DEFAULT_N:
        raise InvalidConfiguration(
            f"Unknown example {config.name!r}",
            hint=f"Choose one of: {', '.join(EXAMPLE_NAMES)}.",
        )
    n = EXAMPLE_DEFAULT_N[config.name] if config.n is None else config.n
    result = run_example(config.name, n, config.region, M=config.M, sampling=ctx.sampling)
    summary = [
        f"{'pass' if c.passed else 'FAIL'}  {c.name}  (error {c.error:.2e})" for c in result.checks
    ]
    if config.name == "lebesgue":
        problem = build_problem(NamedMeasure(name=MeasureName.LEBESGUE), n, Region.EXTERIOR)
        ode = second_order_ode(problem.seq, n, problem.gdj, result.beta)
        summary.insert(0, describe_ode(ode.p, ode.q))
    return RunOutcome(result.to_dict(), result.passed, summary=summary)


def _run_plot_data(config: RunConfig, ctx: _Context) -> RunOutcome:
    assert config.figure is not None
    result, rows = figure_data(config.figure, sampling=ctx.sampling)
    plot = [row.to_dict() for row in rows]
    kinds = {kind: sum(1 for row in rows if row.kind == kind) for kind in ("mobile", "generator")}
    payload = {
        "figure": config.figure,
        "example": result.example,
        "n": result.n,
        "region": result.region.value,
        "rows": plot,
        "passed": result.passed,
    }
    summary = [
        f"figure {config.figure}: {kinds['mobile']} mobile points, "
        f"{kinds['generator']} generators, origin charge {result.charges.origin_charge():g}"
    ]
    return RunOutcome(payload, result.passed, plot, PLOT_FIELDS, summary)


_HANDLERS: dict[Subcommand, Callable[[RunConfig, _Context], RunOutcome]] = {
    Subcommand.ZEROS: _run_zeros,
    Subcommand.GDJ: _run_gdj,
    Subcommand.ODE: _run_ode,
    Subcommand.SYSTEM: _run_system,
    Subcommand.VERIFY: _run_verify,
    Subcommand.EQUILIBRIUM: _run_equilibrium,
    Subcommand.EXAMPLE: _run_example,
    Subcommand.PLOT_DATA: _run_plot_data,
}


def execute(config: RunConfig, settings: PopucConfig | None = None) -> RunOutcome:
    settings = settings or PopucConfig()
    sampling = Sampling.from_config(settings.verification.model_copy(update={"seed": config.seed}))
    logger.debug("Running {} (n = {}, region = {})", config.subcommand, config.n, config.region)
    outcome = _HANDLERS[config.subcommand](config, _Context(settings, sampling))
    if not outcome.passed:
        logger.warning("{}: at least one check failed", config.subcommand.value)
    return outcome


def render(outcome: RunOutcome, config: RunConfig, settings: PopucConfig) -> str:
    if config.format == "csv" and outcome.rows is not None:
        return render_csv(outcome.rows, outcome.fieldnames)
    return render_json(outcome.payload, settings.output.indent)


def run(
    config: RunConfig,
    settings: PopucConfig | None = None,
    *,
    console: Console | None = None,
) -> int:
    """Execute, write the output, and return the exit status.

    Errors are written to stdout as error JSON instead of the output. The
    human-readable summary goes to `console` when one is given.
    """
    settings = settings or PopucConfig()
    out = resolve_out(config.out, settings.output.out_dir)
    try:
        outcome = execute(config, settings)
    except Exception as exc:
        payload = error_payload(exc)
        emit(render_json(payload, settings.output.indent), None)
        if console is not None:
            console.print(f"[red]{payload['error']}:[/red] {escape(payload['message'])}")
        return 1
    if console is not None:
        for line in outcome.summary:
            console.print(line, markup=False, highlight=False)
        verdict = "[green]pass[/green]" if outcome.passed else "[red]FAIL[/red]"
        console.print(f"{config.subcommand.value}: {verdict}")
    emit(render(outcome, config, settings), out)
    return outcome.exit_code
