"""Worked examples with closed forms, replayed as named numerical checks.

Each example builds the ODE machinery for one named measure and compares
what comes out (G, D, J, h, the Lamé charges, the equilibrium) against the
known closed forms:

- lebesgue: h = n, p = (1 - n)/z, q = 0, one charge (1 - n)/2 at 0.
- bernstein_szego (zeta = 1/2): rational G, D, J in both regions; a +1
  charge at 1/2 (exterior) or 2 (interior).
- sieved (zeta = 1/2, M-fold): +1 charges at the M-th roots of 1/2 and
  (1 - M)/2 at the origin.
- single_moment (w = 1 - cos theta): finite-sum G, D, J, the explicit
  h(z; -1; -1), and a +1 charge at the origin in the exterior case.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Any, Literal

import numpy as np
from loguru import logger

from popuc.algebra.poly import ComplexPoly
from popuc.algebra.ratfun import RationalFn
from popuc.algebra.roots import poly_roots
from popuc.cauchy import Region
from popuc.electro.equilibrium import normal_equilibrium_residual, total_equilibrium_residual
from popuc.electro.lame import lame_from_fraction, lame_normal_form
from popuc.electro.models import Charge, ChargeConfiguration
from popuc.errors import InvalidConfiguration
from popuc.ode import (
    OdeCoefficients,
    Sampling,
    derivative_identity_check,
    h_fn,
    sample_points,
    second_order_ode,
    verify_ode,
)
from popuc.opuc.measures import MeasureName, NamedMeasure
from popuc.opuc.sequence import popuc
from popuc.pipeline import Problem, build_problem
from popuc.utils.complexio import complex_pair

FUNCTION_TOLERANCE = 1e-9
CHARGE_TOLERANCE = 1e-7
EXACT_TOLERANCE = 1e-9
ZETA = 0.5 + 0j

Expected = Callable[[np.ndarray], np.ndarray]
PlotKind = Literal["mobile", "generator", "origin"]


@dataclass(slots=True)
class Check:
    name: str
    error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return math.isfinite(self.error) and self.error <= self.tolerance

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "error": self.error if math.isfinite(self.error) else None,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


@dataclass(slots=True)
class ExampleResult:
    example: str
    n: int
    region: Region
    beta: complex
    checks: list[Check] = field(default_factory=list)
    charges: ChargeConfiguration = field(default_factory=ChargeConfiguration)
    mobile: list[complex] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict[str, Any]:
        return {
            "example": self.example,
            "n": self.n,
            "region": self.region.value,
            "beta": complex_pair(self.beta),
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "charges": self.charges.to_dict(),
            "mobile": [complex_pair(x) for x in self.mobile],
            "diagnostics": list(self.diagnostics),
        }


@dataclass(frozen=True, slots=True)
class PlotRow:
    x: float
    y: float
    charge: float
    kind: PlotKind

    def to_dict(self) -> dict[str, Any]:
        return {"x": self.x, "y": self.y, "charge": self.charge, "kind": self.kind}


# ===================================================================
# Comparison helpers
# ===================================================================


def _series(z: np.ndarray, coeffs: Sequence[float], powers: Sequence[float]) -> np.ndarray:
    """sum_k coeffs[k] z^powers[k], vectorized over z."""
    zz = np.asarray(z, dtype=complex)
    c = np.asarray(coeffs, dtype=complex)[:, None]
    p = np.asarray(powers, dtype=float)[:, None]
    return np.sum(c * zz[None, :] ** p, axis=0)


def _function_error(actual: RationalFn, expected: Expected, zs: np.ndarray) -> float:
    want = np.asarray(expected(zs), dtype=complex)
    got = np.asarray(actual(zs), dtype=complex)
    return float(np.max(np.abs(got - want)) / max(1.0, float(np.max(np.abs(want)))))


def _charge_error(actual: ChargeConfiguration, expected: ChargeConfiguration) -> float:
    """Largest location mismatch after pairing charges of equal value; inf if unpaired."""
    if len(actual.generators) != len(expected.generators):
        return math.inf
    remaining = list(expected.generators)
    worst = 0.0
    for g in actual.generators:
        candidates = [e for e in remaining if abs(e.charge - g.charge) <= EXACT_TOLERANCE]
        if not candidates:
            return math.inf
        best = min(candidates, key=lambda e: abs(e.location - g.location))
        worst = max(worst, abs(best.location - g.location) / (1.0 + abs(best.location)))
        remaining.remove(best)
    return worst


def _charge_at(config: ChargeConfiguration, location: complex) -> float:
    for g in config.generators:
        if abs(g.location - location) <= CHARGE_TOLERANCE * (1.0 + abs(location)):
            return g.charge
    return 0.0


def _samples(
    problem: Problem, sampling: Sampling, extra_poles: Sequence[complex] = ()
) -> np.ndarray:
    poles = [r for part in (problem.gdj.G, problem.gdj.D, problem.gdj.J) for r, _ in part.poles]
    return sample_points([*poles, *extra_poles, 0j], problem.region, sampling)


def _closed_form_sampling(sampling: Sampling | None) -> Sampling:
    base = sampling or Sampling()
    return Sampling(
        samples=16,
        exterior_radius=base.exterior_radius,
        interior_radius=base.interior_radius,
        pole_clearance=base.pole_clearance,
        seed=base.seed,
    )


def _solve(
    name: str, problem: Problem, beta: complex, sampling: Sampling
) -> tuple[ExampleResult, OdeCoefficients, RationalFn]:
    """Shared part of every example: ODE, (s2), Lamé charges and equilibrium."""
    n = problem.n
    result = ExampleResult(example=name, n=n, region=problem.region, beta=beta)
    target = popuc(problem.seq, n, beta)
    ode = second_order_ode(problem.seq, n, problem.gdj, beta)
    h = h_fn(problem.seq, n, problem.gdj, beta, beta)

    report = verify_ode(ode, target, sampling=sampling)
    result.checks.append(
        Check(
            "Phi_n(z; beta) solves the ODE",
            max(report.coefficient_ratio, report.max_sample_residual),
            report.tolerance,
        )
    )
    identity = derivative_identity_check(problem.seq, n, problem.gdj, beta, sampling=sampling)
    result.checks.append(
        Check(
            "derivative identity",
            max(identity.coefficient_ratio, identity.max_sample_residual),
            identity.tolerance,
        )
    )

    form = lame_normal_form(ode, h, sampling=sampling)
    result.checks.append(Check("Lamé form reproduces p", form.reconstruction_error, 1e-8))
    result.charges = form.charges()
    result.mobile = poly_roots(target)
    equilibrium = total_equilibrium_residual(result.charges, result.mobile)
    result.checks.append(
        Check("zeros in total equilibrium", equilibrium.max_total, equilibrium.tolerance)
    )
    result.diagnostics.extend(form.diagnostics)
    return result, ode, h


def _finish(result: ExampleResult) -> ExampleResult:
    for check in result.failed():
        logger.warning(
            "{} (n = {}): {} failed, error {}", result.example, result.n, check.name, check.error
        )
    return result


# ===================================================================
# Lebesgue measure
# ===================================================================


def lebesgue(
    n: int = 7, *, beta: complex = 1.0, sampling: Sampling | None = None
) -> ExampleResult:
    sampling = _closed_form_sampling(sampling)
    beta = complex(beta)
    problem = build_problem(NamedMeasure(name=MeasureName.LEBESGUE), n, Region.EXTERIOR)
    result, ode, h = _solve("lebesgue", problem, beta, sampling)
    zs = _samples(problem, sampling)

    expected = ChargeConfiguration([Charge(0j, (1 - n) / 2.0)])
    result.checks.extend(
        [
            Check(
                "h = conj(beta) n",
                _function_error(h, lambda z: np.full_like(z, beta.conjugate() * n), zs),
                EXACT_TOLERANCE,
            ),
            Check(
                "p = (1 - n)/z",
                _function_error(ode.p, lambda z: (1 - n) / z, zs),
                EXACT_TOLERANCE,
            ),
            Check("q = 0", ode.q.num.scale(), 1e-12),
            Check(
                "single charge (1 - n)/2 at the origin",
                _charge_error(result.charges, expected),
                EXACT_TOLERANCE,
            ),
        ]
    )
    return _finish(result)


# ===================================================================
# Bernstein-Szegő measure, zeta = 1/2
# ===================================================================


def bernstein_szego_fraction(
    n: int, beta: complex, region: Region
) -> tuple[ComplexPoly, ComplexPoly]:
    """h(z; beta; beta) = P1/P2 for zeta = 1/2, before cancelling common factors."""
    b = complex(beta).conjugate()
    z_n = ComplexPoly.monomial(n)
    two_z_minus_one = ComplexPoly.of([-1.0, 2.0])
    z_minus_two = ComplexPoly.of([-2.0, 1.0])
    z_squared_minus_one = ComplexPoly.of([-1.0, 0.0, 1.0])
    if Region(region) is Region.EXTERIOR:
        P1 = z_n * two_z_minus_one * (two_z_minus_one * n + 2.0)
        P1 = P1 + ComplexPoly.monomial(1, 2.0 * b) * z_squared_minus_one
        return P1 * b, z_n * two_z_minus_one * two_z_minus_one
    inner = z_minus_two * n - ComplexPoly.monomial(1, 2.0)
    P1 = ComplexPoly.monomial(1, b) * z_minus_two * inner - z_n * z_squared_minus_one * 2.0
    return P1, ComplexPoly.monomial(1) * z_minus_two * z_minus_two


def bernstein_szego(
    n: int = 6,
    region: Region | str = Region.EXTERIOR,
    *,
    beta: complex = -1.0,
    sampling: Sampling | None = None,
) -> ExampleResult:
    region = Region(region)
    if region is Region.INTERIOR and n < 2:
        raise InvalidConfiguration("The interior closed forms need n >= 2")
    sampling = _closed_form_sampling(sampling)
    beta = complex(beta)
    measure = NamedMeasure(name=MeasureName.BERNSTEIN_SZEGO, zeta=ZETA)
    problem = build_problem(measure, n, region)
    result, _, h = _solve("bernstein_szego", problem, beta, sampling)
    zs = _samples(problem, sampling, [0.5, 2.0])
    gdj = problem.gdj

    if region is Region.EXTERIOR:

        def expected_g(z: np.ndarray) -> np.ndarray:
            return 1.0 / (z * (2 * z - 1))

        def expected_d(z: np.ndarray) -> np.ndarray:
            return 2 * (z**2 - 1) / ((2 * z - 1) ** 2 * z ** (n - 1))

        def expected_j(z: np.ndarray) -> np.ndarray:
            return np.zeros_like(z)

        special, origin = 0.5 + 0j, 0.0
    else:

        def expected_g(z: np.ndarray) -> np.ndarray:
            return 1.0 / (2 - z)

        def expected_d(z: np.ndarray) -> np.ndarray:
            return np.zeros_like(z)

        def expected_j(z: np.ndarray) -> np.ndarray:
            return 2 * z ** (n - 2) * (z**2 - 1) / (z - 2) ** 2

        special, origin = 2.0 + 0j, (1 - n) / 2.0

    P1, P2 = bernstein_szego_fraction(n, beta, region)
    reference = lame_from_fraction(P1, P2, n)
    result.checks.extend(
        [
            Check("G closed form", _function_error(gdj.G, expected_g, zs), FUNCTION_TOLERANCE),
            Check("D closed form", _function_error(gdj.D, expected_d, zs), FUNCTION_TOLERANCE),
            Check("J closed form", _function_error(gdj.J, expected_j, zs), FUNCTION_TOLERANCE),
            Check("h = P1/P2", _function_error(h, lambda z: P1(z) / P2(z), zs), FUNCTION_TOLERANCE),
            Check(
                "+1 charge at the pole of the weight",
                abs(_charge_at(result.charges, special) - 1.0),
                EXACT_TOLERANCE,
            ),
            Check("origin charge", abs(result.charges.origin_charge() - origin), EXACT_TOLERANCE),
            Check(
                "charges match the roots of P1",
                _charge_error(result.charges, reference.charges()),
                CHARGE_TOLERANCE,
            ),
        ]
    )
    if region is Region.INTERIOR:
        normal = normal_equilibrium_residual(result.charges.without_origin(), result.mobile)
        result.checks.append(
            Check(
                "normal equilibrium without the origin charge",
                normal.max_normal,
                normal.tolerance,
            )
        )
    return _finish(result)


# ===================================================================
# Sieved Bernstein-Szegő measure
# ===================================================================


def sieved(
    n: int = 7,
    M: int = 2,
    *,
    beta: complex = -1.0,
    sampling: Sampling | None = None,
) -> ExampleResult:
    if n <= M:
        raise InvalidConfiguration(f"The sieved closed forms need n > M, got n = {n}, M = {M}")
    sampling = _closed_form_sampling(sampling)
    beta = complex(beta)
    b = beta.conjugate()
    measure = NamedMeasure(name=MeasureName.SIEVED_BS, zeta=ZETA, M=M)
    problem = build_problem(measure, n, Region.EXTERIOR)
    result, _, h = _solve("sieved", problem, beta, sampling)
    zs = _samples(problem, sampling)
    gdj = problem.gdj

    def expected_g(z: np.ndarray) -> np.ndarray:
        return M / (z * (2 * z**M - 1))

    def expected_d(z: np.ndarray) -> np.ndarray:
        return 2 * M * (z ** (2 * M) - 1) / ((2 * z**M - 1) ** 2 * z ** (n - M))

    def expected_h(z: np.ndarray) -> np.ndarray:
        return b * (n + 2 * M / (2 * z**M - 1) + b * expected_d(z))

    result.checks.extend(
        [
            Check("G closed form", _function_error(gdj.G, expected_g, zs), FUNCTION_TOLERANCE),
            Check("D closed form", _function_error(gdj.D, expected_d, zs), FUNCTION_TOLERANCE),
            Check(
                "J closed form",
                _function_error(gdj.J, lambda z: np.zeros_like(z), zs),
                FUNCTION_TOLERANCE,
            ),
            Check("h closed form", _function_error(h, expected_h, zs), FUNCTION_TOLERANCE),
            Check(
                "origin charge (1 - M)/2",
                abs(result.charges.origin_charge() - (1 - M) / 2.0),
                EXACT_TOLERANCE,
            ),
        ]
    )
    radius = 2.0 ** (-1.0 / M)
    for j in range(M):
        location = radius * complex(math.cos(2 * math.pi * j / M), math.sin(2 * math.pi * j / M))
        result.checks.append(
            Check(
                f"+1 charge at root {j} of 2z^M = 1",
                abs(_charge_at(result.charges, location) - 1.0),
                EXACT_TOLERANCE,
            )
        )
    return _finish(result)


# ===================================================================
# Single non-trivial moment, w = 1 - cos(theta)
# ===================================================================


def single_moment_fraction(n: int, region: Region) -> tuple[ComplexPoly, ComplexPoly]:
    """h(z; -1; -1) = P1/P2 with the common factor z - 1 still present."""
    coeffs = [0.0] * (n + 3)
    if Region(region) is Region.EXTERIOR:
        # n z^{n+2} - (n+2) z^{n+1} + z + 1
        coeffs[0] += 1.0
        coeffs[1] += 1.0
        coeffs[n + 1] -= n + 2
        coeffs[n + 2] += n
        P2 = ComplexPoly.monomial(n + 1, n + 1.0) * ComplexPoly.of([-1.0, 1.0])
        return ComplexPoly.of(coeffs) * (-n), P2
    # z^{n+2} + z^{n+1} - (n+2) z + n
    coeffs[0] += n
    coeffs[1] -= n + 2
    coeffs[n + 1] += 1.0
    coeffs[n + 2] += 1.0
    return ComplexPoly.of(coeffs) * n, ComplexPoly.of([-(n + 1.0), n + 1.0])


def _single_moment_gdj(n: int, region: Region) -> tuple[Expected, Expected, Expected]:
    scale = 1.0 / (n * (n + 1))
    j = np.arange(n)
    if region is Region.EXTERIOR:
        k = np.arange(1, n + 1)

        def G(z: np.ndarray) -> np.ndarray:
            return scale / z * _series(z, k**2 - n - n**2, -k)

        def D(z: np.ndarray) -> np.ndarray:
            body = _series(z, n**2 + 2 * n - 2 * k * n - k**2, -k)
            return -scale * (n**2 + body - n**2 * z ** (-(n + 1.0)))

        def J(z: np.ndarray) -> np.ndarray:
            return -scale / z * _series(z, (n - j) ** 2, -j)

        return G, D, J

    m = np.arange(n - 1)

    def G(z: np.ndarray) -> np.ndarray:
        return -scale * _series(z, n**2 + n - (j + 1) ** 2, j)

    def D(z: np.ndarray) -> np.ndarray:
        return scale * z * _series(z, (n - 1 - m) ** 2, m)

    def J(z: np.ndarray) -> np.ndarray:
        return -scale * (n**2 * z**n + _series(z, (j + n + 1) ** 2 - 2 * n - 2 * n**2, j))

    return G, D, J


def _h_at_alpha(n: int) -> Expected:
    """Exterior h(z; alpha_{n-1}; alpha_{n-1}) with alpha_{n-1} = -1/(n + 1)."""

    def h(z: np.ndarray) -> np.ndarray:
        top = (
            z ** (n + 3) * (n + 1) ** 2
            - z ** (n + 2) * (2 * n**2 + 6 * n + 3)
            + z ** (n + 1) * (n + 2) ** 2
            - z
            - 1
        )
        return n * top / (z ** (n + 1) * (n + 1) ** 3 * (z - 1) ** 3)

    return h


def _coefficient_gap(a: ComplexPoly, b: ComplexPoly) -> float:
    return (a - b).scale()


def single_moment(
    n: int = 6,
    region: Region | str = Region.EXTERIOR,
    *,
    sampling: Sampling | None = None,
) -> ExampleResult:
    """The measure (1 - cos theta) dtheta/2pi at beta = -1."""
    region = Region(region)
    sampling = _closed_form_sampling(sampling)
    beta = -1.0 + 0j
    problem = build_problem(NamedMeasure(name=MeasureName.SINGLE_MOMENT), n, region)
    result, _, h = _solve("single_moment", problem, beta, sampling)
    zs = _samples(problem, sampling, [1.0])
    seq, gdj = problem.seq, problem.gdj

    expected_g, expected_d, expected_j = _single_moment_gdj(n, region)
    P1, P2 = single_moment_fraction(n, region)
    reference = lame_from_fraction(P1, P2, n)
    result.diagnostics.extend(reference.diagnostics)
    ones = ComplexPoly.of([1.0] * (n + 1))
    monic = ComplexPoly.of([(i + 1) / (n + 1) for i in range(n + 1)])
    origin = 1.0 if region is Region.EXTERIOR else (1 - n) / 2.0
    unit_cancelled = any(abs(c - 1.0) <= EXACT_TOLERANCE for c in reference.cancelled_on_circle)

    result.checks.extend(
        [
            Check(
                "kappa_n^2 = (2n + 2)/(n + 2)",
                abs(seq.kappas[n] ** 2 - (2 * n + 2) / (n + 2)),
                EXACT_TOLERANCE,
            ),
            Check("monic Phi_n", _coefficient_gap(seq.monic[n], monic), EXACT_TOLERANCE),
            Check(
                "Phi_n(z; -1) = (z^(n+1) - 1)/(z - 1)",
                _coefficient_gap(popuc(seq, n, beta), ones),
                EXACT_TOLERANCE,
            ),
            Check("G finite sum", _function_error(gdj.G, expected_g, zs), FUNCTION_TOLERANCE),
            Check("D finite sum", _function_error(gdj.D, expected_d, zs), FUNCTION_TOLERANCE),
            Check("J finite sum", _function_error(gdj.J, expected_j, zs), FUNCTION_TOLERANCE),
            Check(
                "h(z; -1; -1) closed form",
                _function_error(h, lambda z: P1(z) / P2(z), zs),
                FUNCTION_TOLERANCE,
            ),
            Check("origin charge", abs(result.charges.origin_charge() - origin), EXACT_TOLERANCE),
            Check(
                "charges match the roots of P1 other than z = 1",
                _charge_error(result.charges, reference.charges()),
                CHARGE_TOLERANCE,
            ),
            Check("z - 1 cancels between P1 and P2", 0.0 if unit_cancelled else 1.0, 0.5),
        ]
    )

    if region is Region.EXTERIOR:
        alpha = seq.alpha(n - 1)
        h_alpha = h_fn(seq, n, gdj, alpha, alpha)
        result.checks.append(
            Check(
                "h at beta = alpha_(n-1)",
                _function_error(h_alpha, _h_at_alpha(n), zs),
                FUNCTION_TOLERANCE,
            )
        )

    unit_charge = ChargeConfiguration([Charge(1.0 + 0j, 1.0)])
    normal = normal_equilibrium_residual(unit_charge, result.mobile)
    result.checks.extend(
        [
            Check(
                "normal equilibrium under a +1 charge at z = 1",
                normal.max_normal,
                normal.tolerance,
            ),
            Check(
                "no total equilibrium under a +1 charge at z = 1",
                1.0 if normal.total_pass else 0.0,
                0.5,
            ),
        ]
    )
    return _finish(result)


# ===================================================================
# Dispatch and figure data
# ===================================================================


EXAMPLE_NAMES: tuple[str, ...] = ("lebesgue", "bernstein_szego", "sieved", "single_moment")


def run_example(
    name: str,
    n: int,
    region: Region | str = Region.EXTERIOR,
    *,
    M: int = 2,
    sampling: Sampling | None = None,
) -> ExampleResult:
    region = Region(region)
    match name:
        case "lebesgue":
            return lebesgue(n, sampling=sampling)
        case "bernstein_szego":
            return bernstein_szego(n, region, sampling=sampling)
        case "sieved":
            if region is not Region.EXTERIOR:
                raise InvalidConfiguration("The sieved closed forms are stated for |z| > 1 only")
            return sieved(n, M, sampling=sampling)
        case "single_moment":
            return single_moment(n, region, sampling=sampling)
    raise InvalidConfiguration(
        f"Unknown example {name!r}", hint=f"Choose one of: {', '.join(EXAMPLE_NAMES)}."
    )


FIGURES: dict[int, tuple[str, int, Region]] = {
    1: ("bernstein_szego", 22, Region.EXTERIOR),
    2: ("bernstein_szego", 22, Region.INTERIOR),
    3: ("single_moment", 14, Region.EXTERIOR),
    4: ("single_moment", 14, Region.INTERIOR),
}


def plot_rows(result: ExampleResult) -> list[PlotRow]:
    rows = [PlotRow(x.real, x.imag, 1.0, "mobile") for x in result.mobile]
    for g in result.charges.generators:
        kind: PlotKind = "origin" if g.is_origin else "generator"
        rows.append(PlotRow(g.location.real, g.location.imag, g.charge, kind))
    return rows


def figure_data(
    figure: int, *, sampling: Sampling | None = None
) -> tuple[ExampleResult, list[PlotRow]]:
    """Mobile points and generators behind one of the four equilibrium pictures."""
    if figure not in FIGURES:
        raise InvalidConfiguration(f"Unknown figure {figure}", hint="Choose 1, 2, 3 or 4.")
    name, n, region = FIGURES[figure]
    result = run_example(name, n, region, sampling=sampling)
    return result, plot_rows(result)
