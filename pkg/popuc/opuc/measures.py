"""Measure descriptions and everything derived from a weight.

A MeasureSpec is one of three tagged pydantic models:

- NamedMeasure: the worked examples (Lebesgue, degree-one Bernstein-Szegő,
  its M-fold sieved version, and the single non-trivial moment measure),
  each with closed-form Verblunsky coefficients and a rational weight.
- RationalWeight: dmu = W(e^{i theta}) dtheta/2pi for a rational W.
- DiscreteMeasure: equal masses 1/n at n distinct points of the circle.

Weights are always handled as rational functions of t = e^{i theta}, so
w(theta) = W(t) and w'(theta) = i t W'(t).
"""

from __future__ import annotations

import cmath
import json
import math
from enum import StrEnum
from typing import Annotated, Any, Literal

import numpy as np
from loguru import logger
from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer, field_validator

from popuc.algebra.poly import ComplexPoly
from popuc.algebra.ratfun import RationalFn, rat_derivative, rational
from popuc.algebra.roots import factored_roots
from popuc.errors import DegenerateMeasure, InvalidConfiguration, NoDerivative
from popuc.opuc.sequence import OpucSequence, gram_schmidt_discrete, szego_sequence
from popuc.utils.complexio import complex_pair, parse_complex

PROBABILITY_TOLERANCE = 1e-10
DEFAULT_QUADRATURE_POINTS = 4096

ComplexValue = Annotated[
    complex,
    BeforeValidator(parse_complex),
    PlainSerializer(complex_pair, return_type=list[float]),
]


def _parse_rational(value: Any) -> Any:
    if isinstance(value, dict):
        return RationalFn.from_json(value)
    return value


RationalValue = Annotated[
    RationalFn,
    BeforeValidator(_parse_rational),
    PlainSerializer(lambda r: r.to_json(), return_type=dict),
]


class MeasureName(StrEnum):
    LEBESGUE = "lebesgue"
    BERNSTEIN_SZEGO = "bernstein_szego"
    SIEVED_BS = "sieved_bs"
    SINGLE_MOMENT = "single_moment"


class NamedMeasure(BaseModel):
    model_config = ConfigDict(frozen=True)

    type: Literal["named"] = "named"
    name: MeasureName
    zeta: ComplexValue = Field(default=0.5 + 0j, description="Parameter for Bernstein-Szegő families.")
    M: int = Field(default=1, ge=1, le=64, description="Sieving order.")

    @field_validator("zeta")
    @classmethod
    def _zeta_in_disk(cls, value: complex) -> complex:
        if abs(value) >= 1.0:
            raise ValueError("zeta must lie in the open unit disk")
        return value


class RationalWeight(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True, populate_by_name=True)

    type: Literal["rational_weight"] = "rational_weight"
    weight: RationalValue = Field(alias="W")
    verblunsky: tuple[ComplexValue, ...] | None = Field(
        default=None,
        description="Known Verblunsky prefix; all later coefficients are zero.",
    )


class DiscreteMeasure(BaseModel):
    model_config = ConfigDict(frozen=True)

    type: Literal["discrete"] = "discrete"
    points: tuple[ComplexValue, ...]


MeasureSpec = Annotated[
    NamedMeasure | RationalWeight | DiscreteMeasure, Field(discriminator="type")
]


class _MeasureDocument(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    measure: MeasureSpec


def parse_measure(
    value: str | dict[str, Any] | NamedMeasure | RationalWeight | DiscreteMeasure,
    *,
    zeta: complex | None = None,
    M: int | None = None,
) -> NamedMeasure | RationalWeight | DiscreteMeasure:
    """Accept a measure name, a JSON document (string or dict) or an existing spec."""
    if isinstance(value, NamedMeasure | RationalWeight | DiscreteMeasure):
        return value
    if isinstance(value, str) and not value.lstrip().startswith("{"):
        try:
            name = MeasureName(value.strip())
        except ValueError as exc:
            choices = ", ".join(m.value for m in MeasureName)
            raise InvalidConfiguration(
                f"Unknown measure {value!r}", hint=f"Choose one of: {choices}, or pass JSON."
            ) from exc
        extra: dict[str, Any] = {}
        if zeta is not None:
            extra["zeta"] = zeta
        if M is not None:
            extra["M"] = M
        try:
            return NamedMeasure(name=name, **extra)
        except ValueError as exc:
            raise InvalidConfiguration(f"Invalid measure parameters: {exc}") from exc
    if isinstance(value, str):
        try:
            value = json.loads(value)
        except json.JSONDecodeError as exc:
            raise InvalidConfiguration(f"Measure JSON is malformed: {exc.msg}") from exc
    try:
        return _MeasureDocument.model_validate({"measure": value}).measure
    except ValueError as exc:
        raise InvalidConfiguration(f"Invalid measure description: {exc}") from exc


# ===================================================================
# Weights
# ===================================================================


def _roots_of(value: complex, M: int) -> list[complex]:
    """All M-th roots of a nonzero complex number."""
    base = cmath.exp(cmath.log(value) / M)
    return [base * cmath.exp(2j * math.pi * j / M) for j in range(M)]


def _sieved_weight(zeta: complex, M: int) -> RationalFn:
    """(1-|zeta|^2) t^M / ((1 - zeta t^M)(t^M - conj(zeta))), M = 1 is plain Bernstein-Szegő."""
    if zeta == 0:
        return RationalFn.from_poly(1.0)
    outer = [(r, 1) for r in _roots_of(1.0 / zeta, M)]
    inner = [(r, 1) for r in _roots_of(zeta.conjugate(), M)]
    scale = -(1.0 - abs(zeta) ** 2) / zeta
    return rational(ComplexPoly.monomial(M, scale), outer + inner)


def named_weight(measure: NamedMeasure) -> RationalFn:
    match measure.name:
        case MeasureName.LEBESGUE:
            return RationalFn.from_poly(1.0)
        case MeasureName.BERNSTEIN_SZEGO:
            return _sieved_weight(measure.zeta, 1)
        case MeasureName.SIEVED_BS:
            return _sieved_weight(measure.zeta, measure.M)
        case MeasureName.SINGLE_MOMENT:
            # 1 - cos(theta) = -(t - 1)^2 / (2t)
            return rational(ComplexPoly.of([-0.5, 1.0, -0.5]), [(0j, 1)])
    raise InvalidConfiguration(f"Unsupported measure {measure.name}")


def weight_function(measure: NamedMeasure | RationalWeight | DiscreteMeasure) -> RationalFn:
    if isinstance(measure, NamedMeasure):
        return named_weight(measure)
    if isinstance(measure, RationalWeight):
        return measure.weight
    raise NoDerivative(
        "A discrete measure has no weight function",
        hint="Use bernstein_szego_weight() to pass to an absolutely continuous measure.",
    )


def weight_derivative(measure: NamedMeasure | RationalWeight | DiscreteMeasure) -> RationalFn:
    """f(t) = i t W'(t), so that w'(theta) = f(e^{i theta})."""
    W = weight_function(measure)
    return RationalFn.monomial(1, 1j) * rat_derivative(W)


def check_probability(W: RationalFn, points: int = DEFAULT_QUADRATURE_POINTS) -> float:
    """Total mass of W(e^{i theta}) dtheta/2pi by the trapezoid rule.

    Raises DegenerateMeasure when the weight is not real and positive on the
    circle or its mass is not 1.
    """
    for r, _ in W.poles:
        if abs(abs(r) - 1.0) < 1e-12:
            raise DegenerateMeasure(f"Weight has a pole on the unit circle at {r}")
    t = np.exp(2j * np.pi * np.arange(points) / points)
    w = np.asarray(W(t))
    if np.max(np.abs(w.imag)) > 1e-10 * max(1.0, float(np.max(np.abs(w)))):
        raise DegenerateMeasure("Weight is not real on the unit circle")
    if np.min(w.real) <= 0:
        raise DegenerateMeasure("Weight is not positive on the unit circle")
    mass = float(np.mean(w.real))
    if abs(mass - 1.0) > PROBABILITY_TOLERANCE:
        raise DegenerateMeasure(
            f"Weight has total mass {mass:.15g}, not 1",
            hint="Normalize W so that its mean over the circle is 1.",
        )
    return mass


# ===================================================================
# Verblunsky coefficients
# ===================================================================


def named_verblunsky(measure: NamedMeasure, count: int) -> list[complex]:
    match measure.name:
        case MeasureName.LEBESGUE:
            return [0j] * count
        case MeasureName.BERNSTEIN_SZEGO:
            return [measure.zeta if k == 0 else 0j for k in range(count)]
        case MeasureName.SIEVED_BS:
            return [measure.zeta if k == measure.M - 1 else 0j for k in range(count)]
        case MeasureName.SINGLE_MOMENT:
            return [complex(-1.0 / (k + 2)) for k in range(count)]
    raise InvalidConfiguration(f"Unsupported measure {measure.name}")


def quadrature_verblunsky(
    W: RationalFn, count: int, points: int = DEFAULT_QUADRATURE_POINTS
) -> list[complex]:
    """Szegő recursion with inner products by trapezoid quadrature.

    conj(alpha_k) = <z Phi_k, 1> / <Phi_k*, 1>, since Phi_{k+1} is orthogonal to 1.
    """
    t = np.exp(2j * np.pi * np.arange(points) / points)
    w = np.asarray(W(t)).real
    phi = np.ones(points, dtype=complex)
    phi_star = np.ones(points, dtype=complex)
    alphas: list[complex] = []
    for _ in range(count):
        alpha = complex(np.mean(t * phi * w) / np.mean(phi_star * w)).conjugate()
        phi, phi_star = t * phi - alpha.conjugate() * phi_star, phi_star - alpha * t * phi
        alphas.append(alpha)
    return alphas


def measure_sequence(
    measure: NamedMeasure | RationalWeight | DiscreteMeasure,
    n: int,
    *,
    quadrature_points: int = DEFAULT_QUADRATURE_POINTS,
) -> OpucSequence:
    """OPUC sequence through degree n (through degree len(points) - 1 for discrete measures)."""
    if isinstance(measure, DiscreteMeasure):
        return gram_schmidt_discrete(measure.points)
    if isinstance(measure, NamedMeasure):
        return szego_sequence(named_verblunsky(measure, n), n)
    if measure.verblunsky is not None:
        prefix = list(measure.verblunsky[:n])
        return szego_sequence(prefix + [0j] * (n - len(prefix)), n)
    check_probability(measure.weight, quadrature_points)
    logger.debug("Verblunsky coefficients by quadrature on {} points", quadrature_points)
    return szego_sequence(quadrature_verblunsky(measure.weight, n, quadrature_points), n)


def bernstein_szego_weight(seq: OpucSequence, n: int) -> RationalWeight:
    """W(t) = t^{n-1} / (phi_{n-1}(t) phi*_{n-1}(t)), i.e. 1/|phi_{n-1}|^2 on the circle.

    The returned measure has Verblunsky coefficients alpha_0..alpha_{n-2} of
    `seq` followed by zeros, so its degree-n paraorthogonal polynomials agree
    with those of the original measure.
    """
    seq.orthonormal(n - 1)
    phi = seq.monic[n - 1]
    kappa = seq.kappas[n - 1]
    roots = factored_roots(phi) if phi.degree >= 1 else []
    for r, _ in roots:
        if abs(r) >= 1.0 - 1e-12:
            raise DegenerateMeasure(
                f"phi_{n - 1} has a zero at {r} on or outside the unit circle",
                hint="The sequence does not come from a measure with infinite support.",
            )
    scale = 1.0 / kappa**2
    poles = list(roots)
    for r, m in roots:
        if r != 0:
            scale /= (-r.conjugate()) ** m
            poles.append((1.0 / r.conjugate(), m))
    W = rational(ComplexPoly.monomial(n - 1, scale), poles)
    return RationalWeight(weight=W, verblunsky=tuple(seq.alphas[: n - 1]))
