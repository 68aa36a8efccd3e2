"""The h function, the second-order ODE and the first-order system.

With A(y) = n(1 - conj(y) alpha_{n-1}) + z G + conj(y) D and
B(y) = J - conj(y) G, the derivative identity

    Phi_n'(z; beta) = Phi_{n-1}(z) A(beta) - Phi_{n-1}*(z) B(beta)

holds, and h(z; x; y) = conj(x) A(y) - z B(y). Eliminating Phi_{n-1} and
Phi_{n-1}* between two paraorthogonal polynomials gives the 2x2 system;
eliminating them between Phi_n(.; beta) and its derivative gives

    y'' + p y' + q y = 0,
    p = (1 - n)/z - h'/h,
    q = W[h(.; beta; beta), h(.; -beta; beta)] / (2 conj(beta) z h)
        - ((n + z G) G + J (D - n alpha_{n-1})) / z,

with h = h(.; beta; beta). Every identity is verified twice: once on the
coefficients over a common denominator, once at seeded sample points.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np
from loguru import logger
from numpy.polynomial import polynomial as npoly

from popuc.algebra.poly import ComplexPoly, poly_derivative
from popuc.algebra.ratfun import RationalFn, common_denominator, rat_derivative, wronskian
from popuc.cauchy import DEFAULT_ORACLE_POINTS, GdjTriple, Region, quadrature_oracle
from popuc.config.schema import VerificationConfig
from popuc.errors import (
    DegenerateH,
    DegeneratePair,
    InvalidConfiguration,
    MalformedOde,
    UnsupportedBetaZero,
)
from popuc.opuc.sequence import OpucSequence, popuc
from popuc.utils.complexio import complex_pair

DEFAULT_RESIDUAL_TOLERANCE = 1e-8
DEFAULT_IDENTITY_TOLERANCE = 1e-9
DEFAULT_ORACLE_TOLERANCE = 1e-8
_RESAMPLE_FACTOR = 64

Z_RATIONAL = RationalFn.monomial(1)
ONE_RATIONAL = RationalFn.monomial(0)


@dataclass(frozen=True, slots=True)
class Sampling:
    """Where identity checks place their sample points."""

    samples: int = 32
    exterior_radius: float = 1.5
    interior_radius: float = 0.5
    pole_clearance: float = 1e-3
    seed: int = 0

    @classmethod
    def from_config(cls, config: VerificationConfig) -> Sampling:
        return cls(
            samples=config.samples,
            exterior_radius=config.exterior_radius,
            interior_radius=config.interior_radius,
            pole_clearance=config.pole_clearance,
            seed=config.seed,
        )

    def radius(self, region: Region) -> float:
        if Region(region) is Region.EXTERIOR:
            return self.exterior_radius
        return self.interior_radius


@dataclass(slots=True)
class ResidualReport:
    """Outcome of one rational identity check."""

    name: str
    coefficient_ratio: float
    max_sample_residual: float
    samples_used: int
    tolerance: float
    passed: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "coefficient_ratio": self.coefficient_ratio,
            "max_sample_residual": self.max_sample_residual,
            "samples_used": self.samples_used,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


@dataclass(frozen=True, slots=True)
class OdeCoefficients:
    """y'' + p y' + q y = 0."""

    p: RationalFn
    q: RationalFn
    region: Region
    n: int
    beta: complex

    def to_json(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "beta": complex_pair(self.beta),
            "region": self.region.value,
            "p": self.p.to_json(),
            "q": self.q.to_json(),
        }


@dataclass(frozen=True, slots=True)
class SystemCoefficients:
    """(u', v') = [[a11, a12], [a21, a22]] (u, v) with u = Phi_n(.; beta), v = Phi_n(.; tau)."""

    a11: RationalFn
    a12: RationalFn
    a21: RationalFn
    a22: RationalFn
    n: int
    beta: complex
    tau: complex
    region: Region

    def to_json(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "beta": complex_pair(self.beta),
            "tau": complex_pair(self.tau),
            "region": self.region.value,
            "a11": self.a11.to_json(),
            "a12": self.a12.to_json(),
            "a21": self.a21.to_json(),
            "a22": self.a22.to_json(),
        }


# ===================================================================
# h and the coefficient assembly
# ===================================================================


def _check_degree(seq: OpucSequence, n: int, gdj: GdjTriple) -> None:
    if gdj.n != n:
        raise InvalidConfiguration(
            f"G, D, J were built for n = {gdj.n}, not n = {n}",
            hint="Rebuild the integrals at the degree you want to verify.",
        )
    seq.alpha(n - 1)


def _slope(seq: OpucSequence, n: int, gdj: GdjTriple, y: complex) -> RationalFn:
    """A(y) = n(1 - conj(y) alpha_{n-1}) + z G + conj(y) D."""
    y_bar = complex(y).conjugate()
    alpha = seq.alpha(n - 1)
    return Z_RATIONAL * gdj.G + gdj.D * y_bar + n * (1.0 - y_bar * alpha)


def _drift(gdj: GdjTriple, y: complex) -> RationalFn:
    """B(y) = J - conj(y) G."""
    return gdj.J - gdj.G * complex(y).conjugate()


def h_fn(seq: OpucSequence, n: int, gdj: GdjTriple, x: complex, y: complex) -> RationalFn:
    """h_n(z; x; y) = conj(x) A(y) - z B(y)."""
    _check_degree(seq, n, gdj)
    return _slope(seq, n, gdj, y) * complex(x).conjugate() - Z_RATIONAL * _drift(gdj, y)


def first_order_system(
    seq: OpucSequence, n: int, gdj: GdjTriple, beta: complex, tau: complex
) -> SystemCoefficients:
    beta, tau = complex(beta), complex(tau)
    if beta == tau:
        raise DegeneratePair(
            f"beta and tau coincide ({beta})",
            hint="The system couples two different paraorthogonal polynomials.",
        )
    inv_d = RationalFn.monomial(-1, 1.0 / (beta.conjugate() - tau.conjugate()))
    return SystemCoefficients(
        a11=-h_fn(seq, n, gdj, tau, beta) * inv_d,
        a12=h_fn(seq, n, gdj, beta, beta) * inv_d,
        a21=-h_fn(seq, n, gdj, tau, tau) * inv_d,
        a22=h_fn(seq, n, gdj, beta, tau) * inv_d,
        n=n,
        beta=beta,
        tau=tau,
        region=gdj.region,
    )


def second_order_ode(seq: OpucSequence, n: int, gdj: GdjTriple, beta: complex) -> OdeCoefficients:
    """Coefficients p, q of the ODE solved by Phi_n(.; beta)."""
    beta = complex(beta)
    if beta == 0:
        raise UnsupportedBetaZero(
            "q has a 1/conj(beta) factor and is undefined at beta = 0",
            hint="Phi_n(.; 0) = z Phi_{n-1}; use a nonzero beta.",
        )
    h = h_fn(seq, n, gdj, beta, beta)
    if h.is_zero:
        raise DegenerateH(f"h_n(z; beta; beta) vanishes identically for beta = {beta}")
    h_flip = h_fn(seq, n, gdj, -beta, beta)
    inv_h = 1.0 / h
    inv_z = RationalFn.monomial(-1)
    alpha = seq.alpha(n - 1)

    p = inv_z * (1 - n) - rat_derivative(h) * inv_h
    wronskian_part = (
        wronskian(h, h_flip) * inv_h * RationalFn.monomial(-1, 1.0 / (2.0 * beta.conjugate()))
    )
    G, D, J = gdj.G, gdj.D, gdj.J
    q = wronskian_part - inv_z * ((Z_RATIONAL * G + n) * G + J * (D - n * alpha))
    logger.debug(
        "ODE at n = {}, beta = {}: p has {} poles, q has {}", n, beta, len(p.poles), len(q.poles)
    )
    return OdeCoefficients(p=p, q=q, region=gdj.region, n=n, beta=beta)


# ===================================================================
# Identity checks
# ===================================================================


def sample_points(poles: Sequence[complex], region: Region, sampling: Sampling) -> np.ndarray:
    rng = np.random.default_rng(sampling.seed)
    radius = sampling.radius(region)
    pole_array = np.asarray(list(poles), dtype=complex)
    points: list[complex] = []
    rejected = 0
    for _ in range(sampling.samples * _RESAMPLE_FACTOR):
        z = radius * np.exp(2j * np.pi * rng.random())
        if pole_array.size and np.min(np.abs(pole_array - z)) < sampling.pole_clearance:
            rejected += 1
            continue
        points.append(complex(z))
        if len(points) == sampling.samples:
            break
    if rejected:
        logger.debug("Resampled {} points that fell within the pole clearance", rejected)
    if not points:
        raise MalformedOde(
            f"No sample point on |z| = {radius} stays clear of the poles",
            hint="Change the sampling radius or the pole clearance.",
        )
    return np.asarray(points)


def identity_residual(
    name: str,
    terms: Sequence[tuple[RationalFn, ComplexPoly]],
    region: Region,
    *,
    tolerance: float,
    sampling: Sampling | None = None,
) -> ResidualReport:
    """Check that sum c_i P_i vanishes identically.

    The coefficient test writes every c_i P_i over the common denominator
    and compares the numerator of the sum with the largest numerator of a
    single term. The sample test compares |sum| with max_i |c_i P_i| at
    each point.
    """
    sampling = sampling or Sampling()
    coeffs = [c for c, _ in terms]
    numerators, _ = common_denominator(coeffs)
    products = [(num * P).array() for num, (_, P) in zip(numerators, terms, strict=True)]
    total = np.zeros(1, dtype=complex)
    for arr in products:
        total = npoly.polyadd(total, arr)
    scale = max(float(np.max(np.abs(arr))) for arr in products)
    ratio = float(np.max(np.abs(total))) / scale if scale > 0 else 0.0

    zs = sample_points([r for c in coeffs for r, _ in c.poles], region, sampling)
    values = np.array([np.asarray(c(zs)) * np.asarray(P(zs)) for c, P in terms])
    magnitude = np.max(np.abs(values), axis=0)
    summed = np.abs(np.sum(values, axis=0))
    relative = np.where(magnitude > 0, summed / np.where(magnitude > 0, magnitude, 1.0), 0.0)
    worst = float(np.max(relative))

    passed = ratio < tolerance and worst < tolerance
    logger.debug(
        "{}: coefficient ratio {:.3e}, sample residual {:.3e} ({})",
        name,
        ratio,
        worst,
        "pass" if passed else "fail",
    )
    return ResidualReport(
        name=name,
        coefficient_ratio=ratio,
        max_sample_residual=worst,
        samples_used=int(zs.size),
        tolerance=tolerance,
        passed=passed,
    )


def verify_ode(
    ode: OdeCoefficients,
    y: ComplexPoly,
    *,
    tolerance: float = DEFAULT_RESIDUAL_TOLERANCE,
    sampling: Sampling | None = None,
) -> ResidualReport:
    dy = poly_derivative(y)
    terms = [(ONE_RATIONAL, poly_derivative(dy)), (ode.p, dy), (ode.q, y)]
    return identity_residual("ode", terms, ode.region, tolerance=tolerance, sampling=sampling)


def verify_system(
    system: SystemCoefficients,
    u: ComplexPoly,
    v: ComplexPoly,
    *,
    tolerance: float = DEFAULT_IDENTITY_TOLERANCE,
    sampling: Sampling | None = None,
) -> ResidualReport:
    """Both rows of the system; the report carries the worse of the two."""
    rows = [
        [(ONE_RATIONAL, poly_derivative(u)), (-system.a11, u), (-system.a12, v)],
        [(ONE_RATIONAL, poly_derivative(v)), (-system.a21, u), (-system.a22, v)],
    ]
    first, second = (
        identity_residual(
            f"system-row-{i}", row, system.region, tolerance=tolerance, sampling=sampling
        )
        for i, row in enumerate(rows, start=1)
    )
    return ResidualReport(
        name="system",
        coefficient_ratio=max(first.coefficient_ratio, second.coefficient_ratio),
        max_sample_residual=max(first.max_sample_residual, second.max_sample_residual),
        samples_used=min(first.samples_used, second.samples_used),
        tolerance=tolerance,
        passed=first.passed and second.passed,
    )


def derivative_identity_check(
    seq: OpucSequence,
    n: int,
    gdj: GdjTriple,
    beta: complex,
    *,
    tolerance: float = DEFAULT_IDENTITY_TOLERANCE,
    sampling: Sampling | None = None,
) -> ResidualReport:
    """Phi_n'(.; beta) = Phi_{n-1} A(beta) - Phi_{n-1}* B(beta)."""
    _check_degree(seq, n, gdj)
    target = poly_derivative(popuc(seq, n, beta))
    terms = [
        (ONE_RATIONAL, target),
        (-_slope(seq, n, gdj, beta), seq.monic[n - 1]),
        (_drift(gdj, beta), seq.reversed[n - 1]),
    ]
    return identity_residual(
        "derivative-identity", terms, gdj.region, tolerance=tolerance, sampling=sampling
    )


def oracle_agreement(
    seq: OpucSequence,
    n: int,
    measure: Any,
    gdj: GdjTriple,
    *,
    grid: int = DEFAULT_ORACLE_POINTS,
    tolerance: float = DEFAULT_ORACLE_TOLERANCE,
    sampling: Sampling | None = None,
) -> ResidualReport:
    """G, D and J against trapezoid quadrature of their theta-integrals.

    The error at each sample is taken relative to 1 + |value|. There is no
    coefficient-level test, so coefficient_ratio is reported as 0.
    """
    sampling = sampling or Sampling()
    triple = {"G": gdj.G, "D": gdj.D, "J": gdj.J}
    zs = sample_points(
        [r for fn in triple.values() for r, _ in fn.poles], gdj.region, sampling
    )
    worst = 0.0
    for which, fn in triple.items():
        for z in zs:
            value = complex(fn(complex(z)))
            approx = quadrature_oracle(seq, n, measure, which, complex(z), grid)
            worst = max(worst, abs(value - approx) / (1.0 + abs(value)))
    logger.debug("Oracle agreement at n = {}: worst relative error {:.3e}", n, worst)
    return ResidualReport(
        name="oracle-agreement",
        coefficient_ratio=0.0,
        max_sample_residual=worst,
        samples_used=int(zs.size),
        tolerance=tolerance,
        passed=worst < tolerance,
    )
