"""Circle Cauchy transforms and the G_n, D_n, J_n integrals.

For a rational R without poles on the unit circle,

    C[R](z) = int_0^{2pi} R(e^{i theta}) / (z - e^{i theta}) dtheta/2pi

is rational in z. Splitting R = P + R_in + R_out into its polynomial part
and the principal parts at poles inside and outside the disk, residue
calculus gives

    exterior (|z| > 1):  (P(0) + R_out(0) + R_in(z)) / z
    interior (|z| < 1):  (P(0) - P(z) + R_out(0) - R_out(z)) / z

The interior form is the exterior one minus R(z)/z, the residue picked up
when the pole at zeta = z moves inside the contour.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum
from typing import Any, Literal

import numpy as np

from popuc.algebra.poly import ZERO
from popuc.algebra.ratfun import RationalFn, from_partial_fractions, partial_fractions
from popuc.errors import InvalidConfiguration, NearSingularEvaluation, SingularIntegrand
from popuc.opuc.measures import DiscreteMeasure, bernstein_szego_weight, weight_function
from popuc.opuc.sequence import OpucSequence

CIRCLE_TOLERANCE = 1e-12
Which = Literal["G", "D", "J"]
DEFAULT_ORACLE_POINTS = 2**14


class Region(StrEnum):
    """Continuation region: a domain containing infinity or one containing zero."""

    EXTERIOR = "exterior"
    INTERIOR = "interior"


@dataclass(frozen=True, slots=True)
class GdjTriple:
    G: RationalFn
    D: RationalFn
    J: RationalFn
    region: Region
    n: int

    def to_json(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "region": self.region.value,
            "G": self.G.to_json(),
            "D": self.D.to_json(),
            "J": self.J.to_json(),
        }


def circle_cauchy_transform(R: RationalFn, region: Region) -> RationalFn:
    """C[R] as a rational function of z on the chosen region."""
    for x, _ in R.poles:
        if abs(abs(x) - 1.0) <= CIRCLE_TOLERANCE:
            raise SingularIntegrand(
                f"Integrand has a pole on the unit circle at {x}",
                hint="Cauchy transforms need R without poles on |zeta| = 1.",
            )
    polynomial_part, terms = partial_fractions(R)
    inside = from_partial_fractions(ZERO, [t for t in terms if abs(t[0]) < 1.0])
    outside = from_partial_fractions(ZERO, [t for t in terms if abs(t[0]) > 1.0])
    inv_z = RationalFn.monomial(-1)
    constant = polynomial_part(0) + outside(0)

    if Region(region) is Region.EXTERIOR:
        return (inside + constant) * inv_z
    return (RationalFn.from_poly(constant - polynomial_part) - outside) * inv_z


def build_gdj(seq: OpucSequence, n: int, f: RationalFn, region: Region) -> GdjTriple:
    """G_n, D_n, J_n as rational functions.

    On the circle conj(phi*(zeta)) = zeta^{-(n-1)} phi(zeta), so every
    integrand becomes a rational function of zeta alone:

        G:  i      C[phi* phi zeta^{-(n-1)} f]
        D:  -i z   C[phi*^2 zeta^{-n} f]
        J:  i      C[phi^2 zeta^{-(n-2)} f]

    with phi = phi_{n-1} orthonormal.
    """
    region = Region(region)
    phi = RationalFn.from_poly(seq.orthonormal(n - 1))
    phi_star = RationalFn.from_poly(seq.reversed_orthonormal(n - 1))

    R_G = phi_star * phi * RationalFn.monomial(-(n - 1)) * f
    R_D = phi_star * phi_star * RationalFn.monomial(-n) * f
    R_J = phi * phi * RationalFn.monomial(2 - n) * f

    G = circle_cauchy_transform(R_G, region) * 1j
    D = circle_cauchy_transform(R_D, region) * RationalFn.monomial(1, -1j)
    J = circle_cauchy_transform(R_J, region) * 1j
    return GdjTriple(G=G, D=D, J=J, region=region, n=n)


def spectral_derivative(samples: np.ndarray) -> np.ndarray:
    """d/dtheta of a real periodic sample vector on a uniform grid, via FFT."""
    N = samples.size
    k = np.fft.fftfreq(N, d=1.0 / N)
    if N % 2 == 0:
        k[N // 2] = 0.0
    return np.real(np.fft.ifft(1j * k * np.fft.fft(samples)))


def quadrature_oracle(
    seq: OpucSequence,
    n: int,
    measure: Any,
    which: Which,
    z: complex,
    N: int = DEFAULT_ORACLE_POINTS,
) -> complex:
    """Trapezoid rule for the theta-integral defining G_n, D_n or J_n at a single z.

    Independent of the residue path: the weight is sampled directly and
    differentiated spectrally. Discrete measures are replaced by their
    Bernstein-Szegő weight 1/|phi_{n-1}|^2.
    """
    if abs(abs(z) - 1.0) < 1e-6:
        raise NearSingularEvaluation(
            f"|z| = {abs(z):.9f} is too close to the unit circle for quadrature",
            hint="Evaluate at |z| >= 1 + 1e-6 or |z| <= 1 - 1e-6.",
        )
    if N < 2**10 or N & (N - 1):
        raise InvalidConfiguration(f"Grid size {N} must be a power of two >= 1024")
    if isinstance(measure, DiscreteMeasure):
        measure = bernstein_szego_weight(seq, n)

    theta = 2.0 * np.pi * np.arange(N) / N
    t = np.exp(1j * theta)
    w = np.asarray(weight_function(measure)(t)).real
    dw = spectral_derivative(w)
    phi = seq.orthonormal(n - 1)(t)
    phi_star = seq.reversed_orthonormal(n - 1)(t)
    kernel = dw / (z - t)

    if which == "G":
        return complex(1j * np.mean(np.abs(phi_star) ** 2 * kernel))
    if which == "D":
        return complex(-1j * z * np.mean(phi_star**2 * kernel / t**n))
    if which == "J":
        return complex(1j * np.mean(phi**2 * kernel / t ** (n - 2)))
    raise InvalidConfiguration(f"Unknown integral {which!r}; choose G, D or J")
