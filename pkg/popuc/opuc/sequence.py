"""OPUC sequences: Szegő recursion, discrete Gram-Schmidt, paraorthogonal polynomials.

An OpucSequence carries the Verblunsky coefficients together with the
monic polynomials Phi_k, their reversals Phi_k* and the leading
coefficients kappa_k of the orthonormal polynomials phi_k = kappa_k Phi_k.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from loguru import logger

from popuc.algebra.poly import ONE, Z, ComplexPoly, reversed_star
from popuc.errors import (
    DegenerateMeasure,
    InsufficientSequence,
    InvalidConfiguration,
    InvalidSupport,
    InvalidVerblunsky,
)

UNIMODULAR_TOLERANCE = 1e-12
DISTINCT_TOLERANCE = 1e-10


@dataclass(frozen=True, slots=True)
class OpucSequence:
    """Verblunsky coefficients alpha_0..alpha_{N-1} and Phi_0..Phi_N, Phi_0*..Phi_N*, kappa_0..kappa_N.

    Sequences built from an n-point discrete measure stop at degree n - 1 and
    carry only alpha_0..alpha_{n-2}.
    """

    alphas: tuple[complex, ...]
    monic: tuple[ComplexPoly, ...]
    reversed: tuple[ComplexPoly, ...]
    kappas: tuple[float, ...]

    @property
    def degree(self) -> int:
        return len(self.monic) - 1

    def alpha(self, k: int) -> complex:
        if not 0 <= k < len(self.alphas):
            raise InsufficientSequence(
                f"alpha_{k} is not available; the sequence holds {len(self.alphas)} coefficients",
                hint="Build the sequence through a higher degree.",
            )
        return self.alphas[k]

    def _require(self, k: int) -> None:
        if not 0 <= k <= self.degree:
            raise InsufficientSequence(
                f"Degree {k} requested but the sequence stops at degree {self.degree}",
                hint="A discrete n-point measure only supports degrees up to n - 1.",
            )

    def orthonormal(self, k: int) -> ComplexPoly:
        self._require(k)
        return self.monic[k] * self.kappas[k]

    def reversed_orthonormal(self, k: int) -> ComplexPoly:
        self._require(k)
        return self.reversed[k] * self.kappas[k]

    def bernstein_szego_extension(self, n: int) -> OpucSequence:
        """Sequence of the Bernstein-Szegő measure 1/|phi_{n-1}|^2 through degree n.

        It shares Phi_0..Phi_{n-1} with this sequence and has alpha_{n-1} = 0,
        hence Phi_n = z Phi_{n-1} and kappa_n = kappa_{n-1}.
        """
        self._require(n - 1)
        alphas = self.alphas[: n - 1] + (0j,)
        monic = self.monic[:n] + (Z * self.monic[n - 1],)
        rev = self.reversed[:n] + (self.reversed[n - 1],)
        kappas = self.kappas[:n] + (self.kappas[n - 1],)
        return OpucSequence(alphas, monic, rev, kappas)


def szego_sequence(alphas: Sequence[complex], N: int) -> OpucSequence:
    """Run the Szegő recursion Phi_{k+1} = z Phi_k - conj(alpha_k) Phi_k* through degree N."""
    if N < 0 or N > len(alphas):
        raise InsufficientSequence(
            f"Need {N} Verblunsky coefficients, got {len(alphas)}",
            hint="Pass at least N coefficients.",
        )
    coeffs = [complex(a) for a in alphas[:N]]
    for k, a in enumerate(coeffs):
        if abs(a) >= 1.0:
            raise InvalidVerblunsky(
                f"|alpha_{k}| = {abs(a):.6g} is not inside the unit disk",
                hint="Verblunsky coefficients must satisfy |alpha| < 1.",
            )

    monic = [ONE]
    rev = [ONE]
    kappas = [1.0]
    for a in coeffs:
        phi, phi_star = monic[-1], rev[-1]
        monic.append(Z * phi - phi_star * a.conjugate())
        rev.append(phi_star - Z * phi * a)
        kappas.append(kappas[-1] / math.sqrt(1.0 - abs(a) ** 2))
    return OpucSequence(tuple(coeffs), tuple(monic), tuple(rev), tuple(kappas))


def normalize_points(points: Sequence[complex]) -> np.ndarray:
    """Validate a discrete support and project it exactly onto the circle."""
    x = np.asarray([complex(p) for p in points], dtype=complex)
    if x.size < 2:
        raise InvalidConfiguration(
            f"At least two support points are required, got {x.size}",
            hint="The generator construction needs n >= 2 distinct points.",
        )
    moduli = np.abs(x)
    bad = np.flatnonzero(np.abs(moduli - 1.0) > UNIMODULAR_TOLERANCE)
    if bad.size:
        raise InvalidSupport(
            f"Point {bad[0]} has modulus {moduli[bad[0]]:.15g}, not 1",
            hint="Support points must lie on the unit circle.",
        )
    x = x / moduli
    gaps = np.abs(x[:, None] - x[None, :]) + np.eye(x.size) * 4.0
    if gaps.min() <= DISTINCT_TOLERANCE:
        i, j = np.unravel_index(int(np.argmin(gaps)), gaps.shape)
        raise DegenerateMeasure(
            f"Points {i} and {j} coincide",
            hint="Discrete measures need pairwise distinct points.",
        )
    return x


def gram_schmidt_discrete(points: Sequence[complex]) -> OpucSequence:
    """Orthonormalize 1, z, ..., z^{n-1} in L^2 of the uniform measure on the points.

    Modified Gram-Schmidt with a second reorthogonalization pass; inner
    products are exact finite sums over the point masses.
    """
    x = normalize_points(points)
    n = x.size
    values = np.zeros((n, n), dtype=complex)  # column k: values of q_k at the points
    coeffs = np.zeros((n, n), dtype=complex)  # column k: coefficients of q_k
    monic: list[ComplexPoly] = []
    kappas: list[float] = []

    for k in range(n):
        v_vals = x**k
        v_coef = np.zeros(n, dtype=complex)
        v_coef[k] = 1.0
        for _ in range(2):
            for j in range(k):
                c = np.vdot(values[:, j], v_vals) / n
                v_vals = v_vals - c * values[:, j]
                v_coef = v_coef - c * coeffs[:, j]
        norm = math.sqrt(max(float(np.vdot(v_vals, v_vals).real) / n, 0.0))
        if norm <= 1e-14:
            raise DegenerateMeasure(f"Gram-Schmidt broke down at degree {k}")
        values[:, k] = v_vals / norm
        coeffs[:, k] = v_coef / norm
        monic.append(ComplexPoly.of(v_coef[: k + 1]))
        kappas.append(1.0 / norm)

    rev = [reversed_star(p, k) for k, p in enumerate(monic)]
    alphas = tuple(-complex(monic[k + 1].coeffs[0]).conjugate() for k in range(n - 1))
    logger.debug("Gram-Schmidt on {} points, kappa_(n-1) = {:.6g}", n, kappas[-1])
    return OpucSequence(alphas, tuple(monic), tuple(rev), tuple(kappas))


def popuc(seq: OpucSequence, n: int, beta: complex) -> ComplexPoly:
    """Phi_n(z; beta) = z Phi_{n-1}(z) - conj(beta) Phi_{n-1}*(z)."""
    if n < 1:
        raise InvalidConfiguration(f"Degree must be at least 1, got {n}")
    if n - 1 > seq.degree:
        raise InsufficientSequence(
            f"Degree {n} needs Phi_{n - 1} but the sequence stops at degree {seq.degree}",
            hint="A discrete n-point measure supports POPUC degrees up to n.",
        )
    return Z * seq.monic[n - 1] - seq.reversed[n - 1] * complex(beta).conjugate()


def beta_from_points(points: Sequence[complex]) -> complex:
    """beta = (-1)^{n+1} prod conj(x_j), so that Phi_n(.; beta) vanishes on the points."""
    x = normalize_points(points)
    sign = -1.0 if (x.size + 1) % 2 else 1.0
    return complex(sign * np.prod(np.conj(x)))
