"""Polynomial root finding.

Aberth-Ehrlich simultaneous iteration with a Newton polish. Exact zero
roots (vanishing low-order coefficients) are split off first so the
iteration never has to resolve a high-multiplicity root at the origin,
which is the common case for the z^k factors in this package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from loguru import logger
from numpy.polynomial import polynomial as npoly

from popuc.algebra.poly import TRIM_TOLERANCE, ComplexPoly
from popuc.config.schema import NumericsConfig
from popuc.errors import UndefinedRoots

DEFAULT_MAX_ITERATIONS = 500
DEFAULT_TOLERANCE = 1e-14
DEFAULT_CLUSTER_TOLERANCE = 1e-6
_POLISH_STEPS = 3
_START_ANGLE = 0.4


@dataclass(frozen=True, slots=True)
class RootOptions:
    """Root finder effort and the distance at which computed roots merge."""

    max_iterations: int = DEFAULT_MAX_ITERATIONS
    tolerance: float = DEFAULT_TOLERANCE
    cluster_tolerance: float = DEFAULT_CLUSTER_TOLERANCE

    @classmethod
    def from_config(cls, config: NumericsConfig) -> RootOptions:
        return cls(
            max_iterations=config.root_max_iterations,
            tolerance=config.root_tolerance,
            cluster_tolerance=config.cluster_tolerance,
        )

    def roots(self, p: ComplexPoly) -> list[complex]:
        return poly_roots(p, max_iterations=self.max_iterations, tolerance=self.tolerance)

    def factor(self, p: ComplexPoly) -> list[tuple[complex, int]]:
        return factored_roots(
            p,
            max_iterations=self.max_iterations,
            tolerance=self.tolerance,
            cluster_tolerance=self.cluster_tolerance,
        )


def _aberth(monic: np.ndarray, max_iterations: int, tolerance: float) -> tuple[np.ndarray, bool]:
    """Run Aberth-Ehrlich on a monic coefficient vector (ascending, degree >= 2)."""
    d = monic.size - 1
    radius = 1.0 + float(np.max(np.abs(monic[:-1])))
    angles = 2.0 * np.pi * np.arange(d) / d + _START_ANGLE
    z = radius * np.exp(1j * angles)
    deriv = npoly.polyder(monic)
    active = np.ones(d, dtype=bool)

    for _ in range(max_iterations):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            pz = npoly.polyval(z, monic)
            dpz = npoly.polyval(z, deriv)
            ratio = pz / dpz
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            repulsion = np.sum(1.0 / diff, axis=1)
            step = ratio / (1.0 - ratio * repulsion)
        step = np.where(np.isfinite(step), step, 0.0)
        # a root sitting exactly on a zero of p' gets nudged off
        stalled = (dpz == 0) & (pz != 0)
        step = np.where(stalled, 1e-3 * (1.0 + np.abs(z)), step)
        z = np.where(active, z - step, z)
        active &= np.abs(step) > tolerance * (1.0 + np.abs(z))
        if not active.any():
            return z, True
    return z, False


def _polish(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    deriv = npoly.polyder(coeffs)
    for _ in range(_POLISH_STEPS):
        with np.errstate(divide="ignore", invalid="ignore"):
            pz = npoly.polyval(z, coeffs)
            candidate = z - pz / npoly.polyval(z, deriv)
        finite = np.isfinite(candidate)
        better = finite & (
            np.abs(npoly.polyval(np.where(finite, candidate, z), coeffs)) <= np.abs(pz)
        )
        z = np.where(better, candidate, z)
    return z


def sort_roots(roots: np.ndarray | list[complex]) -> list[complex]:
    """Sort by principal argument in [0, 2pi), ties by modulus."""

    def key(r: complex) -> tuple[float, float]:
        angle = math.atan2(r.imag, r.real) % (2.0 * math.pi)
        if angle > 2.0 * math.pi - 1e-12 or abs(r) == 0.0:
            angle = 0.0
        return (round(angle, 12), abs(r))

    return sorted((complex(r) for r in roots), key=key)


def poly_roots(
    p: ComplexPoly,
    *,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    tolerance: float = DEFAULT_TOLERANCE,
) -> list[complex]:
    """All deg(p) roots with multiplicity, sorted by argument then modulus."""
    if p.degree < 1:
        raise UndefinedRoots(
            "Roots are undefined for a constant or zero polynomial",
            hint="poly_roots needs degree >= 1.",
        )
    coeffs = p.array()
    floor = TRIM_TOLERANCE * float(np.max(np.abs(coeffs)))
    zero_count = 0
    while abs(coeffs[zero_count]) <= floor:
        zero_count += 1
    reduced = coeffs[zero_count:]
    roots: list[complex] = [0j] * zero_count

    d = reduced.size - 1
    if d == 1:
        roots.append(complex(-reduced[0] / reduced[1]))
    elif d >= 2:
        monic = reduced / reduced[-1]
        found, converged = _aberth(monic, max_iterations, tolerance)
        if not converged:
            logger.debug("Aberth iteration hit {} sweeps at degree {}", max_iterations, d)
            if not np.all(np.isfinite(found)):
                logger.debug("Falling back to companion eigenvalues")
                found = npoly.polyroots(monic)
        roots.extend(_polish(monic, found).tolist())
    return sort_roots(roots)


def cluster_roots(
    roots: list[complex], tolerance: float = DEFAULT_CLUSTER_TOLERANCE
) -> list[tuple[complex, int]]:
    """Group nearly coincident roots into (mean location, multiplicity) pairs."""
    clusters: list[list[complex]] = []
    for r in roots:
        for members in clusters:
            center = sum(members) / len(members)
            if abs(r - center) <= tolerance * (1.0 + abs(center)):
                members.append(r)
                break
        else:
            clusters.append([r])
    return [(complex(sum(m) / len(m)), len(m)) for m in clusters]


def factored_roots(
    p: ComplexPoly,
    *,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    tolerance: float = DEFAULT_TOLERANCE,
    cluster_tolerance: float = DEFAULT_CLUSTER_TOLERANCE,
) -> list[tuple[complex, int]]:
    """Roots of p as (root, multiplicity); exact zero roots stay exactly 0."""
    if p.degree < 1:
        return []
    roots = poly_roots(p, max_iterations=max_iterations, tolerance=tolerance)
    zeros = sum(1 for r in roots if r == 0)
    rest = cluster_roots([r for r in roots if r != 0], cluster_tolerance)
    return ([(0j, zeros)] if zeros else []) + rest
