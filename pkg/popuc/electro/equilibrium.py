"""Equilibrium residuals and the zero-set checks that go with them."""

from __future__ import annotations

import cmath
from collections.abc import Sequence

import numpy as np

from popuc.algebra.poly import ComplexPoly, poly_derivative
from popuc.electro.models import Charge, ChargeConfiguration, EquilibriumReport
from popuc.errors import InvalidConfiguration, InvalidSupport, NotDisjoint

DEFAULT_EQUILIBRIUM_TOLERANCE = 1e-8
_CONTACT_TOLERANCE = 1e-14


def _as_points(points: Sequence[complex] | np.ndarray) -> np.ndarray:
    return np.asarray([complex(p) for p in points], dtype=complex)


def _forces(config: ChargeConfiguration, points: Sequence[complex] | np.ndarray) -> np.ndarray:
    """sum_{k != j} 1/(x_j - x_k) + sum_i q_i/(x_j - a_i) for every j."""
    x = _as_points(points)
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, np.inf)
    if np.min(np.abs(diff)) <= _CONTACT_TOLERANCE:
        raise InvalidConfiguration("Two mobile points coincide")
    forces = np.sum(1.0 / diff, axis=1)

    if config.generators:
        gap = x[:, None] - config.locations()[None, :]
        if np.min(np.abs(gap)) <= _CONTACT_TOLERANCE:
            raise InvalidConfiguration(
                "A generator sits on a mobile point",
                hint="The force from a charge at the point itself is undefined.",
            )
        forces = forces + np.sum(config.charges()[None, :] / gap, axis=1)
    return forces


def _report(
    mode: str,
    config: ChargeConfiguration,
    points: Sequence[complex] | np.ndarray,
    tolerance: float,
) -> EquilibriumReport:
    x = _as_points(points)
    forces = _forces(config, x)
    normal = np.imag(x * forces)
    scaled = tolerance * x.size
    max_total = float(np.max(np.abs(forces)))
    max_normal = float(np.max(np.abs(normal)))
    return EquilibriumReport(
        mode=mode,  # type: ignore[arg-type]
        forces=[complex(f) for f in forces],
        normal=[float(v) for v in normal],
        max_total=max_total,
        max_normal=max_normal,
        tolerance=scaled,
        total_pass=max_total < scaled,
        normal_pass=max_normal < scaled,
    )


def total_equilibrium_residual(
    config: ChargeConfiguration,
    points: Sequence[complex] | np.ndarray,
    *,
    tolerance: float = DEFAULT_EQUILIBRIUM_TOLERANCE,
) -> EquilibriumReport:
    """Report whose verdict is total equilibrium; tolerance scales with the point count."""
    return _report("total", config, points, tolerance)


def normal_equilibrium_residual(
    config: ChargeConfiguration,
    points: Sequence[complex] | np.ndarray,
    *,
    tolerance: float = DEFAULT_EQUILIBRIUM_TOLERANCE,
) -> EquilibriumReport:
    """Report whose verdict is equilibrium of the force component normal to the circle."""
    return _report("normal", config, points, tolerance)


def interlacing_check(
    zeros_a: Sequence[complex],
    zeros_b: Sequence[complex],
    *,
    tolerance: float = 1e-10,
) -> bool:
    """True iff the two unimodular sets alternate around the circle."""
    a, b = _as_points(zeros_a), _as_points(zeros_b)
    if a.size != b.size:
        raise InvalidConfiguration(
            f"Interlacing needs sets of equal size, got {a.size} and {b.size}"
        )
    both = np.concatenate([a, b])
    if both.size and np.max(np.abs(np.abs(both) - 1.0)) > 1e-8:
        raise InvalidSupport("Interlacing is defined for points on the unit circle")
    if a.size and b.size and np.min(np.abs(a[:, None] - b[None, :])) <= tolerance:
        raise NotDisjoint("The two zero sets share a point")

    angles = np.mod(np.angle(both), 2.0 * np.pi)
    labels = np.concatenate([np.zeros(a.size, dtype=int), np.ones(b.size, dtype=int)])
    ordered = labels[np.argsort(angles, kind="stable")]
    return bool(np.all(ordered != np.roll(ordered, 1)))


def p_double_prime_identity(points: Sequence[complex]) -> float:
    """max_j |P''(x_j)/P'(x_j) - sum_{k != j} 2/(x_j - x_k)| for P with zeros at the points."""
    x = _as_points(points)
    P = ComplexPoly.from_roots(x)
    dP = poly_derivative(P)
    ddP = poly_derivative(dP)
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, np.inf)
    expected = np.sum(2.0 / diff, axis=1)
    return float(np.max(np.abs(np.asarray(ddP(x)) / np.asarray(dP(x)) - expected)))


def rotate(config: ChargeConfiguration, phi: float) -> ChargeConfiguration:
    """Every generator moved by the rotation z -> e^{i phi} z; charges unchanged."""
    turn = cmath.exp(1j * phi)
    return ChargeConfiguration([Charge(g.location * turn, g.charge) for g in config.generators])
