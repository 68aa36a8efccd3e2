"""Charge configurations, equilibrium reports and Lamé forms.

Charges follow the logarithmic convention: a unit charge at a exerts the
force 2pq/conj(b - a) on a charge p at b, so a set of unit mobile charges
x_1..x_n is in total equilibrium under generators (a_i, q_i) exactly when

    sum_{k != j} 1/(x_j - x_k) + sum_i q_i/(x_j - a_i) = 0   for every j.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Literal

import numpy as np

from popuc.algebra.poly import ZERO, ComplexPoly
from popuc.errors import InvalidConfiguration
from popuc.utils.complexio import complex_pair, parse_complex

COINCIDENCE_TOLERANCE = 1e-12


@dataclass(frozen=True, slots=True)
class Charge:
    location: complex
    charge: float

    @property
    def is_origin(self) -> bool:
        return self.location == 0

    def to_dict(self) -> dict[str, Any]:
        return {"location": complex_pair(self.location), "charge": self.charge}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Charge:
        try:
            return cls(location=parse_complex(data["location"]), charge=float(data["charge"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidConfiguration(
                f"Malformed generator entry {data!r}",
                hint='Each generator is {"location": [re, im], "charge": q}.',
            ) from exc


@dataclass(slots=True)
class ChargeConfiguration:
    """Electric field generators; locations are pairwise distinct."""

    generators: list[Charge] = field(default_factory=list)

    def __post_init__(self) -> None:
        locations = self.locations()
        if locations.size < 2:
            return
        gaps = np.abs(locations[:, None] - locations[None, :]) + np.eye(locations.size)
        if gaps.min() <= COINCIDENCE_TOLERANCE:
            raise InvalidConfiguration(
                "Two generators share a location",
                hint="Merge coincident charges by summing them.",
            )

    def locations(self) -> np.ndarray:
        return np.array([g.location for g in self.generators], dtype=complex)

    def charges(self) -> np.ndarray:
        return np.array([g.charge for g in self.generators], dtype=float)

    @property
    def total_charge(self) -> float:
        return float(sum(g.charge for g in self.generators))

    def origin_charge(self) -> float:
        return next((g.charge for g in self.generators if g.is_origin), 0.0)

    def without_origin(self) -> ChargeConfiguration:
        return ChargeConfiguration([g for g in self.generators if not g.is_origin])

    def to_dict(self) -> dict[str, Any]:
        return {"generators": [g.to_dict() for g in self.generators]}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ChargeConfiguration:
        entries = data.get("generators")
        if not isinstance(entries, list):
            raise InvalidConfiguration("Charge configuration needs a 'generators' list")
        return cls([Charge.from_dict(e) for e in entries])


@dataclass(slots=True)
class EquilibriumReport:
    """Per-point forces for one configuration.

    `forces[j]` is the left side of the total-equilibrium condition at
    x_j and `normal[j]` = Im[x_j forces[j]]. Total equilibrium implies
    normal equilibrium, so total_pass implies normal_pass up to rounding.
    """

    mode: Literal["total", "normal"]
    forces: list[complex]
    normal: list[float]
    max_total: float
    max_normal: float
    tolerance: float
    total_pass: bool
    normal_pass: bool

    @property
    def passed(self) -> bool:
        return self.total_pass if self.mode == "total" else self.normal_pass

    def to_dict(self) -> dict[str, Any]:
        return {
            "mode": self.mode,
            "passed": self.passed,
            "tolerance": self.tolerance,
            "max_total": self.max_total,
            "max_normal": self.max_normal,
            "total_pass": self.total_pass,
            "normal_pass": self.normal_pass,
            "forces": [complex_pair(f) for f in self.forces],
            "normal": list(self.normal),
        }


@dataclass(slots=True)
class LameForm:
    """p(z) = sum_i t_i/(z - w_i) + polynomial part, with h = S1/S2.

    The particle at w_i carries charge t_i/2; t_i are integers because
    they count zeros and poles of h plus the 1 - n at the origin.
    """

    poles: list[tuple[complex, int]]
    n: int
    S1: ComplexPoly
    S2: ComplexPoly
    polynomial_part: ComplexPoly = ZERO
    reconstruction_error: float = 0.0
    cancelled_on_circle: list[complex] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)

    def charges(self) -> ChargeConfiguration:
        return ChargeConfiguration([Charge(w, t / 2.0) for w, t in self.poles])

    def p_value(self, z: Any) -> Any:
        zz = np.asarray(z, dtype=complex)
        value = np.asarray(self.polynomial_part(zz), dtype=complex)
        for w, t in self.poles:
            value = value + t / (zz - w)
        return complex(value) if np.ndim(value) == 0 else value

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "poles": [{"location": complex_pair(w), "t": t} for w, t in self.poles],
            "S1": self.S1.to_json(),
            "S2": self.S2.to_json(),
            "reconstruction_error": self.reconstruction_error,
            "cancelled_on_circle": [complex_pair(c) for c in self.cancelled_on_circle],
            "diagnostics": list(self.diagnostics),
        }
