"""Dense complex polynomials.

ComplexPoly stores coefficients in ascending degree with trailing dust
trimmed, so the identically zero polynomial is the empty tuple and has
degree -1. Arithmetic delegates to numpy.polynomial.polynomial.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np
from numpy.polynomial import polynomial as npoly

from popuc.errors import InvalidConfiguration, InvalidDeclaredDegree
from popuc.utils.complexio import complex_pairs, parse_complex

TRIM_TOLERANCE = 1e-13


def _trim(coeffs: np.ndarray, abs_tol: float | None = None) -> tuple[complex, ...]:
    values = np.asarray(coeffs, dtype=complex).ravel()
    if values.size == 0:
        return ()
    tol = abs_tol if abs_tol is not None else TRIM_TOLERANCE * float(np.max(np.abs(values)))
    end = values.size
    while end > 0 and abs(values[end - 1]) <= tol:
        end -= 1
    return tuple(complex(c) for c in values[:end])


@dataclass(frozen=True, slots=True)
class ComplexPoly:
    """Complex-coefficient polynomial, coefficients ascending by degree."""

    coeffs: tuple[complex, ...] = ()

    @classmethod
    def of(cls, coeffs: Iterable[complex], abs_tol: float | None = None) -> ComplexPoly:
        """Build from any coefficient iterable, trimming trailing dust.

        With abs_tol unset, trailing coefficients at or below 1e-13 times the
        largest magnitude are dropped.
        """
        return cls(_trim(np.fromiter((complex(c) for c in coeffs), dtype=complex), abs_tol))

    @classmethod
    def constant(cls, value: complex) -> ComplexPoly:
        return cls.of([value])

    @classmethod
    def monomial(cls, k: int, value: complex = 1.0) -> ComplexPoly:
        return cls.of([0.0] * k + [value])

    @classmethod
    def from_roots(cls, roots: Iterable[complex], leading: complex = 1.0) -> ComplexPoly:
        coeffs = np.array([leading], dtype=complex)
        for r in roots:
            coeffs = np.convolve(coeffs, np.array([-complex(r), 1.0]))
        return cls.of(coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> complex:
        return self.coeffs[-1] if self.coeffs else 0j

    def array(self) -> np.ndarray:
        if not self.coeffs:
            return np.zeros(1, dtype=complex)
        return np.array(self.coeffs, dtype=complex)

    def scale(self) -> float:
        """Largest coefficient magnitude (0 for the zero polynomial)."""
        return float(np.max(np.abs(self.array())))

    def __call__(self, z: Any) -> Any:
        return poly_eval(self, z)

    def __add__(self, other: ComplexPoly | complex) -> ComplexPoly:
        other = as_poly(other)
        return ComplexPoly.of(npoly.polyadd(self.array(), other.array()))

    __radd__ = __add__

    def __neg__(self) -> ComplexPoly:
        return ComplexPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: ComplexPoly | complex) -> ComplexPoly:
        return self + (-as_poly(other))

    def __rsub__(self, other: complex) -> ComplexPoly:
        return as_poly(other) - self

    def __mul__(self, other: ComplexPoly | complex) -> ComplexPoly:
        other = as_poly(other)
        if self.is_zero or other.is_zero:
            return ZERO
        return ComplexPoly.of(np.convolve(self.array(), other.array()))

    __rmul__ = __mul__

    def divmod(self, divisor: ComplexPoly) -> tuple[ComplexPoly, ComplexPoly]:
        if divisor.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        if self.degree < divisor.degree:
            return ZERO, self
        quotient, remainder = npoly.polydiv(self.array(), divisor.array())
        return ComplexPoly.of(quotient), ComplexPoly.of(remainder)

    def shifted(self, x: complex) -> ComplexPoly:
        """Taylor shift: coefficients of t -> p(x + t)."""
        out = np.zeros(1, dtype=complex)
        step = np.array([complex(x), 1.0])
        for c in reversed(self.coeffs):
            out = np.convolve(out, step)
            out[0] += c
        return ComplexPoly.of(out)

    def conjugate(self) -> ComplexPoly:
        return ComplexPoly(tuple(c.conjugate() for c in self.coeffs))

    def to_json(self) -> list[list[float]]:
        return complex_pairs(self.coeffs)

    @classmethod
    def from_json(cls, data: Sequence[Any]) -> ComplexPoly:
        if not isinstance(data, Sequence) or isinstance(data, str):
            raise InvalidConfiguration("Polynomials are JSON arrays of [re, im] pairs")
        return cls.of(parse_complex(c) for c in data)

    def __repr__(self) -> str:
        return f"ComplexPoly({list(self.coeffs)})"


ZERO = ComplexPoly(())
ONE = ComplexPoly((1 + 0j,))
Z = ComplexPoly((0j, 1 + 0j))


def as_poly(value: ComplexPoly | complex | float | int) -> ComplexPoly:
    if isinstance(value, ComplexPoly):
        return value
    return ComplexPoly.constant(complex(value))


def poly_eval(p: ComplexPoly, z: Any) -> Any:
    """Horner evaluation; works on scalars and numpy arrays."""
    if p.is_zero:
        return np.zeros_like(np.asarray(z, dtype=complex)) if np.ndim(z) else 0j
    result = npoly.polyval(z, p.array())
    return complex(result) if np.ndim(result) == 0 else result


def poly_derivative(p: ComplexPoly) -> ComplexPoly:
    if p.degree < 1:
        return ZERO
    return ComplexPoly.of(npoly.polyder(p.array()))


def reversed_star(p: ComplexPoly, n: int) -> ComplexPoly:
    """p*(z) = z^n conj(p(1/conj(z))) for declared degree n.

    Coefficient k of the result is the conjugate of coefficient n - k of p.
    """
    if n < p.degree:
        raise InvalidDeclaredDegree(
            f"Declared degree {n} is below the polynomial degree {p.degree}",
            hint="The *-reversal needs n >= deg(p).",
        )
    padded = list(p.coeffs) + [0j] * (n + 1 - len(p.coeffs))
    return ComplexPoly.of(c.conjugate() for c in reversed(padded))
