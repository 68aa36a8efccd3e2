"""Rational functions in factored-denominator form.

A RationalFn is num(z) / prod (z - r)^m with the denominator kept as a
list of (root, multiplicity) poles, so it is monic by construction and
products never need root finding. Canonical form removes every pole at
which the numerator vanishes (deflating the numerator one factor at a
time), which is how shared numerator/denominator roots cancel without a
coefficient-space GCD. A small numerator value at a pole only nominates
it: the factor goes only when a computed root of the numerator lands on
the pole, so a close but distinct zero keeps its pole order.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from enum import StrEnum
from typing import Any

import numpy as np
from numpy.polynomial import polynomial as npoly

from popuc.algebra.poly import ZERO, ComplexPoly, as_poly, poly_derivative
from popuc.algebra.roots import factored_roots
from popuc.errors import DivideByZero, InvalidConfiguration
from popuc.utils.complexio import complex_pair, parse_complex

Pole = tuple[complex, int]
Term = tuple[complex, int, complex]

CANCEL_TOLERANCE = 1e-9
MERGE_TOLERANCE = 1e-9
SUM_DUST = 1e-13


def same_point(a: complex, b: complex, tol: float = MERGE_TOLERANCE) -> bool:
    return abs(a - b) <= tol * (1.0 + abs(a))


def _vanishes_at(num: ComplexPoly, r: complex) -> bool:
    if num.is_zero:
        return True
    coeffs = num.array()
    growth = max(1.0, abs(r)) ** np.arange(coeffs.size)
    bound = CANCEL_TOLERANCE * float(np.sum(np.abs(coeffs) * growth))
    return abs(num(r)) <= bound


def _multiplicity_at(roots: Sequence[Pole], r: complex) -> int:
    """How many of the numerator's computed roots land on r."""
    return sum(k for root, k in roots if same_point(root, r))


def _deflate(num: ComplexPoly, r: complex) -> ComplexPoly:
    if r == 0:
        return ComplexPoly(num.coeffs[1:])
    quotient, _ = num.divmod(ComplexPoly((-r, 1 + 0j)))
    return quotient


def _merge(poles: Sequence[Pole], extra: Sequence[Pole], how: str) -> list[Pole]:
    merged: list[list[Any]] = [[r, m] for r, m in poles]
    for r, m in extra:
        for entry in merged:
            if same_point(entry[0], r):
                entry[1] = entry[1] + m if how == "sum" else max(entry[1], m)
                break
        else:
            merged.append([r, m])
    return [(complex(r), int(m)) for r, m in merged if m > 0]


def _factor_product(poles: Sequence[Pole]) -> ComplexPoly:
    out = np.array([1.0 + 0j])
    for r, m in poles:
        for _ in range(m):
            out = np.convolve(out, np.array([-r, 1.0]))
    return ComplexPoly.of(out)


def _missing(target: Sequence[Pole], present: Sequence[Pole]) -> list[Pole]:
    """Factors of `target` not already covered by `present`."""
    out: list[Pole] = []
    for r, m in target:
        have = next((pm for pr, pm in present if same_point(pr, r)), 0)
        if m > have:
            out.append((r, m - have))
    return out


def canonicalize(num: ComplexPoly, poles: Sequence[Pole]) -> tuple[RationalFn, list[complex]]:
    """Canonical form plus the list of cancelled pole locations (one entry per factor)."""
    if num.is_zero:
        return RationalFn(ZERO, ()), []
    kept: list[Pole] = []
    cancelled: list[complex] = []
    roots: list[Pole] | None = None
    for r, m in _merge([], poles, "sum"):
        while m > 0 and num(r) == 0:
            num = _deflate(num, r)
            cancelled.append(r)
            m -= 1
        if m and _vanishes_at(num, r):
            if roots is None:
                roots = factored_roots(num)
            shared = min(m, _multiplicity_at(roots, r))
            for _ in range(shared):
                num = _deflate(num, r)
                cancelled.append(r)
            m -= shared
        if m:
            kept.append((r, m))
    return RationalFn(num, tuple(kept)), cancelled


@dataclass(frozen=True, slots=True)
class RationalFn:
    """num(z) / prod (z - r)^m. Build through `rational()` or arithmetic to get canonical form."""

    num: ComplexPoly
    poles: tuple[Pole, ...] = ()

    # -- constructors -------------------------------------------------

    @classmethod
    def from_poly(cls, p: ComplexPoly | complex) -> RationalFn:
        return cls(as_poly(p), ())

    @classmethod
    def from_parts(cls, num: ComplexPoly, den: ComplexPoly) -> RationalFn:
        """num/den with den factored by root finding (the one lossy constructor)."""
        if den.is_zero:
            raise DivideByZero("Denominator is identically zero")
        return rational(num * (1.0 / den.leading), factored_roots(den))

    @classmethod
    def monomial(cls, k: int, value: complex = 1.0) -> RationalFn:
        """value * z^k for any integer k."""
        if k >= 0:
            return cls(ComplexPoly.monomial(k, value), ())
        return cls(ComplexPoly.constant(value), ((0j, -k),))

    # -- structure ----------------------------------------------------

    @property
    def den(self) -> ComplexPoly:
        return _factor_product(self.poles)

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_polynomial(self) -> bool:
        return not self.poles

    def pole_order(self, r: complex) -> int:
        return next((m for pr, m in self.poles if same_point(pr, r)), 0)

    def __call__(self, z: Any) -> Any:
        zz = np.asarray(z, dtype=complex)
        value = self.num(zz)
        for r, m in self.poles:
            value = value / (zz - r) ** m
        return complex(value) if np.ndim(value) == 0 else value

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: RationalFn | ComplexPoly | complex) -> RationalFn:
        return rat_combine(RatOp.ADD, self, other)

    __radd__ = __add__

    def __sub__(self, other: RationalFn | ComplexPoly | complex) -> RationalFn:
        return rat_combine(RatOp.SUB, self, other)

    def __rsub__(self, other: ComplexPoly | complex) -> RationalFn:
        return rat_combine(RatOp.SUB, other, self)

    def __mul__(self, other: RationalFn | ComplexPoly | complex) -> RationalFn:
        return rat_combine(RatOp.MUL, self, other)

    __rmul__ = __mul__

    def __truediv__(self, other: RationalFn | ComplexPoly | complex) -> RationalFn:
        return rat_combine(RatOp.DIV, self, other)

    def __rtruediv__(self, other: ComplexPoly | complex) -> RationalFn:
        return rat_combine(RatOp.DIV, other, self)

    def __neg__(self) -> RationalFn:
        return RationalFn(-self.num, self.poles)

    # -- serialization ------------------------------------------------

    def to_json(self) -> dict[str, Any]:
        return {
            "num": self.num.to_json(),
            "den": self.den.to_json(),
            "poles": [
                {"root": complex_pair(r), "multiplicity": m} for r, m in self.poles
            ],
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> RationalFn:
        if not isinstance(data, dict) or "num" not in data:
            raise InvalidConfiguration(
                "Rational functions are JSON objects with 'num' and 'den' or 'poles'"
            )
        num = ComplexPoly.from_json(data["num"])
        if "poles" in data:
            poles = [(parse_complex(p["root"]), int(p["multiplicity"])) for p in data["poles"]]
            return rational(num, poles)
        return cls.from_parts(num, ComplexPoly.from_json(data.get("den", [[1.0, 0.0]])))


def rational(num: ComplexPoly | complex, poles: Sequence[Pole] = ()) -> RationalFn:
    """Canonical RationalFn from a numerator and a pole list."""
    return canonicalize(as_poly(num), poles)[0]


def as_rational(value: RationalFn | ComplexPoly | complex | float) -> RationalFn:
    if isinstance(value, RationalFn):
        return value
    return RationalFn.from_poly(as_poly(value))


ZERO_RATIONAL = RationalFn(ZERO, ())


class RatOp(StrEnum):
    ADD = "add"
    SUB = "sub"
    MUL = "mul"
    DIV = "div"


def _add(a: RationalFn, b: RationalFn) -> RationalFn:
    if a.is_zero:
        return rational(b.num, b.poles)
    if b.is_zero:
        return rational(a.num, a.poles)
    lcm = _merge(a.poles, b.poles, "max")
    left = a.num * _factor_product(_missing(lcm, a.poles))
    right = b.num * _factor_product(_missing(lcm, b.poles))
    floor = SUM_DUST * max(left.scale(), right.scale())
    total = ComplexPoly.of(npoly.polyadd(left.array(), right.array()), abs_tol=floor)
    if total.is_zero:
        return ZERO_RATIONAL
    return rational(total, lcm)


def rat_combine(
    op: RatOp | str,
    a: RationalFn | ComplexPoly | complex,
    b: RationalFn | ComplexPoly | complex,
) -> RationalFn:
    """a (op) b in canonical form."""
    op = RatOp(op)
    a, b = as_rational(a), as_rational(b)
    if op is RatOp.ADD:
        return _add(a, b)
    if op is RatOp.SUB:
        return _add(a, -b)
    if op is RatOp.MUL:
        return rational(a.num * b.num, _merge(a.poles, b.poles, "sum"))
    if b.is_zero:
        raise DivideByZero("Division by the zero rational function")
    num = a.num * _factor_product(b.poles) * (1.0 / b.num.leading)
    return rational(num, _merge(a.poles, factored_roots(b.num), "sum"))


def rat_derivative(r: RationalFn) -> RationalFn:
    """Quotient rule on the factored form; every pole order grows by one."""
    if r.is_zero:
        return ZERO_RATIONAL
    if r.is_polynomial:
        return RationalFn.from_poly(poly_derivative(r.num))
    simple = [(root, 1) for root, _ in r.poles]
    total = poly_derivative(r.num) * _factor_product(simple)
    for i, (_, m) in enumerate(r.poles):
        others = simple[:i] + simple[i + 1 :]
        total = total - r.num * _factor_product(others) * m
    return rational(total, [(root, m + 1) for root, m in r.poles])


def wronskian(f: RationalFn, g: RationalFn) -> RationalFn:
    """W[f, g] = f g' - g f'."""
    return f * rat_derivative(g) - g * rat_derivative(f)


def _series_quotient(num: np.ndarray, den: np.ndarray, order: int) -> np.ndarray:
    out = np.zeros(order, dtype=complex)
    for k in range(order):
        acc = num[k] if k < num.size else 0j
        for j in range(1, min(k, den.size - 1) + 1):
            acc -= den[j] * out[k - j]
        out[k] = acc / den[0]
    return out


def partial_fractions(r: RationalFn) -> tuple[ComplexPoly, list[Term]]:
    """Polynomial part and (pole, order, coefficient) terms with r = P + sum c/(z - pole)^order."""
    if r.is_polynomial:
        return r.num, []
    polynomial_part, _ = r.num.divmod(r.den)
    terms: list[Term] = []
    for i, (x, m) in enumerate(r.poles):
        others = _factor_product(list(r.poles[:i]) + list(r.poles[i + 1 :]))
        local = _series_quotient(r.num.shifted(x).array(), others.shifted(x).array(), m)
        for k in range(m):
            if local[k] != 0:
                terms.append((x, m - k, complex(local[k])))
    return polynomial_part, terms


def from_partial_fractions(polynomial_part: ComplexPoly, terms: Sequence[Term]) -> RationalFn:
    total = RationalFn.from_poly(polynomial_part)
    for pole, order, coeff in terms:
        total = total + rational(ComplexPoly.constant(coeff), [(pole, order)])
    return total


def common_denominator(parts: Sequence[RationalFn]) -> tuple[list[ComplexPoly], list[Pole]]:
    """Numerators of every part rewritten over the least common denominator of all parts."""
    lcm: list[Pole] = []
    for r in parts:
        lcm = _merge(lcm, r.poles, "max")
    return [r.num * _factor_product(_missing(lcm, r.poles)) for r in parts], lcm
