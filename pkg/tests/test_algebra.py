"""Tests for complex polynomials, root finding and rational functions."""

from __future__ import annotations

import numpy as np
import pytest

from popuc.algebra import (
    ComplexPoly,
    RationalFn,
    RatOp,
    cluster_roots,
    common_denominator,
    factored_roots,
    partial_fractions,
    poly_derivative,
    poly_roots,
    rat_combine,
    rat_derivative,
    rational,
    reversed_star,
    wronskian,
)
from popuc.algebra.poly import ZERO, Z
from popuc.algebra.ratfun import canonicalize, from_partial_fractions
from popuc.errors import DivideByZero, InvalidDeclaredDegree, UndefinedRoots

# ---------------------------------------------------------------------------
# ComplexPoly
# ---------------------------------------------------------------------------


class TestComplexPoly:
    def test_trailing_dust_is_trimmed(self):
        p = ComplexPoly.of([1.0, 2.0, 1e-20])
        assert p.degree == 1
        assert p.coeffs == (1 + 0j, 2 + 0j)

    def test_zero_polynomial(self):
        assert ZERO.is_zero
        assert ZERO.degree == -1
        assert ZERO.leading == 0
        assert (Z - Z).is_zero

    def test_arithmetic(self):
        p = ComplexPoly.of([1.0, 1.0])  # 1 + z
        q = p * p - Z * 2.0
        assert q.coeffs == (1 + 0j, 0j, 1 + 0j)

    def test_evaluation_on_arrays(self):
        p = ComplexPoly.from_roots([1.0, -1.0])
        values = p(np.array([0.0, 2.0]))
        np.testing.assert_allclose(values, [-1.0, 3.0])

    def test_derivative(self):
        assert poly_derivative(ComplexPoly.monomial(3)).coeffs == (0j, 0j, 3 + 0j)
        assert poly_derivative(ComplexPoly.constant(5.0)).is_zero

    def test_shifted(self):
        assert ComplexPoly.monomial(2).shifted(1.0).coeffs == (1 + 0j, 2 + 0j, 1 + 0j)

    def test_divmod(self):
        quotient, remainder = ComplexPoly.from_roots([1.0, 2.0]).divmod(ComplexPoly.of([-1.0, 1.0]))
        assert quotient.coeffs == pytest.approx((-2.0, 1.0))
        assert remainder.is_zero or remainder.scale() < 1e-14

    def test_json_round_trip(self):
        p = ComplexPoly.of([1 + 2j, -0.5j, 3.0])
        assert ComplexPoly.from_json(p.to_json()) == p


class TestReversedStar:
    def test_coefficients_are_conjugated_and_reversed(self):
        p = ComplexPoly.of([1.0, 2j])
        assert reversed_star(p, 2).coeffs == (0j, -2j, 1 + 0j)

    def test_declared_degree_below_degree_raises(self):
        with pytest.raises(InvalidDeclaredDegree):
            reversed_star(ComplexPoly.monomial(3), 2)

    def test_matches_definition_on_the_circle(self):
        p = ComplexPoly.of([0.3 - 1j, 2.0, 0.5j, -1.0])
        z = np.exp(1j * np.linspace(0.1, 6.0, 7))
        np.testing.assert_allclose(reversed_star(p, 4)(z), z**4 * np.conj(p(z)), atol=1e-13)


# ---------------------------------------------------------------------------
# Root finding
# ---------------------------------------------------------------------------


class TestRoots:
    def test_sorted_by_argument(self):
        roots = poly_roots(ComplexPoly.from_roots([-1.0, 1j, 1.0]))
        np.testing.assert_allclose(roots, [1.0, 1j, -1.0], atol=1e-12)

    def test_exact_zero_roots_come_first(self):
        roots = poly_roots(ComplexPoly.of([0.0, 0.0, -2.0, 1.0]))
        assert roots[0] == 0 and roots[1] == 0
        assert roots[2] == pytest.approx(2.0)

    def test_constant_has_no_roots(self):
        with pytest.raises(UndefinedRoots):
            poly_roots(ComplexPoly.constant(3.0))

    def test_roots_of_unity(self):
        roots = poly_roots(ComplexPoly.monomial(12) - 1.0)
        expected = np.exp(2j * np.pi * np.arange(12) / 12)
        np.testing.assert_allclose(roots, expected, atol=1e-12)

    @pytest.mark.parametrize("degree", [3, 7, 12, 18])
    def test_matches_companion_eigenvalues(self, rng, degree):
        coeffs = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
        companion = np.diag(np.ones(degree - 1, dtype=complex), -1)
        companion[:, -1] = -coeffs[:-1] / coeffs[-1]
        eigenvalues = np.linalg.eigvals(companion)
        roots = np.array(poly_roots(ComplexPoly.of(coeffs)))
        assert roots.size == degree
        for e in eigenvalues:
            assert np.min(np.abs(roots - e)) < 1e-10 * (1.0 + abs(e))

    def test_cluster_roots_merges_near_duplicates(self):
        clusters = cluster_roots([1.0, 1.0 + 1e-9, 2.0])
        assert [m for _, m in clusters] == [2, 1]
        assert clusters[0][0] == pytest.approx(1.0)

    def test_factored_roots_multiplicity(self):
        p = ComplexPoly.from_roots([1.0, 1.0, -1.0])
        factored = factored_roots(p)
        assert sorted(m for _, m in factored) == [1, 2]
        double = next(r for r, m in factored if m == 2)
        assert double == pytest.approx(1.0, abs=1e-6)

    def test_factored_roots_keeps_origin_exact(self):
        factored = factored_roots(ComplexPoly.of([0.0, 0.0, 0.0, 1.0, 1.0]))
        assert factored[0] == (0j, 3)


# ---------------------------------------------------------------------------
# Rational functions
# ---------------------------------------------------------------------------


class TestRationalFn:
    def test_common_factor_cancels(self):
        r = rational(ComplexPoly.of([-1.0, 1.0]), [(1.0, 1)])
        assert r.is_polynomial
        assert r(5.0) == pytest.approx(1.0)

    def test_canonicalize_reports_cancellations(self):
        _, cancelled = canonicalize(ComplexPoly.from_roots([2.0, 2.0]), [(2.0, 3), (0j, 1)])
        assert cancelled == [2.0, 2.0]

    def test_close_zeros_do_not_cancel_a_pole(self):
        # zeros at a +- 1e-5 make num(a) tiny without a root on the pole
        a = 0.9j
        num = ComplexPoly.from_roots([a, a]) - 1e-10
        r, cancelled = canonicalize(num, [(a, 2)])
        assert cancelled == []
        assert r.poles == ((a, 2),)

    def test_noisy_shared_root_still_cancels(self):
        num = ComplexPoly.from_roots([0.3 + 0.4j, -2.0]) + 1e-15
        r, cancelled = canonicalize(num, [(0.3 + 0.4j, 1)])
        assert cancelled == [0.3 + 0.4j]
        assert r.is_polynomial

    def test_sum_over_common_denominator(self):
        r = rational(1.0, [(1.0, 1)]) + rational(1.0, [(-1.0, 1)])
        assert r(3.0) == pytest.approx(0.75)
        assert sorted(p.real for p, _ in r.poles) == pytest.approx([-1.0, 1.0])

    def test_difference_with_itself_is_zero(self):
        r = rational(ComplexPoly.of([1.0, 2j]), [(0.5, 2), (3j, 1)])
        assert (r - r).is_zero

    def test_division_cancels_through_root_finding(self):
        r = RationalFn.from_poly(ComplexPoly.from_roots([1.0, -1.0])) / ComplexPoly.of([-1.0, 1.0])
        assert r.is_polynomial
        assert r(2.0) == pytest.approx(3.0)

    def test_division_by_zero(self):
        with pytest.raises(DivideByZero):
            rat_combine(RatOp.DIV, RationalFn.monomial(1), 0.0)

    def test_negative_monomial(self):
        assert RationalFn.monomial(-2)(2.0) == pytest.approx(0.25)

    def test_from_parts_factors_the_denominator(self):
        r = RationalFn.from_parts(ComplexPoly.constant(1.0), ComplexPoly.of([-1.0, 0.0, 1.0]))
        assert sorted(p.real for p, _ in r.poles) == pytest.approx([-1.0, 1.0])

    def test_json_round_trip(self):
        r = rational(ComplexPoly.of([1.0, 1j]), [(0.5, 2), (0j, 1)])
        back = RationalFn.from_json(r.to_json())
        assert back(1.7 + 0.2j) == pytest.approx(r(1.7 + 0.2j))


class TestCalculus:
    def test_derivative_raises_pole_order(self):
        d = rat_derivative(rational(1.0, [(2.0, 1)]))
        assert d.pole_order(2.0) == 2
        assert d(0.0) == pytest.approx(-0.25)

    def test_derivative_of_polynomial(self):
        d = rat_derivative(RationalFn.from_poly(ComplexPoly.monomial(3)))
        assert d(2.0) == pytest.approx(12.0)

    def test_wronskian(self):
        f = rational(ComplexPoly.of([1.0, 1.0]), [(0.3, 1)])
        assert wronskian(f, f).is_zero
        assert wronskian(RationalFn.monomial(0), RationalFn.monomial(1))(7.0) == pytest.approx(1.0)


class TestPartialFractions:
    def test_simple_poles(self):
        # (z^2 + 1) / (z (z - 1)) = 1 - 1/z + 2/(z - 1)
        r = rational(ComplexPoly.of([1.0, 0.0, 1.0]), [(0j, 1), (1.0, 1)])
        polynomial_part, terms = partial_fractions(r)
        assert polynomial_part.coeffs == pytest.approx((1.0,))
        by_pole = {(round(p.real, 12), order): c for p, order, c in terms}
        assert by_pole[(0.0, 1)] == pytest.approx(-1.0)
        assert by_pole[(1.0, 1)] == pytest.approx(2.0)

    def test_double_pole(self):
        # z / (z - 1)^2 = 1/(z - 1) + 1/(z - 1)^2
        r = rational(Z, [(1.0, 2)])
        _, terms = partial_fractions(r)
        assert {order: c for _, order, c in terms} == pytest.approx({1: 1.0, 2: 1.0})

    def test_reassembly(self):
        r = rational(ComplexPoly.of([2.0, -1j, 0.5, 1.0]), [(0.4j, 2), (-1.5, 1)])
        rebuilt = from_partial_fractions(*partial_fractions(r))
        assert rebuilt(0.9 - 0.3j) == pytest.approx(r(0.9 - 0.3j))

    def test_terms_sum_back_at_random_points(self, rng):
        r = rational(
            ComplexPoly.of([1.0, -2j, 0.5, 0.0, 3.0, 1.0 + 1j]),
            [(0.5, 3), (-1.0 + 0.5j, 1), (0j, 2)],
        )
        polynomial_part, terms = partial_fractions(r)
        zs = 2.0 * (rng.uniform(-1.0, 1.0, 32) + 1j * rng.uniform(-1.0, 1.0, 32))
        zs = zs[np.min(np.abs(zs[:, None] - np.array([0.5, -1.0 + 0.5j, 0j])), axis=1) > 0.05]
        assert zs.size > 20
        summed = np.asarray(polynomial_part(zs), dtype=complex)
        for pole, order, c in terms:
            summed = summed + c / (zs - pole) ** order
        expected = np.asarray(r(zs))
        assert np.max(np.abs(summed - expected) / (1.0 + np.abs(expected))) < 1e-10

    def test_common_denominator(self):
        numerators, lcm = common_denominator([rational(1.0, [(0j, 1)]), rational(1.0, [(1.0, 1)])])
        assert sorted((p.real, m) for p, m in lcm) == [(0.0, 1), (1.0, 1)]
        assert numerators[0].coeffs == pytest.approx((-1.0, 1.0))
        assert numerators[1].coeffs == pytest.approx((0.0, 1.0))
