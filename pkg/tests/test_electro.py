"""Tests for charge configurations, equilibrium residuals, Lamé forms and generators."""

from __future__ import annotations

import cmath

import numpy as np
import pytest

from popuc.algebra import ComplexPoly, poly_roots
from popuc.algebra.ratfun import RationalFn
from popuc.cauchy import Region
from popuc.electro import (
    Charge,
    ChargeConfiguration,
    generators_from_measure,
    generators_from_points,
    interlacing_check,
    lame_from_fraction,
    lame_from_h,
    normal_equilibrium_residual,
    p_double_prime_identity,
    rotate,
    total_equilibrium_residual,
)
from popuc.electro.generators import _check_collisions
from popuc.electro.lame import merge_lame_poles
from popuc.errors import (
    DegenerateLame,
    GeneratorCollision,
    InvalidConfiguration,
    InvalidSupport,
    NotDisjoint,
)
from popuc.opuc import MeasureName, NamedMeasure, popuc, szego_sequence


def _roots_of_unity(n: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(n) / n)


def _charge_at(config: ChargeConfiguration, location: complex) -> float:
    return next(g.charge for g in config.generators if abs(g.location - location) < 1e-9)


# ---------------------------------------------------------------------------
# Charges
# ---------------------------------------------------------------------------


class TestChargeConfiguration:
    def test_dict_round_trip(self):
        config = ChargeConfiguration([Charge(0j, -1.5), Charge(2.0 + 1j, 0.5)])
        data = config.to_dict()
        assert data["generators"][1] == {"location": [2.0, 1.0], "charge": 0.5}
        back = ChargeConfiguration.from_dict(data)
        assert back.generators == config.generators

    def test_totals_and_origin(self):
        config = ChargeConfiguration([Charge(0j, -1.5), Charge(3.0, 0.5), Charge(-2j, -0.5)])
        assert config.total_charge == pytest.approx(-1.5)
        assert config.origin_charge() == -1.5
        assert config.without_origin().origin_charge() == 0.0
        assert len(config.without_origin().generators) == 2

    def test_coincident_generators_are_rejected(self):
        with pytest.raises(InvalidConfiguration, match="share a location"):
            ChargeConfiguration([Charge(1j, 0.5), Charge(1j, -0.5)])

    def test_missing_generators_list(self):
        with pytest.raises(InvalidConfiguration):
            ChargeConfiguration.from_dict({"charges": []})

    @pytest.mark.parametrize(
        "entry", [{"location": [1.0, 0.0]}, {"location": "not a number", "charge": 1.0}]
    )
    def test_malformed_entry(self, entry):
        with pytest.raises(InvalidConfiguration):
            ChargeConfiguration.from_dict({"generators": [entry]})


# ---------------------------------------------------------------------------
# Equilibrium residuals
# ---------------------------------------------------------------------------


class TestEquilibrium:
    @pytest.mark.parametrize("n", [2, 5, 9])
    def test_roots_of_unity_with_origin_charge(self, n):
        config = ChargeConfiguration([Charge(0j, (1 - n) / 2)])
        report = total_equilibrium_residual(config, _roots_of_unity(n))
        assert report.passed
        assert report.normal_pass
        assert report.tolerance == pytest.approx(1e-8 * n)

    def test_normal_without_total(self):
        points = _roots_of_unity(6)
        empty = ChargeConfiguration()
        assert normal_equilibrium_residual(empty, points).passed
        total = total_equilibrium_residual(empty, points)
        assert not total.passed
        # each point feels (n - 1)/(2 x_j) from the others
        assert total.max_total == pytest.approx(2.5)

    def test_coincident_mobile_points(self):
        with pytest.raises(InvalidConfiguration):
            total_equilibrium_residual(ChargeConfiguration(), [1.0, 1j, 1.0])

    def test_generator_on_a_mobile_point(self):
        config = ChargeConfiguration([Charge(1j, 0.5)])
        with pytest.raises(InvalidConfiguration):
            total_equilibrium_residual(config, [1.0, 1j, -1.0])

    def test_report_serializes(self):
        report = normal_equilibrium_residual(ChargeConfiguration(), _roots_of_unity(3))
        data = report.to_dict()
        assert data["mode"] == "normal"
        assert data["passed"] is True
        assert len(data["forces"]) == 3

    def test_p_double_prime_identity(self, rng, circle_points):
        assert p_double_prime_identity(circle_points(rng, 6, min_gap=0.3)) < 1e-9


# ---------------------------------------------------------------------------
# Interlacing
# ---------------------------------------------------------------------------


class TestInterlacing:
    def test_simple_sets(self):
        assert interlacing_check([1.0, -1.0], [1j, -1j])
        assert not interlacing_check([1.0, 1j], [-1.0, -1j])

    def test_paraorthogonal_zeros_interlace(self, rng):
        for _ in range(20):
            n = int(rng.integers(2, 9))
            alphas = rng.uniform(0.0, 0.8, n) * np.exp(2j * np.pi * rng.random(n))
            seq = szego_sequence(list(alphas), n)
            first, gap = rng.uniform(0.0, 2.0 * np.pi), rng.uniform(0.3, 2.0 * np.pi - 0.3)
            beta, tau = cmath.exp(1j * first), cmath.exp(1j * (first + gap))
            zeros_a = poly_roots(popuc(seq, n, beta))
            zeros_b = poly_roots(popuc(seq, n, tau))
            assert interlacing_check(zeros_a, zeros_b, tolerance=1e-12)

    def test_shared_point(self):
        with pytest.raises(NotDisjoint):
            interlacing_check([1.0, -1.0], [1.0, 1j])

    def test_size_mismatch(self):
        with pytest.raises(InvalidConfiguration):
            interlacing_check([1.0, -1.0], [1j])

    def test_points_off_the_circle(self):
        with pytest.raises(InvalidSupport):
            interlacing_check([0.5, -1.0], [1j, -1j])


# ---------------------------------------------------------------------------
# Lamé forms
# ---------------------------------------------------------------------------


class TestLame:
    def test_merge_adds_the_origin_charge(self):
        assert merge_lame_poles([], [], 4) == [(0j, -3)]

    def test_merge_cancels_at_the_origin(self):
        # a double pole at 0 absorbs the -2 from n = 3
        assert merge_lame_poles([], [(0j, 2)], 3) == []

    def test_merge_combines_coincident_entries(self):
        diagnostics: list[str] = []
        merged = merge_lame_poles([(2.0, 1)], [(2.0 + 1e-13, 2)], 1, diagnostics)
        assert merged == [(2.0 + 0j, 1)]
        assert diagnostics

    def test_from_h(self):
        h = RationalFn.from_poly(ComplexPoly.from_roots([3.0])) / ComplexPoly.from_roots([0.5])
        form = lame_from_h(h, 2)
        charges = form.charges()
        assert _charge_at(charges, 0j) == pytest.approx(-0.5)
        assert _charge_at(charges, 3.0) == pytest.approx(-0.5)
        assert _charge_at(charges, 0.5) == pytest.approx(0.5)
        assert form.p_value(2.0) == pytest.approx(-1 / 2 - 1 / (2.0 - 3.0) + 1 / 1.5)

    def test_zero_h(self):
        with pytest.raises(DegenerateLame):
            lame_from_h(RationalFn.monomial(0) * 0.0, 3)

    def test_fraction_cancels_on_the_circle(self):
        P1 = ComplexPoly.from_roots([1.0, 3.0])
        P2 = ComplexPoly.from_roots([1.0, 0.5])
        form = lame_from_fraction(P1, P2, 3)
        assert form.cancelled_on_circle == [pytest.approx(1.0)]
        assert form.diagnostics
        charges = form.charges()
        assert len(charges.generators) == 3
        assert _charge_at(charges, 0j) == pytest.approx(-1.0)
        assert _charge_at(charges, 3.0) == pytest.approx(-0.5)
        assert _charge_at(charges, 0.5) == pytest.approx(0.5)
        assert form.S1.degree == 1 and form.S2.degree == 1

    def test_fraction_with_zero_numerator(self):
        with pytest.raises(DegenerateLame):
            lame_from_fraction(ComplexPoly.of([]), ComplexPoly.constant(1.0), 2)

    def test_lebesgue_has_only_the_origin_charge(self):
        config, form = generators_from_measure(NamedMeasure(name=MeasureName.LEBESGUE), 5, 1.0)
        assert [(g.location, g.charge) for g in config.generators] == [(0j, -2.0)]
        assert form.reconstruction_error < 1e-12


# ---------------------------------------------------------------------------
# Generators for prescribed points
# ---------------------------------------------------------------------------


class TestGenerators:
    @pytest.mark.parametrize("region", list(Region))
    @pytest.mark.parametrize("n", [3, 4, 6])
    def test_points_are_in_total_equilibrium(self, rng, circle_points, region, n):
        x = circle_points(rng, n, min_gap=0.3)
        config, diagnostics = generators_from_points(x, region=region)
        report = total_equilibrium_residual(config, x)
        assert report.passed, report.to_dict()
        assert any(d.startswith("beta =") for d in diagnostics)

    @pytest.mark.parametrize("case", range(50))
    def test_unrestricted_random_points(self, case):
        rng = np.random.default_rng(1000 + case)
        n = 2 + case % 11
        x = np.exp(1j * np.sort(rng.uniform(0.0, 2.0 * np.pi, n)))
        config, _ = generators_from_points(x)
        report = total_equilibrium_residual(config, x)
        assert report.passed, report.to_dict()

    @pytest.mark.parametrize("gap", [0.1, 0.05])
    def test_close_pair_is_in_equilibrium(self, gap):
        x = np.exp(1j * np.array([0.0, gap, 3.5]))
        config, _ = generators_from_points(x)
        report = total_equilibrium_residual(config, x)
        assert report.passed, report.to_dict()

    def test_rotation_covariance(self, rng, circle_points):
        x = circle_points(rng, 4, min_gap=0.3)
        phi = 0.7
        config, _ = generators_from_points(x)
        turned, _ = generators_from_points(x * cmath.exp(1j * phi))
        expected = rotate(config, phi)
        assert len(turned.generators) == len(expected.generators)
        for g in expected.generators:
            match = min(turned.generators, key=lambda t: abs(t.location - g.location))
            assert abs(match.location - g.location) < 1e-8 * (1.0 + abs(g.location))
            assert match.charge == g.charge
        assert total_equilibrium_residual(expected, x * cmath.exp(1j * phi)).passed

    def test_collision_names_the_zero_and_the_point(self):
        x = np.exp(1j * np.array([0.0, 2.0, 4.0]))
        config = ChargeConfiguration([Charge(complex(x[1]), 0.5)])
        with pytest.raises(GeneratorCollision) as excinfo:
            _check_collisions(config, x, 1e-8)
        assert "point 1" in str(excinfo.value)
        assert "coincides with one of the points" in excinfo.value.hint

    def test_too_few_points(self):
        with pytest.raises(InvalidConfiguration):
            generators_from_points([1.0])
