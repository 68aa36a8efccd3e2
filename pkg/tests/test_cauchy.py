"""Tests for circle Cauchy transforms and the G, D, J integrals."""

from __future__ import annotations

import cmath

import numpy as np
import pytest

from popuc.algebra import ComplexPoly, RationalFn, rational
from popuc.cauchy import (
    Region,
    build_gdj,
    circle_cauchy_transform,
    quadrature_oracle,
    spectral_derivative,
)
from popuc.errors import InvalidConfiguration, NearSingularEvaluation, SingularIntegrand
from popuc.opuc import DiscreteMeasure, MeasureName, NamedMeasure
from popuc.pipeline import build_problem

ORACLE_MEASURES = [
    NamedMeasure(name=MeasureName.BERNSTEIN_SZEGO, zeta=0.5),
    NamedMeasure(name=MeasureName.BERNSTEIN_SZEGO, zeta=0.2 + 0.3j),
    NamedMeasure(name=MeasureName.SIEVED_BS, zeta=0.5, M=2),
    NamedMeasure(name=MeasureName.SINGLE_MOMENT),
]


def _trapezoid(R: RationalFn, z: complex, N: int = 4096) -> complex:
    t = np.exp(2j * np.pi * np.arange(N) / N)
    return complex(np.mean(R(t) / (z - t)))


# ---------------------------------------------------------------------------
# circle_cauchy_transform
# ---------------------------------------------------------------------------


class TestCircleCauchyTransform:
    def test_constant(self):
        one = RationalFn.from_poly(1.0)
        assert circle_cauchy_transform(one, Region.EXTERIOR)(2.0) == pytest.approx(0.5)
        assert circle_cauchy_transform(one, Region.INTERIOR).is_zero

    def test_inverse_power(self):
        R = RationalFn.monomial(-1)
        assert circle_cauchy_transform(R, Region.EXTERIOR)(2.0) == pytest.approx(0.25)
        assert circle_cauchy_transform(R, Region.INTERIOR).is_zero

    @pytest.mark.parametrize(
        "region, z", [(Region.EXTERIOR, 1.7 * cmath.exp(0.4j)), (Region.INTERIOR, 0.4j)]
    )
    def test_matches_quadrature(self, region, z):
        R = rational(ComplexPoly.of([1.0, -2j, 0.5, 0.3]), [(0.5, 2), (2.0 + 1j, 1), (0j, 1)])
        assert circle_cauchy_transform(R, region)(z) == pytest.approx(_trapezoid(R, z), abs=1e-10)

    def test_pole_on_the_circle(self):
        with pytest.raises(SingularIntegrand):
            circle_cauchy_transform(rational(1.0, [(1j, 1)]), Region.EXTERIOR)


# ---------------------------------------------------------------------------
# G, D, J
# ---------------------------------------------------------------------------


class TestGdj:
    def test_lebesgue_integrals_vanish(self):
        problem = build_problem(NamedMeasure(name=MeasureName.LEBESGUE), 5, Region.EXTERIOR)
        gdj = problem.gdj
        assert gdj.G.is_zero and gdj.D.is_zero and gdj.J.is_zero
        assert gdj.n == 5

    def test_to_json_shape(self):
        problem = build_problem(NamedMeasure(name=MeasureName.BERNSTEIN_SZEGO), 3, "interior")
        data = problem.gdj.to_json()
        assert data["region"] == "interior"
        assert set(data) == {"n", "region", "G", "D", "J"}
        assert {"num", "den", "poles"} <= set(data["G"])

    @pytest.mark.parametrize("measure", ORACLE_MEASURES, ids=lambda m: f"{m.name}-{m.zeta}")
    @pytest.mark.parametrize("n", range(2, 13))
    def test_agrees_with_the_quadrature_oracle(self, measure, n):
        rng = np.random.default_rng(n)
        circles = {Region.EXTERIOR: (1.5, 3.0), Region.INTERIOR: (0.5,)}
        for region, radii in circles.items():
            problem = build_problem(measure, n, region)
            for radius in radii:
                for angle in rng.uniform(0.0, 2.0 * np.pi, 8):
                    z = radius * cmath.exp(1j * angle)
                    for which in ("G", "D", "J"):
                        exact = getattr(problem.gdj, which)(z)
                        oracle = quadrature_oracle(problem.seq, n, measure, which, z)
                        assert abs(exact - oracle) < 1e-8 * (1.0 + abs(exact))

    def test_discrete_measure_uses_its_weight(self, rng, circle_points):
        x = circle_points(rng, 4, min_gap=0.4)
        measure = DiscreteMeasure(points=tuple(complex(p) for p in x))
        problem = build_problem(measure, 4, Region.EXTERIOR)
        z = 1.5 * cmath.exp(0.9j)
        oracle = quadrature_oracle(problem.seq, 4, measure, "G", z)
        assert problem.gdj.G(z) == pytest.approx(oracle, abs=1e-8)

    def test_build_gdj_directly(self):
        problem = build_problem(NamedMeasure(name=MeasureName.SINGLE_MOMENT), 3, Region.EXTERIOR)
        again = build_gdj(problem.seq, 3, problem.f, Region.EXTERIOR)
        assert again.G(2.0) == pytest.approx(problem.gdj.G(2.0))


# ---------------------------------------------------------------------------
# Quadrature oracle
# ---------------------------------------------------------------------------


class TestOracle:
    def test_spectral_derivative(self):
        theta = 2.0 * np.pi * np.arange(64) / 64
        np.testing.assert_allclose(spectral_derivative(np.cos(3 * theta)), -3 * np.sin(3 * theta), atol=1e-12)

    def test_rejects_points_on_the_circle(self):
        problem = build_problem(NamedMeasure(name=MeasureName.LEBESGUE), 2, Region.EXTERIOR)
        with pytest.raises(NearSingularEvaluation):
            quadrature_oracle(problem.seq, 2, problem.measure, "G", 1.0 + 1e-9)

    def test_rejects_bad_grid(self):
        problem = build_problem(NamedMeasure(name=MeasureName.LEBESGUE), 2, Region.EXTERIOR)
        with pytest.raises(InvalidConfiguration):
            quadrature_oracle(problem.seq, 2, problem.measure, "G", 2.0, N=3000)

    def test_rejects_unknown_integral(self):
        problem = build_problem(NamedMeasure(name=MeasureName.LEBESGUE), 2, Region.EXTERIOR)
        with pytest.raises(InvalidConfiguration):
            quadrature_oracle(problem.seq, 2, problem.measure, "K", 2.0)  # type: ignore[arg-type]
