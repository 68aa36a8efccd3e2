"""Tests for h, the second-order ODE, the first-order system and the identity checks."""

from __future__ import annotations

import numpy as np
import pytest

from popuc.algebra import ComplexPoly
from popuc.cauchy import Region
from popuc.config import VerificationConfig
from popuc.errors import (
    DegeneratePair,
    InvalidConfiguration,
    MalformedOde,
    UnsupportedBetaZero,
)
from popuc.ode import (
    Sampling,
    derivative_identity_check,
    first_order_system,
    h_fn,
    oracle_agreement,
    sample_points,
    second_order_ode,
    verify_ode,
    verify_system,
)
from popuc.opuc import DiscreteMeasure, MeasureName, NamedMeasure, beta_from_points, popuc
from popuc.pipeline import build_problem

SWEEP_MEASURES = [
    NamedMeasure(name=MeasureName.LEBESGUE),
    NamedMeasure(name=MeasureName.BERNSTEIN_SZEGO, zeta=0.5),
    NamedMeasure(name=MeasureName.BERNSTEIN_SZEGO, zeta=0.3 - 0.4j),
    NamedMeasure(name=MeasureName.SIEVED_BS, zeta=0.5, M=2),
    NamedMeasure(name=MeasureName.SINGLE_MOMENT),
]
SWEEP_BETAS = [1.0, -1.0, 1j, 0.3 + 0.4j]


def _ids(measure: NamedMeasure) -> str:
    return f"{measure.name}-{measure.zeta}"


# ---------------------------------------------------------------------------
# Lebesgue measure
# ---------------------------------------------------------------------------


class TestLebesgue:
    def test_ode_is_euler_type(self):
        problem = build_problem(NamedMeasure(name=MeasureName.LEBESGUE), 7, Region.EXTERIOR)
        ode = second_order_ode(problem.seq, 7, problem.gdj, 1.0)
        assert ode.p(2.0) == pytest.approx(-3.0)
        assert ode.p(-0.5 + 1j) == pytest.approx(-6.0 / (-0.5 + 1j))
        assert ode.q.num.scale() < 1e-12
        report = verify_ode(ode, ComplexPoly.monomial(7) - 1.0)
        assert report.passed

    def test_h_is_constant(self):
        problem = build_problem(NamedMeasure(name=MeasureName.LEBESGUE), 4, Region.EXTERIOR)
        h = h_fn(problem.seq, 4, problem.gdj, 1j, 1j)
        assert h.is_polynomial
        assert h(3.0) == pytest.approx(-4j)


# ---------------------------------------------------------------------------
# Sweeps over measures, regions, degrees and boundary parameters
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("measure", SWEEP_MEASURES, ids=_ids)
@pytest.mark.parametrize("region", list(Region))
@pytest.mark.parametrize("n", range(2, 11))
class TestOdeSweep:
    def test_popuc_solves_the_ode(self, measure, region, n):
        problem = build_problem(measure, n, region)
        alpha = problem.seq.alpha(n - 1)
        betas = SWEEP_BETAS + ([alpha] if alpha != 0 else [])
        for beta in betas:
            ode = second_order_ode(problem.seq, n, problem.gdj, beta)
            report = verify_ode(ode, popuc(problem.seq, n, beta))
            assert report.passed, (beta, report.to_dict())


@pytest.mark.parametrize("measure", SWEEP_MEASURES, ids=_ids)
@pytest.mark.parametrize("region", list(Region))
@pytest.mark.parametrize("n", [2, 3, 5])
class TestIdentitySweep:
    def test_derivative_identity(self, measure, region, n):
        problem = build_problem(measure, n, region)
        for beta in SWEEP_BETAS:
            report = derivative_identity_check(problem.seq, n, problem.gdj, beta)
            assert report.passed, (beta, report.to_dict())

    def test_first_order_system(self, measure, region, n):
        problem = build_problem(measure, n, region)
        for beta in SWEEP_BETAS:
            for tau in (-1.0, 1j):
                if beta == tau:
                    continue
                system = first_order_system(problem.seq, n, problem.gdj, beta, tau)
                report = verify_system(
                    system,
                    popuc(problem.seq, n, beta),
                    popuc(problem.seq, n, tau),
                    sampling=Sampling(samples=16),
                )
                assert report.passed, (beta, tau, report.to_dict())


# ---------------------------------------------------------------------------
# Discrete measures
# ---------------------------------------------------------------------------


def test_discrete_measure_zeros_solve_the_ode(rng, circle_points):
    x = circle_points(rng, 6, min_gap=0.3)
    problem = build_problem(DiscreteMeasure(points=tuple(complex(p) for p in x)))
    assert problem.n == 6
    beta = beta_from_points(x)
    target = popuc(problem.seq, 6, beta)
    assert np.max(np.abs(target(x))) < 1e-9
    ode = second_order_ode(problem.seq, 6, problem.gdj, beta)
    assert verify_ode(ode, target).passed


def test_discrete_degree_out_of_range():
    measure = DiscreteMeasure(points=(1 + 0j, 1j, -1 + 0j))
    with pytest.raises(InvalidConfiguration):
        build_problem(measure, 4)
    with pytest.raises(InvalidConfiguration):
        build_problem(measure, 1)


# ---------------------------------------------------------------------------
# Failure modes
# ---------------------------------------------------------------------------


class TestFailures:
    @pytest.fixture
    def problem(self):
        return build_problem(NamedMeasure(name=MeasureName.BERNSTEIN_SZEGO), 4, Region.EXTERIOR)

    def test_wrong_polynomial_fails_verification(self, problem):
        ode = second_order_ode(problem.seq, 4, problem.gdj, 1.0)
        report = verify_ode(ode, ComplexPoly.monomial(4) + ComplexPoly.monomial(1))
        assert not report.passed
        assert report.max_sample_residual > 1e-6

    def test_beta_zero_is_unsupported(self, problem):
        with pytest.raises(UnsupportedBetaZero):
            second_order_ode(problem.seq, 4, problem.gdj, 0.0)

    def test_equal_pair_is_degenerate(self, problem):
        with pytest.raises(DegeneratePair):
            first_order_system(problem.seq, 4, problem.gdj, 1j, 1j)

    def test_mismatched_degree(self, problem):
        with pytest.raises(InvalidConfiguration, match="n = 4"):
            second_order_ode(problem.seq, 3, problem.gdj, 1.0)

    def test_missing_degree(self):
        with pytest.raises(InvalidConfiguration):
            build_problem(NamedMeasure(name=MeasureName.LEBESGUE), None)


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------


class TestSampling:
    def test_from_config(self):
        sampling = Sampling.from_config(VerificationConfig(samples=8, exterior_radius=2.0, seed=3))
        assert sampling.samples == 8
        assert sampling.seed == 3
        assert sampling.radius(Region.EXTERIOR) == 2.0
        assert sampling.radius(Region.INTERIOR) == 0.5

    def test_points_lie_on_the_sampling_circle(self):
        zs = sample_points([0.5], Region.INTERIOR, Sampling(samples=10))
        assert zs.size == 10
        np.testing.assert_allclose(np.abs(zs), 0.5)
        assert np.min(np.abs(zs - 0.5)) >= 1e-3

    def test_same_seed_same_points(self):
        first = sample_points([], Region.EXTERIOR, Sampling(seed=7))
        second = sample_points([], Region.EXTERIOR, Sampling(seed=7))
        np.testing.assert_array_equal(first, second)

    def test_no_valid_point(self):
        with pytest.raises(MalformedOde):
            sample_points([0j], Region.EXTERIOR, Sampling(pole_clearance=10.0))

    def test_report_serializes(self):
        problem = build_problem(NamedMeasure(name=MeasureName.LEBESGUE), 3, Region.EXTERIOR)
        ode = second_order_ode(problem.seq, 3, problem.gdj, 1.0)
        data = verify_ode(ode, ComplexPoly.monomial(3) - 1.0).to_dict()
        assert data["name"] == "ode"
        assert data["passed"] is True
        assert set(ode.to_json()) == {"n", "beta", "region", "p", "q"}


# ---------------------------------------------------------------------------
# Quadrature agreement
# ---------------------------------------------------------------------------


class TestOracleAgreement:
    @pytest.mark.parametrize("region", list(Region))
    def test_named_measure(self, region):
        problem = build_problem(NamedMeasure(name=MeasureName.SIEVED_BS, zeta=0.5, M=2), 5, region)
        report = oracle_agreement(
            problem.seq, 5, problem.weight_measure, problem.gdj, sampling=Sampling(samples=8)
        )
        assert report.passed, report.to_dict()
        assert report.name == "oracle-agreement"
        assert report.samples_used == 8

    def test_wrong_integrals_fail(self):
        problem = build_problem(NamedMeasure(name=MeasureName.SINGLE_MOMENT), 4, Region.EXTERIOR)
        other = build_problem(NamedMeasure(name=MeasureName.BERNSTEIN_SZEGO), 4, Region.EXTERIOR)
        report = oracle_agreement(
            problem.seq, 4, problem.weight_measure, other.gdj, sampling=Sampling(samples=8)
        )
        assert not report.passed
