"""Tests for the worked examples and the equilibrium picture data."""

from __future__ import annotations

import pytest

from popuc.cauchy import Region
from popuc.closed_forms import (
    EXAMPLE_NAMES,
    bernstein_szego_fraction,
    figure_data,
    lebesgue,
    plot_rows,
    run_example,
    single_moment_fraction,
)
from popuc.electro import lame_from_fraction
from popuc.errors import InvalidConfiguration

# ---------------------------------------------------------------------------
# Worked examples
# ---------------------------------------------------------------------------


class TestExamples:
    @pytest.mark.parametrize("n", [2, 7])
    def test_lebesgue(self, n):
        result = lebesgue(n)
        assert result.passed, [c.to_dict() for c in result.failed()]
        assert result.charges.origin_charge() == pytest.approx((1 - n) / 2)
        assert len(result.mobile) == n

    @pytest.mark.parametrize("region", list(Region))
    @pytest.mark.parametrize("n", [3, 6])
    @pytest.mark.parametrize("name", ["bernstein_szego", "single_moment"])
    def test_both_regions(self, name, n, region):
        result = run_example(name, n, region)
        assert result.passed, [c.to_dict() for c in result.failed()]

    @pytest.mark.parametrize("n, M", [(3, 2), (7, 2), (7, 3)])
    def test_sieved(self, n, M):
        result = run_example("sieved", n, M=M)
        assert result.passed, [c.to_dict() for c in result.failed()]
        assert result.charges.origin_charge() == pytest.approx((1 - M) / 2)

    def test_result_serializes(self):
        data = run_example("bernstein_szego", 4).to_dict()
        assert data["example"] == "bernstein_szego"
        assert data["region"] == "exterior"
        assert data["beta"] == [-1.0, 0.0]
        assert all(check["passed"] for check in data["checks"])

    def test_names(self):
        assert set(EXAMPLE_NAMES) == {"lebesgue", "bernstein_szego", "sieved", "single_moment"}


class TestExampleErrors:
    def test_unknown_example(self):
        with pytest.raises(InvalidConfiguration, match="Unknown example"):
            run_example("chebyshev", 4)

    def test_sieved_is_exterior_only(self):
        with pytest.raises(InvalidConfiguration):
            run_example("sieved", 5, Region.INTERIOR)

    def test_sieved_needs_n_above_M(self):
        with pytest.raises(InvalidConfiguration):
            run_example("sieved", 2, M=2)

    def test_interior_bernstein_szego_needs_n_two(self):
        with pytest.raises(InvalidConfiguration):
            run_example("bernstein_szego", 1, Region.INTERIOR)


# ---------------------------------------------------------------------------
# Reference fractions
# ---------------------------------------------------------------------------


class TestFractions:
    def test_bernstein_szego_exterior_keeps_one_origin_factor(self):
        # P1 carries a single factor z against z^n in P2
        P1, P2 = bernstein_szego_fraction(5, -1.0, Region.EXTERIOR)
        assert P1.degree == 7 and P2.degree == 7
        assert abs(P1.coeffs[0]) == 0
        form = lame_from_fraction(P1, P2, 5)
        assert form.charges().origin_charge() == 0.0

    def test_single_moment_cancels_at_one(self):
        P1, P2 = single_moment_fraction(4, Region.EXTERIOR)
        assert P1(1.0) == pytest.approx(0.0)
        assert P2(1.0) == pytest.approx(0.0)
        form = lame_from_fraction(P1, P2, 4)
        assert len(form.cancelled_on_circle) == 1
        assert form.cancelled_on_circle[0] == pytest.approx(1.0)


# ---------------------------------------------------------------------------
# Picture data
# ---------------------------------------------------------------------------


class TestFigures:
    def test_bernstein_szego_exterior_picture(self):
        _, rows = figure_data(1)
        mobile = [r for r in rows if r.kind == "mobile"]
        generators = [r for r in rows if r.kind == "generator"]
        assert len(mobile) == 22
        assert not [r for r in rows if r.kind == "origin"]
        assert len(generators) == 24
        assert sum(1 for r in generators if r.charge == -0.5) == 23
        positive = [r for r in generators if r.charge > 0]
        assert len(positive) == 1
        assert positive[0].charge == 1.0
        assert positive[0].x == pytest.approx(0.5)

    def test_single_moment_exterior_picture(self):
        result, rows = figure_data(3)
        assert result.passed, [c.to_dict() for c in result.failed()]
        assert len([r for r in rows if r.kind == "mobile"]) == 14
        origin = [r for r in rows if r.kind == "origin"]
        assert len(origin) == 1
        assert origin[0].charge == 1.0

    def test_rows_follow_the_result(self):
        result = run_example("lebesgue", 4)
        rows = plot_rows(result)
        assert [r.kind for r in rows] == ["mobile"] * 4 + ["origin"]
        assert rows[-1].to_dict() == {"x": 0.0, "y": 0.0, "charge": -1.5, "kind": "origin"}

    def test_unknown_figure(self):
        with pytest.raises(InvalidConfiguration):
            figure_data(5)
