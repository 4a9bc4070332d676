"""Sandwich inclusions, doubling ratios and growth fits."""

from __future__ import annotations

from fractions import Fraction
from itertools import product

import pytest

from solspec.core import GroupElement
from solspec.errors import DomainError
from solspec.geometry import LengthKind, LengthSpec, ball_sandwich_check, dilation_check, doubling_report, enumerate_ball, growth_exponent


@pytest.mark.os_agnostic
@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("d", [1, 2])
def test_when_the_ball_at_a_power_of_p_is_sandwiched_both_inclusions_hold(p: int, d: int) -> None:
    report = ball_sandwich_check(p, d)

    assert report.passed
    assert report.counterexamples == []
    assert report.inner_size <= report.ball_size <= report.outer_size


@pytest.mark.os_agnostic
def test_when_d_is_one_and_p_is_two_the_sizes_are_three_three_and_nine() -> None:
    report = ball_sandwich_check(2, 1)

    assert (report.inner_size, report.ball_size, report.outer_size) == (3, 3, 9)
    assert report.to_dict()["passed"] is True


@pytest.mark.os_agnostic
def test_when_d_is_zero_the_sandwich_is_rejected() -> None:
    with pytest.raises(DomainError):
        ball_sandwich_check(2, 0)


@pytest.mark.os_agnostic
def test_when_doubling_is_measured_on_the_base_length_every_row_passes(base_spec: LengthSpec) -> None:
    report = doubling_report(base_spec, [Fraction(r) for r in (1, 2, 4, 8)])

    assert report.passed
    assert report.proven_bound == 1024
    first = report.rows[0]
    assert (first.count, first.count_double, first.count_dilated) == (1, 3, 3)
    assert first.ratio_double == 3.0
    assert report.empirical_doubling == max(row.ratio_double for row in report.rows)


@pytest.mark.os_agnostic
def test_when_p_is_three_the_dilated_count_uses_three_r() -> None:
    spec = LengthSpec(LengthKind.BASE, 3)
    report = doubling_report(spec, [Fraction(3)])
    row = report.rows[0]

    assert row.count_dilated >= row.count_double >= row.count
    assert report.to_dict()["p"] == 3


@pytest.mark.os_agnostic
@pytest.mark.parametrize("radii", [[], [Fraction(1, 2)], [Fraction(0)]])
def test_when_radii_are_empty_or_below_one_doubling_is_rejected(base_spec: LengthSpec, radii: list[Fraction]) -> None:
    with pytest.raises(DomainError):
        doubling_report(base_spec, radii)


@pytest.mark.os_agnostic
def test_when_a_dilation_factor_is_given_the_counts_come_from_one_ball(sum_spec: LengthSpec) -> None:
    report = dilation_check(sum_spec, 2, [Fraction(1), Fraction(2)])

    assert report.counts == [1, 5]
    assert report.dilated_counts == [5, 25]
    assert report.max_ratio == 5.0
    with pytest.raises(DomainError):
        dilation_check(sum_spec, 1, [Fraction(1)])


@pytest.mark.os_agnostic
def test_when_the_growth_of_base_balls_is_fitted_the_exponent_is_near_two(base_spec: LengthSpec) -> None:
    fit = growth_exponent(base_spec, 64)

    assert fit.radii == [8, 16, 32, 64]
    assert fit.counts == sorted(fit.counts)
    assert 1.5 <= fit.slope <= 2.5


@pytest.mark.os_agnostic
def test_when_the_largest_radius_is_below_p_squared_no_fit_is_made(base_spec: LengthSpec) -> None:
    with pytest.raises(DomainError):
        growth_exponent(base_spec, 3)


@pytest.mark.os_agnostic
def test_when_doubling_is_measured_on_the_sum_length_every_row_passes(sum_spec: LengthSpec) -> None:
    report = doubling_report(sum_spec, [Fraction(r) for r in (1, 2, 4)])

    assert report.passed
    assert report.proven_bound == (4 * 2**8) ** 4
    assert [row.count for row in report.rows] == [1, 5, 25]
    assert [row.count_double for row in report.rows] == [5, 25, report.rows[2].count_double]
    assert all(row.count_dilated == row.count_double for row in report.rows)


@pytest.mark.os_agnostic
@pytest.mark.parametrize("level", [1, 2])
def test_when_doubling_is_measured_on_a_restricted_base_length_every_row_passes(level: int) -> None:
    report = doubling_report(LengthSpec(LengthKind.RESTRICTED_BASE, 2, level), [Fraction(r) for r in (1, 2, 4)])

    assert report.passed
    assert report.rows[0].count == 1
    assert all(row.count <= row.count_double for row in report.rows)


@pytest.mark.os_agnostic
@pytest.mark.parametrize("spec", ["sum", "restricted:1", "restricted:2"])
@pytest.mark.parametrize("radius", [1, 2, 4])
def test_when_pair_balls_are_compared_with_base_squares_each_sits_between_the_other(spec: str, radius: int) -> None:
    """B(R) ⊆ B_base(R) × B_base(R) ⊆ B(2R)."""
    pair = LengthSpec.parse(spec, 2)
    outer = enumerate_ball(pair, 2 * radius)
    square = enumerate_ball(pair.base, radius)

    assert all(GroupElement(a, b) in outer for a, b in product(square, repeat=2))
    assert all(g.first in square and g.second in square for g in enumerate_ball(pair, radius))
    assert len(square) ** 2 <= outer.count_within(2 * radius)


@pytest.mark.os_agnostic
def test_when_the_growth_of_sum_balls_is_fitted_the_exponent_is_near_four(sum_spec: LengthSpec) -> None:
    fit = growth_exponent(sum_spec, 16)

    assert fit.radii == [4, 8, 16]
    assert fit.counts[0] == 25
    assert fit.counts == sorted(fit.counts)
    assert 3.0 <= fit.slope <= 5.0
