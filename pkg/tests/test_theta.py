"""The parameter space Ω_p and the multiplier σ_θ."""

from __future__ import annotations

from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from itertools import product

import pytest

from solspec.core import GroupElement, PhaseAngle, ThetaSequence, bicharacter_angle, multiplier, phase_to_complex, sigma, theta_at
from solspec.errors import DomainError, PrimeMismatchError

SAMPLES = [
    GroupElement.from_fractions(a, b, 2)
    for a, b in [(0, 0), (1, 0), (0, 1), (Fraction(1, 2), 3), (Fraction(-3, 4), Fraction(5, 8)), (-2, Fraction(1, 4))]
]


@pytest.mark.os_agnostic
def test_when_the_period_alternates_theta_alternates_between_two_thirds_and_one_third(two_thirds_theta: ThetaSequence) -> None:
    assert [two_thirds_theta.theta_at(n) for n in range(5)] == [Fraction(2, 3), Fraction(1, 3), Fraction(2, 3), Fraction(1, 3), Fraction(2, 3)]
    assert two_thirds_theta == ThetaSequence.periodic_two_thirds()


@pytest.mark.os_agnostic
def test_when_levels_are_computed_each_is_a_pth_root_of_the_previous_modulo_one() -> None:
    theta = ThetaSequence(Fraction(1, 5), (2,), (1, 0), 3)

    for n in range(1, 12):
        assert (3 * theta.theta_at(n) - theta.theta_at(n - 1)) % 1 == 0
        assert 0 <= theta.theta_at(n) < 1


@pytest.mark.os_agnostic
def test_when_digits_are_read_the_preperiod_comes_first() -> None:
    theta = ThetaSequence(Fraction(0), (1, 1), (0, 2), 3)

    assert [theta.digit(n) for n in range(1, 7)] == [1, 1, 0, 2, 0, 2]
    with pytest.raises(DomainError):
        theta.digit(0)


@pytest.mark.os_agnostic
def test_when_a_rational_rotation_is_built_levels_divide_by_p() -> None:
    theta = ThetaSequence.rational_rotation(1, 3, 2)

    assert theta.theta_at(2) == Fraction(1, 12)
    assert theta_at(theta, 3) == Fraction(1, 24)


@pytest.mark.os_agnostic
@pytest.mark.parametrize(
    ("theta0", "preperiod", "period"),
    [(Fraction(1), (), (0,)), (Fraction(-1, 2), (), (0,)), (Fraction(0), (2,), (0,)), (Fraction(0), (), (0, 5))],
)
def test_when_theta_data_is_out_of_range_construction_fails(theta0: Fraction, preperiod: tuple[int, ...], period: tuple[int, ...]) -> None:
    with pytest.raises(DomainError):
        ThetaSequence(theta0, preperiod, period, 2)


@pytest.mark.os_agnostic
def test_when_levels_are_requested_concurrently_every_thread_sees_the_same_values() -> None:
    theta = ThetaSequence(Fraction(2, 7), (1,), (0, 1, 1), 2)
    expected = ThetaSequence(Fraction(2, 7), (1,), (0, 1, 1), 2).theta_at(200)

    with ThreadPoolExecutor(max_workers=8) as executor:
        results = list(executor.map(theta.theta_at, [200] * 32))

    assert set(results) == {expected}


@pytest.mark.os_agnostic
def test_when_theta_is_trivial_the_multiplier_is_one(trivial_theta: ThetaSequence) -> None:
    assert all(sigma(trivial_theta, x, y) == 1 for x, y in product(SAMPLES, repeat=2))


@pytest.mark.os_agnostic
def test_when_the_multiplier_is_evaluated_only_the_first_and_second_coordinates_enter(two_thirds_theta: ThetaSequence) -> None:
    """σ((1/2, 5), (7, 1/2)) has angle θ_2·1·1."""
    x = GroupElement.from_fractions(Fraction(1, 2), 5, 2)
    y = GroupElement.from_fractions(7, Fraction(1, 2), 2)

    assert multiplier(two_thirds_theta, x, y) == PhaseAngle(Fraction(2, 3))


@pytest.mark.os_agnostic
def test_when_presentations_are_not_reduced_the_angle_is_unchanged(two_thirds_theta: ThetaSequence) -> None:
    """1/2 · 1/2 read as 2/4 · 2/4."""
    assert bicharacter_angle(two_thirds_theta, 1, 1, 1, 1) == bicharacter_angle(two_thirds_theta, 2, 2, 2, 2)


@pytest.mark.os_agnostic
def test_when_the_cocycle_identity_is_checked_it_holds_exactly(two_thirds_theta: ThetaSequence) -> None:
    for x, y, z in product(SAMPLES, repeat=3):
        left = multiplier(two_thirds_theta, x, y) + multiplier(two_thirds_theta, x + y, z)
        right = multiplier(two_thirds_theta, y, z) + multiplier(two_thirds_theta, x, y + z)
        assert left == right


@pytest.mark.os_agnostic
def test_when_the_identity_is_an_argument_the_multiplier_is_trivial(two_thirds_theta: ThetaSequence) -> None:
    e = GroupElement.identity(2)

    assert all(multiplier(two_thirds_theta, e, g).is_zero() and multiplier(two_thirds_theta, g, e).is_zero() for g in SAMPLES)


@pytest.mark.os_agnostic
def test_when_elements_use_another_prime_the_multiplier_fails(two_thirds_theta: ThetaSequence) -> None:
    foreign = GroupElement.from_fractions(1, 1, 3)

    with pytest.raises(PrimeMismatchError):
        multiplier(two_thirds_theta, foreign, foreign)


@pytest.mark.os_agnostic
def test_when_angles_are_combined_they_wrap_modulo_one() -> None:
    assert PhaseAngle(Fraction(5, 4)).angle == Fraction(1, 4)
    assert (-PhaseAngle(Fraction(1, 4))).angle == Fraction(3, 4)
    assert (PhaseAngle(Fraction(2, 3)) + PhaseAngle(Fraction(1, 3))).is_zero()


@pytest.mark.os_agnostic
def test_when_the_angle_is_a_quarter_turn_the_complex_value_is_exact() -> None:
    assert phase_to_complex(PhaseAngle(Fraction(1, 4))) == 1j
    assert phase_to_complex(PhaseAngle(Fraction(1, 2))) == -1
    assert phase_to_complex(PhaseAngle(Fraction(1, 3))) == pytest.approx(complex(-0.5, 3**0.5 / 2))


@pytest.mark.os_agnostic
def test_when_unused_coordinates_change_the_multiplier_does_not(
    ball_draws: Callable[[int, int, int], list[GroupElement]], two_thirds_theta: ThetaSequence
) -> None:
    draws = ball_draws(16, 400, 11)

    for x, y, u, v in zip(draws[0::4], draws[1::4], draws[2::4], draws[3::4], strict=True):
        moved_x = GroupElement(x.first, u.second)
        moved_y = GroupElement(v.first, y.second)
        assert multiplier(two_thirds_theta, moved_x, moved_y) == multiplier(two_thirds_theta, x, y)


@pytest.mark.os_agnostic
def test_when_random_triples_from_b16_are_combined_the_cocycle_identity_holds(
    ball_draws: Callable[[int, int, int], list[GroupElement]], two_thirds_theta: ThetaSequence
) -> None:
    draws = ball_draws(16, 600, 12)

    for x, y, z in zip(draws[0::3], draws[1::3], draws[2::3], strict=True):
        left = multiplier(two_thirds_theta, x, y) + multiplier(two_thirds_theta, x + y, z)
        right = multiplier(two_thirds_theta, y, z) + multiplier(two_thirds_theta, x, y + z)
        assert left == right


@pytest.mark.os_agnostic
@pytest.mark.parametrize("extra", [1, 2, 3])
def test_when_random_pairs_are_read_in_longer_presentations_the_angle_is_unchanged(
    ball_draws: Callable[[int, int, int], list[GroupElement]], two_thirds_theta: ThetaSequence, extra: int
) -> None:
    draws = ball_draws(16, 200, 13)

    for x, y in zip(draws[0::2], draws[1::2], strict=True):
        a, b = x.first, y.second
        longer = bicharacter_angle(two_thirds_theta, a.numerator * 2**extra, a.exponent + extra, b.numerator * 2**extra, b.exponent + extra)
        assert longer == multiplier(two_thirds_theta, x, y)
