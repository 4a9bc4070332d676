"""Exact arithmetic on Z[1/p] and Γ."""

from __future__ import annotations

from fractions import Fraction

import pytest

from solspec.core import (
    GroupElement,
    PAdicRational,
    lambda_embed,
    padic_norm,
    padic_valuation,
    parse_group_element,
    parse_padic,
    validate_prime,
)
from solspec.errors import DomainError, PrimeMismatchError


@pytest.mark.os_agnostic
def test_when_the_numerator_carries_powers_of_p_the_presentation_is_reduced() -> None:
    """4/2^2 and 1/2^0 are the same element with the same fields."""
    x = PAdicRational(4, 2, 2)

    assert (x.numerator, x.exponent) == (1, 0)
    assert x == PAdicRational(1, 0, 2)
    assert hash(x) == hash(PAdicRational(1, 0, 2))


@pytest.mark.os_agnostic
def test_when_zero_is_built_with_an_exponent_the_exponent_is_dropped() -> None:
    assert PAdicRational(0, 5, 3) == PAdicRational.zero(3)
    assert PAdicRational(0, 5, 3).exponent == 0


@pytest.mark.os_agnostic
def test_when_the_exponent_is_negative_construction_fails() -> None:
    with pytest.raises(DomainError):
        PAdicRational(1, -1, 2)


@pytest.mark.os_agnostic
def test_when_a_fraction_has_a_foreign_denominator_it_is_rejected() -> None:
    """1/3 is not in Z[1/2]."""
    with pytest.raises(DomainError):
        PAdicRational.from_fraction(Fraction(1, 3), 2)


@pytest.mark.os_agnostic
def test_when_sums_cancel_the_denominator_the_result_is_an_integer() -> None:
    """3/4 + 1/4 = 1."""
    total = PAdicRational(3, 2, 2) + PAdicRational(1, 2, 2)

    assert total == PAdicRational(1, 0, 2)
    assert total.value == 1


@pytest.mark.os_agnostic
def test_when_operands_use_different_primes_addition_fails() -> None:
    with pytest.raises(PrimeMismatchError):
        PAdicRational(1, 1, 2) + PAdicRational(1, 1, 3)


@pytest.mark.os_agnostic
@pytest.mark.parametrize(
    ("x", "expected"),
    [
        (PAdicRational(3, 2, 2), Fraction(4)),
        (PAdicRational(12, 0, 2), Fraction(1, 4)),
        (PAdicRational(5, 0, 2), Fraction(1)),
        (PAdicRational(0, 0, 2), Fraction(0)),
        (PAdicRational(-9, 0, 3), Fraction(1, 9)),
    ],
)
def test_when_the_padic_norm_is_taken_it_matches_p_to_minus_valuation(x: PAdicRational, expected: Fraction) -> None:
    assert padic_norm(x) == expected


@pytest.mark.os_agnostic
def test_when_valuations_are_taken_zero_has_none_and_rationals_need_a_prime() -> None:
    assert padic_valuation(PAdicRational.zero(2)) is None
    assert padic_valuation(Fraction(3, 8), 2) == -3
    assert padic_valuation(18, 3) == 2
    with pytest.raises(DomainError):
        padic_valuation(Fraction(1, 2))


@pytest.mark.os_agnostic
def test_when_an_element_is_embedded_the_padic_part_describes_its_negation() -> None:
    value, descriptor = lambda_embed(PAdicRational(3, 1, 2))

    assert value == 1.5
    assert descriptor == (-3, 1)


@pytest.mark.os_agnostic
def test_when_strings_are_parsed_both_notations_give_the_same_element() -> None:
    assert parse_padic("3/2^2", 2) == parse_padic("3/4", 2) == PAdicRational(3, 2, 2)
    assert parse_padic(str(PAdicRational(-5, 3, 2)), 2) == PAdicRational(-5, 3, 2)


@pytest.mark.os_agnostic
def test_when_the_base_in_a_string_is_not_the_prime_parsing_fails() -> None:
    with pytest.raises(PrimeMismatchError):
        parse_padic("1/3^1", 2)
    with pytest.raises(DomainError):
        parse_padic("one half", 2)


@pytest.mark.os_agnostic
def test_when_a_pair_is_parsed_each_coordinate_is_read() -> None:
    gamma = parse_group_element("(1/2, -3)", 2)

    assert gamma == GroupElement.from_fractions(Fraction(1, 2), -3, 2)
    assert str(gamma) == "(1/2^1, -3)"
    with pytest.raises(DomainError):
        parse_group_element("1/2, 3", 2)


@pytest.mark.os_agnostic
def test_when_group_elements_are_combined_the_group_laws_hold() -> None:
    a = GroupElement.from_fractions(Fraction(1, 2), 3, 2)
    b = GroupElement.from_fractions(Fraction(-3, 4), Fraction(5, 8), 2)
    e = GroupElement.identity(2)

    assert a + e == a
    assert a + (-a) == e
    assert (a + b) - b == a
    assert a.scale(2) == a + a
    assert b.max_exponent == 3


@pytest.mark.os_agnostic
def test_when_level_coordinates_are_mapped_they_are_divided_by_p_to_the_level() -> None:
    gamma = GroupElement.from_level_coordinates(2, 6, 4, 2)

    assert gamma == GroupElement.from_fractions(Fraction(3, 2), 1, 2)
    with pytest.raises(DomainError):
        GroupElement.from_level_coordinates(-1, 1, 1, 2)


@pytest.mark.os_agnostic
@pytest.mark.parametrize("p", [2, 3, 5, 7, 101])
def test_when_a_prime_is_validated_it_is_returned(p: int) -> None:
    assert validate_prime(p) == p


@pytest.mark.os_agnostic
@pytest.mark.parametrize("p", [-3, 0, 1, 4, 9, 100])
def test_when_a_non_prime_is_validated_it_is_rejected(p: int) -> None:
    with pytest.raises(DomainError):
        validate_prime(p)
