"""Length functions and their selectors."""

from __future__ import annotations

from fractions import Fraction
from itertools import product

import pytest

from solspec.core import GroupElement, PAdicRational
from solspec.errors import ConfigError, DomainError, PrimeMismatchError
from solspec.geometry import LengthKind, LengthSpec, base_length, length

VALUES = [Fraction(0), Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(3, 4), Fraction(-5, 8), Fraction(6), Fraction(-12)]


def _rational(value: Fraction, p: int = 2) -> PAdicRational:
    return PAdicRational.from_fraction(value, p)


@pytest.mark.os_agnostic
def test_when_the_base_length_is_evaluated_it_adds_both_absolute_values() -> None:
    """L(3/4) = 3/4 + 4."""
    assert base_length(PAdicRational(3, 2, 2)) == Fraction(19, 4)
    assert base_length(PAdicRational(12, 0, 2)) == Fraction(49, 4)
    assert base_length(PAdicRational.zero(2)) == 0


@pytest.mark.os_agnostic
def test_when_the_base_length_is_checked_on_samples_it_is_a_length_function() -> None:
    for x, y in product(VALUES, repeat=2):
        a, b = _rational(x), _rational(y)
        assert base_length(-a) == base_length(a)
        assert base_length(a + b) <= base_length(a) + base_length(b)
    assert all(base_length(_rational(x)) >= 1 for x in VALUES if x != 0)


@pytest.mark.os_agnostic
def test_when_the_sum_length_is_evaluated_it_adds_the_coordinates(sum_spec: LengthSpec) -> None:
    gamma = GroupElement.from_fractions(Fraction(1, 2), -3, 2)

    assert length(sum_spec, gamma) == Fraction(5, 2) + 4


@pytest.mark.os_agnostic
def test_when_lengths_are_restricted_they_agree_with_the_full_length_on_their_level(sum_spec: LengthSpec) -> None:
    restricted = LengthSpec(LengthKind.RESTRICTED_SUM, 2, 2)
    gamma = GroupElement.from_fractions(Fraction(3, 4), Fraction(-1, 2), 2)

    assert length(restricted, gamma) == length(sum_spec, gamma)


@pytest.mark.os_agnostic
def test_when_an_element_lies_outside_the_level_the_restricted_length_refuses_it() -> None:
    restricted = LengthSpec(LengthKind.RESTRICTED_SUM, 2, 0)

    with pytest.raises(DomainError):
        length(restricted, GroupElement.from_fractions(Fraction(1, 2), 0, 2))
    with pytest.raises(DomainError):
        length(LengthSpec(LengthKind.RESTRICTED_BASE, 2, 1), PAdicRational(1, 2, 2))


@pytest.mark.os_agnostic
def test_when_the_length_is_pulled_back_to_z2_points_are_scaled_first() -> None:
    """The point (1, 0) at level 1 is (1/2, 0) in Γ."""
    pulled = LengthSpec(LengthKind.PULLED_BACK_Z2, 2, 1)

    assert length(pulled, GroupElement.from_fractions(1, 0, 2)) == Fraction(5, 2)
    with pytest.raises(DomainError):
        length(pulled, GroupElement.from_fractions(Fraction(1, 2), 0, 2))


@pytest.mark.os_agnostic
def test_when_z2_lengths_are_read_on_gamma_they_become_the_restricted_sum(sum_spec: LengthSpec) -> None:
    pulled = LengthSpec(LengthKind.PULLED_BACK_Z2, 2, 1)

    assert pulled.on_group == LengthSpec(LengthKind.RESTRICTED_SUM, 2, 1)
    assert sum_spec.on_group is sum_spec
    for a, b in product(range(-3, 4), repeat=2):
        image = GroupElement.from_level_coordinates(1, a, b, 2)
        assert length(pulled.on_group, image) == length(pulled, GroupElement.from_fractions(a, b, 2))


@pytest.mark.os_agnostic
def test_when_the_domain_does_not_match_the_spec_evaluation_fails(base_spec: LengthSpec, sum_spec: LengthSpec) -> None:
    with pytest.raises(DomainError):
        length(base_spec, GroupElement.identity(2))
    with pytest.raises(DomainError):
        length(sum_spec, PAdicRational.zero(2))
    with pytest.raises(PrimeMismatchError):
        length(sum_spec, GroupElement.identity(3))


@pytest.mark.os_agnostic
@pytest.mark.parametrize(
    ("text", "kind", "level"),
    [
        ("base", LengthKind.BASE, None),
        ("sum", LengthKind.SUM, None),
        ("restricted:2", LengthKind.RESTRICTED_SUM, 2),
        ("restricted-base:0", LengthKind.RESTRICTED_BASE, 0),
        ("z2:3", LengthKind.PULLED_BACK_Z2, 3),
    ],
)
def test_when_a_spec_string_is_parsed_kind_and_level_are_read(text: str, kind: LengthKind, level: int | None) -> None:
    spec = LengthSpec.parse(text, 3)

    assert (spec.kind, spec.level, spec.prime) == (kind, level, 3)
    assert str(spec) == text


@pytest.mark.os_agnostic
@pytest.mark.parametrize("text", ["bogus", "sum:3", "restricted", "z2:", "restricted:-1"])
def test_when_a_spec_string_is_malformed_parsing_fails(text: str) -> None:
    with pytest.raises(ConfigError):
        LengthSpec.parse(text, 2)


@pytest.mark.os_agnostic
def test_when_the_dilation_constant_is_requested_pairs_take_the_fourth_power(base_spec: LengthSpec, sum_spec: LengthSpec) -> None:
    assert base_spec.proven_constant == 4 * 2**8
    assert sum_spec.proven_constant == (4 * 2**8) ** 4
    assert not base_spec.is_pair
    assert sum_spec.is_pair
    assert LengthSpec(LengthKind.RESTRICTED_SUM, 2, 1).base == LengthSpec(LengthKind.RESTRICTED_BASE, 2, 1)
