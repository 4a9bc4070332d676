"""Weighted norms, cutoffs and tail functionals."""

from __future__ import annotations

from collections.abc import Callable
from fractions import Fraction

import pytest

from solspec.algebra import FiniteSupportElement, adjoint, cutoff, lipschitz_bound, mu_q, tail_mass, weighted_norm
from solspec.core import GroupElement, ThetaSequence
from solspec.errors import DomainError
from solspec.geometry import LengthSpec


def _g(a: Fraction | int, b: Fraction | int) -> GroupElement:
    return GroupElement.from_fractions(a, b, 2)


@pytest.mark.os_agnostic
@pytest.mark.parametrize(("s", "expected"), [(0, 1.0), (1, 3.0), (2, 9.0), (3, 27.0)])
def test_when_a_delta_is_weighted_the_norm_is_one_plus_length_to_the_s(
    trivial_theta: ThetaSequence, sum_spec: LengthSpec, s: int, expected: float
) -> None:
    """L((1, 0)) = 2."""
    assert weighted_norm(FiniteSupportElement.delta(_g(1, 0), trivial_theta), s, sum_spec) == expected


@pytest.mark.os_agnostic
def test_when_the_weight_exponent_is_negative_the_norm_is_undefined(trivial_theta: ThetaSequence, sum_spec: LengthSpec) -> None:
    with pytest.raises(DomainError):
        weighted_norm(FiniteSupportElement.identity(trivial_theta), -1, sum_spec)


@pytest.mark.os_agnostic
def test_when_weighted_norms_of_products_are_compared_they_are_submultiplicative(
    two_thirds_theta: ThetaSequence, sum_spec: LengthSpec
) -> None:
    f = FiniteSupportElement({_g(1, 0): 0.5, _g(Fraction(1, 2), 3): -0.25j}, two_thirds_theta)
    g = FiniteSupportElement({_g(0, Fraction(3, 4)): 1.0, _g(-2, 1): 0.3}, two_thirds_theta)

    for s in (0, 1, 2, 3):
        assert weighted_norm(f * g, s, sum_spec) <= weighted_norm(f, s, sum_spec) * weighted_norm(g, s, sum_spec) * (1 + 1e-12)
        assert weighted_norm(adjoint(f), s, sum_spec) == pytest.approx(weighted_norm(f, s, sum_spec), rel=1e-12)


@pytest.mark.os_agnostic
def test_when_the_lipschitz_bound_is_taken_it_weights_by_length(trivial_theta: ThetaSequence, sum_spec: LengthSpec) -> None:
    element = FiniteSupportElement({_g(1, 0): 0.5, _g(-1, 0): 0.5, GroupElement.identity(2): 7.0}, trivial_theta)

    assert lipschitz_bound(element, sum_spec) == 2.0


@pytest.mark.os_agnostic
def test_when_an_element_is_cut_off_the_tail_mass_is_what_was_removed(trivial_theta: ThetaSequence, sum_spec: LengthSpec) -> None:
    """L((1, 0)) = 2 and L((1/2, 0)) = 5/2."""
    element = FiniteSupportElement({_g(1, 0): 1.0, _g(Fraction(1, 2), 0): -2.0}, trivial_theta)

    kept = cutoff(element, sum_spec, 2)

    assert kept.support == (_g(1, 0),)
    assert tail_mass(element, sum_spec, 2) == 2.0
    assert tail_mass(element, sum_spec, Fraction(5, 2)) == 0.0


@pytest.mark.os_agnostic
def test_when_mu_q_is_taken_the_supremum_runs_over_integer_radii(trivial_theta: ThetaSequence, sum_spec: LengthSpec) -> None:
    far = FiniteSupportElement.delta(_g(Fraction(1, 2), 0), trivial_theta)
    near = FiniteSupportElement.delta(_g(1, 0), trivial_theta)

    assert mu_q(far, 1, sum_spec) == 2.0
    assert mu_q(far, 2, sum_spec) == 4.0
    assert mu_q(near, 3, sum_spec) == 1.0
    assert mu_q(FiniteSupportElement.identity(trivial_theta), 3, sum_spec) == 0.0
    assert mu_q(FiniteSupportElement.zero(trivial_theta), 1, sum_spec) == 0.0


@pytest.mark.os_agnostic
def test_when_the_support_reaches_far_mu_q_only_visits_radii_below_its_lengths(trivial_theta: ThetaSequence, sum_spec: LengthSpec) -> None:
    """L((1/2^30, 0)) = 2^30 + 2^-30, so the last radius with a tail is 2^30."""
    far = FiniteSupportElement({_g(Fraction(1, 2**30), 0): 0.5, _g(1, 0): 0.25}, trivial_theta)

    assert mu_q(far, 1, sum_spec) == float(2**29)
    assert mu_q(far, 2, sum_spec) == float(2**59)
    assert mu_q(far, 0, sum_spec) == 0.75


@pytest.mark.os_agnostic
def test_when_q_is_negative_mu_q_is_undefined(trivial_theta: ThetaSequence, sum_spec: LengthSpec) -> None:
    with pytest.raises(DomainError):
        mu_q(FiniteSupportElement.identity(trivial_theta), -1, sum_spec)


@pytest.mark.os_agnostic
def test_when_random_pairs_are_multiplied_every_weighted_norm_is_submultiplicative(
    random_element: Callable[..., FiniteSupportElement], sum_spec: LengthSpec
) -> None:
    for seed in range(200):
        f, g = random_element(8, 3, seed), random_element(8, 3, 1000 + seed)
        product = f * g

        for s in (0, 1, 2, 3):
            assert weighted_norm(product, s, sum_spec) <= weighted_norm(f, s, sum_spec) * weighted_norm(g, s, sum_spec) * (1 + 1e-12)
