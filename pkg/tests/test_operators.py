"""Truncated Dirac operators, regular representation and operator norms."""

from __future__ import annotations

from collections.abc import Callable
from fractions import Fraction

import numpy as np
import pytest

from solspec.algebra import FiniteSupportElement, lipschitz_bound, weighted_norm
from solspec.core import GroupElement, ThetaSequence
from solspec.errors import ContextMismatchError, ConvergenceError, DomainError, ResourceLimitError
from solspec.geometry import LengthKind, LengthSpec, length
from solspec.limits import Limits
from solspec.spectral import (
    BallBasis,
    commutator_matrix,
    commutator_norm,
    dirac_matrix,
    eigenvalue_count,
    higher_commutator_norm,
    operator_norm,
    regular_rep_matrix,
    representation_defect,
    resolvent_matrix,
    resolvent_tail_bound,
)


def _g(a: Fraction | int, b: Fraction | int) -> GroupElement:
    return GroupElement.from_fractions(a, b, 2)


@pytest.fixture
def basis(sum_spec: LengthSpec) -> BallBasis:
    return BallBasis.build(sum_spec, 4)


@pytest.mark.os_agnostic
def test_when_the_dirac_operator_is_compressed_its_diagonal_is_the_length(sum_spec: LengthSpec, basis: BallBasis) -> None:
    dirac = dirac_matrix(sum_spec, basis)

    assert dirac.is_diagonal()
    assert dirac.dim == 25
    assert list(dirac.diagonal()) == [float(size) for size in basis.ball.lengths]
    assert basis.identity_index == 0


@pytest.mark.os_agnostic
def test_when_the_basis_uses_a_one_coordinate_length_it_is_rejected(base_spec: LengthSpec) -> None:
    with pytest.raises(DomainError):
        BallBasis.build(base_spec, 4)


@pytest.mark.os_agnostic
def test_when_the_basis_exceeds_the_matrix_cap_it_is_rejected(sum_spec: LengthSpec) -> None:
    with pytest.raises(ResourceLimitError):
        BallBasis.build(sum_spec, 4, Limits(max_matrix_dim=10))


@pytest.mark.os_agnostic
def test_when_the_spec_differs_from_the_basis_the_dirac_operator_refuses(basis: BallBasis) -> None:
    with pytest.raises(ContextMismatchError):
        dirac_matrix(LengthSpec(LengthKind.RESTRICTED_SUM, 2, 0), basis)


@pytest.mark.os_agnostic
def test_when_the_unit_is_represented_the_matrix_is_the_identity(two_thirds_theta: ThetaSequence, basis: BallBasis) -> None:
    matrix = regular_rep_matrix(FiniteSupportElement.identity(two_thirds_theta), basis).to_dense()

    assert np.array_equal(matrix, np.eye(basis.dim))


@pytest.mark.os_agnostic
def test_when_a_vector_leaves_the_basis_it_cannot_be_encoded(basis: BallBasis) -> None:
    with pytest.raises(DomainError):
        basis.vector({_g(100, 0): 1.0})


@pytest.mark.os_agnostic
@pytest.mark.parametrize("gamma", [_g(1, 0), _g(Fraction(1, 2), 0), _g(0, -1)])
def test_when_the_commutator_of_a_delta_is_measured_it_equals_the_length(
    two_thirds_theta: ThetaSequence, sum_spec: LengthSpec, basis: BallBasis, gamma: GroupElement
) -> None:
    norm = commutator_norm(FiniteSupportElement.delta(gamma, two_thirds_theta), sum_spec, basis)

    assert norm == pytest.approx(float(Fraction(5, 2) if gamma.first.exponent else 2), abs=1e-12)


@pytest.mark.os_agnostic
def test_when_the_commutator_matrix_is_formed_its_entries_scale_by_the_length_difference(
    two_thirds_theta: ThetaSequence, sum_spec: LengthSpec, basis: BallBasis
) -> None:
    f = FiniteSupportElement({_g(1, 0): 0.5, _g(0, Fraction(1, 2)): 0.25j}, two_thirds_theta)
    lengths = np.array([float(size) for size in basis.ball.lengths])

    commutator = commutator_matrix(f, sum_spec, basis).to_dense()
    expected = (lengths[:, None] - lengths[None, :]) * regular_rep_matrix(f, basis).to_dense()

    assert np.allclose(commutator, expected, atol=1e-12)


@pytest.mark.os_agnostic
def test_when_higher_commutators_are_measured_they_stay_below_the_weighted_norm(
    two_thirds_theta: ThetaSequence, sum_spec: LengthSpec, basis: BallBasis
) -> None:
    f = FiniteSupportElement({_g(1, 0): 0.4, _g(0, Fraction(1, 2)): 0.3j, _g(-1, 1): 0.2}, two_thirds_theta)

    for k in (1, 2, 3):
        assert higher_commutator_norm(f, k, sum_spec, basis) <= weighted_norm(f, k, sum_spec) * (1 + 1e-9)


@pytest.mark.os_agnostic
def test_when_a_dense_matrix_is_measured_power_iteration_matches_the_spectral_norm() -> None:
    matrix = np.array([[1.0, 2.0, 0.0], [3.0, 4.0, 1.0], [0.0, 1.0, 1.0]])

    assert operator_norm(matrix) == pytest.approx(float(np.linalg.norm(matrix, 2)), rel=1e-6)


@pytest.mark.os_agnostic
def test_when_a_matrix_is_monomial_its_norm_is_exact() -> None:
    matrix = np.array([[0.0, -3.0], [0.5j, 0.0]])

    assert operator_norm(matrix) == 3.0
    assert operator_norm(np.zeros((2, 2))) == 0.0


@pytest.mark.os_agnostic
def test_when_power_iteration_runs_out_of_steps_it_says_so() -> None:
    with pytest.raises(ConvergenceError):
        operator_norm(np.array([[1.0, 2.0], [3.0, 4.0]]), max_iter=1)


@pytest.mark.os_agnostic
def test_when_the_resolvent_is_formed_its_norm_is_attained_at_the_identity(sum_spec: LengthSpec, basis: BallBasis) -> None:
    resolvent = resolvent_matrix(dirac_matrix(sum_spec, basis), 1j)

    assert operator_norm(resolvent) == pytest.approx(1.0)
    assert resolvent_tail_bound(4, 1.0) == pytest.approx(17**-0.5)
    with pytest.raises(DomainError):
        resolvent_matrix(dirac_matrix(sum_spec, basis), 2.0)


@pytest.mark.os_agnostic
def test_when_eigenvalues_are_counted_they_match_the_ball_size(sum_spec: LengthSpec) -> None:
    assert eigenvalue_count(sum_spec, 2) == 5
    assert eigenvalue_count(sum_spec, 4) == 25


@pytest.mark.os_agnostic
def test_when_products_are_represented_the_representation_is_multiplicative(
    two_thirds_theta: ThetaSequence, sum_spec: LengthSpec
) -> None:
    f = FiniteSupportElement({_g(Fraction(1, 2), 0): 1.0, _g(0, 1): 0.5j}, two_thirds_theta)
    g = FiniteSupportElement({_g(1, Fraction(-1, 2)): 0.25, _g(-1, 0): 1.0}, two_thirds_theta)

    assert representation_defect(f, g, sum_spec, 2) <= 1e-12


@pytest.fixture(scope="module")
def wide_basis() -> BallBasis:
    return BallBasis.build(LengthSpec(LengthKind.SUM, 2), 8)


@pytest.mark.os_agnostic
@pytest.mark.slow
def test_when_random_deltas_in_b8_are_commuted_with_d_the_norm_is_their_length(
    ball_draws: Callable[[int, int, int], list[GroupElement]], two_thirds_theta: ThetaSequence, sum_spec: LengthSpec, wide_basis: BallBasis
) -> None:
    for gamma in ball_draws(8, 50, 5):
        norm = commutator_norm(FiniteSupportElement.delta(gamma, two_thirds_theta), sum_spec, wide_basis)

        assert norm == pytest.approx(float(length(sum_spec, gamma)), abs=1e-12)


@pytest.mark.os_agnostic
@pytest.mark.slow
def test_when_random_elements_in_b8_are_represented_the_l1_and_lipschitz_bounds_hold(
    random_element: Callable[..., FiniteSupportElement], sum_spec: LengthSpec, wide_basis: BallBasis
) -> None:
    for seed in range(10):
        f = random_element(8, 4, seed)

        assert operator_norm(regular_rep_matrix(f, wide_basis), tol=1e-6) <= f.l1_norm() * (1 + 1e-9)
        assert commutator_norm(f, sum_spec, wide_basis, tol=1e-6) <= lipschitz_bound(f, sum_spec) * (1 + 1e-9)


@pytest.mark.os_agnostic
@pytest.mark.parametrize(("gamma", "expected"), [(_g(Fraction(1, 2), 0), 2.5), (_g(1, 0), 2.0), (_g(0, Fraction(-1, 2)), 2.5)])
def test_when_a_z2_basis_is_used_bounds_read_lengths_on_its_gamma_elements(
    two_thirds_theta: ThetaSequence, gamma: GroupElement, expected: float
) -> None:
    spec = LengthSpec(LengthKind.PULLED_BACK_Z2, 2, 1)
    basis = BallBasis.build(spec, 4)
    delta = FiniteSupportElement.delta(gamma, two_thirds_theta)

    assert lipschitz_bound(delta, spec) == expected
    assert commutator_norm(delta, spec, basis) == pytest.approx(expected, abs=1e-12)
    assert higher_commutator_norm(delta, 2, spec, basis) == pytest.approx(expected**2, abs=1e-12)
    assert weighted_norm(delta, 2, spec) == (1 + expected) ** 2
