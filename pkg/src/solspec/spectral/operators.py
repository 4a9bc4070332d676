"""Truncated Dirac and regular-representation operators on ball bases.

A :class:`BallBasis` orders ``δ_γ`` for ``γ`` in a length ball; operators are
compressions ``P_R T P_R`` onto that basis stored as ``scipy.sparse`` arrays.

Contents
--------
* :class:`BallBasis`, :class:`TruncatedOperator`.
* :func:`dirac_matrix`, :func:`regular_rep_matrix`, :func:`resolvent_matrix`.
* :func:`commutator_matrix`, :func:`higher_commutator_matrix` and their norms.
* :func:`operator_norm` - largest singular value by power iteration.
* :func:`representation_defect` - ``λ(f ∗ g)`` against ``λ(f) λ(g)`` on a padded ball.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

import numpy as np
from scipy import sparse

from solspec.algebra.elements import FiniteSupportElement, twisted_convolve
from solspec.algebra.norms import weighted_norm
from solspec.core.multiplier import sigma
from solspec.core.padic import GroupElement
from solspec.errors import ContextMismatchError, ConvergenceError, DomainError, InvariantError
from solspec.geometry.balls import Ball, enumerate_ball
from solspec.geometry.lengths import LengthKind, LengthSpec, length
from solspec.limits import DEFAULT_LIMITS, Limits

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 100_000
DEFAULT_SEED = 20240917


@dataclass(frozen=True, slots=True)
class BallBasis:
    """Index of a ball in its canonical order.

    ``elements`` are the Γ elements spanning the basis; for ``z2:n`` balls the
    Z² points are mapped to Γ_n so that the algebra acts on them directly.
    """

    ball: Ball
    elements: tuple[GroupElement, ...] = field(init=False)
    index: Mapping[GroupElement, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        spec = self.ball.spec
        if not spec.is_pair:
            raise DomainError(f"{spec} balls live in Z[1/p]; operators need a pair length")
        elements = tuple(self.ball.elements)
        if spec.kind is LengthKind.PULLED_BACK_Z2:
            level = spec.level or 0
            elements = tuple(
                GroupElement.from_level_coordinates(level, z.first.numerator, z.second.numerator, spec.prime) for z in elements
            )
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "index", {gamma: i for i, gamma in enumerate(elements)})

    @classmethod
    def build(cls, spec: LengthSpec, radius: Fraction | int, limits: Limits = DEFAULT_LIMITS) -> BallBasis:
        ball = enumerate_ball(spec, radius, limits)
        limits.check_matrix(len(ball))
        return cls(ball)

    @property
    def spec(self) -> LengthSpec:
        return self.ball.spec

    @property
    def dim(self) -> int:
        return len(self.elements)

    @property
    def identity_index(self) -> int:
        return self.index[GroupElement.identity(self.spec.prime)]

    def lengths(self) -> np.ndarray:
        return np.array([float(size) for size in self.ball.lengths])

    def vector(self, coefficients: Mapping[GroupElement, complex]) -> np.ndarray:
        """Coordinates of a finitely supported vector; its support must lie in the basis."""
        v = np.zeros(self.dim, dtype=complex)
        for gamma, value in coefficients.items():
            i = self.index.get(gamma)
            if i is None:
                raise DomainError(f"{gamma} lies outside the basis ball of radius {self.ball.radius}")
            v[i] = value
        return v


@dataclass(frozen=True, slots=True, eq=False)
class TruncatedOperator:
    """A matrix indexed by a :class:`BallBasis`."""

    matrix: sparse.csr_array
    basis: BallBasis
    storage: Literal["sparse", "dense"] = "sparse"

    @property
    def dim(self) -> int:
        return self.basis.dim

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def is_diagonal(self) -> bool:
        coo = self.matrix.tocoo()
        return bool(np.all(coo.row[coo.data != 0] == coo.col[coo.data != 0]))

    def diagonal(self) -> np.ndarray:
        return self.matrix.diagonal()


def _check_basis(spec: LengthSpec, basis: BallBasis) -> None:
    if basis.spec != spec:
        raise ContextMismatchError(f"basis was built for {basis.spec}, not {spec}")


def dirac_matrix(spec: LengthSpec, basis: BallBasis) -> TruncatedOperator:
    """Diagonal compression of ``D_L`` with entry ``L(γ)`` at ``γ``."""
    _check_basis(spec, basis)
    return TruncatedOperator(sparse.csr_array(sparse.diags_array(basis.lengths(), dtype=complex)), basis)


def regular_rep_matrix(f: FiniteSupportElement, basis: BallBasis) -> TruncatedOperator:
    """Compression of ``λ_σ(f)``: entry ``(γ, η) = f(γ - η) σ(γ - η, η)``."""
    if f.prime != basis.spec.prime:
        raise ContextMismatchError(f"element over p={f.prime}, basis over p={basis.spec.prime}")
    theta = f.theta
    rows: list[int] = []
    cols: list[int] = []
    data: list[complex] = []
    support = list(f.coefficients.items())
    for j, eta in enumerate(basis.elements):
        for gamma1, value in support:
            i = basis.index.get(gamma1 + eta)
            if i is not None:
                rows.append(i)
                cols.append(j)
                data.append(value * sigma(theta, gamma1, eta))
    n = basis.dim
    matrix = sparse.csr_array((np.asarray(data, dtype=complex), (rows, cols)), shape=(n, n))
    return TruncatedOperator(matrix, basis)


def _is_monomial(matrix: sparse.csr_array) -> bool:
    """At most one nonzero per row and per column."""
    if matrix.nnz == 0:
        return True
    rows_ok = np.diff(matrix.indptr).max() <= 1
    cols_ok = np.bincount(matrix.indices, minlength=matrix.shape[1]).max() <= 1
    return bool(rows_ok and cols_ok)


def operator_norm(
    operator: TruncatedOperator | np.ndarray | sparse.sparray,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    seed: int = DEFAULT_SEED,
) -> float:
    """Largest singular value.

    Monomial matrices (diagonal or partial permutations with weights) are
    evaluated exactly; otherwise power iteration on ``M^H M`` from a seeded
    random start runs until the estimate changes by at most ``tol`` relative.
    The power-iteration estimate never exceeds the true norm.

    Raises:
        DomainError: empty matrix.
        ConvergenceError: ``max_iter`` iterations without meeting ``tol``.
    """
    raw = operator.matrix if isinstance(operator, TruncatedOperator) else operator
    matrix = sparse.csr_array(raw, dtype=complex)
    matrix.eliminate_zeros()
    n_rows, n_cols = matrix.shape
    if n_rows == 0 or n_cols == 0:
        raise DomainError("operator norm of an empty matrix")
    if _is_monomial(matrix):
        return float(np.abs(matrix.data).max()) if matrix.nnz else 0.0

    adjoint = matrix.conj().T.tocsr()
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n_cols) + 1j * rng.standard_normal(n_cols)
    v /= np.linalg.norm(v)
    estimate = 0.0
    for iteration in range(1, max_iter + 1):
        w = matrix @ v
        current = float(np.linalg.norm(w))
        u = adjoint @ w
        size = np.linalg.norm(u)
        if size == 0.0:
            return current
        v = u / size
        if abs(current - estimate) <= tol * current:
            logger.debug("power iteration converged after %d steps: %.12g", iteration, current)
            return current
        estimate = current
    raise ConvergenceError(f"power iteration did not reach relative tolerance {tol} in {max_iter} steps")


def commutator_matrix(f: FiniteSupportElement, spec: LengthSpec, basis: BallBasis) -> TruncatedOperator:
    """``[D, λ(f)]`` with entries ``(L(γ) - L(η)) λ(f)_{γη}``."""
    return higher_commutator_matrix(f, 1, spec, basis)


def higher_commutator_matrix(f: FiniteSupportElement, k: int, spec: LengthSpec, basis: BallBasis) -> TruncatedOperator:
    """The ``k``-fold iterated commutator ``[D, [D, ..., λ(f)]]``."""
    if k < 1:
        raise DomainError(f"k must be at least 1, got {k}")
    _check_basis(spec, basis)
    dirac = dirac_matrix(spec, basis).matrix
    current = regular_rep_matrix(f, basis).matrix
    for _ in range(k):
        current = sparse.csr_array(dirac @ current - current @ dirac)
    return TruncatedOperator(current, basis)


def commutator_norm(
    f: FiniteSupportElement,
    spec: LengthSpec,
    basis: BallBasis,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    seed: int = DEFAULT_SEED,
) -> float:
    """``‖[D, λ(f)]‖`` on the truncation."""
    return operator_norm(commutator_matrix(f, spec, basis), tol, max_iter, seed)


def higher_commutator_norm(
    f: FiniteSupportElement,
    k: int,
    spec: LengthSpec,
    basis: BallBasis,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    seed: int = DEFAULT_SEED,
) -> float:
    """Norm of the ``k``-fold commutator, checked against ``‖f‖_{1,k,L}``.

    Raises:
        InvariantError: the norm exceeds the weighted ℓ¹ bound by more than ``tol``.
    """
    value = operator_norm(higher_commutator_matrix(f, k, spec, basis), tol, max_iter, seed)
    bound = weighted_norm(f, k, spec)
    if value > bound + tol * max(1.0, bound):
        raise InvariantError(f"{k}-fold commutator norm {value} exceeds weighted bound {bound}")
    return value


def resolvent_matrix(dirac: TruncatedOperator, lam: complex) -> TruncatedOperator:
    """``(D - λ)^{-1}`` for a diagonal ``D`` and non-real ``λ``."""
    lam = complex(lam)
    if lam.imag == 0:
        raise DomainError(f"resolvent needs a non-real spectral parameter, got {lam}")
    if not dirac.is_diagonal():
        raise DomainError("resolvent_matrix expects a diagonal Dirac compression")
    values = 1.0 / (dirac.diagonal() - lam)
    return TruncatedOperator(sparse.csr_array(sparse.diags_array(values, dtype=complex)), dirac.basis)


def resolvent_tail_bound(radius: Fraction | float, t: float) -> float:
    """``(R² + t²)^{-1/2}``, bounding ``|L(γ) - it|^{-1}`` for ``γ`` outside ``B(R)``."""
    return float((float(radius) ** 2 + t**2) ** -0.5)


def eigenvalue_count(spec: LengthSpec, r: Fraction | int, limits: Limits = DEFAULT_LIMITS) -> int:
    """Number of Dirac eigenvalues in ``[0, r]`` counted with multiplicity."""
    return len(enumerate_ball(spec, r, limits))


def representation_defect(
    f: FiniteSupportElement,
    g: FiniteSupportElement,
    spec: LengthSpec,
    radius: Fraction | int,
    limits: Limits = DEFAULT_LIMITS,
) -> float:
    """Largest entry of ``λ(f ∗ g) - λ(f) λ(g)`` on the inner block ``B(R)``.

    The product ``λ(f) λ(g)`` is formed on ``B(R + pad)`` with ``pad`` the
    largest length in either support, so truncation does not cut paths.
    """
    radius = Fraction(radius)
    supports = list(f.coefficients) + list(g.coefficients)
    pad = max((length(spec.on_group, gamma) for gamma in supports), default=Fraction(0))
    outer = BallBasis.build(spec, radius + pad, limits)
    inner = outer.ball.count_within(radius)
    product = (regular_rep_matrix(f, outer).matrix @ regular_rep_matrix(g, outer).matrix).toarray()[:inner, :inner]
    direct = regular_rep_matrix(twisted_convolve(f, g), outer).to_dense()[:inner, :inner]
    return float(np.abs(product - direct).max()) if inner else 0.0


__all__ = [
    "BallBasis",
    "TruncatedOperator",
    "commutator_matrix",
    "commutator_norm",
    "dirac_matrix",
    "eigenvalue_count",
    "higher_commutator_matrix",
    "higher_commutator_norm",
    "operator_norm",
    "regular_rep_matrix",
    "representation_defect",
    "resolvent_matrix",
    "resolvent_tail_bound",
]
