"""States on the twisted algebra and certified Monge-Kantorovich lower bounds."""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from types import MappingProxyType

import numpy as np

from solspec.algebra.elements import FiniteSupportElement, symmetric_delta
from solspec.algebra.norms import lipschitz_bound
from solspec.core.padic import GroupElement
from solspec.core.theta import ThetaSequence
from solspec.errors import DomainError
from solspec.geometry.lengths import LengthSpec, length
from solspec.spectral.operators import BallBasis, regular_rep_matrix

logger = logging.getLogger(__name__)

UNIT_TOL = 1e-12


@dataclass(frozen=True, slots=True)
class CanonicalTrace:
    """``f ↦ f(e)``."""

    def describe(self) -> str:
        return "trace"


@dataclass(frozen=True, slots=True)
class VectorState:
    """``a ↦ ⟨λ(a) ξ, ξ⟩`` for a finitely supported unit vector ``ξ``."""

    xi: Mapping[GroupElement, complex]

    def __post_init__(self) -> None:
        xi = {gamma: complex(value) for gamma, value in self.xi.items() if value != 0}
        norm = math.sqrt(math.fsum(abs(value) ** 2 for value in xi.values()))
        if abs(norm - 1.0) > UNIT_TOL:
            raise DomainError(f"vector state needs a unit vector, got norm {norm}")
        object.__setattr__(self, "xi", MappingProxyType(xi))

    @classmethod
    def normalized(cls, coefficients: Mapping[GroupElement, complex]) -> VectorState:
        """Rescale ``coefficients`` to unit ℓ² norm."""
        norm = math.sqrt(math.fsum(abs(complex(v)) ** 2 for v in coefficients.values()))
        if norm == 0:
            raise DomainError("cannot normalize the zero vector")
        return cls({gamma: complex(value) / norm for gamma, value in coefficients.items()})

    def describe(self) -> str:
        return "vector[" + ", ".join(str(gamma) for gamma in sorted(self.xi, key=GroupElement.sort_key)) + "]"


StateSpec = CanonicalTrace | VectorState


def evaluate_state(state: StateSpec, a: FiniteSupportElement, basis: BallBasis) -> complex:
    """Evaluate ``state`` on ``a``.

    Vector states are computed from the compression of ``λ(a)`` onto ``basis``;
    this is exact as soon as the support of ``ξ`` lies in the basis.
    """
    if isinstance(state, CanonicalTrace):
        return a[GroupElement.identity(a.prime)]
    v = basis.vector(state.xi)
    matrix = regular_rep_matrix(a, basis).matrix
    return complex(np.vdot(v, matrix @ v))


def mk_lower_bound(
    phi: StateSpec,
    psi: StateSpec,
    candidates: Iterable[FiniteSupportElement],
    spec: LengthSpec,
    basis: BallBasis,
    tol: float = 1e-12,
) -> float:
    """Certified lower bound ``max |φ(â) - ψ(â)|`` over rescaled candidates.

    Each candidate ``a`` is divided by ``Σ L(γ)|a(γ)|``, which dominates its
    Lipschitz seminorm ``‖[D, λ(a)]‖``; candidates with zero bound are skipped.

    Raises:
        DomainError: a candidate is not self-adjoint within ``tol``.
    """
    best = 0.0
    for number, a in enumerate(candidates):
        if not a.is_self_adjoint(tol):
            raise DomainError(f"candidate {number} is not self-adjoint within {tol}")
        scale = lipschitz_bound(a, spec)
        if scale == 0.0:
            continue
        value = abs(evaluate_state(phi, a, basis) - evaluate_state(psi, a, basis)) / scale
        logger.debug("mk candidate %d: %.12g", number, value)
        best = max(best, value)
    return best


def mk_candidates(gamma: GroupElement, theta: ThetaSequence, spec: LengthSpec) -> list[FiniteSupportElement]:
    """Real and imaginary symmetric deltas at ``γ`` scaled by ``1/(2L(γ))``.

    Both have ``Σ L(γ)|a(γ)| = 1``.
    """
    scale = 1.0 / (2.0 * float(length(spec.on_group, gamma)))
    return [symmetric_delta(gamma, theta, scale), symmetric_delta(gamma, theta, 1j * scale)]


__all__ = ["CanonicalTrace", "StateSpec", "VectorState", "evaluate_state", "mk_candidates", "mk_lower_bound"]
