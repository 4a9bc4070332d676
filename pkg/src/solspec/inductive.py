"""The level ladder Γ_0 ⊆ Γ_1 ⊆ ... inside Γ and its connecting maps.

Level ``n`` is ``Γ_n = (1/p^n)Z × (1/p^n)Z``, identified with Z² through
``υ_n(a, b) = (a/p^n, b/p^n)``. Level elements are stored in Z² coordinates;
Γ coordinates are the interchange format. The connecting map ``φ_{j,k}``
multiplies Z² coordinates by ``p^(k-j)``, which is the identity on Γ.

Contents
--------
* :func:`in_gamma_n`, :func:`upsilon`, :func:`upsilon_inv`, :func:`level_multiplier`.
* :class:`LevelElement`, :func:`phi_embed`, :func:`composite_embed`.
* :func:`inclusion_isometry` - ``I_{j,k}`` between truncated level bases.
* :func:`verify_morphism` - the three morphism conditions on samples.
* :func:`resolvent_gap` - ``‖R_it(D) - I_j R_it(D_j) I_j*‖`` on ``B(R)``.
* :func:`weyl_relation_phase` - commutation phase of the level-n generators.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import asdict, dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Any

import numpy as np
from scipy import sparse

from solspec.algebra.elements import FiniteSupportElement, twisted_convolve
from solspec.core.multiplier import PhaseAngle, multiplier, phase_to_complex
from solspec.core.padic import GroupElement
from solspec.core.theta import ThetaSequence
from solspec.errors import DomainError
from solspec.geometry.balls import enumerate_ball
from solspec.geometry.lengths import LengthKind, LengthSpec, length
from solspec.limits import DEFAULT_LIMITS, Limits
from solspec.spectral.operators import BallBasis, regular_rep_matrix, resolvent_tail_bound

logger = logging.getLogger(__name__)

Point = tuple[int, int]


def _check_level(n: int) -> None:
    if n < 0:
        raise DomainError(f"level must be nonnegative, got {n}")


def in_gamma_n(gamma: GroupElement, n: int) -> bool:
    """True iff both coordinates have denominator exponent at most ``n``."""
    _check_level(n)
    return gamma.max_exponent <= n


def upsilon(n: int, z: Point, prime: int) -> GroupElement:
    """``υ_n(a, b) = (a/p^n, b/p^n)``."""
    _check_level(n)
    return GroupElement.from_level_coordinates(n, z[0], z[1], prime)


def upsilon_inv(n: int, gamma: GroupElement) -> Point:
    """Inverse of :func:`upsilon` on Γ_n.

    Raises:
        DomainError: ``gamma`` is not in Γ_n.
    """
    if not in_gamma_n(gamma, n):
        raise DomainError(f"{gamma} is not in level {n}")
    p = gamma.prime
    return (
        gamma.first.numerator * p ** (n - gamma.first.exponent),
        gamma.second.numerator * p ** (n - gamma.second.exponent),
    )


def level_multiplier(theta: ThetaSequence, n: int, z: Point, z_prime: Point) -> PhaseAngle:
    """The multiplier of level ``n`` on Z²: angle ``θ_{2n}·z_1·z'_2``."""
    return PhaseAngle(theta.theta_at(2 * n) * z[0] * z_prime[1])


@dataclass(frozen=True, slots=True)
class LevelElement:
    """A finitely supported function on Z² at a fixed level."""

    level: int
    coefficients: Mapping[Point, complex]
    theta: ThetaSequence

    def __post_init__(self) -> None:
        _check_level(self.level)
        cleaned = {(int(z[0]), int(z[1])): complex(v) for z, v in self.coefficients.items() if v != 0}
        object.__setattr__(self, "coefficients", MappingProxyType(cleaned))

    @classmethod
    def delta(cls, level: int, z: Point, theta: ThetaSequence, coefficient: complex = 1.0) -> LevelElement:
        return cls(level, {z: coefficient}, theta)

    @classmethod
    def from_gamma(cls, f: FiniteSupportElement, level: int) -> LevelElement:
        return cls(level, {upsilon_inv(level, gamma): value for gamma, value in f.coefficients.items()}, f.theta)

    def to_gamma(self) -> FiniteSupportElement:
        p = self.theta.prime
        return FiniteSupportElement({upsilon(self.level, z, p): v for z, v in self.coefficients.items()}, self.theta)


def phi_embed(j: int, k: int, f: LevelElement) -> LevelElement:
    """``φ_{j,k}``: send the Z² support point ``z`` to ``p^(k-j)·z``.

    Raises:
        DomainError: ``j > k`` or ``f`` is not at level ``j``.
    """
    if j > k:
        raise DomainError(f"need j <= k, got j={j}, k={k}")
    if f.level != j:
        raise DomainError(f"element lives at level {f.level}, not {j}")
    factor = f.theta.prime ** (k - j)
    return LevelElement(k, {(z[0] * factor, z[1] * factor): v for z, v in f.coefficients.items()}, f.theta)


def composite_embed(j: int, k: int, l: int, f: LevelElement) -> LevelElement:  # noqa: E741
    """``φ_{k,l} ∘ φ_{j,k}``."""
    return phi_embed(k, l, phi_embed(j, k, f))


def check_functoriality(j: int, k: int, l: int, samples: Iterable[LevelElement]) -> bool:  # noqa: E741
    """``φ_{k,l} ∘ φ_{j,k} = φ_{j,l}`` exactly on every sample."""
    return all(composite_embed(j, k, l, f) == phi_embed(j, l, f) for f in samples)


def level_basis(n: int, radius: Fraction | int, prime: int, limits: Limits = DEFAULT_LIMITS) -> BallBasis:
    """Ball basis of ``Γ_n`` for the restricted sum length."""
    return BallBasis.build(LengthSpec(LengthKind.RESTRICTED_SUM, prime, n), radius, limits)


def inclusion_isometry(j: int, k: int, radius: Fraction | int, prime: int, limits: Limits = DEFAULT_LIMITS) -> sparse.csr_array:
    """``I_{j,k}`` as a 0/1 matrix from the level-j basis into the level-k basis."""
    if j > k:
        raise DomainError(f"need j <= k, got j={j}, k={k}")
    source = level_basis(j, radius, prime, limits)
    target = level_basis(k, radius, prime, limits)
    cols = list(range(source.dim))
    rows = [target.index[gamma] for gamma in source.elements]
    return sparse.csr_array((np.ones(len(rows)), (rows, cols)), shape=(target.dim, source.dim))


def _max_abs(matrix: Any) -> float:
    dense = matrix.toarray() if sparse.issparse(matrix) else np.asarray(matrix)
    return float(np.abs(dense).max()) if dense.size else 0.0


@dataclass(slots=True)
class MorphismCheckReport:
    """Outcome of the three morphism conditions for ``(φ_{j,k}, I_{j,k})``.

    Conditions: (1) images stay finitely supported and coincide in Γ,
    (2) ``I π_j(a) = π_k(φ(a)) I`` on the truncations,
    (3) ``I D_j = D_k I`` and the lengths agree on Γ_j.
    """

    j: int
    k: int
    radius: str
    samples: int
    tol: float
    support_preserved: bool
    isometry_deviation: float
    intertwining_deviation: float
    dirac_deviation: float

    @property
    def passed(self) -> bool:
        return (
            self.support_preserved
            and self.isometry_deviation <= self.tol
            and self.intertwining_deviation <= self.tol
            and self.dirac_deviation <= self.tol
        )

    def to_dict(self) -> dict[str, Any]:
        return {**asdict(self), "passed": self.passed}


def verify_morphism(
    j: int,
    k: int,
    samples: Sequence[LevelElement],
    radius: Fraction | int,
    tol: float = 0.0,
    limits: Limits = DEFAULT_LIMITS,
) -> MorphismCheckReport:
    """Check the morphism conditions on ``samples`` over balls of radius ``radius``.

    Raises:
        DomainError: ``j > k`` or a sample is not at level ``j``.
        ResourceLimitError: a level ball exceeds the caps.
    """
    if j > k:
        raise DomainError(f"need j <= k, got j={j}, k={k}")
    if not samples:
        raise DomainError("at least one sample element is required")
    radius = Fraction(radius)
    prime = samples[0].theta.prime
    source = level_basis(j, radius, prime, limits)
    target = level_basis(k, radius, prime, limits)
    inclusion = inclusion_isometry(j, k, radius, prime, limits)

    support_ok = True
    intertwining = 0.0
    for f in samples:
        image = phi_embed(j, k, f)
        support_ok &= len(image.coefficients) == len(f.coefficients) and image.to_gamma() == f.to_gamma()
        left = inclusion @ regular_rep_matrix(f.to_gamma(), source).matrix
        right = regular_rep_matrix(image.to_gamma(), target).matrix @ inclusion
        intertwining = max(intertwining, _max_abs(left - right))

    spec_j, spec_k, spec_full = source.spec, target.spec, LengthSpec(LengthKind.SUM, prime)
    length_gap = max(
        (
            float(abs(length(spec_j, g) - length(spec_k, g)) + abs(length(spec_j, g) - length(spec_full, g)))
            for g in source.elements
        ),
        default=0.0,
    )
    d_source = sparse.diags_array(source.lengths())
    d_target = sparse.diags_array(target.lengths())
    dirac = max(length_gap, _max_abs(inclusion @ d_source - d_target @ inclusion))
    isometry = _max_abs(inclusion.T @ inclusion - sparse.eye_array(source.dim))

    report = MorphismCheckReport(
        j=j,
        k=k,
        radius=str(radius),
        samples=len(samples),
        tol=tol,
        support_preserved=bool(support_ok),
        isometry_deviation=isometry,
        intertwining_deviation=intertwining,
        dirac_deviation=dirac,
    )
    logger.debug("morphism (%d, %d) on B(%s): passed=%s", j, k, radius, report.passed)
    return report


def delta_samples(level: int, box: int, theta: ThetaSequence) -> list[LevelElement]:
    """Deltas ``δ_z`` at ``level`` for all ``z`` with ``|z_1|, |z_2| <= box``."""
    return [LevelElement.delta(level, (a, b), theta) for a in range(-box, box + 1) for b in range(-box, box + 1)]


@dataclass(slots=True)
class ResolventGap:
    """Truncated gap ``max_{γ ∈ B(R) ∖ Γ_j} |L(γ) - it|^{-1}`` plus the analytic tail."""

    j: int
    t: float
    radius: str
    gap: float
    tail_bound: float
    witness: str | None

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def resolvent_gap(j: int, t: float, radius: Fraction | int, prime: int, limits: Limits = DEFAULT_LIMITS) -> ResolventGap:
    """Distance between ``R_it(D)`` and its level-``j`` approximation on ``B(R)``.

    Both resolvents are diagonal in the delta basis, so the difference is the
    diagonal supported on ``B(R) ∖ Γ_j`` and its norm comes from the shortest
    element there.

    Raises:
        DomainError: ``t = 0``, ``R < 1`` or ``j < 0``.
    """
    _check_level(j)
    if t == 0:
        raise DomainError("t must be nonzero")
    radius = Fraction(radius)
    if radius < 1:
        raise DomainError(f"radius must be at least 1, got {radius}")
    ball = enumerate_ball(LengthSpec(LengthKind.SUM, prime), radius, limits)
    witness = next(((g, size) for g, size in zip(ball.elements, ball.lengths, strict=True) if not in_gamma_n(g, j)), None)
    gap = 0.0 if witness is None else (float(witness[1]) ** 2 + t**2) ** -0.5
    return ResolventGap(
        j=j,
        t=t,
        radius=str(radius),
        gap=gap,
        tail_bound=resolvent_tail_bound(radius, t),
        witness=None if witness is None else str(witness[0]),
    )


def weyl_generators(theta: ThetaSequence, n: int) -> tuple[FiniteSupportElement, FiniteSupportElement]:
    """The level-``n`` generators ``U_n = δ_{υ_n(1,0)}`` and ``V_n = δ_{υ_n(0,1)}``."""
    p = theta.prime
    return (
        FiniteSupportElement.delta(upsilon(n, (1, 0), p), theta),
        FiniteSupportElement.delta(upsilon(n, (0, 1), p), theta),
    )


def weyl_relation_phase(theta: ThetaSequence, n: int) -> PhaseAngle:
    """Angle of ``U_n V_n (V_n U_n)^{-1}``; equals ``θ_{2n}``."""
    p = theta.prime
    u, v = upsilon(n, (1, 0), p), upsilon(n, (0, 1), p)
    return multiplier(theta, u, v) - multiplier(theta, v, u)


def weyl_relation_defect(theta: ThetaSequence, n: int) -> float:
    """``‖U V - e^{2πiθ_{2n}} V U‖_1`` computed through the convolution product."""
    u, v = weyl_generators(theta, n)
    phase = phase_to_complex(PhaseAngle(theta.theta_at(2 * n)))
    return twisted_convolve(u, v).distance(twisted_convolve(v, u).scale(phase))


__all__ = [
    "LevelElement",
    "MorphismCheckReport",
    "ResolventGap",
    "check_functoriality",
    "composite_embed",
    "delta_samples",
    "in_gamma_n",
    "inclusion_isometry",
    "level_basis",
    "level_multiplier",
    "phi_embed",
    "resolvent_gap",
    "upsilon",
    "upsilon_inv",
    "verify_morphism",
    "weyl_generators",
    "weyl_relation_defect",
    "weyl_relation_phase",
]
