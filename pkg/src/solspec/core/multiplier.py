"""The bicharacter multiplier σ_θ on Γ with exact rational phase angles."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from solspec.core.padic import GroupElement
from solspec.core.theta import ThetaSequence
from solspec.errors import PrimeMismatchError


@dataclass(frozen=True, slots=True)
class PhaseAngle:
    """An angle modulo 1; the multiplier value is ``exp(2πi·angle)``."""

    angle: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "angle", Fraction(self.angle) % 1)

    def __add__(self, other: PhaseAngle) -> PhaseAngle:
        return PhaseAngle(self.angle + other.angle)

    def __neg__(self) -> PhaseAngle:
        return PhaseAngle(-self.angle)

    def __sub__(self, other: PhaseAngle) -> PhaseAngle:
        return PhaseAngle(self.angle - other.angle)

    def is_zero(self) -> bool:
        return self.angle == 0


def bicharacter_angle(theta: ThetaSequence, q1: int, k1: int, q4: int, k4: int) -> PhaseAngle:
    """Angle ``θ_{k1+k4}·q1·q4`` for the presentations ``q1/p^k1`` and ``q4/p^k4``.

    The presentations need not be reduced; the result only depends on the
    represented rationals.
    """
    return PhaseAngle(theta.theta_at(k1 + k4) * q1 * q4)


def multiplier(theta: ThetaSequence, gamma1: GroupElement, gamma2: GroupElement) -> PhaseAngle:
    """σ_θ(γ1, γ2) as an exact angle.

    Only the first coordinate of ``gamma1`` and the second coordinate of
    ``gamma2`` enter.
    """
    if gamma1.prime != theta.prime or gamma2.prime != theta.prime:
        raise PrimeMismatchError(f"theta is defined over p={theta.prime}")
    x, y = gamma1.first, gamma2.second
    if x.numerator == 0 or y.numerator == 0:
        return PhaseAngle(Fraction(0))
    return bicharacter_angle(theta, x.numerator, x.exponent, y.numerator, y.exponent)


def phase_to_complex(phase: PhaseAngle) -> complex:
    """Evaluate ``exp(2πi·angle)``, exact at multiples of 1/4."""
    angle = phase.angle
    if 4 % angle.denominator == 0:
        return (1 + 0j, 1j, -1 + 0j, -1j)[int(angle * 4)]
    turn = 2.0 * math.pi * float(angle)
    return complex(math.cos(turn), math.sin(turn))


def sigma(theta: ThetaSequence, gamma1: GroupElement, gamma2: GroupElement) -> complex:
    """Complex value of the multiplier."""
    return phase_to_complex(multiplier(theta, gamma1, gamma2))


__all__ = ["PhaseAngle", "bicharacter_angle", "multiplier", "phase_to_complex", "sigma"]
