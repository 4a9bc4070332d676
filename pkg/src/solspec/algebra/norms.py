"""Weighted ℓ¹ norms and the tail functionals μ_q on finitely supported elements."""

from __future__ import annotations

import math
from fractions import Fraction

from solspec.algebra.elements import FiniteSupportElement
from solspec.errors import DomainError
from solspec.geometry.lengths import LengthSpec, length


def weighted_norm(f: FiniteSupportElement, s: float, spec: LengthSpec) -> float:
    """``‖f‖_{1,s,L} = Σ |f(γ)| (1 + L(γ))^s``; ``s = 0`` is the plain ℓ¹ norm."""
    if s < 0:
        raise DomainError(f"weight exponent must be nonnegative, got {s}")
    if s == 0:
        return f.l1_norm()
    return math.fsum(abs(value) * (1 + float(length(spec.on_group, gamma))) ** s for gamma, value in f.coefficients.items())


def lipschitz_bound(f: FiniteSupportElement, spec: LengthSpec) -> float:
    """``Σ L(γ) |f(γ)|``, an upper bound for ``‖[D, λ(f)]‖``."""
    return math.fsum(abs(value) * float(length(spec.on_group, gamma)) for gamma, value in f.coefficients.items())


def cutoff(f: FiniteSupportElement, spec: LengthSpec, radius: Fraction | float) -> FiniteSupportElement:
    """``χ_R f``: keep the part of ``f`` supported in the closed ball of radius ``R``."""
    return f.restrict(lambda gamma: length(spec.on_group, gamma) <= radius)


def tail_mass(f: FiniteSupportElement, spec: LengthSpec, radius: Fraction | float) -> float:
    """``‖(1 - χ_R) f‖``, the ℓ¹ mass strictly outside the radius ``R`` ball."""
    return math.fsum(abs(value) for gamma, value in f.coefficients.items() if length(spec.on_group, gamma) > radius)


def mu_q(f: FiniteSupportElement, q: int, spec: LengthSpec) -> float:
    """``sup_{N >= 1} N^q ‖(1 - χ_N) f‖`` over integer radii ``N``.

    The tail is constant between support lengths, so on each stretch the
    supremum sits at the largest integer below a length: ``N = ⌈ℓ⌉ - 1``.
    """
    if q < 0:
        raise DomainError(f"q must be nonnegative, got {q}")
    weights = sorted(((length(spec.on_group, gamma), abs(value)) for gamma, value in f.coefficients.items()), reverse=True)
    radii = sorted({math.ceil(size) - 1 for size, _ in weights} - {0, -1}, reverse=True)
    best = 0.0
    tail: list[float] = []
    index = 0
    # radii are visited from the largest down so the tail only grows
    for n in radii:
        while index < len(weights) and weights[index][0] > n:
            tail.append(weights[index][1])
            index += 1
        best = max(best, n**q * math.fsum(tail))
    return best


__all__ = ["cutoff", "lipschitz_bound", "mu_q", "tail_mass", "weighted_norm"]
