"""Finitely supported elements of the twisted group algebra C_C(Γ, σ_θ).

Coefficients are complex floats; phases stay exact angles until the moment a
product is formed. Zero coefficients are never stored; dropping tiny nonzero
coefficients is the separate, explicit :meth:`FiniteSupportElement.prune`.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass
from types import MappingProxyType
from typing import Any

from solspec.core.multiplier import sigma
from solspec.core.padic import GroupElement, parse_group_element
from solspec.core.theta import ThetaSequence
from solspec.errors import ContextMismatchError, DomainError, PrimeMismatchError


@dataclass(frozen=True, slots=True)
class FiniteSupportElement:
    """A finitely supported function ``Γ → C`` tied to one θ context."""

    coefficients: Mapping[GroupElement, complex]
    theta: ThetaSequence

    def __post_init__(self) -> None:
        cleaned: dict[GroupElement, complex] = {}
        for gamma, value in self.coefficients.items():
            if gamma.prime != self.theta.prime:
                raise PrimeMismatchError(f"support element {gamma} is not over p={self.theta.prime}")
            value = complex(value)
            if value != 0:
                cleaned[gamma] = value
        object.__setattr__(self, "coefficients", MappingProxyType(cleaned))

    @classmethod
    def zero(cls, theta: ThetaSequence) -> FiniteSupportElement:
        return cls({}, theta)

    @classmethod
    def delta(cls, gamma: GroupElement, theta: ThetaSequence, coefficient: complex = 1.0) -> FiniteSupportElement:
        """``coefficient · δ_γ``."""
        return cls({gamma: coefficient}, theta)

    @classmethod
    def identity(cls, theta: ThetaSequence) -> FiniteSupportElement:
        """The unit ``δ_e``."""
        return cls.delta(GroupElement.identity(theta.prime), theta)

    @property
    def prime(self) -> int:
        return self.theta.prime

    @property
    def support(self) -> tuple[GroupElement, ...]:
        """Support in lexicographic coordinate order."""
        return tuple(sorted(self.coefficients, key=GroupElement.sort_key))

    def __len__(self) -> int:
        return len(self.coefficients)

    def __getitem__(self, gamma: GroupElement) -> complex:
        return self.coefficients.get(gamma, 0j)

    def items(self) -> list[tuple[GroupElement, complex]]:
        return [(gamma, self.coefficients[gamma]) for gamma in self.support]

    def check_context(self, other: FiniteSupportElement) -> None:
        if other.theta != self.theta:
            raise ContextMismatchError("elements carry different theta sequences")

    def __add__(self, other: FiniteSupportElement) -> FiniteSupportElement:
        self.check_context(other)
        total = dict(self.coefficients)
        for gamma, value in other.coefficients.items():
            total[gamma] = total.get(gamma, 0j) + value
        return FiniteSupportElement(total, self.theta)

    def __neg__(self) -> FiniteSupportElement:
        return self.scale(-1)

    def __sub__(self, other: FiniteSupportElement) -> FiniteSupportElement:
        return self + (-other)

    def scale(self, factor: complex) -> FiniteSupportElement:
        return FiniteSupportElement({gamma: factor * value for gamma, value in self.coefficients.items()}, self.theta)

    def __mul__(self, other: FiniteSupportElement) -> FiniteSupportElement:
        return twisted_convolve(self, other)

    def l1_norm(self) -> float:
        """``Σ |f(γ)|``."""
        return math.fsum(abs(value) for value in self.coefficients.values())

    def distance(self, other: FiniteSupportElement) -> float:
        """ℓ¹ distance ``‖self - other‖``."""
        return (self - other).l1_norm()

    def restrict(self, keep: Callable[[GroupElement], bool]) -> FiniteSupportElement:
        """Multiply by the indicator of ``{γ : keep(γ)}``."""
        return FiniteSupportElement({g: v for g, v in self.coefficients.items() if keep(g)}, self.theta)

    def prune(self, threshold: float) -> tuple[FiniteSupportElement, float]:
        """Drop coefficients with modulus below ``threshold``.

        Returns:
            The pruned element and the ℓ¹ mass that was dropped.
        """
        kept: dict[GroupElement, complex] = {}
        dropped = []
        for gamma, value in self.coefficients.items():
            if abs(value) < threshold:
                dropped.append(abs(value))
            else:
                kept[gamma] = value
        return FiniteSupportElement(kept, self.theta), math.fsum(dropped)

    def is_self_adjoint(self, tol: float) -> bool:
        return self.distance(adjoint(self)) <= tol

    def to_json(self) -> list[dict[str, Any]]:
        return [{"gamma": str(gamma), "re": value.real, "im": value.imag} for gamma, value in self.items()]

    @classmethod
    def from_json(cls, data: Iterable[Mapping[str, Any]], theta: ThetaSequence) -> FiniteSupportElement:
        """Inverse of :meth:`to_json`; repeated support points are summed."""
        coefficients: dict[GroupElement, complex] = {}
        for entry in data:
            try:
                gamma = parse_group_element(str(entry["gamma"]), theta.prime)
                value = complex(float(entry.get("re", 0.0)), float(entry.get("im", 0.0)))
            except (KeyError, TypeError, ValueError) as exc:
                raise DomainError(f"malformed element entry {entry!r}") from exc
            coefficients[gamma] = coefficients.get(gamma, 0j) + value
        return cls(coefficients, theta)


def twisted_convolve(f: FiniteSupportElement, g: FiniteSupportElement) -> FiniteSupportElement:
    """``(f ∗_σ g)(γ) = Σ_{γ1} f(γ1) g(γ - γ1) σ(γ1, γ - γ1)``.

    Raises:
        ContextMismatchError: ``f`` and ``g`` use different θ.
    """
    f.check_context(g)
    theta = f.theta
    product: dict[GroupElement, complex] = {}
    g_items = list(g.coefficients.items())
    for gamma1, a in f.coefficients.items():
        for gamma2, b in g_items:
            target = gamma1 + gamma2
            product[target] = product.get(target, 0j) + a * b * sigma(theta, gamma1, gamma2)
    return FiniteSupportElement(product, theta)


def adjoint(f: FiniteSupportElement) -> FiniteSupportElement:
    """``f*(γ) = conj(f(-γ) σ(γ, -γ))``."""
    theta = f.theta
    return FiniteSupportElement(
        {-gamma: (value * sigma(theta, -gamma, gamma)).conjugate() for gamma, value in f.coefficients.items()},
        theta,
    )


def symmetric_delta(gamma: GroupElement, theta: ThetaSequence, coefficient: complex = 0.5) -> FiniteSupportElement:
    """``c·δ_γ + (c·δ_γ)*``, self-adjoint by construction."""
    delta = FiniteSupportElement.delta(gamma, theta, coefficient)
    return delta + adjoint(delta)


__all__ = ["FiniteSupportElement", "adjoint", "symmetric_delta", "twisted_convolve"]
