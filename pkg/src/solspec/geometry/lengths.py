"""Length functions on Z[1/p], Γ, the levels Γ_n and their Z² pullbacks.

* ``base``: ``L_p(r) = |r| + ‖r‖_p`` on Z[1/p].
* ``restricted-base:n``: ``L_p`` restricted to (1/p^n)Z.
* ``sum``: ``L_p(x1) + L_p(x2)`` on Γ.
* ``restricted:n``: the sum length restricted to Γ_n.
* ``z2:n``: the sum length pulled back to Z² through ``z ↦ z / p^n``.

Elements of ``z2:n`` are carried as :class:`GroupElement` with integer
coordinates holding the Z² point. Code acting on algebra elements reads
lengths through :attr:`LengthSpec.on_group`.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction

from solspec.core.padic import GroupElement, PAdicRational, padic_norm, validate_prime
from solspec.errors import ConfigError, DomainError, PrimeMismatchError


class LengthKind(StrEnum):
    BASE = "base"
    RESTRICTED_BASE = "restricted-base"
    SUM = "sum"
    RESTRICTED_SUM = "restricted"
    PULLED_BACK_Z2 = "z2"


_LEVELLED = {LengthKind.RESTRICTED_BASE, LengthKind.RESTRICTED_SUM, LengthKind.PULLED_BACK_Z2}


@dataclass(frozen=True, slots=True)
class LengthSpec:
    """Selects one length function of the family together with its prime."""

    kind: LengthKind
    prime: int
    level: int | None = None

    def __post_init__(self) -> None:
        validate_prime(self.prime)
        object.__setattr__(self, "kind", LengthKind(self.kind))
        if self.kind in _LEVELLED:
            if self.level is None or self.level < 0:
                raise DomainError(f"{self.kind} needs a level n >= 0, got {self.level}")
        elif self.level is not None:
            raise DomainError(f"{self.kind} takes no level")

    @classmethod
    def parse(cls, text: str, prime: int) -> LengthSpec:
        """Parse ``base``, ``sum``, ``restricted:n``, ``restricted-base:n`` or ``z2:n``."""
        name, _, level = text.strip().partition(":")
        try:
            kind = LengthKind(name)
        except ValueError as exc:
            raise ConfigError(f"unknown length spec {text!r}") from exc
        if kind in _LEVELLED:
            if not level.strip().isdigit():
                raise ConfigError(f"length spec {text!r} needs a nonnegative integer level")
            return cls(kind, prime, int(level))
        if level:
            raise ConfigError(f"length spec {text!r} takes no level")
        return cls(kind, prime)

    @property
    def is_pair(self) -> bool:
        """True when the domain consists of pairs rather than single rationals."""
        return self.kind not in (LengthKind.BASE, LengthKind.RESTRICTED_BASE)

    @property
    def base(self) -> LengthSpec:
        """The one-coordinate length whose balls build this spec's balls."""
        if self.kind in (LengthKind.BASE, LengthKind.SUM):
            return LengthSpec(LengthKind.BASE, self.prime)
        return LengthSpec(LengthKind.RESTRICTED_BASE, self.prime, self.level)

    @property
    def on_group(self) -> LengthSpec:
        """The same length read on Γ elements.

        ``z2:n`` evaluates Z² points; its algebra and operators act on their
        images in Γ_n, where ``restricted:n`` gives the identical values.
        """
        if self.kind is LengthKind.PULLED_BACK_Z2:
            return LengthSpec(LengthKind.RESTRICTED_SUM, self.prime, self.level)
        return self

    @property
    def proven_constant(self) -> int:
        """Proven dilation bound: ``4p^8`` for one coordinate, ``(4p^8)^4`` for pairs."""
        single = 4 * self.prime**8
        return single**4 if self.is_pair else single

    def __str__(self) -> str:
        return self.kind.value if self.level is None else f"{self.kind.value}:{self.level}"


def base_length(x: PAdicRational) -> Fraction:
    """``L_p(x) = |x| + ‖x‖_p``."""
    return abs(x.value) + padic_norm(x)


def _check_level(x: PAdicRational, level: int) -> None:
    if x.exponent > level:
        raise DomainError(f"{x} is outside (1/{x.prime}^{level})Z")


def length(spec: LengthSpec, element: GroupElement | PAdicRational) -> Fraction:
    """Evaluate the length selected by ``spec`` exactly.

    >>> from solspec.core.padic import PAdicRational
    >>> length(LengthSpec(LengthKind.BASE, 2), PAdicRational(3, 2, 2))
    Fraction(19, 4)
    """
    if element.prime != spec.prime:
        raise PrimeMismatchError(f"element over p={element.prime} given to a p={spec.prime} length")
    if not spec.is_pair:
        if not isinstance(element, PAdicRational):
            raise DomainError(f"{spec} is defined on Z[1/p], got {element}")
        if spec.kind is LengthKind.RESTRICTED_BASE:
            _check_level(element, spec.level or 0)
        return base_length(element)
    if not isinstance(element, GroupElement):
        raise DomainError(f"{spec} is defined on pairs, got {element}")
    level = spec.level or 0
    if spec.kind is LengthKind.PULLED_BACK_Z2:
        if element.max_exponent > 0:
            raise DomainError(f"{element} is not a point of Z^2")
        element = GroupElement.from_level_coordinates(level, element.first.numerator, element.second.numerator, spec.prime)
    elif spec.kind is LengthKind.RESTRICTED_SUM:
        _check_level(element.first, level)
        _check_level(element.second, level)
    return base_length(element.first) + base_length(element.second)


__all__ = ["LengthKind", "LengthSpec", "base_length", "length"]
