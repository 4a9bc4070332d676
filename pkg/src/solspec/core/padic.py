"""Exact arithmetic on Z[1/p] and the group Γ = Z[1/p] × Z[1/p].

Elements are stored in the canonical presentation ``numerator / p**exponent``
with ``gcd(numerator, p) = 1`` whenever ``exponent > 0`` and ``exponent = 0``
for zero. Every constructor re-canonicalizes, so equality and hashing are
value based.

Contents
--------
* :func:`validate_prime` - reject non-prime group parameters.
* :class:`PAdicRational` - element of Z[1/p].
* :class:`GroupElement` - element of Γ.
* :func:`padic_valuation`, :func:`padic_norm`, :func:`lambda_embed`.
* :func:`parse_padic`, :func:`parse_group_element` - inverse of ``str()``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from solspec.errors import DomainError, PrimeMismatchError

_PADIC_PATTERN = re.compile(r"^\s*([+-]?\d+)\s*/\s*(\d+)\s*\^\s*(\d+)\s*$")
_PAIR_PATTERN = re.compile(r"^\s*\(\s*([^,]+?)\s*,\s*([^,]+?)\s*\)\s*$")


@lru_cache(maxsize=64)
def validate_prime(p: int) -> int:
    """Return ``p`` unchanged if it is a prime, otherwise raise :class:`DomainError`.

    >>> validate_prime(5)
    5
    """
    if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
        raise DomainError(f"p must be a prime >= 2, got {p}")
    return p


@dataclass(frozen=True, slots=True)
class PAdicRational:
    """An element ``numerator / prime**exponent`` of Z[1/p].

    Attributes:
        numerator: Arbitrary precision integer.
        exponent: Nonnegative power of ``prime`` in the denominator.
        prime: The prime p shared by all elements of one computation.
    """

    numerator: int
    exponent: int
    prime: int

    def __post_init__(self) -> None:
        if self.exponent < 0:
            raise DomainError(f"exponent must be nonnegative, got {self.exponent}")
        numerator, exponent, p = self.numerator, self.exponent, self.prime
        if numerator == 0:
            exponent = 0
        while exponent > 0 and numerator % p == 0:
            numerator //= p
            exponent -= 1
        object.__setattr__(self, "numerator", numerator)
        object.__setattr__(self, "exponent", exponent)

    @classmethod
    def from_fraction(cls, value: Fraction | int, prime: int) -> PAdicRational:
        """Build from a rational whose denominator is a power of ``prime``."""
        value = Fraction(value)
        denominator, exponent = value.denominator, 0
        while denominator % prime == 0:
            denominator //= prime
            exponent += 1
        if denominator != 1:
            raise DomainError(f"{value} is not in Z[1/{prime}]")
        return cls(value.numerator, exponent, prime)

    @classmethod
    def zero(cls, prime: int) -> PAdicRational:
        return cls(0, 0, prime)

    @property
    def value(self) -> Fraction:
        """The represented rational number."""
        return Fraction(self.numerator, self.prime**self.exponent)

    def is_zero(self) -> bool:
        return self.numerator == 0

    def _check_prime(self, other: PAdicRational) -> None:
        if other.prime != self.prime:
            raise PrimeMismatchError(f"cannot combine Z[1/{self.prime}] with Z[1/{other.prime}]")

    def __add__(self, other: PAdicRational) -> PAdicRational:
        self._check_prime(other)
        p = self.prime
        exponent = max(self.exponent, other.exponent)
        numerator = self.numerator * p ** (exponent - self.exponent) + other.numerator * p ** (exponent - other.exponent)
        return PAdicRational(numerator, exponent, p)

    def __neg__(self) -> PAdicRational:
        return PAdicRational(-self.numerator, self.exponent, self.prime)

    def __sub__(self, other: PAdicRational) -> PAdicRational:
        return self + (-other)

    def scale(self, factor: int) -> PAdicRational:
        """Multiply by an integer."""
        return PAdicRational(self.numerator * factor, self.exponent, self.prime)

    def __str__(self) -> str:
        if self.exponent == 0:
            return str(self.numerator)
        return f"{self.numerator}/{self.prime}^{self.exponent}"


@dataclass(frozen=True, slots=True)
class GroupElement:
    """An element ``(first, second)`` of Γ = Z[1/p] × Z[1/p]."""

    first: PAdicRational
    second: PAdicRational

    def __post_init__(self) -> None:
        if self.first.prime != self.second.prime:
            raise PrimeMismatchError(f"coordinates use different primes: {self.first.prime} and {self.second.prime}")

    @classmethod
    def identity(cls, prime: int) -> GroupElement:
        zero = PAdicRational.zero(prime)
        return cls(zero, zero)

    @classmethod
    def from_fractions(cls, first: Fraction | int, second: Fraction | int, prime: int) -> GroupElement:
        return cls(PAdicRational.from_fraction(first, prime), PAdicRational.from_fraction(second, prime))

    @classmethod
    def from_level_coordinates(cls, level: int, first: int, second: int, prime: int) -> GroupElement:
        """Map ``(first, second)`` in Z² to ``(first / p**level, second / p**level)``."""
        if level < 0:
            raise DomainError(f"level must be nonnegative, got {level}")
        return cls(PAdicRational(first, level, prime), PAdicRational(second, level, prime))

    @property
    def prime(self) -> int:
        return self.first.prime

    @property
    def max_exponent(self) -> int:
        """Smallest level n with the element in (1/p^n)Z × (1/p^n)Z."""
        return max(self.first.exponent, self.second.exponent)

    def is_identity(self) -> bool:
        return self.first.is_zero() and self.second.is_zero()

    def __add__(self, other: GroupElement) -> GroupElement:
        return GroupElement(self.first + other.first, self.second + other.second)

    def __neg__(self) -> GroupElement:
        return GroupElement(-self.first, -self.second)

    def __sub__(self, other: GroupElement) -> GroupElement:
        return GroupElement(self.first - other.first, self.second - other.second)

    def scale(self, factor: int) -> GroupElement:
        return GroupElement(self.first.scale(factor), self.second.scale(factor))

    def sort_key(self) -> tuple[Fraction, Fraction]:
        """Lexicographic order by coordinate value."""
        return (self.first.value, self.second.value)

    def __str__(self) -> str:
        return f"({self.first}, {self.second})"


def padic_valuation(x: PAdicRational | Fraction | int, prime: int | None = None) -> int | None:
    """Return the p-adic valuation, or ``None`` for zero (valuation +infinity).

    >>> padic_valuation(12, 2)
    2
    >>> padic_valuation(PAdicRational(3, 2, 2))
    -2
    """
    if isinstance(x, PAdicRational):
        if x.is_zero():
            return None
        if x.exponent > 0:
            return -x.exponent
        x, prime = x.numerator, x.prime
    if prime is None:
        raise DomainError("a prime is required for plain rationals")
    value = Fraction(x)
    if value == 0:
        return None
    valuation = 0
    numerator, denominator = value.numerator, value.denominator
    while numerator % prime == 0:
        numerator //= prime
        valuation += 1
    while denominator % prime == 0:
        denominator //= prime
        valuation -= 1
    return valuation


def padic_norm(x: PAdicRational) -> Fraction:
    """Return ``‖x‖_p = p**(-v(x))`` with ``‖0‖_p = 0``.

    >>> padic_norm(PAdicRational(3, 2, 2))
    Fraction(4, 1)
    >>> padic_norm(PAdicRational(12, 0, 2))
    Fraction(1, 4)
    """
    valuation = padic_valuation(x)
    if valuation is None:
        return Fraction(0)
    return Fraction(x.prime) ** (-valuation)


def lambda_embed(x: PAdicRational) -> tuple[float, tuple[int, int]]:
    """Return the archimedean value of ``x`` and the descriptor of ``-x`` in Q_p.

    The second component is ``(numerator, exponent)`` of the negated element,
    i.e. the data of the p-adic coordinate of the diagonal embedding.
    """
    negated = -x
    return (float(x.value), (negated.numerator, negated.exponent))


def parse_padic(text: str, prime: int) -> PAdicRational:
    """Parse ``"a"``, ``"a/p^k"`` or ``"a/d"`` (``d`` a power of ``prime``)."""
    match = _PADIC_PATTERN.match(text)
    if match:
        base = int(match.group(2))
        if base != prime:
            raise PrimeMismatchError(f"{text!r} uses base {base}, expected {prime}")
        return PAdicRational(int(match.group(1)), int(match.group(3)), prime)
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"cannot parse {text!r} as an element of Z[1/{prime}]") from exc
    return PAdicRational.from_fraction(value, prime)


def parse_group_element(text: str, prime: int) -> GroupElement:
    """Parse ``"(x, y)"`` where both coordinates follow :func:`parse_padic`."""
    match = _PAIR_PATTERN.match(text)
    if not match:
        raise DomainError(f"cannot parse {text!r} as a group element")
    return GroupElement(parse_padic(match.group(1), prime), parse_padic(match.group(2), prime))


__all__ = [
    "GroupElement",
    "PAdicRational",
    "lambda_embed",
    "padic_norm",
    "padic_valuation",
    "parse_group_element",
    "parse_padic",
    "validate_prime",
]
