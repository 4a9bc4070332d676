"""Exact enumeration of length balls ``B_L(R) = {γ : L(γ) <= R}``.

One-coordinate balls are built stratum by stratum over the denominator
exponent ``j``: the integer stratum ``j = 0`` and, for ``p^j < R``, the
elements ``±m / p^j`` with ``p ∤ m`` and ``m <= p^j (R - p^j)``. Pair balls
combine two one-coordinate balls under the exact budget ``L1 + L2 <= R``.
Every enumeration checks the element cap before allocating.
"""

from __future__ import annotations

import bisect
import logging
from collections.abc import Iterator
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor

from solspec.core.padic import GroupElement, PAdicRational
from solspec.errors import DomainError
from solspec.geometry.lengths import LengthKind, LengthSpec, base_length
from solspec.limits import DEFAULT_LIMITS, Limits

logger = logging.getLogger(__name__)

Element = GroupElement | PAdicRational


@dataclass(frozen=True, slots=True)
class Ball:
    """An immutable, ordered length ball.

    Elements are sorted by ``(length, coordinate values)``; ``lengths[i]`` is
    the exact length of ``elements[i]``.
    """

    spec: LengthSpec
    radius: Fraction
    elements: tuple[Element, ...]
    lengths: tuple[Fraction, ...]
    _members: frozenset[Element] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_members", frozenset(self.elements))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Element]:
        return iter(self.elements)

    def __contains__(self, element: object) -> bool:
        return element in self._members

    def count_within(self, radius: Fraction | int) -> int:
        """Cardinality of the sub-ball of the given radius (at most ``self.radius``)."""
        radius = Fraction(radius)
        if radius > self.radius:
            raise DomainError(f"radius {radius} exceeds the enumerated radius {self.radius}")
        return bisect.bisect_right(self.lengths, radius)

    def sub_ball(self, radius: Fraction | int) -> Ball:
        count = self.count_within(radius)
        return Ball(self.spec, Fraction(radius), self.elements[:count], self.lengths[:count])


def _strata(prime: int, radius: Fraction, max_level: int | None) -> list[tuple[int, int]]:
    """Return ``(j, m_max)`` for each nonempty stratum ``j >= 1``."""
    strata = []
    j = 1
    while prime**j < radius and (max_level is None or j <= max_level):
        strata.append((j, floor(prime**j * (radius - prime**j))))
        j += 1
    return strata


def _base_entries(spec: LengthSpec, radius: Fraction, limits: Limits) -> list[tuple[Fraction, PAdicRational]]:
    p = spec.prime
    max_level = spec.level if spec.kind is LengthKind.RESTRICTED_BASE else None
    strata = _strata(p, radius, max_level)
    limits.check_ball(1 + 2 * floor(radius) + sum(2 * m_max for _, m_max in strata))

    entries: list[tuple[Fraction, PAdicRational]] = [(Fraction(0), PAdicRational.zero(p))]
    for m in range(1, floor(radius) + 1):
        x = PAdicRational(m, 0, p)
        size = base_length(x)
        if size <= radius:
            entries.append((size, x))
            entries.append((size, -x))
    for j, m_max in strata:
        before = len(entries)
        for m in range(1, m_max + 1):
            if m % p == 0:
                continue
            size = Fraction(m, p**j) + p**j
            entries.append((size, PAdicRational(m, j, p)))
            entries.append((size, PAdicRational(-m, j, p)))
        logger.debug("stratum j=%d of B_%s(%s): %d elements", j, spec, radius, len(entries) - before)
    entries.sort(key=lambda entry: (entry[0], entry[1].value))
    return entries


def _pair_entries(spec: LengthSpec, radius: Fraction, limits: Limits) -> list[tuple[Fraction, GroupElement]]:
    base = _base_entries(spec.base, radius, limits)
    sizes = [size for size, _ in base]
    cutoffs = [bisect.bisect_right(sizes, radius - size) for size in sizes]
    limits.check_ball(sum(cutoffs), what=f"{spec} ball of radius {radius}")

    entries = [
        (size + sizes[i], GroupElement(x, base[i][1]))
        for (size, x), cutoff in zip(base, cutoffs, strict=True)
        for i in range(cutoff)
    ]
    if spec.kind is LengthKind.PULLED_BACK_Z2:
        level, p = spec.level or 0, spec.prime
        entries = [
            (size, GroupElement(PAdicRational(_z(g.first, level), 0, p), PAdicRational(_z(g.second, level), 0, p)))
            for size, g in entries
        ]
    entries.sort(key=lambda entry: (entry[0], entry[1].sort_key()))
    return entries


def _z(x: PAdicRational, level: int) -> int:
    return x.numerator * x.prime ** (level - x.exponent)


def enumerate_ball(spec: LengthSpec, radius: Fraction | int | str, limits: Limits = DEFAULT_LIMITS) -> Ball:
    """Return ``B_L(R)`` for the length selected by ``spec``.

    Args:
        spec: Length function selector.
        radius: Exact nonnegative radius.
        limits: Caps checked before allocation.

    Raises:
        DomainError: ``radius`` is negative.
        ResourceLimitError: the ball would exceed ``limits.max_ball_elements``.
    """
    radius = Fraction(radius)
    if radius < 0:
        raise DomainError(f"radius must be nonnegative, got {radius}")
    entries = _pair_entries(spec, radius, limits) if spec.is_pair else _base_entries(spec, radius, limits)
    logger.debug("B_%s(%s) has %d elements", spec, radius, len(entries))
    return Ball(
        spec=spec,
        radius=radius,
        elements=tuple(element for _, element in entries),
        lengths=tuple(size for size, _ in entries),
    )


__all__ = ["Ball", "Element", "enumerate_ball"]
