"""Cardinality, doubling and dilation checks for length balls.

Contents
--------
* :func:`ball_sandwich_check` - membership test of the two set inclusions
  bracketing ``B_{L_p}(p^d)`` and the resulting cardinality window.
* :func:`doubling_report` - ``|B(2R)|`` and ``|B(pR)|`` against the proven constant.
* :func:`dilation_check` - ``|B(tR)| / |B(R)|`` for an arbitrary ``t > 1``.
* :func:`growth_exponent` - least-squares slope of ``log|B(R)|`` over p-power radii.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import ceil
from typing import Any

import numpy as np

from solspec.core.padic import PAdicRational, validate_prime
from solspec.errors import DomainError
from solspec.geometry.balls import enumerate_ball
from solspec.geometry.lengths import LengthKind, LengthSpec
from solspec.limits import DEFAULT_LIMITS, Limits

logger = logging.getLogger(__name__)


@dataclass(slots=True)
class SandwichReport:
    """Outcome of the inclusion check at ``R = p^d``."""

    prime: int
    d: int
    inner_size: int
    ball_size: int
    outer_size: int
    inner_holds: bool
    outer_holds: bool
    cardinality_holds: bool
    counterexamples: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.inner_holds and self.outer_holds and self.cardinality_holds

    def to_dict(self) -> dict[str, Any]:
        return {**asdict(self), "passed": self.passed}


def ball_sandwich_check(p: int, d: int, limits: Limits = DEFAULT_LIMITS) -> SandwichReport:
    """Verify ``{m/p^(d-1) : |m| <= p^(2(d-1))} ⊆ B(p^d) ⊆ {m/p^d : |m| <= p^(2d)}``.

    Both inclusions are tested element by element; the first failing elements
    are reported as counterexamples.
    """
    validate_prime(p)
    if d < 1:
        raise DomainError(f"d must be at least 1, got {d}")
    inner_bound = p ** (2 * (d - 1))
    limits.check_ball(2 * inner_bound + 1, what="inner inclusion set")
    ball = enumerate_ball(LengthSpec(LengthKind.BASE, p), p**d, limits)

    counterexamples: list[str] = []
    inner_holds = True
    for m in range(-inner_bound, inner_bound + 1):
        x = PAdicRational.from_fraction(Fraction(m, p ** (d - 1)), p)
        if x not in ball:
            inner_holds = False
            counterexamples.append(f"inner:{x}")
    outer_holds = True
    for x in ball:
        scaled = x.value * p**d
        if scaled.denominator != 1 or abs(scaled) > p ** (2 * d):
            outer_holds = False
            counterexamples.append(f"outer:{x}")

    size = len(ball)
    report = SandwichReport(
        prime=p,
        d=d,
        inner_size=2 * inner_bound + 1,
        ball_size=size,
        outer_size=2 * p ** (2 * d) + 1,
        inner_holds=inner_holds,
        outer_holds=outer_holds,
        cardinality_holds=2 * inner_bound + 1 <= size <= 2 * p ** (2 * d) + 1,
        counterexamples=counterexamples[:10],
    )
    logger.debug("sandwich p=%d d=%d: |B|=%d passed=%s", p, d, size, report.passed)
    return report


@dataclass(slots=True)
class DoublingRow:
    radius: str
    count: int
    count_double: int
    count_dilated: int
    ratio_double: float
    ratio_dilated: float
    proven_bound: int
    passed: bool

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass(slots=True)
class DoublingReport:
    """Ball counts at ``R``, ``2R`` and ``pR`` for every sampled radius.

    ``proven_bound`` is ``4p^8`` for one-coordinate lengths and ``(4p^8)^4``
    for pair lengths; a row passes when both ratios stay within it.
    """

    spec: str
    prime: int
    rows: list[DoublingRow]
    proven_bound: int
    empirical_doubling: float
    empirical_dilation: float

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)

    def to_dict(self) -> dict[str, Any]:
        return {
            "spec": self.spec,
            "p": self.prime,
            "rows": [row.to_dict() for row in self.rows],
            "proven_bound": self.proven_bound,
            "empirical_doubling": self.empirical_doubling,
            "empirical_dilation": self.empirical_dilation,
            "passed": self.passed,
        }


def _check_radii(radii: list[Fraction]) -> list[Fraction]:
    if not radii:
        raise DomainError("at least one radius is required")
    radii = [Fraction(r) for r in radii]
    if any(r < 1 for r in radii):
        raise DomainError(f"radii must be >= 1, got {[str(r) for r in radii]}")
    return radii


def doubling_report(spec: LengthSpec, radii: list[Fraction], limits: Limits = DEFAULT_LIMITS) -> DoublingReport:
    """Count ``|B(R)|``, ``|B(2R)|`` and ``|B(pR)|`` with one enumeration.

    Raises:
        DomainError: a radius is below 1.
        ResourceLimitError: the largest ball exceeds the cap.
    """
    radii = _check_radii(radii)
    p = spec.prime
    bound = spec.proven_constant
    ball = enumerate_ball(spec, max(radii) * max(2, p), limits)

    rows = []
    for radius in radii:
        count = ball.count_within(radius)
        count_double = ball.count_within(2 * radius)
        count_dilated = ball.count_within(p * radius)
        rows.append(
            DoublingRow(
                radius=str(radius),
                count=count,
                count_double=count_double,
                count_dilated=count_dilated,
                ratio_double=count_double / count,
                ratio_dilated=count_dilated / count,
                proven_bound=bound,
                passed=count_double <= bound * count and count_dilated <= bound * count,
            )
        )
    return DoublingReport(
        spec=str(spec),
        prime=p,
        rows=rows,
        proven_bound=bound,
        empirical_doubling=max(row.ratio_double for row in rows),
        empirical_dilation=max(row.ratio_dilated for row in rows),
    )


@dataclass(slots=True)
class DilationReport:
    spec: str
    factor: str
    radii: list[str]
    counts: list[int]
    dilated_counts: list[int]
    ratios: list[float]
    max_ratio: float

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def dilation_check(spec: LengthSpec, t: Fraction | int, radii: list[Fraction], limits: Limits = DEFAULT_LIMITS) -> DilationReport:
    """Ratios ``|B(tR)| / |B(R)|`` for a dilation factor ``t > 1``."""
    t = Fraction(t)
    if t <= 1:
        raise DomainError(f"dilation factor must exceed 1, got {t}")
    radii = _check_radii(radii)
    ball = enumerate_ball(spec, max(radii) * t, limits)
    counts = [ball.count_within(r) for r in radii]
    dilated = [ball.count_within(t * r) for r in radii]
    ratios = [big / small for big, small in zip(dilated, counts, strict=True)]
    return DilationReport(
        spec=str(spec),
        factor=str(t),
        radii=[str(r) for r in radii],
        counts=counts,
        dilated_counts=dilated,
        ratios=ratios,
        max_ratio=max(ratios),
    )


@dataclass(slots=True)
class GrowthFit:
    """Least-squares fit ``log|B(R)| ≈ slope·log R + intercept``."""

    spec: str
    radii: list[int]
    counts: list[int]
    slope: float
    intercept: float
    residual: float

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def growth_exponent(spec: LengthSpec, r_max: Fraction | int, limits: Limits = DEFAULT_LIMITS) -> GrowthFit:
    """Estimate the polynomial growth exponent from balls at radii ``p^d``.

    The fit uses ``d`` from ``ceil(D/2)`` to ``D = floor(log_p r_max)``; the
    smallest scales are dominated by the identity and the first shell.

    Raises:
        DomainError: ``r_max < p**2``.
    """
    p = spec.prime
    r_max = Fraction(r_max)
    if r_max < p**2:
        raise DomainError(f"r_max must be at least p^2 = {p**2}, got {r_max}")
    top = 2
    while p ** (top + 1) <= r_max:
        top += 1
    radii = [p**d for d in range(ceil(top / 2), top + 1)]
    ball = enumerate_ball(spec, radii[-1], limits)
    counts = [ball.count_within(r) for r in radii]

    x = np.log(np.asarray(radii, dtype=float))
    y = np.log(np.asarray(counts, dtype=float))
    coefficients, residuals, *_ = np.polyfit(x, y, 1, full=True)
    residual = float(residuals[0]) if len(residuals) else 0.0
    logger.debug("growth fit for %s over %s: slope %.4f", spec, radii, coefficients[0])
    return GrowthFit(
        spec=str(spec),
        radii=radii,
        counts=counts,
        slope=float(coefficients[0]),
        intercept=float(coefficients[1]),
        residual=residual,
    )


__all__ = [
    "DilationReport",
    "DoublingReport",
    "DoublingRow",
    "GrowthFit",
    "SandwichReport",
    "ball_sandwich_check",
    "dilation_check",
    "doubling_report",
    "growth_exponent",
]
