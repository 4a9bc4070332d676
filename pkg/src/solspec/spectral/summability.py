"""Spectral data of the truncated Dirac operator and trace-class estimates.

The Dirac compression is diagonal, so its spectrum is the multiset of ball
lengths. :func:`summability_trace` accumulates ``Σ (1 + L(γ)²)^{-t/2}`` over the
dyadic balls ``B(2^n)`` and compares it with the geometric tail bound
``max{1, C-1}·|B(1)|·(1 + Σ_{n>=1} (C/2^t)^{n-1})``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Any

from solspec.errors import DomainError
from solspec.geometry.balls import enumerate_ball
from solspec.geometry.lengths import LengthSpec
from solspec.limits import DEFAULT_LIMITS, Limits
from solspec.spectral.operators import resolvent_tail_bound


def _dyadic_counts(lengths: tuple[Fraction, ...], top: int) -> list[int]:
    """``|B(2^n)|`` for ``n = 0..top`` from a length-sorted ball."""
    counts = []
    index = 0
    for n in range(top + 1):
        while index < len(lengths) and lengths[index] <= 2**n:
            index += 1
        counts.append(index)
    return counts


@dataclass(slots=True)
class SpectrumReport:
    """Eigenvalues of the Dirac compression on ``B(R)``.

    ``annulus_counts[0]`` is ``|B(1)|``; entry ``n`` counts ``B(2^n) ∖ B(2^{n-1})``.
    """

    spec: str
    radius: str
    eigenvalues: list[str]
    annulus_counts: list[int]
    t: float | None
    partial_trace: float | None
    resolvent_tail_bound: float | None

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def spectrum_report(
    spec: LengthSpec,
    radius: Fraction | int,
    t: float | None = None,
    limits: Limits = DEFAULT_LIMITS,
) -> SpectrumReport:
    """Eigenvalues with multiplicity, dyadic shell counts and optional trace data."""
    ball = enumerate_ball(spec, radius, limits)
    top = 0
    while 2**top < ball.radius:
        top += 1
    counts = _dyadic_counts(ball.lengths, top)
    partial = None
    tail = None
    if t is not None:
        if t <= 0:
            raise DomainError(f"t must be positive, got {t}")
        partial = math.fsum((1.0 + float(size) ** 2) ** (-t / 2) for size in ball.lengths)
        tail = resolvent_tail_bound(ball.radius, t)
    return SpectrumReport(
        spec=str(spec),
        radius=str(ball.radius),
        eigenvalues=[str(size) for size in ball.lengths],
        annulus_counts=[counts[0]] + [b - a for a, b in zip(counts, counts[1:], strict=False)],
        t=t,
        partial_trace=partial,
        resolvent_tail_bound=tail,
    )


@dataclass(slots=True)
class SummabilityReport:
    """Partial traces ``S_n`` over ``B(2^n)`` for ``n = 0..n_max``.

    Bounds are ``None`` when their geometric series diverges (``C >= 2^t``).
    """

    spec: str
    t: float
    n_max: int
    ball_counts: list[int]
    annulus_counts: list[int]
    partial_traces: list[float]
    increments: list[float]
    increment_ratios: list[float]
    proven_constant: float
    empirical_constant: float
    proven_bound: float | None
    empirical_bound: float | None
    annulus_bound_holds: bool
    within_proven_bound: bool | None

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def tail_bound(constant: float, t: float, unit_ball: int) -> float | None:
    """``max{1, C-1}·|B(1)|·(1 + 1/(1 - C/2^t))`` or ``None`` when ``C >= 2^t``."""
    ratio = constant / 2.0**t
    if ratio >= 1.0:
        return None
    return max(1.0, constant - 1.0) * unit_ball * (1.0 + 1.0 / (1.0 - ratio))


def summability_trace(spec: LengthSpec, t: float, n_max: int, limits: Limits = DEFAULT_LIMITS) -> SummabilityReport:
    """Trace estimates for ``(1 + D²)^{-t/2}`` on dyadic balls.

    Terms are summed in descending magnitude (ascending length) with
    :func:`math.fsum`.

    Raises:
        DomainError: ``t <= 0`` or ``n_max < 1``.
        ResourceLimitError: ``|B(2^n_max)|`` exceeds the cap.
    """
    if t <= 0:
        raise DomainError(f"t must be positive, got {t}")
    if n_max < 1:
        raise DomainError(f"n_max must be at least 1, got {n_max}")
    ball = enumerate_ball(spec, 2**n_max, limits)
    terms = [(1.0 + float(size) ** 2) ** (-t / 2) for size in ball.lengths]
    counts = _dyadic_counts(ball.lengths, n_max)
    partial = [math.fsum(terms[: counts[n]]) for n in range(n_max + 1)]
    increments = [math.fsum(terms[counts[n - 1] : counts[n]]) for n in range(1, n_max + 1)]
    ratios = [a / b if b > 0 else math.inf for a, b in zip(increments, increments[1:], strict=False)]
    annuli = [counts[0]] + [counts[n] - counts[n - 1] for n in range(1, n_max + 1)]

    unit = counts[0]
    empirical = max(counts[n] / counts[n - 1] for n in range(1, n_max + 1))
    annulus_ok = all(annuli[n] <= (empirical - 1) * empirical ** (n - 1) * unit * (1 + 1e-12) for n in range(1, n_max + 1))
    proven = float(spec.proven_constant)
    proven_bound = tail_bound(proven, t, unit)
    return SummabilityReport(
        spec=str(spec),
        t=t,
        n_max=n_max,
        ball_counts=counts,
        annulus_counts=annuli,
        partial_traces=partial,
        increments=increments,
        increment_ratios=ratios,
        proven_constant=proven,
        empirical_constant=empirical,
        proven_bound=proven_bound,
        empirical_bound=tail_bound(empirical, t, unit),
        annulus_bound_holds=annulus_ok,
        within_proven_bound=None if proven_bound is None else all(s <= proven_bound for s in partial),
    )


__all__ = ["SpectrumReport", "SummabilityReport", "spectrum_report", "summability_trace", "tail_bound"]
