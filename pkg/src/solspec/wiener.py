"""Neumann-series inversion in the twisted ℓ¹ algebra and smoothness evidence.

For ``‖f‖_1 < 1/2`` the element ``δ_e - f`` is inverted by ``g_N = Σ_{n<=N} f^n``
with residual ``‖(δ_e - f) ∗ g_N - δ_e‖ = ‖f^{N+1}‖ <= 2‖f‖^{N+1}``. The tail
functionals ``N^q ‖(1 - χ_N) g‖`` stay bounded for such inverses, which is
the numerical face of smoothness of the inverse.

Contents
--------
* :func:`neumann_inverse` with :class:`InversionReport`.
* :func:`h1inf_evidence` - tail tables, μ_q estimates and the cutoff bound
  ``[√N]² ‖(1 - χ_{√N}) f‖ + 4‖f‖ / 2^{√N}``.
* :func:`telescoping_check` - term-by-term expansion of ``(1 - χ_N) f^n``.
* :func:`general_inverse` - ``h^{-1} = h' ∗ (h ∗ h')^{-1}``.
* :func:`spectral_consistency` - ℓ¹ criterion against truncated singular values.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Literal

import numpy as np
from scipy import linalg

from solspec.algebra.elements import FiniteSupportElement, twisted_convolve
from solspec.algebra.norms import cutoff, mu_q, tail_mass, weighted_norm
from solspec.errors import ConvergenceError, DomainError
from solspec.geometry.lengths import LengthSpec, length
from solspec.limits import DEFAULT_LIMITS, Limits
from solspec.spectral.operators import BallBasis, regular_rep_matrix

logger = logging.getLogger(__name__)

DEFAULT_PRUNE_THRESHOLD = 1e-16
ROUNDING_SLACK = 1e-14


def power(f: FiniteSupportElement, n: int) -> FiniteSupportElement:
    """``f^{∗n}`` with ``f^0 = δ_e``."""
    if n < 0:
        raise DomainError(f"power must be nonnegative, got {n}")
    result = FiniteSupportElement.identity(f.theta)
    for _ in range(n):
        result = twisted_convolve(result, f)
    return result


@dataclass(slots=True)
class InversionReport:
    """Trace of a Neumann inversion.

    ``weighted_norms[s][N]`` is ``‖g_N‖_{1,s,L}``; ``mu_estimates[q]`` is
    ``μ_q`` of the final partial sum.
    """

    support_size: int
    input_norm: float
    terms: int
    residual: float
    residual_bound: float
    converged: bool
    tol: float
    pruned_mass: float
    residual_history: list[float] = field(default_factory=list)
    weighted_norms: dict[str, list[float]] = field(default_factory=dict)
    mu_estimates: dict[str, float] = field(default_factory=dict)
    result_support_size: int = 0

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def _residual(one_minus_f: FiniteSupportElement, g: FiniteSupportElement) -> float:
    return (twisted_convolve(one_minus_f, g) - FiniteSupportElement.identity(g.theta)).l1_norm()


def neumann_inverse(
    f: FiniteSupportElement,
    tol: float = 1e-12,
    n_max: int = 64,
    *,
    spec: LengthSpec | None = None,
    s_schedule: Sequence[float] = (0, 1, 2, 3),
    q_schedule: Sequence[int] = (1, 2, 3),
    prune_threshold: float = DEFAULT_PRUNE_THRESHOLD,
    limits: Limits = DEFAULT_LIMITS,
) -> tuple[FiniteSupportElement, InversionReport]:
    """Invert ``δ_e - f`` by partial sums of the Neumann series.

    Stops at the first ``N`` whose residual is at most ``tol`` or at
    ``n_max``; a run that hits ``n_max`` is reported with ``converged=False``.
    Coefficients below ``prune_threshold`` are dropped from each power and
    their mass is reported as ``pruned_mass``.

    Raises:
        DomainError: ``‖f‖_1 >= 1/2``.
        ResourceLimitError: ``n_max`` exceeds the Neumann term cap.
    """
    norm = f.l1_norm()
    if norm >= 0.5:
        raise DomainError(f"Neumann inversion needs ‖f‖_1 < 1/2, got {norm}")
    limits.check_terms(n_max)
    identity = FiniteSupportElement.identity(f.theta)
    one_minus_f = identity - f

    g = identity
    term = identity
    budget = 0.0
    residual = _residual(one_minus_f, g)
    history = [residual]
    weighted: dict[str, list[float]] = {str(s): [] for s in s_schedule} if spec else {}
    if spec:
        for s in s_schedule:
            weighted[str(s)].append(weighted_norm(g, s, spec))

    n = 0
    while residual > tol and n < n_max:
        n += 1
        term, dropped = twisted_convolve(term, f).prune(prune_threshold)
        budget += dropped
        g = g + term
        residual = _residual(one_minus_f, g)
        history.append(residual)
        if spec:
            for s in s_schedule:
                weighted[str(s)].append(weighted_norm(g, s, spec))

    converged = residual <= tol
    if not converged:
        logger.warning("Neumann series stopped at N=%d with residual %.3e above tol %.3e", n, residual, tol)
    if budget > 0:
        logger.debug("pruned mass %.3e over %d terms", budget, n)
    report = InversionReport(
        support_size=len(f),
        input_norm=norm,
        terms=n,
        residual=residual,
        residual_bound=2 * norm ** (n + 1),
        converged=converged,
        tol=tol,
        pruned_mass=budget,
        residual_history=history,
        weighted_norms=weighted,
        mu_estimates={str(q): mu_q(g, q, spec) for q in q_schedule} if spec else {},
        result_support_size=len(g),
    )
    return g, report


def cutoff_tail_bound(f: FiniteSupportElement, spec: LengthSpec, n: int) -> float:
    """``[√N]² ‖(1 - χ_{√N}) f‖ + 4‖f‖ / 2^{√N}``."""
    root = math.sqrt(n)
    return math.isqrt(n) ** 2 * tail_mass(f, spec, root) + 4 * f.l1_norm() / 2**root


@dataclass(slots=True)
class H1InfRow:
    n: int
    tail: float
    scaled: dict[str, float]
    cutoff_bound: float | None = None
    series_tail: float | None = None

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass(slots=True)
class H1InfEvidence:
    """Tail table of an element with running maxima per ``q``."""

    spec: str
    rows: list[H1InfRow]
    mu_estimates: dict[str, float]
    cutoff_bound_holds: bool | None

    def to_dict(self) -> dict[str, Any]:
        return {
            "spec": self.spec,
            "rows": [row.to_dict() for row in self.rows],
            "mu_estimates": self.mu_estimates,
            "cutoff_bound_holds": self.cutoff_bound_holds,
        }


def h1inf_evidence(
    g: FiniteSupportElement,
    spec: LengthSpec,
    q_schedule: Sequence[int] = (1, 2, 3),
    n_range: Sequence[int] = tuple(range(1, 65)),
    source: FiniteSupportElement | None = None,
    slack: float = 1e-12,
) -> H1InfEvidence:
    """Tabulate ``N^q ‖(1 - χ_N) g‖`` over ``n_range``.

    When ``source`` is the ``f`` that produced ``g``, the tail of ``g - δ_e``
    is also compared with :func:`cutoff_tail_bound` at every ``N``.
    """
    rows = []
    maxima = {str(q): 0.0 for q in q_schedule}
    series = g - FiniteSupportElement.identity(g.theta) if source is not None else None
    holds = True if source is not None else None
    for n in n_range:
        tail = tail_mass(g, spec, n)
        scaled = {str(q): n**q * tail for q in q_schedule}
        for key, value in scaled.items():
            maxima[key] = max(maxima[key], value)
        row = H1InfRow(n=n, tail=tail, scaled=scaled)
        if source is not None and series is not None:
            row.cutoff_bound = cutoff_tail_bound(source, spec, n)
            row.series_tail = tail_mass(series, spec, n)
            holds = holds and row.series_tail <= row.cutoff_bound + slack
        rows.append(row)
    return H1InfEvidence(spec=str(spec), rows=rows, mu_estimates=maxima, cutoff_bound_holds=holds)


@dataclass(slots=True)
class TelescopingCheck:
    """``(1 - χ_N) f^n`` against its expansion through ``a = χ_{√N} f`` and ``b = f - a``."""

    n: int
    cutoff: int
    deviation: float
    final_term_norm: float
    max_term_norm: float
    term_bound: float

    @property
    def terms_bounded(self) -> bool:
        return self.max_term_norm <= self.term_bound * (1 + 1e-12) + 1e-15

    def to_dict(self) -> dict[str, Any]:
        return {**asdict(self), "terms_bounded": self.terms_bounded}


def telescoping_check(f: FiniteSupportElement, n: int, cutoff_radius: int, spec: LengthSpec) -> TelescopingCheck:
    """Expand ``(1 - χ_N) f^n = Σ_k (1 - χ_N)[a^k ∗ b ∗ f^{n-k-1}] + (1 - χ_N) a^n``.

    Each middle term is bounded by ``‖b‖·‖f‖^{n-1}``; the final term vanishes
    when ``n <= √N``.
    """
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n}")
    outside = Fraction(cutoff_radius)
    inner = cutoff(f, spec, math.sqrt(cutoff_radius))
    outer = f - inner

    def project(x: FiniteSupportElement) -> FiniteSupportElement:
        return x.restrict(lambda gamma: length(spec.on_group, gamma) > outside)

    direct = project(power(f, n))
    total = FiniteSupportElement.zero(f.theta)
    largest = 0.0
    for k in range(n):
        term = project(twisted_convolve(twisted_convolve(power(inner, k), outer), power(f, n - k - 1)))
        largest = max(largest, term.l1_norm())
        total = total + term
    final = project(power(inner, n))
    total = total + final
    return TelescopingCheck(
        n=n,
        cutoff=cutoff_radius,
        deviation=direct.distance(total),
        final_term_norm=final.l1_norm(),
        max_term_norm=largest,
        term_bound=outer.l1_norm() * f.l1_norm() ** (n - 1),
    )


def inverse_residuals(h: FiniteSupportElement, g: FiniteSupportElement) -> tuple[float, float]:
    """``(‖h ∗ g - δ_e‖, ‖g ∗ h - δ_e‖)``."""
    identity = FiniteSupportElement.identity(h.theta)
    return (twisted_convolve(h, g) - identity).l1_norm(), (twisted_convolve(g, h) - identity).l1_norm()


def general_inverse(
    h: FiniteSupportElement,
    h_prime: FiniteSupportElement,
    tol: float = 1e-12,
    n_max: int = 64,
    limits: Limits = DEFAULT_LIMITS,
) -> FiniteSupportElement:
    """Invert ``h`` as ``h' ∗ (h ∗ h')^{-1}`` given an approximate inverse ``h'``.

    With ``‖(h ∗ h') g - δ_e‖ <= tol`` and ``‖(h ∗ h')^{-1}‖ <= 2`` both
    residuals of the result are at most ``2 tol ‖h‖ ‖h'‖``.

    Raises:
        DomainError: ``‖δ_e - h ∗ h'‖_1 >= 1/2``.
        ConvergenceError: the inner series stopped at ``n_max`` or a residual
            exceeds the bound above.
    """
    h.check_context(h_prime)
    operative = FiniteSupportElement.identity(h.theta) - twisted_convolve(h, h_prime)
    if operative.l1_norm() >= 0.5:
        raise DomainError(f"‖δ_e - h ∗ h'‖_1 = {operative.l1_norm()} is not below 1/2")
    inverse, report = neumann_inverse(operative, tol, n_max, limits=limits)
    if not report.converged:
        raise ConvergenceError(f"inner Neumann series stopped at N={report.terms} with residual {report.residual:.3e} above {tol:.3e}")
    result = twisted_convolve(h_prime, inverse)
    left, right = inverse_residuals(h, result)
    scale = max(1.0, h.l1_norm() * h_prime.l1_norm())
    allowed = scale * (2 * tol + ROUNDING_SLACK)
    logger.debug("general inverse after %d terms: residuals %.3e / %.3e (allowed %.3e)", report.terms, left, right, allowed)
    if max(left, right) > allowed:
        raise ConvergenceError(f"general inverse residuals {left:.3e} / {right:.3e} exceed {allowed:.3e}")
    return result


Outcome = Literal["certified-invertible", "gap-closing", "indeterminate"]


@dataclass(slots=True)
class ConsistencyRow:
    c: float
    l1_certified: bool
    min_singular_values: list[float]
    outcome: Outcome
    consistent: bool

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass(slots=True)
class SpectralConsistencyReport:
    """Per test point ``c``: the ℓ¹ criterion ``‖f‖_1 < |c|`` and truncated gaps of ``c - λ(f)``."""

    spec: str
    radii: list[str]
    input_norm: float
    rows: list[ConsistencyRow]

    @property
    def consistent(self) -> bool:
        return all(row.consistent for row in self.rows)

    def to_dict(self) -> dict[str, Any]:
        return {
            "spec": self.spec,
            "radii": self.radii,
            "input_norm": self.input_norm,
            "rows": [row.to_dict() for row in self.rows],
            "consistent": self.consistent,
        }


def spectral_consistency(
    f: FiniteSupportElement,
    radii: Sequence[Fraction | int],
    c_values: Sequence[float],
    spec: LengthSpec,
    tol: float = 1e-12,
    gap_tol: float = 1e-6,
    limits: Limits = DEFAULT_LIMITS,
) -> SpectralConsistencyReport:
    """Compare the ℓ¹ invertibility criterion with truncated minimum singular values.

    Outcomes per ``c``: ``certified-invertible`` when ``‖f‖_1 < |c|``;
    ``gap-closing`` when the smallest singular value at the largest radius is
    at most ``gap_tol`` or shrinks strictly across at least three radii;
    ``indeterminate`` otherwise. A certified point is consistent only if every
    truncated gap stays above ``|c| - ‖f‖_1``.

    Raises:
        DomainError: ``f`` is not self-adjoint within ``tol`` or ``radii`` is not increasing.
    """
    if not f.is_self_adjoint(tol):
        raise DomainError("spectral_consistency needs a self-adjoint element")
    radii = [Fraction(r) for r in radii]
    if not radii or any(b <= a for a, b in zip(radii, radii[1:], strict=False)):
        raise DomainError("radii must be a nonempty increasing list")
    norm = f.l1_norm()
    matrices = []
    for radius in radii:
        basis = BallBasis.build(spec, radius, limits)
        matrices.append(regular_rep_matrix(f, basis).to_dense())

    rows = []
    for c in c_values:
        gaps = [float(linalg.svdvals(c * np.eye(m.shape[0]) - m).min()) for m in matrices]
        certified = norm < abs(c)
        if certified:
            outcome: Outcome = "certified-invertible"
            consistent = all(gap >= abs(c) - norm - 1e-9 for gap in gaps)
        else:
            shrinking = len(gaps) >= 3 and all(b < a for a, b in zip(gaps, gaps[1:], strict=False))
            outcome = "gap-closing" if gaps[-1] <= gap_tol or shrinking else "indeterminate"
            consistent = True
        rows.append(ConsistencyRow(c=c, l1_certified=certified, min_singular_values=gaps, outcome=outcome, consistent=consistent))
    return SpectralConsistencyReport(spec=str(spec), radii=[str(r) for r in radii], input_norm=norm, rows=rows)


__all__ = [
    "ConsistencyRow",
    "H1InfEvidence",
    "H1InfRow",
    "InversionReport",
    "SpectralConsistencyReport",
    "TelescopingCheck",
    "cutoff_tail_bound",
    "general_inverse",
    "h1inf_evidence",
    "inverse_residuals",
    "neumann_inverse",
    "power",
    "spectral_consistency",
    "telescoping_check",
]
