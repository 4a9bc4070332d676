"""Small-scale acceptance suite run by ``solspec selftest``.

Every check is deterministic: fixed sample sets, fixed seeds and small balls.
Checks run in a thread pool and are reported in declaration order; a check
that raises is reported as failed with the exception text.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import product
from typing import TYPE_CHECKING, Any

import numpy as np

from solspec.algebra.elements import FiniteSupportElement, adjoint, symmetric_delta, twisted_convolve
from solspec.algebra.norms import weighted_norm
from solspec.core.multiplier import bicharacter_angle, multiplier
from solspec.core.padic import GroupElement
from solspec.core.theta import ThetaSequence
from solspec.geometry.balls import enumerate_ball
from solspec.geometry.doubling import ball_sandwich_check, doubling_report, growth_exponent
from solspec.geometry.lengths import LengthKind, LengthSpec, length
from solspec.inductive import check_functoriality, delta_samples, in_gamma_n, resolvent_gap, verify_morphism, weyl_relation_defect
from solspec.logging_utils import log_error, log_result
from solspec.spectral.operators import BallBasis, commutator_norm, dirac_matrix, representation_defect
from solspec.spectral.states import CanonicalTrace, VectorState, mk_candidates, mk_lower_bound
from solspec.spectral.summability import summability_trace
from solspec.wiener import inverse_residuals, neumann_inverse, spectral_consistency, telescoping_check

if TYPE_CHECKING:
    from solspec.behaviors import Runtime

logger = logging.getLogger(__name__)

Detail = dict[str, Any]
Check = Callable[["Runtime"], tuple[bool, Detail]]

_COCYCLE_TRIPLES = 200
_SAMPLE_VALUES = (Fraction(0), Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(3, 4), Fraction(-5, 8))


def _sample_elements(prime: int = 2) -> list[GroupElement]:
    return [GroupElement.from_fractions(a, b, prime) for a, b in product(_SAMPLE_VALUES, repeat=2)][::5]


def _ball_draws(radius: int, count: int, runtime: Runtime) -> list[GroupElement]:
    """Seeded draws with replacement from the sum ball ``B(R)`` over p = 2."""
    ball = enumerate_ball(LengthSpec(LengthKind.SUM, 2), radius, runtime.limits)
    rng = np.random.default_rng(runtime.seed)
    return [ball.elements[i] for i in rng.integers(len(ball), size=count)]


def _check_cocycle(runtime: Runtime) -> tuple[bool, Detail]:
    theta = ThetaSequence.periodic_two_thirds()
    draws = _ball_draws(16, 3 * _COCYCLE_TRIPLES, runtime)
    triples = [draws[i : i + 3] for i in range(0, len(draws), 3)]
    failures = 0
    unreduced = 0
    for x, y, z in triples:
        if multiplier(theta, x, y) + multiplier(theta, x + y, z) != multiplier(theta, y, z) + multiplier(theta, x, y + z):
            failures += 1
        a, b = x.first, y.second
        if bicharacter_angle(theta, a.numerator * 2, a.exponent + 1, b.numerator * 2, b.exponent + 1) != multiplier(theta, x, y):
            unreduced += 1
    e = GroupElement.identity(2)
    normalized = all(multiplier(theta, e, g).is_zero() and multiplier(theta, g, e).is_zero() for g in draws)
    detail = {"triples": len(triples), "failures": failures, "presentation_failures": unreduced, "normalized": normalized}
    return failures == 0 and unreduced == 0 and normalized, detail


def _check_ball_example(runtime: Runtime) -> tuple[bool, Detail]:
    ball = enumerate_ball(LengthSpec(LengthKind.BASE, 2), 2, runtime.limits)
    elements = {str(x) for x in ball.elements}
    return len(ball) == 3 and elements == {"0", "1", "-1"}, {"count": len(ball), "elements": sorted(elements)}


def _check_sandwich(runtime: Runtime) -> tuple[bool, Detail]:
    results = {f"p={p},d={d}": ball_sandwich_check(p, d, runtime.limits).passed for p in (2, 3, 5) for d in (1, 2, 3)}
    return all(results.values()), results


def _check_doubling(runtime: Runtime) -> tuple[bool, Detail]:
    report = doubling_report(LengthSpec(LengthKind.BASE, 2), [Fraction(r) for r in (1, 2, 4, 8)], runtime.limits)
    return report.passed, {"empirical_doubling": report.empirical_doubling, "empirical_dilation": report.empirical_dilation}


def _check_length_axioms(runtime: Runtime) -> tuple[bool, Detail]:
    spec = LengthSpec(LengthKind.SUM, 2)
    samples = _sample_elements()
    zero_only_at_e = all((length(spec, g) == 0) == g.is_identity() for g in samples)
    symmetric = all(length(spec, -g) == length(spec, g) for g in samples)
    triangle = all(length(spec, g + h) <= length(spec, g) + length(spec, h) for g, h in product(samples, repeat=2))
    peetre = all(1 + length(spec, g) <= (1 + length(spec, h)) * (1 + length(spec, g - h)) for g, h in product(samples, repeat=2))
    detail = {"zero_only_at_identity": zero_only_at_e, "symmetric": symmetric, "triangle": triangle, "weight_inequality": peetre}
    return all(detail.values()), detail


def _check_restriction(runtime: Runtime) -> tuple[bool, Detail]:
    full = LengthSpec(LengthKind.SUM, 2)
    ok = True
    for level in (0, 1, 2):
        restricted = LengthSpec(LengthKind.RESTRICTED_SUM, 2, level)
        for g in _sample_elements():
            if in_gamma_n(g, level):
                ok &= length(restricted, g) == length(full, g)
    return ok, {"levels": [0, 1, 2]}


def _check_growth(runtime: Runtime) -> tuple[bool, Detail]:
    fit = growth_exponent(LengthSpec(LengthKind.BASE, 2), 64, runtime.limits)
    return abs(fit.slope - 2.0) <= 0.5, fit.to_dict()


def _check_dirac_spectrum(runtime: Runtime) -> tuple[bool, Detail]:
    spec = LengthSpec(LengthKind.SUM, 2)
    basis = BallBasis.build(spec, 4, runtime.limits)
    dirac = dirac_matrix(spec, basis)
    exact = dirac.is_diagonal() and list(dirac.diagonal()) == [float(size) for size in basis.ball.lengths]
    return exact, {"dim": basis.dim}


def _check_delta_commutators(runtime: Runtime) -> tuple[bool, Detail]:
    spec = LengthSpec(LengthKind.SUM, 2)
    theta = ThetaSequence.periodic_two_thirds()
    basis = BallBasis.build(spec, 4, runtime.limits)
    deviations = {}
    for gamma in (GroupElement.from_fractions(1, 0, 2), GroupElement.from_fractions(Fraction(1, 2), 0, 2)):
        norm = commutator_norm(FiniteSupportElement.delta(gamma, theta), spec, basis, runtime.operator_norm_tol, runtime.operator_norm_max_iter, runtime.seed)
        deviations[str(gamma)] = abs(norm - float(length(spec, gamma)))
    return max(deviations.values()) <= 1e-10, deviations


def _check_representation(runtime: Runtime) -> tuple[bool, Detail]:
    spec = LengthSpec(LengthKind.SUM, 2)
    theta = ThetaSequence.periodic_two_thirds()
    f = FiniteSupportElement.delta(GroupElement.from_fractions(Fraction(1, 2), 0, 2), theta)
    g = FiniteSupportElement.delta(GroupElement.from_fractions(0, 1, 2), theta, 0.5)
    defect = representation_defect(f, g, spec, 2, runtime.limits)
    return defect <= 1e-12, {"defect": defect}


def _check_associativity(runtime: Runtime) -> tuple[bool, Detail]:
    theta = ThetaSequence.periodic_two_thirds()
    spec = LengthSpec(LengthKind.SUM, 2)
    rng = np.random.default_rng(runtime.seed)
    samples = _sample_elements()

    def random_element() -> FiniteSupportElement:
        picks = rng.choice(len(samples), size=3, replace=False)
        values = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        element = FiniteSupportElement({samples[i]: complex(v) for i, v in zip(picks, values, strict=True)}, theta)
        return element.scale(1.0 / element.l1_norm())

    f, g, h = random_element(), random_element(), random_element()
    associativity = twisted_convolve(twisted_convolve(f, g), h).distance(twisted_convolve(f, twisted_convolve(g, h)))
    submultiplicative = all(
        weighted_norm(twisted_convolve(f, g), s, spec) <= weighted_norm(f, s, spec) * weighted_norm(g, s, spec) * (1 + 1e-12)
        for s in (0, 1, 2, 3)
    )
    isometric = all(
        abs(weighted_norm(adjoint(f), s, spec) - weighted_norm(f, s, spec)) <= 1e-12 * weighted_norm(f, s, spec) for s in (0, 1, 2, 3)
    )
    passed = associativity <= 1e-10 and submultiplicative and isometric
    return passed, {"associativity_defect": associativity, "submultiplicative": submultiplicative, "adjoint_isometric": isometric}


def _check_summability(runtime: Runtime) -> tuple[bool, Detail]:
    report = summability_trace(LengthSpec(LengthKind.SUM, 2), 5.0, 4, runtime.limits)
    decreasing = all(b < a for a, b in zip(report.increments, report.increments[1:], strict=False))
    geometric = all(ratio >= 1.5 for ratio in report.increment_ratios[1:])
    passed = report.annulus_bound_holds and decreasing and geometric and report.within_proven_bound is not False
    return passed, {"increments": report.increments, "ratios": report.increment_ratios}


def _check_mk_bound(runtime: Runtime) -> tuple[bool, Detail]:
    theta = ThetaSequence.trivial(2)
    spec = LengthSpec(LengthKind.SUM, 2)
    gamma = GroupElement.from_fractions(1, 0, 2)
    e = GroupElement.identity(2)
    basis = BallBasis.build(spec, 2, runtime.limits)
    candidates = mk_candidates(gamma, theta, spec)
    same = mk_lower_bound(CanonicalTrace(), VectorState({e: 1.0}), candidates, spec, basis)
    value = mk_lower_bound(CanonicalTrace(), VectorState.normalized({e: 1.0, gamma: 1.0}), candidates, spec, basis)
    return same <= 1e-12 and abs(value - 0.25) <= 1e-12, {"agreeing_states": same, "lower_bound": value}


def _check_inductive(runtime: Runtime) -> tuple[bool, Detail]:
    theta = ThetaSequence.periodic_two_thirds()
    samples = delta_samples(0, 1, theta)
    report = verify_morphism(0, 1, samples, 4, 0.0, runtime.limits)
    functorial = check_functoriality(0, 1, 2, samples)
    weyl = max(weyl_relation_defect(theta, n) for n in range(4))
    return report.passed and functorial and weyl <= runtime.phase_tolerance, {
        "morphism": report.to_dict(),
        "functorial": functorial,
        "weyl_defect": weyl,
    }


def _check_resolvent_gap(runtime: Runtime) -> tuple[bool, Detail]:
    gap = resolvent_gap(0, 1.0, 4, 2, runtime.limits)
    expected = (Fraction(25, 4) + 1) ** -0.5
    return math.isclose(gap.gap, expected, rel_tol=1e-12), gap.to_dict()


def _check_neumann(runtime: Runtime) -> tuple[bool, Detail]:
    theta = ThetaSequence.periodic_two_thirds()
    f = FiniteSupportElement.delta(GroupElement.from_fractions(1, Fraction(1, 2), 2), theta, 0.3)
    g, report = neumann_inverse(f, 1e-12, 64, prune_threshold=runtime.prune_threshold, limits=runtime.limits)
    left, right = inverse_residuals(FiniteSupportElement.identity(theta) - f, g)
    passed = report.converged and report.residual <= report.residual_bound * (1 + 1e-9) and max(left, right) <= 1e-12
    return passed, {"terms": report.terms, "residual": report.residual, "left": left, "right": right}


def _check_telescoping(runtime: Runtime) -> tuple[bool, Detail]:
    theta = ThetaSequence.periodic_two_thirds()
    f = FiniteSupportElement(
        {GroupElement.from_fractions(1, 0, 2): 0.2, GroupElement.from_fractions(Fraction(1, 4), 3, 2): 0.1},
        theta,
    )
    check = telescoping_check(f, 2, 16, LengthSpec(LengthKind.SUM, 2))
    return check.deviation <= 1e-12 and check.final_term_norm == 0.0 and check.terms_bounded, check.to_dict()


def _check_spectral_consistency(runtime: Runtime) -> tuple[bool, Detail]:
    theta = ThetaSequence.periodic_two_thirds()
    f = symmetric_delta(GroupElement.from_fractions(1, 0, 2), theta)
    report = spectral_consistency(f, [2, 4], [3.0], LengthSpec(LengthKind.SUM, 2), limits=runtime.limits)
    row = report.rows[0]
    return report.consistent and row.outcome == "certified-invertible" and min(row.min_singular_values) >= 2 - 1e-9, report.to_dict()


CHECKS: tuple[tuple[str, Check], ...] = (
    ("cocycle", _check_cocycle),
    ("ball-example", _check_ball_example),
    ("sandwich", _check_sandwich),
    ("doubling", _check_doubling),
    ("length-axioms", _check_length_axioms),
    ("restriction", _check_restriction),
    ("growth", _check_growth),
    ("dirac-spectrum", _check_dirac_spectrum),
    ("delta-commutators", _check_delta_commutators),
    ("representation", _check_representation),
    ("algebra-identities", _check_associativity),
    ("summability", _check_summability),
    ("mk-bound", _check_mk_bound),
    ("inductive", _check_inductive),
    ("resolvent-gap", _check_resolvent_gap),
    ("neumann", _check_neumann),
    ("telescoping", _check_telescoping),
    ("spectral-consistency", _check_spectral_consistency),
)


@dataclass(slots=True)
class CheckResult:
    name: str
    passed: bool
    detail: Detail = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass(slots=True)
class SelftestReport:
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def to_dict(self) -> dict[str, Any]:
        return {"checks": [check.to_dict() for check in self.checks], "passed": self.passed}


def _run_check(name: str, check: Check, runtime: Runtime) -> CheckResult:
    try:
        passed, detail = check(runtime)
    except Exception as exc:
        log_error(logger, exc, context=f"check {name}")
        return CheckResult(name, False, {"error": f"{type(exc).__name__}: {exc}"})
    return CheckResult(name, bool(passed), detail)


def run_suite(runtime: Runtime, checks: tuple[tuple[str, Check], ...] = CHECKS) -> SelftestReport:
    """Run ``checks`` in parallel and collect the results in declaration order."""
    order = {name: index for index, (name, _) in enumerate(checks)}
    results: list[CheckResult] = []
    with ThreadPoolExecutor(max_workers=runtime.max_workers) as executor:
        futures = {executor.submit(_run_check, name, check, runtime): name for name, check in checks}
        for future in as_completed(futures):
            result = future.result()
            log_result(logger, result.passed, result.name)
            results.append(result)
    results.sort(key=lambda result: order[result.name])
    return SelftestReport(results)


__all__ = ["CHECKS", "CheckResult", "SelftestReport", "run_suite"]
