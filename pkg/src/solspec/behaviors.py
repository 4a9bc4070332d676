"""Run orchestration behind the CLI subcommands.

Purpose
-------
Turn a validated :class:`~solspec.run_config.RunConfig` into a
:class:`~solspec.reports.RunReport`. Each subcommand has one ``run_*`` helper
that calls the library, logs progress and returns a :class:`CommandResult`
with the JSON payload, an optional CSV table and a pass flag.

Contents
--------
* :class:`Runtime` - resource caps and numerical settings of a run.
* :class:`CommandResult` - payload, table and verdict of one command.
* :data:`COMMANDS` - subcommand name to helper.
* :func:`execute` - run a command and wrap it in the report envelope.
* :func:`load_element` - read an element file.

System Role
-----------
Sits between the CLI transport and the library. Library modules receive
explicit arguments only; this module is where configuration becomes
arguments.
"""

from __future__ import annotations

import json
import logging
from collections.abc import Callable, Mapping
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

from solspec.algebra.elements import FiniteSupportElement, adjoint, twisted_convolve
from solspec.algebra.norms import lipschitz_bound, weighted_norm
from solspec.core.padic import GroupElement, parse_group_element
from solspec.core.theta import ThetaSequence
from solspec.errors import ConfigError, DomainError
from solspec.geometry.balls import enumerate_ball
from solspec.geometry.doubling import (
    SandwichReport,
    ball_sandwich_check,
    dilation_check,
    doubling_report,
    growth_exponent,
)
from solspec.geometry.lengths import LengthKind, LengthSpec, length
from solspec.inductive import (
    check_functoriality,
    delta_samples,
    resolvent_gap,
    verify_morphism,
    weyl_relation_defect,
    weyl_relation_phase,
)
from solspec.limits import DEFAULT_LIMITS, Limits
from solspec.logging_utils import LogContext, log_metric, log_result, log_section
from solspec.reports import RunReport, Table
from solspec.run_config import RunConfig
from solspec.spectral.operators import (
    DEFAULT_MAX_ITER,
    DEFAULT_SEED,
    DEFAULT_TOL,
    BallBasis,
    eigenvalue_count,
    higher_commutator_norm,
    representation_defect,
)
from solspec.spectral.states import CanonicalTrace, VectorState, mk_candidates, mk_lower_bound
from solspec.spectral.summability import spectrum_report, summability_trace
from solspec.wiener import (
    DEFAULT_PRUNE_THRESHOLD,
    h1inf_evidence,
    inverse_residuals,
    neumann_inverse,
    spectral_consistency,
)

logger = logging.getLogger(__name__)

#: Exponent used by ``summability`` when ``--t`` is not given.
DEFAULT_SUMMABILITY_T = 5.0
#: Resolvent parameter used by ``inductive`` when ``--t`` is not given.
DEFAULT_RESOLVENT_T = 1.0
#: Coefficient of the default ``wiener`` input ``c·δ_γ``.
DEFAULT_WIENER_COEFFICIENT = 0.3
#: Largest cutoff ``N`` tabulated by ``wiener``.
TAIL_TABLE_SIZE = 64


@dataclass(frozen=True, slots=True)
class Runtime:
    """Resource caps and numerical settings shared by every command."""

    limits: Limits = DEFAULT_LIMITS
    max_workers: int = 4
    operator_norm_tol: float = DEFAULT_TOL
    operator_norm_max_iter: int = DEFAULT_MAX_ITER
    seed: int = DEFAULT_SEED
    prune_threshold: float = DEFAULT_PRUNE_THRESHOLD
    phase_tolerance: float = 1e-14
    selfadjoint_tol: float = 1e-12
    gap_tol: float = 1e-6

    @classmethod
    def from_settings(cls, limits: Limits, numerics: Mapping[str, Any], max_workers: int) -> Runtime:
        """Build from the ``[numerics]`` section; missing keys keep their defaults.

        Raises:
            ConfigError: a value has the wrong type.
        """
        defaults = cls()
        try:
            return cls(
                limits=limits,
                max_workers=max(1, int(max_workers)),
                operator_norm_tol=float(numerics.get("operator_norm_tol", defaults.operator_norm_tol)),
                operator_norm_max_iter=int(numerics.get("operator_norm_max_iter", defaults.operator_norm_max_iter)),
                seed=int(numerics.get("power_iteration_seed", defaults.seed)),
                prune_threshold=float(numerics.get("prune_threshold", defaults.prune_threshold)),
                phase_tolerance=float(numerics.get("phase_tolerance", defaults.phase_tolerance)),
                selfadjoint_tol=float(numerics.get("selfadjoint_tol", defaults.selfadjoint_tol)),
                gap_tol=float(numerics.get("gap_tol", defaults.gap_tol)),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid numerics setting: {exc}") from exc


@dataclass(slots=True)
class CommandResult:
    payload: dict[str, Any]
    table: Table | None = None
    passed: bool | None = None


def load_element(path: str | Path, theta: ThetaSequence) -> FiniteSupportElement:
    """Read an element file: a JSON list of ``{gamma, re, im}`` or ``{"element": [...]}``.

    Raises:
        ConfigError: the file cannot be read or is not valid JSON.
        DomainError: an entry is malformed.
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read element file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"element file {path} is not valid JSON: {exc}") from exc
    if isinstance(data, dict):
        data = data.get("element", [])
    if not isinstance(data, list):
        raise ConfigError(f"element file {path} must hold a list of entries")
    return FiniteSupportElement.from_json(data, theta)


def _gamma(config: RunConfig) -> GroupElement:
    try:
        return parse_group_element(config.gamma, config.p)
    except DomainError as exc:
        raise ConfigError(f"invalid gamma {config.gamma!r}: {exc}") from exc


def _input_or(config: RunConfig, theta: ThetaSequence, default: Callable[[], FiniteSupportElement]) -> FiniteSupportElement:
    return load_element(config.input, theta) if config.input else default()


# ---------------------------------------------------------------------------
# length-geometry
# ---------------------------------------------------------------------------


def run_ball(config: RunConfig, runtime: Runtime) -> CommandResult:
    spec = config.length_spec("base")
    ball = enumerate_ball(spec, config.radius_value(), runtime.limits)
    log_metric(logger, f"|B({ball.radius})|", len(ball), "elements")
    payload = {
        "spec": str(spec),
        "p": spec.prime,
        "radius": str(ball.radius),
        "count": len(ball),
        "elements": [str(element) for element in ball.elements],
        "lengths": [str(size) for size in ball.lengths],
    }
    table = Table(header=["element", "length"], rows=[[str(e), str(s)] for e, s in zip(ball.elements, ball.lengths, strict=True)])
    return CommandResult(payload, table)


def _sandwich_checks(prime: int, top: int, runtime: Runtime) -> list[SandwichReport]:
    """Inclusion checks for ``d = 1..top``, run in parallel and returned in order."""
    if top < 1:
        return []
    reports: dict[int, SandwichReport] = {}
    with ThreadPoolExecutor(max_workers=min(runtime.max_workers, top)) as executor:
        futures = {executor.submit(ball_sandwich_check, prime, d, runtime.limits): d for d in range(1, top + 1)}
        for future in as_completed(futures):
            reports[futures[future]] = future.result()
    return [reports[d] for d in sorted(reports)]


def run_doubling(config: RunConfig, runtime: Runtime) -> CommandResult:
    spec = config.length_spec("base")
    radii = config.radii_values()
    report = doubling_report(spec, radii, runtime.limits)
    for row in report.rows:
        log_result(logger, row.passed, f"R={row.radius}: ratio2={row.ratio_double:.4g} ratiop={row.ratio_dilated:.4g}")
    payload: dict[str, Any] = {"doubling": report.to_dict()}
    passed = report.passed

    largest = max(radii)
    if spec.kind is LengthKind.BASE:
        top = 0
        while spec.prime ** (top + 1) <= largest:
            top += 1
        sandwiches = _sandwich_checks(spec.prime, top, runtime)
        payload["sandwich"] = [item.to_dict() for item in sandwiches]
        passed = passed and all(item.passed for item in sandwiches)
    if largest >= spec.prime**2:
        payload["growth"] = growth_exponent(spec, largest, runtime.limits).to_dict()
    if config.t is not None and config.t > 1:
        payload["dilation"] = dilation_check(spec, Fraction(config.t), radii, runtime.limits).to_dict()

    table = Table(
        header=["R", "|B(R)|", "|B(2R)|", "|B(pR)|", "ratio2", "ratiop", "paper_bound", "pass"],
        rows=[
            [row.radius, row.count, row.count_double, row.count_dilated, row.ratio_double, row.ratio_dilated, row.proven_bound, row.passed]
            for row in report.rows
        ],
    )
    return CommandResult(payload, table, passed)


# ---------------------------------------------------------------------------
# twisted-algebra
# ---------------------------------------------------------------------------


def run_algebra(config: RunConfig, runtime: Runtime) -> CommandResult:
    theta = config.theta()
    spec = config.length_spec("sum")
    f = _input_or(config, theta, lambda: FiniteSupportElement.delta(_gamma(config), theta))
    payload: dict[str, Any] = {"operation": config.operation, "spec": str(spec), "theta": theta.to_dict()}

    if config.operation == "norm":
        payload.update(
            element=f.to_json(),
            support_size=len(f),
            l1_norm=f.l1_norm(),
            weighted_norms={str(s): weighted_norm(f, s, spec) for s in config.s_schedule},
            lipschitz_bound=lipschitz_bound(f, spec),
            self_adjoint=f.is_self_adjoint(runtime.selfadjoint_tol),
        )
        return CommandResult(payload)

    if config.operation == "adjoint":
        star = adjoint(f)
        payload.update(
            element=f.to_json(),
            result=star.to_json(),
            involution_defect=adjoint(star).distance(f),
            norm_defect=abs(star.l1_norm() - f.l1_norm()),
        )
        return CommandResult(payload, passed=payload["involution_defect"] <= runtime.selfadjoint_tol)

    if not config.other:
        raise ConfigError("the product operation needs a second element file (--other)")
    g = load_element(config.other, theta)
    product = twisted_convolve(f, g)
    weighted = {
        str(s): {"product": weighted_norm(product, s, spec), "bound": weighted_norm(f, s, spec) * weighted_norm(g, s, spec)}
        for s in config.s_schedule
    }
    submultiplicative = all(item["product"] <= item["bound"] * (1 + 1e-12) for item in weighted.values())
    payload.update(left=f.to_json(), right=g.to_json(), result=product.to_json(), weighted_norms=weighted, submultiplicative=submultiplicative)
    return CommandResult(payload, passed=submultiplicative)


# ---------------------------------------------------------------------------
# dirac-spectral
# ---------------------------------------------------------------------------


def run_spectrum(config: RunConfig, runtime: Runtime) -> CommandResult:
    spec = config.length_spec("sum")
    with LogContext(logger, f"spectrum of D on B({config.radius})"):
        report = spectrum_report(spec, config.radius_value(), config.t, runtime.limits)
    log_metric(logger, "eigenvalues", len(report.eigenvalues))
    table = Table(header=["index", "eigenvalue"], rows=[[i, value] for i, value in enumerate(report.eigenvalues)])
    return CommandResult(report.to_dict(), table)


def run_summability(config: RunConfig, runtime: Runtime) -> CommandResult:
    spec = config.length_spec("sum")
    t = DEFAULT_SUMMABILITY_T if config.t is None else config.t
    with LogContext(logger, f"summability trace t={t} over {config.shells} shells"):
        report = summability_trace(spec, t, config.shells, runtime.limits)
    log_metric(logger, "empirical doubling constant", f"{report.empirical_constant:.4g}")
    rows = [
        [n, report.ball_counts[n], report.annulus_counts[n], report.partial_traces[n], report.increments[n - 1] if n else ""]
        for n in range(config.shells + 1)
    ]
    table = Table(header=["n", "ball_count", "annulus_count", "partial_trace", "increment"], rows=rows)
    return CommandResult(report.to_dict(), table, report.annulus_bound_holds and report.within_proven_bound is not False)


def run_commutator(config: RunConfig, runtime: Runtime) -> CommandResult:
    theta = config.theta()
    spec = config.length_spec("sum")
    f = _input_or(config, theta, lambda: FiniteSupportElement.delta(_gamma(config), theta))
    basis = BallBasis.build(spec, config.radius_value(), runtime.limits)
    rows = []
    for k in range(1, config.order + 1):
        norm = higher_commutator_norm(f, k, spec, basis, runtime.operator_norm_tol, runtime.operator_norm_max_iter, runtime.seed)
        bound = weighted_norm(f, k, spec)
        log_metric(logger, f"‖[D,·]^{k}‖", f"{norm:.12g} (bound {bound:.12g})")
        rows.append({"k": k, "norm": norm, "weighted_bound": bound})
    lipschitz = lipschitz_bound(f, spec)
    first = rows[0]["norm"]
    slack = runtime.operator_norm_tol * max(1.0, lipschitz)
    checks: dict[str, bool | None] = {"lipschitz_bound_holds": first <= lipschitz + slack, "delta_exact": None}
    # a single term c·δ_γ with γ in the basis attains |c| L(γ) at the identity column
    if len(f) == 1 and next(iter(f.coefficients)) in basis.index:
        checks["delta_exact"] = abs(first - lipschitz) <= slack
    payload = {
        "spec": str(spec),
        "radius": config.radius,
        "dim": basis.dim,
        "element": f.to_json(),
        "lipschitz_bound": lipschitz,
        "commutators": rows,
        "checks": checks,
        "representation_defect": representation_defect(f, f, spec, config.radius_value(), runtime.limits),
        "eigenvalue_count": eigenvalue_count(spec, config.radius_value(), runtime.limits),
    }
    return CommandResult(payload, passed=all(value is not False for value in checks.values()))


def run_mk_bound(config: RunConfig, runtime: Runtime) -> CommandResult:
    theta = config.theta()
    spec = config.length_spec("sum")
    gamma = _gamma(config)
    if gamma.is_identity():
        raise ConfigError("mk-bound needs gamma different from the identity")
    identity = GroupElement.identity(config.p)
    radius = max(config.radius_value(), length(spec.on_group, gamma))
    basis = BallBasis.build(spec, radius, runtime.limits)
    phi = CanonicalTrace()
    psi = VectorState.normalized({identity: 1.0, gamma: 1.0})
    candidates = mk_candidates(gamma, theta, spec)
    if config.input:
        candidates.append(load_element(config.input, theta))
    value = mk_lower_bound(phi, psi, candidates, spec, basis, runtime.selfadjoint_tol)
    log_metric(logger, "mk lower bound", f"{value:.12g}")
    payload = {
        "spec": str(spec),
        "radius": str(radius),
        "phi": phi.describe(),
        "psi": psi.describe(),
        "gamma": str(gamma),
        "candidates": len(candidates),
        "lower_bound": value,
    }
    return CommandResult(payload)


# ---------------------------------------------------------------------------
# inductive-system
# ---------------------------------------------------------------------------


def run_inductive(config: RunConfig, runtime: Runtime) -> CommandResult:
    theta = config.theta()
    t = DEFAULT_RESOLVENT_T if config.t is None else config.t
    samples = delta_samples(config.j, 1, theta)
    with LogContext(logger, f"morphism checks j={config.j} k={config.k}"):
        report = verify_morphism(config.j, config.k, samples, config.radius_value(), config.tol, runtime.limits)
    functorial = check_functoriality(config.j, config.k, config.k + 1, samples)
    gap = resolvent_gap(config.j, t, config.radius_value(), config.p, runtime.limits)
    defect = weyl_relation_defect(theta, config.level)
    weyl_ok = defect <= runtime.phase_tolerance
    log_result(logger, report.passed, "morphism conditions")
    log_result(logger, functorial, "functoriality")
    log_result(logger, weyl_ok, f"Weyl relation at level {config.level}")
    payload = {
        "morphism": report.to_dict(),
        "functoriality": {"levels": [config.j, config.k, config.k + 1], "holds": functorial},
        "resolvent_gap": gap.to_dict(),
        "weyl": {
            "level": config.level,
            "phase": str(weyl_relation_phase(theta, config.level).angle),
            "theta_2n": str(theta.theta_at(2 * config.level)),
            "defect": defect,
        },
    }
    return CommandResult(payload, passed=report.passed and functorial and weyl_ok)


# ---------------------------------------------------------------------------
# wiener-smooth
# ---------------------------------------------------------------------------


def run_wiener(config: RunConfig, runtime: Runtime) -> CommandResult:
    theta = config.theta()
    spec = config.length_spec("sum")
    f = _input_or(config, theta, lambda: FiniteSupportElement.delta(_gamma(config), theta, DEFAULT_WIENER_COEFFICIENT))
    with LogContext(logger, "Neumann inversion"):
        g, report = neumann_inverse(
            f,
            config.tol,
            config.nmax,
            spec=spec,
            s_schedule=config.s_schedule,
            q_schedule=config.q_schedule,
            prune_threshold=runtime.prune_threshold,
            limits=runtime.limits,
        )
    log_metric(logger, "Neumann terms", report.terms)
    log_metric(logger, "residual", f"{report.residual:.3e}")
    evidence = h1inf_evidence(g, spec, config.q_schedule, range(1, TAIL_TABLE_SIZE + 1), source=f)
    one_minus_f = FiniteSupportElement.identity(theta) - f
    left, right = inverse_residuals(one_minus_f, g)
    payload: dict[str, Any] = {
        "spec": str(spec),
        "input": f.to_json(),
        "inversion": report.to_dict(),
        "two_sided_residuals": {"left": left, "right": right},
        "smoothness": evidence.to_dict(),
        "inverse": g.to_json(),
    }
    passed = report.converged and evidence.cutoff_bound_holds is not False
    if config.c_values:
        consistency = spectral_consistency(
            f, config.radii_values(), config.c_values, spec, runtime.selfadjoint_tol, runtime.gap_tol, runtime.limits
        )
        payload["spectral_consistency"] = consistency.to_dict()
        passed = passed and consistency.consistent
    table = Table(
        header=["N", "residual", "residual_bound"],
        rows=[[n, residual, 2 * report.input_norm ** (n + 1)] for n, residual in enumerate(report.residual_history)],
    )
    return CommandResult(payload, table, passed)


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------


def run_selftest(config: RunConfig, runtime: Runtime) -> CommandResult:
    from solspec.selftest import run_suite

    report = run_suite(runtime)
    table = Table(header=["check", "passed"], rows=[[check.name, check.passed] for check in report.checks])
    return CommandResult(report.to_dict(), table, report.passed)


COMMANDS: dict[str, Callable[[RunConfig, Runtime], CommandResult]] = {
    "ball": run_ball,
    "doubling": run_doubling,
    "algebra": run_algebra,
    "spectrum": run_spectrum,
    "summability": run_summability,
    "commutator": run_commutator,
    "mk-bound": run_mk_bound,
    "inductive": run_inductive,
    "wiener": run_wiener,
    "selftest": run_selftest,
}


def execute(command: str, config: RunConfig, runtime: Runtime, schema_version: str = "1.0") -> tuple[RunReport, Table | None]:
    """Run ``command`` and wrap its payload in the report envelope.

    Raises:
        ConfigError: unknown command, or CSV requested from a command without a table.
    """
    try:
        handler = COMMANDS[command]
    except KeyError as exc:
        raise ConfigError(f"unknown command {command!r}") from exc
    log_section(logger, f"solspec {command}")
    result = handler(config, runtime)
    if config.format == "csv" and result.table is None:
        raise ConfigError(f"{command} has no CSV output; use --format json")
    if result.passed is not None:
        log_result(logger, result.passed, command)
    report = RunReport(
        schema_version=schema_version,
        command=command,
        config=config.echo(),
        payload=result.payload,
        passed=result.passed,
    )
    return report, result.table


__all__ = [
    "COMMANDS",
    "CommandResult",
    "Runtime",
    "execute",
    "load_element",
]
