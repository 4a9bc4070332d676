"""Run configuration for the command-line surface.

A run is described by :class:`RunConfig`. It is assembled from three layers,
lowest precedence first:

1. the ``[run]`` section of the layered configuration (packaged defaults,
   user and project files, environment variables),
2. an optional flat ``key = value`` file given with ``--config``,
3. command-line flags.

Flat files ignore blank lines and ``#`` comments; list values are comma
separated and keys may use dashes or underscores::

    p = 3
    theta0 = 1/5
    radii = 1, 3, 9
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from solspec.core.padic import validate_prime
from solspec.core.theta import ThetaSequence
from solspec.errors import ConfigError, SolspecError
from solspec.geometry.lengths import LengthSpec

#: Fields given as comma separated lists in flat files and flags.
LIST_FIELDS = frozenset({"preperiod", "period", "radii", "q_schedule", "s_schedule", "c_values"})

#: Fields that never appear in the report echo.
_NOT_ECHOED = frozenset({"out", "format", "log_level"})


def _parse_fraction(text: str, what: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"{what} must be a rational number like 3/2, got {text!r}") from exc


class RunConfig(BaseModel):
    """Validated parameters of one command run.

    Attributes:
        p: The prime.
        theta0: Level-zero angle as ``num/den`` in ``[0, 1)``.
        preperiod: Digits for the first levels of θ.
        period: Repeated digit block of θ (``--digits``).
        spec: Length spec (``base``, ``sum``, ``restricted:n``, ``restricted-base:n``,
            ``z2:n``); ``None`` lets each command pick its default.
        radius: Ball radius for single-radius commands.
        radii: Radii for sweeps.
        t: Exponent or resolvent parameter; ``None`` picks the command default.
        shells: Number of dyadic shells for summability traces.
        level: Level used by the Weyl relation report.
        j: Source level of an inductive morphism.
        k: Target level of an inductive morphism.
        order: Highest commutator order.
        tol: Numerical tolerance of the command.
        nmax: Largest number of Neumann terms.
        q_schedule: Exponents of the tail functionals.
        s_schedule: Weights of the weighted ℓ¹ norms.
        c_values: Test points of the spectral consistency sweep.
        gamma: Group element used by ``mk-bound`` and default inputs.
        input: Element file (JSON list of ``{gamma, re, im}``).
        other: Second element file for products.
        operation: ``algebra`` operation.
        out: Output path; ``None`` writes to stdout.
        format: Report format.
        log_level: Log level override.
    """

    model_config = ConfigDict(extra="forbid")

    p: int = 2
    theta0: str = "0"
    preperiod: list[int] = Field(default_factory=list)
    period: list[int] = Field(default_factory=lambda: [0])
    spec: str | None = None
    radius: str = "4"
    radii: list[str] = Field(default_factory=lambda: ["1", "2", "4", "8"])
    t: float | None = None
    shells: int = 4
    level: int = 0
    j: int = 0
    k: int = 1
    order: int = 1
    tol: float = 1e-12
    nmax: int = 64
    q_schedule: list[int] = Field(default_factory=lambda: [1, 2, 3])
    s_schedule: list[float] = Field(default_factory=lambda: [0.0, 1.0, 2.0, 3.0])
    c_values: list[float] = Field(default_factory=list)
    gamma: str = "(1, 0)"
    input: str | None = None
    other: str | None = None
    operation: Literal["norm", "product", "adjoint"] = "norm"
    out: str | None = None
    format: Literal["json", "csv"] = "json"
    log_level: str | None = None

    @field_validator("p")
    @classmethod
    def _prime(cls, value: int) -> int:
        try:
            return validate_prime(value)
        except SolspecError as exc:
            raise ValueError(str(exc)) from exc

    @field_validator("theta0", mode="before")
    @classmethod
    def _theta0(cls, value: Any) -> str:
        angle = _parse_fraction(str(value), "theta0")
        if not 0 <= angle < 1:
            raise ValueError(f"theta0 must lie in [0, 1), got {angle}")
        return str(angle)

    @field_validator("radius", mode="before")
    @classmethod
    def _radius(cls, value: Any) -> str:
        size = _parse_fraction(str(value), "radius")
        if size < 0:
            raise ValueError(f"radius must be nonnegative, got {size}")
        return str(size)

    @field_validator("radii", mode="before")
    @classmethod
    def _radii(cls, values: Any) -> list[str]:
        if isinstance(values, str | int | float):
            values = [values]
        sizes = [_parse_fraction(str(value), "radii") for value in values]
        if not sizes or any(size < 0 for size in sizes):
            raise ValueError("radii must be a nonempty list of nonnegative numbers")
        return [str(size) for size in sizes]

    @field_validator("shells", "nmax", "order")
    @classmethod
    def _positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"must be at least 1, got {value}")
        return value

    @field_validator("level", "j", "k")
    @classmethod
    def _level(cls, value: int) -> int:
        if value < 0:
            raise ValueError(f"levels are nonnegative, got {value}")
        return value

    @field_validator("tol")
    @classmethod
    def _tol(cls, value: float) -> float:
        if value <= 0:
            raise ValueError(f"tol must be positive, got {value}")
        return value

    @model_validator(mode="after")
    def _digits_and_spec(self) -> RunConfig:
        for digit in [*self.preperiod, *self.period]:
            if not 0 <= digit < self.p:
                raise ValueError(f"digit {digit} outside 0..{self.p - 1}")
        if self.spec is not None:
            try:
                LengthSpec.parse(self.spec, self.p)
            except SolspecError as exc:
                raise ValueError(str(exc)) from exc
        return self

    def theta(self) -> ThetaSequence:
        """The point of Ω_p selected by this run."""
        return ThetaSequence(Fraction(self.theta0), tuple(self.preperiod), tuple(self.period), self.p)

    def length_spec(self, default: str) -> LengthSpec:
        return LengthSpec.parse(self.spec or default, self.p)

    def radius_value(self) -> Fraction:
        return Fraction(self.radius)

    def radii_values(self) -> list[Fraction]:
        return [Fraction(value) for value in self.radii]

    def echo(self) -> dict[str, Any]:
        """Parameters copied into every report; output routing is left out."""
        return self.model_dump(mode="json", exclude=set(_NOT_ECHOED))


def parse_flat_config(text: str, source: str = "<config>") -> dict[str, Any]:
    """Parse a flat ``key = value`` file into a mapping of field names to raw values.

    Raises:
        ConfigError: a non-blank line has no ``=`` or an empty key.
    """
    values: dict[str, Any] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or not key:
            raise ConfigError(f"{source}:{number}: expected 'key = value', got {raw.strip()!r}")
        values[key] = _split_list(key, value.strip())
    return values


def _split_list(key: str, value: Any) -> Any:
    if key in LIST_FIELDS and isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    return value


def load_flat_config(path: Path) -> dict[str, Any]:
    """Read and parse a flat config file.

    Raises:
        ConfigError: the file cannot be read or parsed.
    """
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return parse_flat_config(text, str(path))


def build_run_config(
    defaults: dict[str, Any] | None = None,
    config_file: Path | None = None,
    overrides: dict[str, Any] | None = None,
) -> RunConfig:
    """Merge defaults, an optional flat file and flag overrides into a :class:`RunConfig`.

    ``None`` values in ``overrides`` mean "flag not given" and are skipped.

    Raises:
        ConfigError: parsing or validation failed.
    """
    merged: dict[str, Any] = {}
    for layer in (defaults or {}, load_flat_config(config_file) if config_file else {}, overrides or {}):
        for key, value in layer.items():
            if value is not None:
                merged[key.replace("-", "_")] = _split_list(key, value)
    try:
        return RunConfig.model_validate(merged)
    except ValidationError as exc:
        problems = "; ".join(f"{'.'.join(str(part) for part in error['loc']) or 'config'}: {error['msg']}" for error in exc.errors())
        raise ConfigError(f"invalid run configuration: {problems}") from exc


__all__ = ["LIST_FIELDS", "RunConfig", "build_run_config", "load_flat_config", "parse_flat_config"]
