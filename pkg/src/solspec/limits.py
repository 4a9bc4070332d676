"""Resource caps passed explicitly to every enumerating operation."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Any

from solspec.errors import ConfigError, ResourceLimitError


@dataclass(frozen=True, slots=True)
class Limits:
    """Upper bounds checked before any large allocation.

    Attributes:
        max_ball_elements: Largest ball that may be enumerated.
        max_matrix_dim: Largest basis a truncated operator may use.
        max_neumann_terms: Largest number of Neumann series terms.
    """

    max_ball_elements: int = 1_000_000
    max_matrix_dim: int = 20_000
    max_neumann_terms: int = 512

    def __post_init__(self) -> None:
        for name, value in self.to_dict().items():
            if value <= 0:
                raise ConfigError(f"{name} must be positive, got {value}")

    def check_ball(self, requested: int, what: str = "ball") -> None:
        if requested > self.max_ball_elements:
            raise ResourceLimitError(
                f"{what} would hold up to {requested} elements, cap is {self.max_ball_elements}",
                requested=requested,
                limit=self.max_ball_elements,
            )

    def check_matrix(self, dim: int) -> None:
        if dim > self.max_matrix_dim:
            raise ResourceLimitError(
                f"matrix dimension {dim} exceeds cap {self.max_matrix_dim}",
                requested=dim,
                limit=self.max_matrix_dim,
            )

    def check_terms(self, terms: int) -> None:
        if terms > self.max_neumann_terms:
            raise ResourceLimitError(
                f"{terms} Neumann terms requested, cap is {self.max_neumann_terms}",
                requested=terms,
                limit=self.max_neumann_terms,
            )

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


DEFAULT_LIMITS = Limits()

__all__ = ["DEFAULT_LIMITS", "Limits"]
