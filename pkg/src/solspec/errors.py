"""Exception hierarchy shared by every solspec layer.

Purpose
-------
Give callers one base class to catch and a handful of precise subclasses so
the CLI can map failures to exit codes without inspecting messages.

Contents
--------
* :class:`SolspecError` - common base.
* :class:`PrimeMismatchError` - operands built over different primes.
* :class:`DomainError` - an argument lies outside an operation's domain.
* :class:`ContextMismatchError` - operands carry different twisting data or
  a matrix basis does not belong to the requested length function.
* :class:`ResourceLimitError` - an enumeration would exceed a configured cap.
* :class:`ConvergenceError` - an iterative routine hit its iteration cap.
* :class:`InvariantError` - a computed quantity violated a proven bound.
* :class:`ConfigError` - malformed configuration or flag value.

System Role
-----------
Domain modules raise these; :mod:`solspec.cli` translates them to exit codes.
"""

from __future__ import annotations


class SolspecError(Exception):
    """Base class for all solspec errors."""


class PrimeMismatchError(SolspecError, ValueError):
    """Raised when operands are defined over different primes."""


class DomainError(SolspecError, ValueError):
    """Raised when an argument lies outside the domain of an operation."""


class ContextMismatchError(SolspecError, ValueError):
    """Raised when operands carry incompatible twisting sequences or bases."""


class ResourceLimitError(SolspecError):
    """Raised before allocation when an enumeration would exceed its cap.

    Attributes:
        requested: Number of items the operation would have produced (upper bound).
        limit: The configured cap that was exceeded.
    """

    def __init__(self, message: str, *, requested: int, limit: int) -> None:
        super().__init__(message)
        self.requested = requested
        self.limit = limit


class ConvergenceError(SolspecError):
    """Raised when an iterative method exhausts its iteration budget."""


class InvariantError(SolspecError):
    """Raised when a computed value breaks a bound that must always hold."""


class ConfigError(SolspecError, ValueError):
    """Raised for malformed configuration files, keys, or flag values."""


__all__ = [
    "ConfigError",
    "ContextMismatchError",
    "ConvergenceError",
    "DomainError",
    "InvariantError",
    "PrimeMismatchError",
    "ResourceLimitError",
    "SolspecError",
]
