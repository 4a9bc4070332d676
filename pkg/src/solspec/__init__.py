"""Spectral triples and quantum metrics on noncommutative solenoids, at finite truncation.

The public surface re-exports the value types and the main entry points of
each layer; subpackages hold the rest.
"""

from __future__ import annotations

from .__init__conf__ import print_info
from .algebra import FiniteSupportElement, adjoint, twisted_convolve, weighted_norm
from .core import GroupElement, PAdicRational, PhaseAngle, ThetaSequence, multiplier, sigma
from .errors import (
    ConfigError,
    ContextMismatchError,
    ConvergenceError,
    DomainError,
    InvariantError,
    PrimeMismatchError,
    ResourceLimitError,
    SolspecError,
)
from .geometry import Ball, LengthKind, LengthSpec, enumerate_ball, length
from .limits import DEFAULT_LIMITS, Limits

__all__ = [
    "DEFAULT_LIMITS",
    "Ball",
    "ConfigError",
    "ContextMismatchError",
    "ConvergenceError",
    "DomainError",
    "FiniteSupportElement",
    "GroupElement",
    "InvariantError",
    "LengthKind",
    "LengthSpec",
    "Limits",
    "PAdicRational",
    "PhaseAngle",
    "PrimeMismatchError",
    "ResourceLimitError",
    "SolspecError",
    "ThetaSequence",
    "adjoint",
    "enumerate_ball",
    "length",
    "multiplier",
    "print_info",
    "sigma",
    "twisted_convolve",
    "weighted_norm",
]
