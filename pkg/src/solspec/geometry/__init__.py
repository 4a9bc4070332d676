"""Length functions, ball enumeration and doubling diagnostics."""

from __future__ import annotations

from .balls import Ball, enumerate_ball
from .doubling import (
    DilationReport,
    DoublingReport,
    DoublingRow,
    GrowthFit,
    SandwichReport,
    ball_sandwich_check,
    dilation_check,
    doubling_report,
    growth_exponent,
)
from .lengths import LengthKind, LengthSpec, base_length, length

__all__ = [
    "Ball",
    "DilationReport",
    "DoublingReport",
    "DoublingRow",
    "GrowthFit",
    "LengthKind",
    "LengthSpec",
    "SandwichReport",
    "ball_sandwich_check",
    "base_length",
    "dilation_check",
    "doubling_report",
    "enumerate_ball",
    "growth_exponent",
    "length",
]
