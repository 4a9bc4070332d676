"""Exact group arithmetic, the parameter space Ω_p and the multiplier σ_θ."""

from __future__ import annotations

from .multiplier import PhaseAngle, bicharacter_angle, multiplier, phase_to_complex, sigma
from .padic import (
    GroupElement,
    PAdicRational,
    lambda_embed,
    padic_norm,
    padic_valuation,
    parse_group_element,
    parse_padic,
    validate_prime,
)
from .theta import ThetaSequence, theta_at

__all__ = [
    "GroupElement",
    "PAdicRational",
    "PhaseAngle",
    "ThetaSequence",
    "bicharacter_angle",
    "lambda_embed",
    "multiplier",
    "padic_norm",
    "padic_valuation",
    "parse_group_element",
    "parse_padic",
    "phase_to_complex",
    "sigma",
    "theta_at",
    "validate_prime",
]
