"""The twisted convolution algebra and its weighted norms."""

from __future__ import annotations

from .elements import FiniteSupportElement, adjoint, symmetric_delta, twisted_convolve
from .norms import cutoff, lipschitz_bound, mu_q, tail_mass, weighted_norm

__all__ = [
    "FiniteSupportElement",
    "adjoint",
    "cutoff",
    "lipschitz_bound",
    "mu_q",
    "symmetric_delta",
    "tail_mass",
    "twisted_convolve",
    "weighted_norm",
]
