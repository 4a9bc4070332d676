"""Truncated Dirac operators, spectral data and state evaluation."""

from __future__ import annotations

from .operators import (
    BallBasis,
    TruncatedOperator,
    commutator_matrix,
    commutator_norm,
    dirac_matrix,
    eigenvalue_count,
    higher_commutator_matrix,
    higher_commutator_norm,
    operator_norm,
    regular_rep_matrix,
    representation_defect,
    resolvent_matrix,
    resolvent_tail_bound,
)
from .states import CanonicalTrace, StateSpec, VectorState, evaluate_state, mk_candidates, mk_lower_bound
from .summability import SpectrumReport, SummabilityReport, spectrum_report, summability_trace, tail_bound

__all__ = [
    "BallBasis",
    "CanonicalTrace",
    "SpectrumReport",
    "StateSpec",
    "SummabilityReport",
    "TruncatedOperator",
    "VectorState",
    "commutator_matrix",
    "commutator_norm",
    "dirac_matrix",
    "eigenvalue_count",
    "evaluate_state",
    "higher_commutator_matrix",
    "higher_commutator_norm",
    "mk_candidates",
    "mk_lower_bound",
    "operator_norm",
    "regular_rep_matrix",
    "representation_defect",
    "resolvent_matrix",
    "resolvent_tail_bound",
    "spectrum_report",
    "summability_trace",
    "tail_bound",
]
