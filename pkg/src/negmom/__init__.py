"""Numerical toolkit for negative moments of the Riemann zeta function."""

from .errors import BudgetError, ConstraintError, DomainError, NegMomError
from .mobius import EnvelopeSource, envelope, mobius_partial_sums, smoothing_W
from .moments import (
    QuadConfig,
    asymptotic_constant,
    asymptotic_constant_diagonal,
    gonek_prediction,
    negative_moment,
    rmt_prediction,
    run_report,
    theorem_bound,
)
from .schedule import MomentSpec, RegimeCase, build_schedule, classify_regime, validate_schedule
from .settings import DEFAULT_SETTINGS, Settings
from .zeta import ZetaEval, log_abs_zeta, zeta

__version__ = "0.1.0"

__all__ = [
    "BudgetError",
    "ConstraintError",
    "DEFAULT_SETTINGS",
    "DomainError",
    "EnvelopeSource",
    "MomentSpec",
    "NegMomError",
    "QuadConfig",
    "RegimeCase",
    "Settings",
    "ZetaEval",
    "asymptotic_constant",
    "asymptotic_constant_diagonal",
    "build_schedule",
    "classify_regime",
    "envelope",
    "gonek_prediction",
    "log_abs_zeta",
    "mobius_partial_sums",
    "negative_moment",
    "rmt_prediction",
    "run_report",
    "smoothing_W",
    "theorem_bound",
    "validate_schedule",
    "zeta",
]
