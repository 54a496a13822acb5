"""Periodicity-induced overlapping group shrinkage for vibration signals."""
from .estimator import PeriodicGroupShrinkage
from .exceptions import (
    ConvexityWarning,
    DomainError,
    InvalidPatternError,
    MissingMetadataError,
    OutOfTableError,
    ParseError,
    PogsError,
)
from .metrics import RocCurve, TransientLabels, relabel, rmse, roc
from .noise import estimate_sigma, lambda_for_pattern, lambda_from_table
from .pattern import GroupPattern, contiguous_pattern, explicit_pattern, periodic_pattern
from .penalty import Family, Penalty, max_noncvx_a, phi, psi
from .signalgen import LabeledSignal, SimConfig, simulate, simulate_compound
from .solver import DenoiseResult, SolverConfig, bnorm, denoise, make_config, objective
from .spectral import BearingSpec, Spectrum, envelope_spectrum, fault_frequencies, magnitude_spectrum

__version__ = "0.1.0"

__all__ = [
    "PeriodicGroupShrinkage",
    "PogsError", "DomainError", "InvalidPatternError", "OutOfTableError",
    "ParseError", "MissingMetadataError", "ConvexityWarning",
    "Family", "Penalty", "phi", "psi", "max_noncvx_a",
    "GroupPattern", "periodic_pattern", "contiguous_pattern", "explicit_pattern",
    "SolverConfig", "DenoiseResult", "make_config", "objective", "bnorm", "denoise",
    "SimConfig", "LabeledSignal", "simulate", "simulate_compound",
    "estimate_sigma", "lambda_from_table", "lambda_for_pattern",
    "TransientLabels", "RocCurve", "rmse", "relabel", "roc",
    "Spectrum", "BearingSpec", "magnitude_spectrum", "envelope_spectrum", "fault_frequencies",
]
