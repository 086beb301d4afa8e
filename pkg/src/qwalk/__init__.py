"""Discrete-time quantum walks on the line and their entanglement."""

from .core import (
    DomainError,
    EntropySeries,
    FitResult,
    InsufficientDataError,
    InvariantViolation,
    NormalizationError,
    binary_entropy,
    fit_log2_growth,
    hermitian2_eigenvalues,
    schmidt_entropy,
)

__all__ = [
    "DomainError",
    "EntropySeries",
    "FitResult",
    "InsufficientDataError",
    "InvariantViolation",
    "NormalizationError",
    "binary_entropy",
    "fit_log2_growth",
    "hermitian2_eigenvalues",
    "schmidt_entropy",
]
