"""Entropy, small eigenproblems and regression shared by the walk modules.

All entropies are in base 2 (e-bits).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class InvariantViolation(ValueError):
    """A physical invariant (trace, determinant bound, unitarity) is broken."""


class NormalizationError(ValueError):
    """A state or profile is not normalized to one."""


class InsufficientDataError(ValueError):
    """Too few data points for a fit."""


_DOMAIN_TOL = 1e-12


def binary_entropy(r: float) -> float:
    """Shannon entropy in bits of the distribution (r, 1 - r)."""
    r = float(r)
    if r < -_DOMAIN_TOL or r > 1 + _DOMAIN_TOL:
        raise DomainError(f"probability {r!r} outside [0, 1]")
    r = min(max(r, 0.0), 1.0)
    s = 0.0
    for p in (r, 1.0 - r):
        if p > 0.0:
            s -= p * np.log2(p)
    return float(s)


def hermitian2_eigenvalues(A: float, B: complex, C: float) -> tuple[float, float]:
    """Eigenvalues of the unit-trace Hermitian matrix [[A, B], [B*, C]].

    Returned in descending order as ``(r, 1 - r)`` with
    ``r = (1 + sqrt(1 - 4*det)) / 2``.
    """
    if abs(A + C - 1.0) > 1e-9:
        raise InvariantViolation(f"trace A + C = {A + C!r} is not 1")
    delta = A * C - abs(B) ** 2
    disc = 1.0 - 4.0 * delta
    if disc < -_DOMAIN_TOL:
        raise InvariantViolation(f"determinant {delta!r} exceeds 1/4")
    r = 0.5 * (1.0 + np.sqrt(max(disc, 0.0)))
    return float(r), float(1.0 - r)


def entropy_from_probabilities(p: np.ndarray) -> float:
    """-sum p log2 p over the strictly positive entries of ``p``."""
    p = np.asarray(p, dtype=float)
    p = p[p > 0.0]
    return float(-(p * np.log2(p)).sum())


def schmidt_entropy(M: np.ndarray) -> float:
    """Entanglement entropy of a pure bipartite state given as an amplitude matrix.

    Rows index subsystem A, columns subsystem B. The squared singular
    values are the Schmidt coefficients, i.e. the spectrum of either
    reduced density matrix.
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2:
        raise ValueError("amplitude matrix must be two-dimensional")
    norm = np.linalg.norm(M)
    if abs(norm - 1.0) > 1e-6:
        raise NormalizationError(f"state norm {norm!r} is not 1")
    sv = np.linalg.svd(M, compute_uv=False)
    return entropy_from_probabilities(sv**2)


@dataclass(frozen=True)
class EntropySeries:
    """Entropy values sampled at strictly increasing step counts."""

    t: np.ndarray
    s: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=np.int64)
        s = np.asarray(self.s, dtype=float)
        if t.shape != s.shape or t.ndim != 1:
            raise ValueError("t and s must be 1-d arrays of equal length")
        if np.any(np.diff(t) <= 0):
            raise ValueError("t must be strictly increasing")
        if np.any(t < 0):
            raise ValueError("step counts must be nonnegative")
        if np.any(s < -1e-12) or not np.all(np.isfinite(s)):
            raise ValueError("entropies must be finite and nonnegative")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "s", np.maximum(s, 0.0))

    def __len__(self):
        return len(self.t)

    def tail_mean(self, fraction: float = 0.25) -> float:
        """Mean of the last ``fraction`` of the entries (at least one)."""
        n = max(1, int(round(len(self) * fraction)))
        return float(self.s[-n:].mean())


@dataclass(frozen=True)
class FitResult:
    c: float
    intercept: float
    residual_rms: float


def fit_log2_growth(series: EntropySeries, t_min: int = 10) -> FitResult:
    """Least-squares fit of ``s = c * log2(t) + intercept`` over ``t >= t_min``."""
    mask = (series.t >= t_min) & (series.t > 0)
    if mask.sum() < 3:
        raise InsufficientDataError(
            f"need at least 3 points with t >= {t_min}, got {int(mask.sum())}"
        )
    x = np.log2(series.t[mask].astype(float))
    y = series.s[mask]
    design = np.column_stack([x, np.ones_like(x)])
    (c, intercept), *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - (c * x + intercept)
    return FitResult(float(c), float(intercept), float(np.sqrt(np.mean(resid**2))))
