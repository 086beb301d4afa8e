"""Long-time coin-position entanglement of the Hadamard walk.

Three routes to the same quantities:

* closed forms for localized coins and for the two-site family of
  non-local initial states;
* quadrature of the k-space averages with the oscillating inter-branch
  terms dropped (the t -> infinity limit);
* exact finite-t evolution in k-space, used to cross-check the
  position-space stepper.

Fourier convention: ``a~(k) = sum_x exp(-i k x) a_x`` with inverse
``a_x = (1/2 pi) int dk exp(i k x) a~(k)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import (
    InvariantViolation,
    NormalizationError,
    binary_entropy,
)
from .walk1d import (
    CHI0,
    CoinSpec1D,
    NonlocalSpec,
    ReducedCoinDensity,
    WalkState1D,
)

SQRT2 = np.sqrt(2.0)


class AliasingError(ValueError):
    """The k grid is too coarse for the requested evolution."""


@dataclass(frozen=True)
class AsymptoticConstants:
    delta0: float = (SQRT2 - 1) / 2
    b1: float = (2 - SQRT2) / 4
    B0: float = (SQRT2 - 1) / 2
    Bprime: float = (3 * SQRT2 - 4) / 2
    Bplus: float = (SQRT2 - 1) ** 2 / 2


CONSTANTS = AsymptoticConstants()


def asymptotic_delta_local(coin: CoinSpec1D) -> float:
    """Long-time determinant of the reduced coin density for a localized start."""
    c = CONSTANTS
    return c.delta0 - 2 * c.b1**2 * np.cos(coin.beta) * np.sin(4 * coin.alpha)


def asymptotic_entropy_local(coin: CoinSpec1D) -> float:
    delta = asymptotic_delta_local(coin)
    if delta > 0.25 + 1e-12:
        raise InvariantViolation(f"determinant {delta!r} exceeds 1/4")
    return binary_entropy(0.5 * (1 + np.sqrt(max(1 - 4 * delta, 0.0))))


def nonlocal_bracket(theta, phi):
    """Squared half-gap of the long-time coin spectrum for a two-site start.

    The phase-quadrature term carries Bprime (= sqrt(2) * Bplus); this is
    what the k-space average and the simulated late-time density produce.
    With Bplus in its place the two disagree wherever sin(phi) != 0.
    """
    c = CONSTANTS
    s2t = np.sin(2 * np.asarray(theta, dtype=float))
    phi = np.asarray(phi, dtype=float)
    return (c.B0 - c.Bprime * s2t * np.cos(phi)) ** 2 + (c.Bprime * s2t * np.sin(phi)) ** 2


def asymptotic_eigenvalues_nonlocal(spec: NonlocalSpec) -> tuple[float, float]:
    bracket = float(nonlocal_bracket(spec.theta, spec.phi))
    if bracket > 0.25 + 1e-12:
        raise InvariantViolation(f"eigenvalue bracket {bracket!r} exceeds 1/4")
    half_gap = np.sqrt(min(bracket, 0.25))
    return float(0.5 + half_gap), float(0.5 - half_gap)


def asymptotic_entropy_nonlocal(spec: NonlocalSpec) -> float:
    return binary_entropy(asymptotic_eigenvalues_nonlocal(spec)[0])


def nonlocal_entropy_surface(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Vectorized long-time entropy over broadcastable arrays of (theta, phi)."""
    bracket = nonlocal_bracket(theta, phi)
    if np.any(bracket > 0.25 + 1e-12):
        raise InvariantViolation("eigenvalue bracket exceeds 1/4")
    r = 0.5 + np.sqrt(np.minimum(bracket, 0.25))
    out = np.zeros_like(r)
    for p in (r, 1 - r):
        pos = p > 0
        out[pos] -= p[pos] * np.log2(p[pos])
    return out


# --- k-space spectral form -------------------------------------------------


def kspace_matrix(k: float) -> np.ndarray:
    """Single-step operator (coin then shift) acting on the spinor at wavenumber k."""
    em, ep = np.exp(-1j * k), np.exp(1j * k)
    return np.array([[em, em], [ep, -ep]]) / SQRT2


def _eigensystem(k):
    """omega(k) and eigenvectors, vectorized over k; vectors have shape (..., 2, 2)
    with eigenvector j stored in column j."""
    k = np.asarray(k, dtype=float)
    omega = np.arcsin(np.sin(k) / SQRT2)
    em = np.exp(-1j * k) / SQRT2
    lam = np.stack([np.exp(-1j * omega), -np.exp(1j * omega)], axis=-1)
    # first row of (U - lam) v = 0 gives v ∝ (em, lam - em)
    v0 = np.broadcast_to(em[..., None], lam.shape)
    v1 = lam - em[..., None]
    norm = np.sqrt(np.abs(v0) ** 2 + np.abs(v1) ** 2)
    vecs = np.stack([v0 / norm, v1 / norm], axis=-2)
    return omega, lam, vecs


@dataclass(frozen=True)
class KSpaceSpectrum:
    k: float
    omega: float
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns are phi^(1), phi^(2)


def kspace_spectrum(k: float) -> KSpaceSpectrum:
    """Eigen-decomposition of the k-space step: eigenvalues exp(-i w), -exp(i w)
    with sin w = sin k / sqrt 2 and w in [-pi/2, pi/2]."""
    omega, lam, vecs = _eigensystem(k)
    return KSpaceSpectrum(float(k), float(omega), lam, vecs)


def evolve_kspace(initial: WalkState1D, t: int, n_k: int | None = None) -> WalkState1D:
    """Evolve ``t`` Hadamard steps exactly through the spectral form in k-space.

    The result covers sites ``offset - t .. offset + n - 1 + t``, the same
    window :func:`qwalk.walk1d.evolve` produces.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    width = len(initial.a)
    required = 2 * (2 * t + width) + 1
    if n_k is None:
        n_k = 1 << int(np.ceil(np.log2(required)))
    elif n_k < required:
        raise AliasingError(f"n_k={n_k} below the alias-free minimum {required}")

    x = initial.positions
    idx = np.mod(x, n_k)
    a = np.zeros(n_k, dtype=complex)
    b = np.zeros(n_k, dtype=complex)
    a[idx] = initial.a
    b[idx] = initial.b
    # fft computes sum_m f_m exp(-2 pi i j m / n), i.e. a~ at k_j = 2 pi j / n
    spinor = np.stack([np.fft.fft(a), np.fft.fft(b)], axis=-1)
    k = 2 * np.pi * np.arange(n_k) / n_k
    _, lam, vecs = _eigensystem(k)
    overlaps = np.einsum("kij,ki->kj", vecs.conj(), spinor)
    spinor_t = np.einsum("kij,kj->ki", vecs, overlaps * lam**t)
    a_t = np.fft.ifft(spinor_t[:, 0])
    b_t = np.fft.ifft(spinor_t[:, 1])

    out_x = np.arange(initial.offset - t, initial.offset + width + t)
    out = np.mod(out_x, n_k)
    return WalkState1D(int(out_x[0]), a_t[out], b_t[out])


# --- long-time quadrature --------------------------------------------------

KProfile = Callable[[float], np.ndarray]


def asymptotic_density_quadrature(
    profile: KProfile, n_k: int = 4096
) -> ReducedCoinDensity:
    """Long-time reduced coin density from an initial k-space spinor profile.

    Each wavenumber contributes the incoherent sum over the two eigen-
    branches of |<phi_j|Phi_k>|^2 |phi_j><phi_j|; the inter-branch terms
    oscillate as exp(2 i w t) and average out. The k integral uses the
    uniform periodic trapezoid rule on ``n_k`` nodes.
    """
    k = -np.pi + 2 * np.pi * np.arange(n_k) / n_k
    spinor = np.array([np.asarray(profile(kk), dtype=complex) for kk in k])
    if spinor.shape != (n_k, 2):
        raise ValueError("profile must return a complex 2-vector")
    norm = np.mean(np.sum(np.abs(spinor) ** 2, axis=1))
    if abs(norm - 1.0) > 1e-6:
        raise NormalizationError(f"profile norm {norm!r} is not 1")
    _, _, vecs = _eigensystem(k)
    weights = np.abs(np.einsum("kij,ki->kj", vecs.conj(), spinor)) ** 2
    rho = np.einsum("kj,kaj,kbj->ab", weights, vecs, vecs.conj()) / n_k
    A, C = float(rho[0, 0].real), float(rho[1, 1].real)
    B = complex(rho[0, 1])
    return ReducedCoinDensity(A, B, C, A * C - abs(B) ** 2)


def kspace_density(profile: KProfile, t: int, n_k: int = 4096) -> ReducedCoinDensity:
    """Reduced coin density after ``t`` steps, as the k average of U_k^t Phi_k.

    Exact (cross terms kept) for finitely supported states once ``n_k``
    exceeds the width of the evolved support.
    """
    k = -np.pi + 2 * np.pi * np.arange(n_k) / n_k
    spinor = np.array([np.asarray(profile(kk), dtype=complex) for kk in k])
    _, lam, vecs = _eigensystem(k)
    overlaps = np.einsum("kij,ki->kj", vecs.conj(), spinor)
    spinor = np.einsum("kij,kj->ki", vecs, overlaps * lam**t)
    rho = np.einsum("ka,kb->ab", spinor, spinor.conj()) / n_k
    A, C = float(rho[0, 0].real), float(rho[1, 1].real)
    B = complex(rho[0, 1])
    return ReducedCoinDensity(A, B, C, A * C - abs(B) ** 2)


def profile_from_state(state: WalkState1D) -> KProfile:
    """k-space spinor (a~(k), b~(k)) of a finitely supported state."""
    x = state.positions

    def profile(k):
        phase = np.exp(-1j * k * x)
        return np.array([phase @ state.a, phase @ state.b])

    return profile


def local_profile(coin: CoinSpec1D) -> KProfile:
    v = coin.vector()
    return lambda k: v


def gaussian_profile(
    sigma: float, carrier: float = np.pi / 2, coin: np.ndarray = CHI0
) -> KProfile:
    """Normalized packet sqrt(sigma) exp(-(k - carrier)^2 sigma^2 / 2) times ``coin``.

    The k offset is wrapped onto [-pi, pi). Normalization ignores the
    Gaussian tail beyond |k - carrier| = pi, negligible for sigma >~ 2.
    """
    coin = np.asarray(coin, dtype=complex)
    coin = coin / np.linalg.norm(coin)
    scale = (4 * np.pi) ** 0.25 * np.sqrt(sigma)

    def profile(k):
        d = np.mod(k - carrier + np.pi, 2 * np.pi) - np.pi
        return scale * np.exp(-(d**2) * sigma**2 / 2) * coin

    return profile
