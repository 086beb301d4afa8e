"""Position-space Hadamard walk on the line.

A state is a dense window of sites ``offset .. offset + n - 1`` holding the
coin-|0> amplitudes ``a`` and coin-|1> amplitudes ``b``. Each step applies
the Hadamard coin and then moves |0> one site right and |1> one site left,
so the window grows by one site on each side.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DomainError,
    EntropySeries,
    binary_entropy,
    hermitian2_eigenvalues,
)

SQRT2 = np.sqrt(2.0)
HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / SQRT2
CHI0 = np.array([1.0, 1.0j]) / SQRT2

# slack for angles typed as rounded decimals, e.g. 1.5708 for pi/2
_ANGLE_SLACK = 1e-4


def _check_angle(name, value, bound):
    if not np.isfinite(value) or abs(value) > bound + _ANGLE_SLACK:
        raise DomainError(f"{name}={value!r} outside [-{bound:.6g}, {bound:.6g}]")


@dataclass(frozen=True)
class CoinSpec1D:
    """Local coin cos(alpha)|0> + exp(i beta) sin(alpha)|1>."""

    alpha: float
    beta: float

    def __post_init__(self):
        _check_angle("alpha", self.alpha, np.pi / 2)
        _check_angle("beta", self.beta, np.pi)

    def vector(self) -> np.ndarray:
        return np.array(
            [np.cos(self.alpha), np.exp(1j * self.beta) * np.sin(self.alpha)]
        )


@dataclass(frozen=True)
class NonlocalSpec:
    """Position superposition cos(theta)|-1> + exp(-i phi) sin(theta)|+1>."""

    theta: float
    phi: float

    def __post_init__(self):
        _check_angle("theta", self.theta, np.pi / 2)
        _check_angle("phi", self.phi, np.pi)


@dataclass(frozen=True)
class WalkState1D:
    offset: int
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=complex)
        b = np.asarray(self.b, dtype=complex)
        if a.shape != b.shape or a.ndim != 1:
            raise ValueError("a and b must be 1-d arrays of equal length")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "offset", int(self.offset))

    @property
    def positions(self) -> np.ndarray:
        return np.arange(self.offset, self.offset + len(self.a))

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.a) ** 2 + np.abs(self.b) ** 2)))

    def window(self, x_min: int, x_max: int) -> tuple[np.ndarray, np.ndarray]:
        """Amplitudes on sites x_min..x_max, zero-padded outside the stored window."""
        n = x_max - x_min + 1
        a = np.zeros(n, dtype=complex)
        b = np.zeros(n, dtype=complex)
        lo = max(x_min, self.offset)
        hi = min(x_max, self.offset + len(self.a) - 1)
        if lo <= hi:
            src = slice(lo - self.offset, hi - self.offset + 1)
            dst = slice(lo - x_min, hi - x_min + 1)
            a[dst] = self.a[src]
            b[dst] = self.b[src]
        return a, b


@dataclass(frozen=True)
class ReducedCoinDensity:
    """Coin state after tracing out position: [[A, B], [B*, C]]."""

    A: float
    B: complex
    C: float
    delta: float

    def matrix(self) -> np.ndarray:
        return np.array([[self.A, self.B], [np.conj(self.B), self.C]])

    def eigenvalues(self) -> tuple[float, float]:
        return hermitian2_eigenvalues(self.A, self.B, self.C)

    def entropy(self) -> float:
        return binary_entropy(self.eigenvalues()[0])


def make_local_state(coin: CoinSpec1D) -> WalkState1D:
    """Walker at the origin with the given coin (unit norm)."""
    v = coin.vector()
    return WalkState1D(0, v[:1], v[1:])


def make_nonlocal_state(spec: NonlocalSpec) -> WalkState1D:
    amp = np.array(
        [np.cos(spec.theta), 0.0, np.exp(-1j * spec.phi) * np.sin(spec.theta)]
    )
    return WalkState1D(-1, amp * CHI0[0], amp * CHI0[1])


def make_gaussian_state(
    sigma: float,
    cutoff: int,
    carrier: float = np.pi / 2,
    coin: np.ndarray = CHI0,
) -> WalkState1D:
    """Gaussian packet exp(-x^2 / 4 sigma^2) * exp(i carrier x) on [-cutoff, cutoff].

    ``sigma`` is the standard deviation of the position probability.
    ``carrier`` sets the relative phase between neighbouring sites. At
    the default pi/2 the coin chi0 is an eigenvector of the k-space step
    at the packet's centre, so wide packets approach a product state; a
    zero carrier gives the opposite limit of maximal entanglement.
    """
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma!r}")
    if cutoff < 5 * sigma:
        raise DomainError(f"cutoff {cutoff} is smaller than 5*sigma")
    x = np.arange(-cutoff, cutoff + 1)
    g = np.exp(-(x**2) / (4.0 * sigma**2) + 1j * carrier * x)
    g /= np.linalg.norm(g)
    coin = np.asarray(coin, dtype=complex)
    coin = coin / np.linalg.norm(coin)
    return WalkState1D(-cutoff, g * coin[0], g * coin[1])


def step_hadamard(state: WalkState1D) -> WalkState1D:
    """One step: Hadamard coin on every site, then the conditional shift."""
    a, b = state.a, state.b
    up = (a + b) / SQRT2
    down = (a - b) / SQRT2
    n = len(a)
    new_a = np.zeros(n + 2, dtype=complex)
    new_b = np.zeros(n + 2, dtype=complex)
    new_a[2:] = up
    new_b[:-2] = down
    return WalkState1D(state.offset - 1, new_a, new_b)


def step_hadamard_adjoint(state: WalkState1D) -> WalkState1D:
    """Inverse of :func:`step_hadamard`: shift back, then Hadamard (self-inverse)."""
    n = len(state.a)
    a = np.zeros(n + 2, dtype=complex)
    b = np.zeros(n + 2, dtype=complex)
    a[:-2] = state.a
    b[2:] = state.b
    return WalkState1D(state.offset - 1, (a + b) / SQRT2, (a - b) / SQRT2)


def evolve(state: WalkState1D, steps: int) -> WalkState1D:
    for _ in range(steps):
        state = step_hadamard(state)
    return state


def position_distribution(state: WalkState1D) -> tuple[np.ndarray, np.ndarray]:
    """Sites and probabilities |a_x|^2 + |b_x|^2."""
    return state.positions, np.abs(state.a) ** 2 + np.abs(state.b) ** 2


def position_variance(state: WalkState1D) -> float:
    x, p = position_distribution(state)
    mean = np.dot(x, p)
    return float(np.dot((x - mean) ** 2, p))


def reduce_to_coin(state: WalkState1D) -> ReducedCoinDensity:
    A = float(np.sum(np.abs(state.a) ** 2))
    C = float(np.sum(np.abs(state.b) ** 2))
    B = complex(np.sum(state.a * np.conj(state.b)))
    return ReducedCoinDensity(A, B, C, A * C - abs(B) ** 2)


def coin_position_entropy(state: WalkState1D) -> float:
    rho = reduce_to_coin(state)
    # product states: report exact zero despite rounding in the sums
    if rho.delta < 1e-12:
        return 0.0
    return rho.entropy()


def entropy_series(state: WalkState1D, steps: int) -> tuple[EntropySeries, WalkState1D]:
    """Coin-position entropy at t = 0..steps; also returns the final state."""
    s = np.empty(steps + 1)
    s[0] = coin_position_entropy(state)
    for t in range(1, steps + 1):
        state = step_hadamard(state)
        s[t] = coin_position_entropy(state)
    return EntropySeries(np.arange(steps + 1), s), state


def tail_mean_entropy(state: WalkState1D, steps: int = 400, fraction: float = 0.25) -> float:
    """Late-time entropy: mean over the last ``fraction`` of a ``steps``-long run."""
    series, _ = entropy_series(state, steps)
    n = max(1, int(round(steps * fraction)))
    return float(series.s[-n:].mean())
