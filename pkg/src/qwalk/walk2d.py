"""Two coherent walkers on the line with a shared 4x4 coin.

The coin basis is ordered |00>, |01>, |10>, |11>; the first bit belongs to
walker A (position x), the second to walker B (position y). Bit value 0
moves its walker right, 1 moves it left.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import EntropySeries, NormalizationError, InvariantViolation, schmidt_entropy
from .walk1d import HADAMARD

CHI1 = 0.5 * np.array([1.0, 1.0j, 1.0j, -1.0])
CHI2 = 0.5 * np.array([1.0, -1.0, -1.0, 1.0])

# log-uniform sampling for growth fits
FIT_SCHEDULE = (4, 6, 8, 12, 16, 24, 32, 48, 64, 96)

# (dx, dy) for coin index 0..3
_MOVES = ((1, 1), (1, -1), (-1, 1), (-1, -1))


def check_coin4(matrix) -> np.ndarray:
    u = np.asarray(matrix, dtype=complex)
    if u.shape != (4, 4):
        raise ValueError("two-walker coin must be 4x4")
    if not np.allclose(u.conj().T @ u, np.eye(4), atol=1e-12, rtol=0):
        raise InvariantViolation("coin is not unitary")
    return u


def coin_hadamard2() -> np.ndarray:
    return np.kron(HADAMARD, HADAMARD)


def coin_grover() -> np.ndarray:
    return np.full((4, 4), 0.5) - np.eye(4)


def coin_rp() -> np.ndarray:
    """CNOT (control A) after a Hadamard on A: basis states -> Bell states."""
    cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=float)
    return cnot @ np.kron(HADAMARD, np.eye(2))


COINS = {"h2": coin_hadamard2, "grover": coin_grover, "rp": coin_rp}
INITIAL_COINS = {"chi1": CHI1, "chi2": CHI2}


@dataclass(frozen=True)
class WalkState2D:
    """Amplitudes indexed (coin, x - offset_x, y - offset_y)."""

    offset_x: int
    offset_y: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex)
        if amp.ndim != 3 or amp.shape[0] != 4:
            raise ValueError("amplitudes must have shape (4, nx, ny)")
        object.__setattr__(self, "amplitudes", amp)

    @property
    def xs(self) -> np.ndarray:
        return np.arange(self.offset_x, self.offset_x + self.amplitudes.shape[1])

    @property
    def ys(self) -> np.ndarray:
        return np.arange(self.offset_y, self.offset_y + self.amplitudes.shape[2])

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def make_local_state2(coin4) -> WalkState2D:
    coin4 = np.asarray(coin4, dtype=complex)
    if coin4.shape != (4,):
        raise ValueError("two-walker coin state must have 4 components")
    if abs(np.linalg.norm(coin4) - 1.0) > 1e-9:
        raise NormalizationError("coin state is not normalized")
    return WalkState2D(0, 0, coin4.reshape(4, 1, 1))


def chi1_state() -> WalkState2D:
    return make_local_state2(CHI1)


def chi2_state() -> WalkState2D:
    return make_local_state2(CHI2)


def step2(state: WalkState2D, coin: np.ndarray) -> WalkState2D:
    """Apply the coin on every site pair, then the conditional two-walker shift."""
    psi = np.tensordot(coin, state.amplitudes, axes=(1, 0))
    _, nx, ny = psi.shape
    out = np.zeros((4, nx + 2, ny + 2), dtype=complex)
    for c, (dx, dy) in enumerate(_MOVES):
        out[c, 1 + dx : 1 + dx + nx, 1 + dy : 1 + dy + ny] = psi[c]
    return WalkState2D(state.offset_x - 1, state.offset_y - 1, out)


def evolve2(state: WalkState2D, coin: np.ndarray, steps: int) -> WalkState2D:
    coin = check_coin4(coin)
    for _ in range(steps):
        state = step2(state, coin)
    return state


def joint_distribution(state: WalkState2D) -> np.ndarray:
    """P[x - offset_x, y - offset_y] summed over the four coin components."""
    return np.sum(np.abs(state.amplitudes) ** 2, axis=0)


def marginals(state: WalkState2D) -> tuple[np.ndarray, np.ndarray]:
    p = joint_distribution(state)
    return p.sum(axis=1), p.sum(axis=0)


def central_mass(state: WalkState2D, radius: int = 2) -> float:
    """Probability of |x| <= radius and |y| <= radius."""
    p = joint_distribution(state)
    mx = np.abs(state.xs) <= radius
    my = np.abs(state.ys) <= radius
    return float(p[np.ix_(mx, my)].sum())


def radial_spread(state: WalkState2D) -> float:
    """Root-mean-square distance of the pair (x, y) from the origin."""
    p = joint_distribution(state)
    r2 = state.xs[:, None] ** 2 + state.ys[None, :] ** 2
    return float(np.sqrt(np.sum(p * r2)))


def ab_matrix(state: WalkState2D) -> np.ndarray:
    """Amplitude matrix with rows (coin_A, x) and columns (coin_B, y)."""
    _, nx, ny = state.amplitudes.shape
    amp = state.amplitudes.reshape(2, 2, nx, ny)
    return amp.transpose(0, 2, 1, 3).reshape(2 * nx, 2 * ny)


def bipartite_entropy_ab(state: WalkState2D) -> float:
    """Entanglement between walker A (coin and position) and walker B."""
    return schmidt_entropy(ab_matrix(state))


def reduced_density_a(state: WalkState2D) -> np.ndarray:
    """Explicit reduced density matrix of walker A; quadratic in the window size."""
    m = ab_matrix(state)
    return m @ m.conj().T


def entropy_series2(
    state: WalkState2D, coin: np.ndarray, steps: int, sample_at=None
) -> tuple[EntropySeries, WalkState2D]:
    """A|B entropy at the requested steps (default every step 0..steps)."""
    coin = check_coin4(coin)
    if sample_at is None:
        wanted = set(range(steps + 1))
    else:
        wanted = {int(t) for t in sample_at if 0 <= t <= steps}
    ts, ss = [], []
    for t in range(steps + 1):
        if t > 0:
            state = step2(state, coin)
        if t in wanted:
            ts.append(t)
            ss.append(bipartite_entropy_ab(state))
    return EntropySeries(np.array(ts, dtype=np.int64), np.array(ss)), state
