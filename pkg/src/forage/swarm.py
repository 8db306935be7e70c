"""Monte Carlo simulation of the finite foraging swarm.

Randomness is counter based: step ``t`` of a run with seed ``s`` draws from a
Philox generator keyed by ``(s, t)``, and agent ``a`` consumes the ``a``-th
uniform of that block. A trajectory therefore does not depend on the order in
which agents are processed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .doubled import DoubledGraph
from .kernels import Dynamics, check_epsilon, pf_padded, reward_diagonal, weight_step


def step_uniforms(seed: int, t: int, n: int) -> np.ndarray:
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, t & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key)).random(n)


@dataclass(frozen=True)
class SwarmState:
    t: int
    positions: np.ndarray
    w: np.ndarray
    seed: int

    @property
    def n(self) -> int:
        return len(self.positions)

    @property
    def rng_state(self) -> tuple[int, int]:
        return (self.seed, self.t)

    def counts(self, dim: int) -> np.ndarray:
        return np.bincount(self.positions, minlength=dim)


@dataclass
class SwarmTrajectory:
    times: list[int] = field(default_factory=list)
    occupancy: list[np.ndarray] = field(default_factory=list)
    weights: list[np.ndarray] = field(default_factory=list)
    final: SwarmState | None = None


def init_swarm(dg: DoubledGraph, n: int, seed: int, w0: float = 0.0) -> SwarmState:
    if n < 1:
        raise ValueError("n must be >= 1")
    positions = np.full(n, dg.s1, dtype=np.int64)
    w = np.where(dg.active, float(w0), 0.0)
    return SwarmState(0, positions, w, int(seed))


def occupancy(state: SwarmState, dim: int) -> np.ndarray:
    return state.counts(dim) / state.n


def sample_moves(dg: DoubledGraph, vals: np.ndarray, positions: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Inverse-CDF draw along each agent's column, neighbors in ascending order."""
    cdf = np.cumsum(vals[positions], axis=1)
    rows = dg.pf_rows[positions]
    slot = (u[:, None] >= cdf).sum(axis=1)
    last = (rows >= 0).sum(axis=1) - 1
    slot = np.minimum(slot, last)
    return rows[np.arange(len(positions)), slot]


def swarm_step(dg: DoubledGraph, state: SwarmState, p: Dynamics) -> SwarmState:
    check_epsilon(p.eps)
    vals = pf_padded(dg, state.w, p.eps)
    u = step_uniforms(state.seed, state.t, state.n)
    moved = sample_moves(dg, vals, state.positions, u)
    occupied = (state.counts(dg.dim) > 0).astype(float)
    diag = reward_diagonal(dg, state.w, p.r, p.lam)
    w = weight_step(state.w, occupied, diag, p.rho)
    return SwarmState(state.t + 1, moved, w, state.seed)


def run_swarm(
    dg: DoubledGraph,
    p: Dynamics,
    n: int,
    horizon: int,
    seed: int,
    stride: int = 1,
    times=None,
    keep_weights: bool = True,
) -> SwarmTrajectory:
    """Simulate ``horizon`` steps, snapshotting at multiples of ``stride``
    (or at the explicit ``times``) plus the final step."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    wanted = set(range(0, horizon + 1, max(1, stride))) if times is None else set(times)
    wanted.add(horizon)
    state = init_swarm(dg, n, seed)
    traj = SwarmTrajectory()

    def snap(s: SwarmState):
        traj.times.append(s.t)
        traj.occupancy.append(occupancy(s, dg.dim))
        if keep_weights:
            traj.weights.append(s.w.copy())

    if 0 in wanted:
        snap(state)
    for _ in range(horizon):
        state = swarm_step(dg, state, p)
        if state.t in wanted:
            snap(state)
    traj.final = state
    return traj
