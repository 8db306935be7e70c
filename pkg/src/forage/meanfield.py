"""Deterministic mean-field dynamics of the doubled foraging system."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .doubled import ColumnStochasticMatrix, DoubledGraph
from .kernels import (
    Dynamics,
    check_epsilon,
    pf_padded,
    reward_diagonal,
    weight_step,
)


@dataclass(frozen=True)
class MeanFieldState:
    t: int
    y: np.ndarray
    w: np.ndarray


@dataclass
class ConvergenceReport:
    converged: bool
    t_stop: int
    y_residual: float
    w_residual: float
    samples: list[tuple[int, float, float]] = field(default_factory=list)


def occupied_indicator(y: np.ndarray, tau: float = 1e-12) -> np.ndarray:
    if tau < 0:
        raise ValueError("tau must be >= 0")
    return (np.asarray(y) > tau).astype(float)


def init_mean_field(dg: DoubledGraph, w0: float = 0.0) -> MeanFieldState:
    y = np.zeros(dg.dim)
    y[dg.s1] = 1.0
    w = np.where(dg.active, float(w0), 0.0)
    return MeanFieldState(0, y, w)


def advance(dg: DoubledGraph, y: np.ndarray, w: np.ndarray, p: Dynamics):
    """One synchronous update; kernel from ``w(t)``, reinforcement from ``y(t)``."""
    vals = pf_padded(dg, w, p.eps)
    rows = dg.pf_rows
    mask = rows >= 0
    y_next = np.bincount(rows[mask], weights=(vals * y[:, None])[mask], minlength=dg.dim)
    diag = reward_diagonal(dg, w, p.r, p.lam)
    w_next = weight_step(w, occupied_indicator(y, p.tau), diag, p.rho)
    return y_next, w_next


def mf_step(dg: DoubledGraph, state: MeanFieldState, p: Dynamics) -> MeanFieldState:
    check_epsilon(p.eps)
    y, w = advance(dg, state.y, state.w, p)
    return MeanFieldState(state.t + 1, y, w)


def run(
    dg: DoubledGraph,
    p: Dynamics,
    max_t: int,
    tol: float,
    window: int = 1,
    sample_every: int = 0,
    callback: Callable[[MeanFieldState], None] | None = None,
    state: MeanFieldState | None = None,
) -> tuple[MeanFieldState, ConvergenceReport]:
    """Iterate until both residuals stay below ``tol`` for ``window`` steps.

    Residuals are ``||y(t+1) - y(t)||_1`` and ``||w(t+1) - w(t)||_inf``.
    ``callback`` sees every state, including the initial one.
    """
    if max_t < 1:
        raise ValueError("max_t must be >= 1")
    if not tol > 0:
        raise ValueError("tol must be > 0")
    check_epsilon(p.eps)
    if state is None:
        state = init_mean_field(dg)
    if callback is not None:
        callback(state)
    y, w, t = state.y, state.w, state.t
    recent: deque[tuple[float, float]] = deque(maxlen=max(1, window))
    samples = []
    converged = False
    ry = rw = float("inf")
    for _ in range(max_t):
        y_next, w_next = advance(dg, y, w, p)
        ry = float(np.abs(y_next - y).sum())
        rw = float(np.abs(w_next - w).max())
        y, w, t = y_next, w_next, t + 1
        if callback is not None:
            callback(MeanFieldState(t, y, w))
        if sample_every and t % sample_every == 0:
            samples.append((t, ry, rw))
        recent.append((ry, rw))
        if len(recent) == recent.maxlen and all(a < tol and b < tol for a, b in recent):
            converged = True
            break
    final = MeanFieldState(t, y, w)
    return final, ConvergenceReport(converged, t, ry, rw, samples)


def trajectory(dg: DoubledGraph, p: Dynamics, steps: int) -> np.ndarray:
    """``y(0..steps)`` stacked into a ``(steps + 1, 2V)`` array."""
    out = np.empty((steps + 1, dg.dim))
    state = init_mean_field(dg)
    out[0] = state.y
    y, w = state.y, state.w
    for t in range(1, steps + 1):
        y, w = advance(dg, y, w, p)
        out[t] = y
    return out


