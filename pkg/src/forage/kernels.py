"""Transition kernels, the reward diagonal and the saturated weight update.

Base kernels are computed as padded ``(V, width)`` tables aligned with
``Graph.padded_neighbors``: entry ``[i, slot]`` is the probability of moving
from ``i`` to ``padded_neighbors[i, slot]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .doubled import ColumnStochasticMatrix, DoubledGraph
from .errors import InvalidEpsilon
from .graph import Graph

TIE_RTOL = 1e-9
SGN_TAU = 1e-12


@dataclass(frozen=True)
class Dynamics:
    """Evaporation ``rho``, diffusion ``lam``, goal reward ``r``, exploration ``eps``."""

    rho: float = 0.005
    lam: float = 0.9
    r: float = 5.0
    eps: float = 0.5
    tau: float = SGN_TAU


def _padded_to_matrix(g: Graph, table: np.ndarray) -> ColumnStochasticMatrix:
    nbr = g.padded_neighbors
    rows = np.where(nbr < g.vertex_count, nbr, -1)
    return ColumnStochasticMatrix.from_padded(rows, table)


def uniform_table(g: Graph) -> np.ndarray:
    valid = g.padded_neighbors < g.vertex_count
    return valid / g.degree[:, None]


def gradient_table(g: Graph, w: np.ndarray) -> np.ndarray:
    nbr = g.padded_neighbors
    valid = nbr < g.vertex_count
    wn = np.append(np.asarray(w, dtype=float), -np.inf)[nbr]
    top = wn.max(axis=1, keepdims=True)
    is_max = valid & (wn >= top - TIE_RTOL * np.abs(top))
    return is_max / is_max.sum(axis=1, keepdims=True)


def kernel_table(g: Graph, w: np.ndarray, eps: float) -> np.ndarray:
    """Epsilon-greedy table; ``eps = 0`` gives the pure gradient kernel."""
    if eps == 1.0:
        return uniform_table(g)
    if eps == 0.0:
        return gradient_table(g, w)
    return eps * uniform_table(g) + (1.0 - eps) * gradient_table(g, w)


def uniform_walk(g: Graph) -> ColumnStochasticMatrix:
    return _padded_to_matrix(g, uniform_table(g))


def gradient_matrix(g: Graph, w: np.ndarray) -> ColumnStochasticMatrix:
    return _padded_to_matrix(g, gradient_table(g, w))


def check_epsilon(eps: float) -> float:
    eps = float(eps)
    if not (0.0 < eps <= 1.0):
        raise InvalidEpsilon(f"epsilon must lie in (0, 1], got {eps}")
    return eps


def epsilon_greedy(g: Graph, w: np.ndarray, eps: float) -> ColumnStochasticMatrix:
    return _padded_to_matrix(g, kernel_table(g, w, check_epsilon(eps)))


def pf_padded(dg: DoubledGraph, w: np.ndarray, eps: float) -> np.ndarray:
    """Padded values of the block operator for the doubled weight vector ``w``."""
    V = dg.V
    seek = kernel_table(dg.base, w[V:], eps)
    back = kernel_table(dg.base, w[:V], eps)
    return dg.assemble_padded(seek, back)


def transition_operator(dg: DoubledGraph, w: np.ndarray, eps: float) -> ColumnStochasticMatrix:
    """Block operator ``P^f`` for weights ``w``; ``eps = 0`` is allowed here."""
    return ColumnStochasticMatrix.from_padded(dg.pf_rows, pf_padded(dg, w, eps))


def best_neighbor_weight(g: Graph, w_copy: np.ndarray) -> np.ndarray:
    wn = np.append(np.asarray(w_copy, dtype=float), -np.inf)[g.padded_neighbors]
    return wn.max(axis=1)


def goal_reward(dg: DoubledGraph, r: float) -> np.ndarray:
    gamma = np.zeros(dg.dim)
    gamma[dg.s1] = r
    gamma[dg.t2] = r
    return gamma


def reward_diagonal(dg: DoubledGraph, w: np.ndarray, r: float, lam: float) -> np.ndarray:
    """Diagonal of ``I + Gamma(r) + lam * V(W)``, each copy using its own weights."""
    V = dg.V
    best = np.concatenate(
        [best_neighbor_weight(dg.base, w[:V]), best_neighbor_weight(dg.base, w[V:])]
    )
    return 1.0 + goal_reward(dg, r) + lam * best


def weight_step(w: np.ndarray, occupied: np.ndarray, diag: np.ndarray, rho: float) -> np.ndarray:
    return (1.0 - rho) * w + rho * diag * occupied
