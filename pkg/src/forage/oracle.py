"""Ground truths for the mean-field system.

Closed-form fixed-point weights, the optimal agent distribution under pure
gradient following, membership in the optimal weight set, stationary
eigenvectors by power iteration, and the exponential-rate bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .doubled import ColumnStochasticMatrix, DoubledGraph
from .errors import NoConvergence
from .graph import bfs_distances
from .kernels import TIE_RTOL, Dynamics, reward_diagonal, transition_operator
from . import meanfield


@dataclass(frozen=True)
class OptimalDistribution:
    y_bar: np.ndarray
    k: int

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.y_bar > 0)


def closed_form_w_inf(dg: DoubledGraph, r: float, lam: float) -> np.ndarray:
    """``(1 + lam + lam**d * r) / (1 - lam**2)`` with ``d`` the in-copy goal distance."""
    if not (0.0 <= lam < 1.0):
        raise ValueError("lam must lie in [0, 1)")
    d = dg.goal_distance
    w = (1.0 + lam + lam ** np.maximum(d, 0) * r) / (1.0 - lam * lam)
    return np.where(dg.active, w, 0.0)


def fixed_point_residual(w: np.ndarray, dg: DoubledGraph, r: float, lam: float) -> float:
    diff = np.abs(w - reward_diagonal(dg, w, r, lam))
    return float(diff[dg.active].max())


def greedy_operator(dg: DoubledGraph, r: float = 5.0, lam: float = 0.9) -> ColumnStochasticMatrix:
    """``P^f(inf, 0)``: gradient following on the fixed-point weights."""
    return transition_operator(dg, closed_form_w_inf(dg, r, lam), 0.0)


def optimal_distribution(dg: DoubledGraph, r: float = 5.0, lam: float = 0.9) -> OptimalDistribution:
    """Spread a ``1/(2k)`` budget forward from S1 along the gradient DAG.

    Each application of the greedy operator moves one layer of the budget one
    hop; after ``k`` hops it sits at T2, after ``2k`` it is back at S1. The
    sum of the ``2k`` layers is the optimal distribution.
    """
    if r <= 0:
        raise ValueError("the gradient DAG needs r > 0")
    k = dg.k
    P = greedy_operator(dg, r, lam)
    layer = np.zeros(dg.dim)
    layer[dg.s1] = 1.0 / (2 * k)
    total = np.zeros(dg.dim)
    for hop in range(2 * k):
        total += layer
        layer = P.matvec(layer)
        if hop + 1 == k and not np.isclose(layer[dg.t2], 1.0 / (2 * k), rtol=0, atol=1e-15):
            raise NoConvergence("gradient paths from S do not reach T in k hops")
    if not np.isclose(layer[dg.s1], 1.0 / (2 * k), rtol=0, atol=1e-15):
        raise NoConvergence("gradient paths from T do not return to S in k hops")
    return OptimalDistribution(total, k)


def _greedy_reaches(dg: DoubledGraph, weights: np.ndarray, start: int, goal: int) -> bool:
    g = dg.base
    k = dg.k
    to_goal = bfs_distances(g, goal)
    wpad = np.append(np.asarray(weights, dtype=float), -np.inf)
    frontier = {start}
    for hop in range(1, k + 1):
        nxt = set()
        for u in frontier:
            nb = [v for v in g.neighbors[u]]
            vals = wpad[nb]
            top = vals.max()
            nxt.update(v for v, x in zip(nb, vals) if x >= top - TIE_RTOL * abs(top))
        if any(to_goal[v] != k - hop for v in nxt):
            return False
        frontier = nxt
    return frontier == {goal}


def is_optimal_weights(w: np.ndarray, dg: DoubledGraph) -> bool:
    """Every greedy branch from S (on w2) and from T (on w1) is a shortest path."""
    V = dg.V
    return _greedy_reaches(dg, w[V:], dg.s_vertex, dg.t_vertex) and _greedy_reaches(
        dg, w[:V], dg.t_vertex, dg.s_vertex
    )


def _restrict(P: ColumnStochasticMatrix, support: np.ndarray) -> ColumnStochasticMatrix:
    pos = np.full(P.dim, -1, dtype=np.int64)
    pos[support] = np.arange(len(support))
    keep = (pos[P.rows] >= 0) & (pos[P.cols] >= 0)
    return ColumnStochasticMatrix(len(support), pos[P.rows[keep]], pos[P.cols[keep]], P.vals[keep])


def stationary_eigenvector(
    P: ColumnStochasticMatrix,
    tol: float = 1e-12,
    max_iter: int = 1_000_000,
    support: Sequence[int] | None = None,
    lazy: bool = False,
    start: np.ndarray | None = None,
) -> np.ndarray:
    """Power iteration for ``P x = x`` on ``support`` (default: nonzero columns).

    ``lazy`` iterates ``(P + I) / 2`` instead, which has the same fixed point
    but no periodic modes. Stops when ``||P x - x||_1 < tol``.
    """
    if support is None:
        support = np.flatnonzero(P.column_sums() > 0)
    support = np.asarray(support, dtype=np.int64)
    Q = _restrict(P, support)
    m = len(support)
    x = np.full(m, 1.0 / m) if start is None else np.asarray(start, dtype=float)[support].copy()
    x /= x.sum()
    for _ in range(max_iter):
        px = Q.matvec(x)
        if np.abs(px - x).sum() < tol:
            break
        x = 0.5 * (px + x) if lazy else px
        x /= x.sum()
    else:
        raise NoConvergence(f"power iteration did not reach tol={tol} in {max_iter} steps")
    out = np.zeros(P.dim)
    out[support] = x
    return out


def rate_bound(eps: float, delta_star: int) -> float:
    """Exponential rate ``(1 - eps**(1+2d))**(1/(1+2d))``."""
    if not (0.0 < eps <= 1.0) or delta_star < 1:
        raise ValueError("need 0 < eps <= 1 and delta_star >= 1")
    e = 1 + 2 * delta_star
    return (1.0 - eps**e) ** (1.0 / e)


def rate_bound_degree(eps: float, delta_star: int, g_max: int) -> float:
    """Degree-corrected variant with per-step floor ``eps / (1 + (g_max - 1) eps)``."""
    if not (0.0 < eps <= 1.0) or delta_star < 1 or g_max < 1:
        raise ValueError("need 0 < eps <= 1, delta_star >= 1, g_max >= 1")
    e = 1 + 2 * delta_star
    floor = eps / (1.0 + (g_max - 1) * eps)
    return (1.0 - floor**e) ** (1.0 / e)


@dataclass(frozen=True)
class GapRow:
    eps: float
    gap: float
    converged: bool
    t_stop: int


def epsilon_gap(
    dg: DoubledGraph,
    eps_list: Sequence[float],
    params: Dynamics,
    max_t: int = 200_000,
    tol: float = 1e-12,
    window: int = 1,
) -> list[GapRow]:
    """``||y(inf, eps) - y_bar||_1`` per exploration rate."""
    y_bar = optimal_distribution(dg, params.r, params.lam).y_bar
    rows = []
    for eps in eps_list:
        if not (0.0 < eps < 1.0):
            raise ValueError(f"eps must lie in (0, 1), got {eps}")
        p = Dynamics(params.rho, params.lam, params.r, float(eps), params.tau)
        state, rep = meanfield.run(dg, p, max_t, tol, window=window)
        rows.append(GapRow(float(eps), float(np.abs(state.y - y_bar).sum()), rep.converged, rep.t_stop))
    return rows
