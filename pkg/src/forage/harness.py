"""Finite-swarm error statistics against the mean-field stationary density."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .doubled import DoubledGraph
from .errors import NoConvergence
from .kernels import Dynamics
from . import meanfield, swarm


@dataclass(frozen=True)
class ErrorStats:
    n: int
    times: np.ndarray
    e_norm: np.ndarray
    var_norm: np.ndarray
    K: int
    base_seed: int

    def at(self, t: int) -> tuple[float, float]:
        i = int(np.flatnonzero(self.times == t)[0])
        return float(self.e_norm[i]), float(self.var_norm[i])


@dataclass(frozen=True)
class Table2Row:
    r: float
    rho: float
    n: int
    e_norm: float
    var_norm: float


def worker_count() -> int:
    raw = os.environ.get("FORAGE_THREADS")
    cap = os.cpu_count() or 1
    if raw:
        try:
            cap = max(1, min(cap, int(raw)))
        except ValueError:
            pass
    return cap


def sample_times(horizon: int, stride: int = 50) -> np.ndarray:
    times = set(range(0, horizon + 1, stride))
    times.add(horizon)
    return np.array(sorted(times), dtype=np.int64)


def stationary_reference(
    dg: DoubledGraph, p: Dynamics, max_t: int = 200_000, tol: float = 1e-10
) -> np.ndarray:
    state, rep = meanfield.run(dg, p, max_t, tol)
    if not rep.converged:
        raise NoConvergence(f"mean-field reference did not converge in {max_t} steps")
    return state.y


def aggregate(nu: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sample mean and population variance over axis 0, then l2 over vertices."""
    mean = nu.mean(axis=0)
    var = ((nu - mean) ** 2).mean(axis=0)
    return np.linalg.norm(mean, axis=-1), np.linalg.norm(var, axis=-1)


def _replica(args) -> np.ndarray:
    dg, p, n, horizon, seed, times = args
    traj = swarm.run_swarm(dg, p, n, horizon, seed, times=times, keep_weights=False)
    return np.array(traj.occupancy)


def replica_occupancy(
    dg: DoubledGraph, p: Dynamics, n: int, seeds: Sequence[int], horizon: int, times: np.ndarray
) -> np.ndarray:
    """``(len(seeds), len(times), 2V)`` occupancy, rows in the order of ``seeds``."""
    jobs = [(dg, p, n, horizon, int(s), [int(t) for t in times]) for s in seeds]
    workers = min(worker_count(), len(jobs))
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            out = list(pool.map(_replica, jobs))
    else:
        out = [_replica(j) for j in jobs]
    return np.stack(out)


def error_stats(
    dg: DoubledGraph,
    p: Dynamics,
    n: int,
    K: int,
    horizon: int,
    base_seed: int,
    y_inf: np.ndarray,
    stride: int = 50,
    seeds: Sequence[int] | None = None,
) -> ErrorStats:
    if K < 2:
        raise ValueError("K must be >= 2")
    if seeds is None:
        seeds = range(base_seed, base_seed + K)
    seeds = sorted(int(s) for s in seeds)
    if len(seeds) != K:
        raise ValueError("need exactly K seeds")
    times = sample_times(horizon, stride)
    occ = replica_occupancy(dg, p, n, seeds, horizon, times)
    e, v = aggregate(occ - y_inf)
    return ErrorStats(n, times, e, v, K, base_seed)


def agent_sweep(
    dg: DoubledGraph,
    p: Dynamics,
    n_list: Sequence[int],
    K: int,
    horizon: int,
    base_seed: int = 0,
    y_inf: np.ndarray | None = None,
    stride: int = 50,
) -> dict[int, ErrorStats]:
    if not n_list:
        raise ValueError("n_list must be nonempty")
    if y_inf is None:
        y_inf = stationary_reference(dg, p)
    return {int(n): error_stats(dg, p, int(n), K, horizon, base_seed, y_inf, stride) for n in n_list}


def table2_grid(
    dg: DoubledGraph,
    base: Dynamics,
    grid: Sequence[tuple[float, float, int]],
    K: int,
    t_bar: int,
    base_seed: int = 0,
) -> list[Table2Row]:
    """One row per ``(r, rho, n)``; the reference density is shared per ``(r, rho)``."""
    if not grid:
        raise ValueError("grid must be nonempty")
    refs: dict[tuple[float, float], np.ndarray] = {}
    rows = []
    for r, rho, n in grid:
        p = replace(base, r=float(r), rho=float(rho))
        key = (p.r, p.rho)
        if key not in refs:
            refs[key] = stationary_reference(dg, p)
        stats = error_stats(dg, p, int(n), K, t_bar, base_seed, refs[key], stride=t_bar)
        e, v = stats.at(t_bar)
        rows.append(Table2Row(p.r, p.rho, int(n), e, v))
    return rows
