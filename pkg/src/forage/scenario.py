"""Turning configs into doubled graphs, plus small named and random fixtures."""

from __future__ import annotations

import numpy as np

from .config import ScenarioConfig
from .doubled import DoubledGraph, build_doubled
from .errors import InvalidGraph
from .graph import Graph, build_triangular_lattice


def build_scenario(cfg: ScenarioConfig) -> DoubledGraph:
    g = build_triangular_lattice(cfg.rows, cfg.cols, cfg.obstacles)
    return build_doubled(g, g.vertex_of(cfg.s_cell), g.vertex_of(cfg.t_cell))


def triangle_strip(count: int = 5) -> Graph:
    """Vertices ``0..count-1`` with edges ``(i, i+1)`` and ``(i, i+2)``."""
    edges = [(i, i + 1) for i in range(count - 1)] + [(i, i + 2) for i in range(count - 2)]
    return Graph.from_edges(count, edges)


def five_vertex_fixture() -> DoubledGraph:
    """Strip of three triangles, S = 0, T = 4 (two hops apart)."""
    return build_doubled(triangle_strip(5), 0, 4)


def lattice_fixture(rows: int = 3, cols: int = 3) -> DoubledGraph:
    g = build_triangular_lattice(rows, cols)
    return build_doubled(g, g.vertex_of((0, 0)), g.vertex_of((rows - 1, cols - 1)))


def random_scenario(
    rng: np.random.Generator,
    rows=(3, 8),
    cols=(3, 8),
    obstacle_frac: float = 0.15,
    max_tries: int = 1000,
) -> DoubledGraph:
    """Random lattice with random obstacle cells and goals, rejection-sampled
    until every precondition of the doubled system holds."""
    for _ in range(max_tries):
        nr = int(rng.integers(rows[0], rows[1] + 1))
        nc = int(rng.integers(cols[0], cols[1] + 1))
        cells = [(r, c) for r in range(nr) for c in range(nc)]
        n_obs = int(rng.binomial(len(cells), obstacle_frac))
        picks = rng.choice(len(cells), size=n_obs + 2, replace=False)
        obstacles = [cells[i] for i in picks[:n_obs]]
        s_cell, t_cell = cells[picks[n_obs]], cells[picks[n_obs + 1]]
        try:
            g = build_triangular_lattice(nr, nc, obstacles)
            return build_doubled(g, g.vertex_of(s_cell), g.vertex_of(t_cell))
        except InvalidGraph:
            continue
    raise InvalidGraph("no valid random scenario found")
