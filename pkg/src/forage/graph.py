"""Undirected base graphs, triangular lattices and hop-distance structure.

Vertex ids are dense integers ``0..V-1``. Lattice graphs additionally carry
the ``(row, col)`` cell of every vertex and a 2D position used for rendering.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import BipartiteGraph, DisconnectedGraph, InvalidGraph

Cell = tuple[int, int]


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    edges: frozenset[tuple[int, int]]
    coords: np.ndarray | None = field(default=None, compare=False)
    cells: tuple[Cell, ...] | None = None

    @classmethod
    def from_edges(
        cls,
        vertex_count: int,
        edges: Iterable[tuple[int, int]],
        coords=None,
        cells: Sequence[Cell] | None = None,
    ) -> "Graph":
        norm = set()
        for i, j in edges:
            i, j = int(i), int(j)
            if i == j:
                raise InvalidGraph(f"self-loop at vertex {i}")
            if not (0 <= i < vertex_count and 0 <= j < vertex_count):
                raise InvalidGraph(f"edge ({i}, {j}) out of range")
            norm.add((min(i, j), max(i, j)))
        if coords is not None:
            coords = np.asarray(coords, dtype=float).reshape(vertex_count, 2)
        if cells is not None:
            cells = tuple((int(r), int(c)) for r, c in cells)
        return cls(vertex_count, frozenset(norm), coords, cells)

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def degree(self) -> np.ndarray:
        return np.array([len(a) for a in self.neighbors], dtype=np.int64)

    @cached_property
    def padded_neighbors(self) -> np.ndarray:
        """``(V, max_degree)`` neighbor table, ascending, padded with ``V``."""
        width = int(self.degree.max()) if self.vertex_count else 0
        table = np.full((self.vertex_count, max(width, 1)), self.vertex_count, dtype=np.int64)
        for i, nb in enumerate(self.neighbors):
            table[i, : len(nb)] = nb
        return table

    @cached_property
    def cell_index(self) -> dict[Cell, int]:
        if self.cells is None:
            return {}
        return {cell: i for i, cell in enumerate(self.cells)}

    def vertex_of(self, cell: Cell) -> int:
        try:
            return self.cell_index[tuple(cell)]
        except KeyError:
            raise InvalidGraph(f"cell {tuple(cell)} is not a vertex of this graph") from None

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.vertex_count, self.vertex_count))
        for i, j in self.edges:
            a[i, j] = a[j, i] = 1.0
        return a


@dataclass(frozen=True)
class ValidationReport:
    connected: bool
    odd_cycle: bool
    vertex_count: int
    edge_count: int

    @property
    def ok(self) -> bool:
        return self.connected and self.odd_cycle


@dataclass(frozen=True)
class ShortestPathStructure:
    source: int
    dist: np.ndarray
    dag_parents: tuple[tuple[int, ...], ...]


def lattice_neighbors(row: int, col: int) -> list[Cell]:
    """E, W, NE, NW, SE, SW cells of ``(row, col)``; odd rows sit half a cell right."""
    shift = 0 if row % 2 == 0 else 1
    out = [(row, col + 1), (row, col - 1)]
    for dr in (-1, 1):
        out.append((row + dr, col - 1 + shift))
        out.append((row + dr, col + shift))
    return out


def build_triangular_lattice(rows: int, cols: int, obstacles: Iterable[Cell] = ()) -> Graph:
    if rows < 2 or cols < 2:
        raise InvalidGraph("lattice needs rows, cols >= 2")
    blocked = {(int(r), int(c)) for r, c in obstacles}
    cells = [(r, c) for r in range(rows) for c in range(cols) if (r, c) not in blocked]
    if not cells:
        raise DisconnectedGraph("every cell is an obstacle")
    index = {cell: i for i, cell in enumerate(cells)}
    edges = []
    for cell, i in index.items():
        for nb in lattice_neighbors(*cell):
            j = index.get(nb)
            if j is not None and i < j:
                edges.append((i, j))
    coords = [(c + 0.5 * (r % 2), r * np.sqrt(3.0) / 2.0) for r, c in cells]
    g = Graph.from_edges(len(cells), edges, coords=coords, cells=cells)
    report = validate(g)
    if not report.connected:
        raise DisconnectedGraph(f"obstacles split the {rows}x{cols} lattice")
    if not report.odd_cycle:
        raise BipartiteGraph(f"{rows}x{cols} lattice has no odd cycle left")
    return g


def bfs_distances(g: Graph, source: int, blocked: Iterable[int] = ()) -> np.ndarray:
    """Hop distances from ``source``; unreachable (or blocked) vertices get -1."""
    dist = np.full(g.vertex_count, -1, dtype=np.int64)
    skip = set(blocked)
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in g.neighbors[u]:
            if dist[v] < 0 and v not in skip:
                dist[v] = dist[u] + 1
                queue.append(v)
    for v in skip:
        if v != source:
            dist[v] = -1
    return dist


def validate(g: Graph) -> ValidationReport:
    n = g.vertex_count
    color = np.full(n, -1, dtype=np.int64)
    bipartite = True
    seen = 0
    # 2-colour every component; connectivity is judged from vertex 0 only
    for root in range(n):
        if color[root] >= 0:
            continue
        color[root] = 0
        queue = deque([root])
        count = 1
        while queue:
            u = queue.popleft()
            for v in g.neighbors[u]:
                if color[v] < 0:
                    color[v] = 1 - color[u]
                    count += 1
                    queue.append(v)
                elif color[v] == color[u]:
                    bipartite = False
        if root == 0:
            seen = count
    return ValidationReport(
        connected=(n > 0 and seen == n),
        odd_cycle=not bipartite,
        vertex_count=n,
        edge_count=len(g.edges),
    )


def shortest_paths(g: Graph, source: int) -> ShortestPathStructure:
    dist = bfs_distances(g, source)
    parents = tuple(
        tuple(v for v in g.neighbors[u] if dist[v] >= 0 and dist[v] == dist[u] - 1)
        for u in range(g.vertex_count)
    )
    return ShortestPathStructure(source, dist, parents)


def diameter(g: Graph) -> int:
    return int(max(bfs_distances(g, s).max() for s in range(g.vertex_count)))


def optimal_path_vertices(g: Graph, s: int, t: int) -> tuple[int, frozenset[int], dict[int, int]]:
    """Length ``k`` of the shortest s-t paths, the vertices on any of them, and
    the number of shortest ``s -> v`` prefixes for each such vertex."""
    if s == t:
        raise ValueError("s and t must differ")
    ds = bfs_distances(g, s)
    dt = bfs_distances(g, t)
    k = int(ds[t])
    if k < 0:
        raise DisconnectedGraph(f"{t} unreachable from {s}")
    on_path = [v for v in range(g.vertex_count) if ds[v] >= 0 and ds[v] + dt[v] == k]
    on_path.sort(key=lambda v: ds[v])
    members = frozenset(on_path)
    counts: dict[int, int] = {s: 1}
    for v in on_path:
        if v == s:
            continue
        counts[v] = sum(counts[u] for u in g.neighbors[v] if u in members and ds[u] == ds[v] - 1)
    return k, members, counts
