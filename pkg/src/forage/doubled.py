"""Two interconnected copies of a base graph and the block transition operator.

Doubled index ``v`` is vertex ``v`` of copy 1 (agents seeking the target),
index ``V + v`` is vertex ``v`` of copy 2 (agents returning to the source).
Copy-1 agents that step onto T are moved to T in copy 2; copy-2 agents that
step onto S are moved to S in copy 1. The two images T1 and S2 are kept in
the index space but never receive mass.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import AdjacentGoals, DimensionMismatch, InvalidGraph
from .graph import Graph, bfs_distances, validate

STOCHASTIC_TOL = 1e-12


@dataclass(frozen=True)
class ColumnStochasticMatrix:
    """Sparse column-stochastic matrix in column-major COO form.

    Entries are ordered by column, then by ascending row; ``matvec`` sums
    contributions in that order so results are reproducible bit for bit.
    """

    dim: int
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray

    def __post_init__(self):
        if not (len(self.rows) == len(self.cols) == len(self.vals)):
            raise DimensionMismatch("rows/cols/vals lengths differ")

    def matvec(self, y: np.ndarray) -> np.ndarray:
        return np.bincount(self.rows, weights=self.vals * y[self.cols], minlength=self.dim)

    def column_sums(self) -> np.ndarray:
        return np.bincount(self.cols, weights=self.vals, minlength=self.dim)

    def column(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        mask = self.cols == i
        return self.rows[mask], self.vals[mask]

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim))
        np.add.at(out, (self.rows, self.cols), self.vals)
        return out

    def is_stochastic(self, columns=None, tol: float = STOCHASTIC_TOL) -> bool:
        sums = self.column_sums()
        if columns is not None:
            sums = sums[columns]
        return bool(np.all(self.vals >= 0) and np.all(np.abs(sums - 1.0) <= tol))

    @classmethod
    def from_padded(cls, rows2d: np.ndarray, vals2d: np.ndarray) -> "ColumnStochasticMatrix":
        mask = rows2d >= 0
        cols = np.nonzero(mask)[0]
        return cls(rows2d.shape[0], rows2d[mask], cols, vals2d[mask])


@dataclass(frozen=True, eq=False)
class DoubledGraph:
    base: Graph
    s_vertex: int
    t_vertex: int

    @property
    def V(self) -> int:
        return self.base.vertex_count

    @property
    def dim(self) -> int:
        return 2 * self.base.vertex_count

    def idx(self, copy: int, v: int) -> int:
        if copy not in (1, 2):
            raise ValueError("copy must be 1 or 2")
        return v if copy == 1 else self.V + v

    def locate(self, index: int) -> tuple[int, int]:
        return (1, index) if index < self.V else (2, index - self.V)

    @property
    def s1(self) -> int:
        return self.s_vertex

    @property
    def t2(self) -> int:
        return self.V + self.t_vertex

    @property
    def removed(self) -> tuple[int, int]:
        return (self.t_vertex, self.V + self.s_vertex)

    @cached_property
    def active(self) -> np.ndarray:
        mask = np.ones(self.dim, dtype=bool)
        mask[list(self.removed)] = False
        return mask

    @cached_property
    def goal_distance(self) -> np.ndarray:
        """Hop distance to the rewarded vertex of each copy inside that copy.

        Copy 1 measures from S with T removed, copy 2 from T with S removed;
        removed images get -1.
        """
        d1 = bfs_distances(self.base, self.s_vertex, blocked=[self.t_vertex])
        d2 = bfs_distances(self.base, self.t_vertex, blocked=[self.s_vertex])
        return np.concatenate([d1, d2])

    @cached_property
    def k(self) -> int:
        return int(bfs_distances(self.base, self.s_vertex)[self.t_vertex])

    @cached_property
    def _layout(self) -> tuple[np.ndarray, np.ndarray]:
        """Padded row table and source slots for the block operator.

        Row ``c`` lists the doubled rows reachable from column ``c`` in
        ascending order; ``src`` points into the flattened concatenation of
        the copy-1 and copy-2 base kernels (padded with a trailing zero).
        """
        V = self.V
        nbr = self.base.padded_neighbors
        width = nbr.shape[1]
        base_size = V * width
        pad = 2 * base_size
        rows = np.full((self.dim, width), -1, dtype=np.int64)
        src = np.full((self.dim, width), pad, dtype=np.int64)
        s, t = self.s_vertex, self.t_vertex
        for copy in (1, 2):
            for i in range(V):
                col = self.idx(copy, i)
                if not self.active[col]:
                    continue
                entries = []
                for slot, j in enumerate(nbr[i]):
                    if j >= V:
                        break
                    if copy == 1:
                        row = V + t if j == t else j
                    else:
                        row = s if j == s else V + j
                    entries.append((row, (copy - 1) * base_size + i * width + slot))
                entries.sort()
                for slot, (row, where) in enumerate(entries):
                    rows[col, slot] = row
                    src[col, slot] = where
        return rows, src

    @property
    def pf_rows(self) -> np.ndarray:
        return self._layout[0]

    def assemble_padded(self, seek: np.ndarray, back: np.ndarray) -> np.ndarray:
        """Block operator values (padded form) from base kernel tables.

        ``seek`` is the ``(V, width)`` table copy-1 agents move with (built
        from copy-2 weights); ``back`` is the one copy-2 agents move with.
        """
        flat = np.concatenate([seek.ravel(), back.ravel(), [0.0]])
        return flat[self._layout[1]]


def build_doubled(g: Graph, s: int, t: int) -> DoubledGraph:
    report = validate(g)
    if not report.ok:
        raise InvalidGraph(f"graph fails validation: {report}")
    if not (0 <= s < g.vertex_count and 0 <= t < g.vertex_count):
        raise InvalidGraph("s/t out of range")
    d = bfs_distances(g, s)
    if d[t] <= 1:
        raise AdjacentGoals(f"distance between s={s} and t={t} is {d[t]}, need > 1")
    dg = DoubledGraph(g, int(s), int(t))
    dist = dg.goal_distance
    if np.any(dist[dg.active] < 0):
        raise InvalidGraph("removing a goal vertex disconnects one copy of the graph")
    return dg


def assemble_pf(
    dg: DoubledGraph, p1: ColumnStochasticMatrix, p2: ColumnStochasticMatrix
) -> ColumnStochasticMatrix:
    """Block operator from base kernels ``p1`` (built from w1) and ``p2`` (from w2).

    Copy-1 columns use ``p2`` and copy-2 columns use ``p1``.
    """
    V = dg.V
    if p1.dim != V or p2.dim != V:
        raise DimensionMismatch(f"kernels must be {V}x{V}, got {p1.dim} and {p2.dim}")
    s, t = dg.s_vertex, dg.t_vertex

    keep2 = p2.cols != t
    r2, c2, v2 = p2.rows[keep2], p2.cols[keep2], p2.vals[keep2]
    r2 = np.where(r2 == t, V + t, r2)

    keep1 = p1.cols != s
    r1, c1, v1 = p1.rows[keep1], p1.cols[keep1] + V, p1.vals[keep1]
    r1 = np.where(r1 == s, s, V + r1)

    rows = np.concatenate([r2, r1])
    cols = np.concatenate([c2, c1])
    vals = np.concatenate([v2, v1])
    order = np.lexsort((rows, cols))
    return ColumnStochasticMatrix(dg.dim, rows[order], cols[order], vals[order])
