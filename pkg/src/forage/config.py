"""Flat ``key = value`` scenario files."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ParseError, RangeError
from .graph import Cell
from .kernels import Dynamics

# file key -> dataclass field
KEYS = {
    "rows": "rows",
    "cols": "cols",
    "obstacles": "obstacles",
    "s_cell": "s_cell",
    "t_cell": "t_cell",
    "rho": "rho",
    "lambda": "lam",
    "r": "r",
    "epsilon": "eps",
    "n": "n",
    "K": "K",
    "horizon": "horizon",
    "max_t": "max_t",
    "tol": "tol",
    "seed": "seed",
    "snapshot_stride": "snapshot_stride",
    "w0": "w0",
    "window": "window",
}
REQUIRED = ("rows", "cols")
INT_KEYS = {"rows", "cols", "n", "K", "horizon", "max_t", "seed", "snapshot_stride", "window"}
FLOAT_KEYS = {"rho", "lambda", "r", "epsilon", "tol", "w0"}


@dataclass(frozen=True)
class ScenarioConfig:
    rows: int
    cols: int
    obstacles: tuple[Cell, ...] = ()
    s_cell: Cell | None = None
    t_cell: Cell | None = None
    rho: float = 0.005
    lam: float = 0.9
    r: float = 5.0
    eps: float = 0.5
    n: int = 600
    K: int = 100
    horizon: int = 5000
    max_t: int = 100_000
    tol: float = 1e-10
    seed: int = 0
    snapshot_stride: int = 50
    w0: float = 0.0
    window: int = 1

    def __post_init__(self):
        # goals default to the corners inset by a sixth of the lattice
        if self.s_cell is None:
            object.__setattr__(self, "s_cell", (self.rows // 6, self.cols // 6))
        if self.t_cell is None:
            object.__setattr__(
                self, "t_cell", (self.rows - 1 - self.rows // 6, self.cols - 1 - self.cols // 6)
            )
        object.__setattr__(self, "obstacles", tuple(sorted(tuple(c) for c in self.obstacles)))
        object.__setattr__(self, "s_cell", tuple(self.s_cell))
        object.__setattr__(self, "t_cell", tuple(self.t_cell))
        check_ranges(self)

    def dynamics(self) -> Dynamics:
        return Dynamics(rho=self.rho, lam=self.lam, r=self.r, eps=self.eps)


def check_ranges(c: ScenarioConfig) -> None:
    def need(ok: bool, key: str, msg: str):
        if not ok:
            raise RangeError(key, msg)

    need(c.rows >= 2, "rows", "must be >= 2")
    need(c.cols >= 2, "cols", "must be >= 2")
    need(0 < c.rho < 1, "rho", "must lie in (0, 1)")
    need(0 < c.lam < 1, "lambda", "must lie in (0, 1)")
    need(c.r >= 0, "r", "must be >= 0")
    need(0 < c.eps <= 1, "epsilon", "must lie in (0, 1]")
    need(c.n >= 1, "n", "must be >= 1")
    need(c.K >= 1, "K", "must be >= 1")
    need(c.horizon >= 1, "horizon", "must be >= 1")
    need(c.max_t >= 1, "max_t", "must be >= 1")
    need(c.tol > 0, "tol", "must be > 0")
    need(c.snapshot_stride >= 1, "snapshot_stride", "must be >= 1")
    need(c.window >= 1, "window", "must be >= 1")
    need(c.w0 >= 0, "w0", "must be >= 0")
    for key in ("s_cell", "t_cell"):
        r, col = getattr(c, key)
        need(0 <= r < c.rows and 0 <= col < c.cols, key, "outside the lattice")
        need((r, col) not in set(c.obstacles), key, "is an obstacle")
    need(c.s_cell != c.t_cell, "t_cell", "must differ from s_cell")


def _parse_cell(text: str, line: int) -> Cell:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise ParseError(f"expected 'row,col', got {text!r}", line)
    try:
        return (int(parts[0]), int(parts[1]))
    except ValueError:
        raise ParseError(f"non-integer cell {text!r}", line) from None


def parse_text(text: str) -> ScenarioConfig:
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {line!r}", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KEYS:
            raise ParseError(f"unknown key {key!r}", lineno)
        if KEYS[key] in values:
            raise ParseError(f"duplicate key {key!r}", lineno)
        if key in INT_KEYS:
            try:
                parsed: object = int(value)
            except ValueError:
                raise ParseError(f"{key} must be an integer, got {value!r}", lineno) from None
        elif key in FLOAT_KEYS:
            try:
                parsed = float(value)
            except ValueError:
                raise ParseError(f"{key} must be a number, got {value!r}", lineno) from None
            if math.isnan(parsed):
                raise ParseError(f"{key} is NaN", lineno)
        elif key == "obstacles":
            parsed = tuple(_parse_cell(c, lineno) for c in value.split(";") if c.strip())
        else:
            parsed = _parse_cell(value, lineno)
        values[KEYS[key]] = parsed
    for key in REQUIRED:
        if key not in values:
            raise ParseError(f"missing required key {key!r}")
    return ScenarioConfig(**values)


def parse_scenario(path) -> ScenarioConfig:
    return parse_text(Path(path).read_text(encoding="utf-8"))


def format_scenario(c: ScenarioConfig) -> str:
    inverse = {v: k for k, v in KEYS.items()}
    lines = []
    for f in fields(c):
        value = getattr(c, f.name)
        key = inverse[f.name]
        if key == "obstacles":
            text = "; ".join(f"{r},{col}" for r, col in value)
        elif key in ("s_cell", "t_cell"):
            text = f"{value[0]},{value[1]}"
        else:
            text = repr(value)
        lines.append(f"{key} = {text}")
    return "\n".join(lines) + "\n"


def parse_grid(path) -> list[tuple[float, float, int]]:
    """Table-2 grid file: CSV with header ``r,rho,n``."""
    grid = []
    header = False
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(",")]
        if not header:
            if parts != ["r", "rho", "n"]:
                raise ParseError("grid file needs header 'r,rho,n'", lineno)
            header = True
            continue
        if len(parts) != 3:
            raise ParseError(f"expected 3 columns, got {line!r}", lineno)
        try:
            grid.append((float(parts[0]), float(parts[1]), int(parts[2])))
        except ValueError:
            raise ParseError(f"bad grid row {line!r}", lineno) from None
    if not grid:
        raise ParseError("grid file has no rows")
    return grid
