"""CSV and SVG writers. Output is byte-stable for identical inputs."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import MissingCoords
from .graph import Graph

Record = tuple[int, str, float]


def fmt(x: float) -> str:
    return format(float(x), ".12g")


def _write(path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def write_timeseries_csv(records: Iterable[Record], path) -> None:
    rows = sorted(((int(t), str(m), float(v)) for t, m, v in records), key=lambda r: (r[0], r[1]))
    lines = ["t,metric,value"] + [f"{t},{m},{fmt(v)}" for t, m, v in rows]
    _write(path, "\n".join(lines) + "\n")


def read_timeseries_csv(path) -> list[Record]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != "t,metric,value":
        raise ValueError(f"{path}: not a timeseries file")
    out = []
    for line in lines[1:]:
        t, m, v = line.split(",")
        out.append((int(t), m, float(v)))
    return out


def write_table_csv(header: Sequence[str], rows: Iterable[Sequence], path) -> None:
    def cell(x):
        if isinstance(x, (bool, np.bool_)):
            return "1" if x else "0"
        if isinstance(x, (int, np.integer)):
            return str(int(x))
        if isinstance(x, (float, np.floating)):
            return fmt(x)
        return str(x)

    lines = [",".join(header)] + [",".join(cell(x) for x in row) for row in rows]
    _write(path, "\n".join(lines) + "\n")


def _diverging(v: float, vmax: float) -> str:
    """Blue (negative) through white to red (positive)."""
    a = 0.0 if vmax <= 0 else max(-1.0, min(1.0, v / vmax))
    if a >= 0:
        r, g, b = 255, round(255 * (1 - a)), round(255 * (1 - a))
    else:
        r, g, b = round(255 * (1 + a)), round(255 * (1 + a)), 255
    return f"#{r:02x}{g:02x}{b:02x}"


def write_heatmap_svg(
    g: Graph,
    values: Sequence[float],
    path,
    occupancy: Sequence[float] | None = None,
    source: int | None = None,
    target: int | None = None,
    title: str = "",
) -> None:
    """One disc per vertex coloured by ``values`` on a symmetric diverging
    scale; red markers scaled by ``occupancy``; S and T drawn as triangles."""
    if g.coords is None:
        raise MissingCoords("graph has no coordinates")
    values = np.asarray(values, dtype=float)
    if len(values) != g.vertex_count:
        raise ValueError("one value per vertex required")
    xy = np.asarray(g.coords, dtype=float)
    unit = 40.0
    margin = 30.0
    lo = xy.min(axis=0)
    span = xy.max(axis=0) - lo
    width = span[0] * unit + 2 * margin
    height = span[1] * unit + 2 * margin
    px = (xy - lo) * unit + margin
    vmax = float(np.abs(values).max()) if len(values) else 0.0
    occ = None if occupancy is None else np.asarray(occupancy, dtype=float)
    omax = float(occ.max()) if occ is not None and len(occ) and occ.max() > 0 else 1.0

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{fmt(width)}" height="{fmt(height)}" '
        f'viewBox="0 0 {fmt(width)} {fmt(height)}">',
        f'<rect width="100%" height="100%" fill="#f4f4f4"/>',
    ]
    if title:
        out.append(f'<title>{title}</title>')
    for i, j in sorted(g.edges):
        out.append(
            f'<line x1="{fmt(px[i, 0])}" y1="{fmt(px[i, 1])}" x2="{fmt(px[j, 0])}" '
            f'y2="{fmt(px[j, 1])}" stroke="#cccccc" stroke-width="1"/>'
        )
    for v in range(g.vertex_count):
        out.append(
            f'<circle cx="{fmt(px[v, 0])}" cy="{fmt(px[v, 1])}" r="{fmt(unit * 0.4)}" '
            f'fill="{_diverging(values[v], vmax)}" stroke="#888888" stroke-width="0.5"/>'
        )
    if occ is not None:
        for v in range(g.vertex_count):
            if occ[v] > 0:
                rad = unit * 0.35 * math.sqrt(occ[v] / omax)
                out.append(
                    f'<circle cx="{fmt(px[v, 0])}" cy="{fmt(px[v, 1])}" r="{fmt(rad)}" '
                    f'fill="#d62728" fill-opacity="0.8"/>'
                )
    for v, up in ((source, True), (target, False)):
        if v is None:
            continue
        cx, cy = px[v]
        h = unit * 0.45
        tip = cy - h if up else cy + h
        base = cy + h / 2 if up else cy - h / 2
        pts = f"{fmt(cx)},{fmt(tip)} {fmt(cx - h)},{fmt(base)} {fmt(cx + h)},{fmt(base)}"
        out.append(f'<polygon points="{pts}" fill="none" stroke="#d62728" stroke-width="2"/>')
    out.append("</svg>")
    _write(path, "\n".join(out) + "\n")
