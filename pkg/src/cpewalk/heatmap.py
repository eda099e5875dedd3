"""Minimal deterministic SVG heatmap for sweep results (no plotting dependency)."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

from .asymptotics import SweepGrid, SweepRow

# viridis-like anchors, interpolated linearly on [0, 1]
_STOPS = [
    (0.00, (68, 1, 84)),
    (0.25, (59, 82, 139)),
    (0.50, (33, 145, 140)),
    (0.75, (94, 201, 98)),
    (1.00, (253, 231, 37)),
]
_FAILED = "#ff00ff"


def colour(value: float) -> str:
    if not math.isfinite(value):
        return _FAILED
    x = min(max(value, 0.0), 1.0)
    for (x0, c0), (x1, c1) in zip(_STOPS, _STOPS[1:]):
        if x <= x1:
            f = (x - x0) / (x1 - x0)
            rgb = [round(a + f * (b - a)) for a, b in zip(c0, c1)]
            return "#{:02x}{:02x}{:02x}".format(*rgb)
    return "#{:02x}{:02x}{:02x}".format(*_STOPS[-1][1])


def render_heatmap(rows: Sequence[SweepRow], grid: SweepGrid, title: str = "", cell: int = 10) -> str:
    """SVG text with theta0 on the horizontal axis and theta1 increasing upwards."""
    n0, n1 = grid.resolution
    if len(rows) != n0 * n1:
        raise ValueError(f"expected {n0 * n1} rows, got {len(rows)}")
    left, top, bar = 60, 30, 40
    width = left + n0 * cell + bar + 60
    height = top + n1 * cell + 50
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<text x="{left}" y="18">{escape(title)}</text>',
    ]
    for idx, row in enumerate(rows):
        i, j = divmod(idx, n1)  # theta0-major
        x = left + i * cell
        y = top + (n1 - 1 - j) * cell
        out.append(f'<rect x="{x}" y="{y}" width="{cell}" height="{cell}" fill="{colour(row.entropy)}"/>')
    # axes
    x_end = left + n0 * cell
    y_end = top + n1 * cell
    out.append(f'<rect x="{left}" y="{top}" width="{n0 * cell}" height="{n1 * cell}" fill="none" stroke="black"/>')
    (a0, b0), (a1, b1) = grid.theta0, grid.theta1
    out.append(f'<text x="{left}" y="{y_end + 14}">{a0:.3g}</text>')
    out.append(f'<text x="{x_end}" y="{y_end + 14}" text-anchor="end">{b0:.3g}</text>')
    out.append(f'<text x="{(left + x_end) // 2}" y="{y_end + 32}" text-anchor="middle">theta0</text>')
    out.append(f'<text x="{left - 4}" y="{y_end}" text-anchor="end">{a1:.3g}</text>')
    out.append(f'<text x="{left - 4}" y="{top + 10}" text-anchor="end">{b1:.3g}</text>')
    out.append(
        f'<text x="14" y="{(top + y_end) // 2}" text-anchor="middle" '
        f'transform="rotate(-90 14 {(top + y_end) // 2})">theta1</text>'
    )
    # colour bar
    bx = x_end + 20
    steps = 50
    h = n1 * cell / steps
    for s in range(steps):
        v = (s + 0.5) / steps
        y = y_end - (s + 1) * h
        out.append(f'<rect x="{bx}" y="{y:.2f}" width="12" height="{h + 0.05:.2f}" fill="{colour(v)}"/>')
    out.append(f'<text x="{bx + 16}" y="{y_end}">0</text>')
    out.append(f'<text x="{bx + 16}" y="{top + 10}">1</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_heatmap(rows: Sequence[SweepRow], grid: SweepGrid, path: Path | str, title: str = "") -> None:
    Path(path).write_text(render_heatmap(rows, grid, title))
