"""Minimal standalone SVG line plots (axes, polylines, singularity markers)."""
from __future__ import annotations

import math
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 640, 400
MARGIN = 56


def _fmt(x: float) -> str:
    return f"{x:.4g}"


def render(segments: Sequence[Sequence[tuple[float, float]]], *, title: str = "",
           xlabel: str = "tau", ylabel: str = "u",
           singularities: Sequence[float] = ()) -> str:
    """Render polylines; a new segment starts wherever the curve has a gap.

    The y-range is taken from the 2nd-98th percentile of the data so poles
    do not flatten the plot; points outside it break the line.
    """
    pts = [p for seg in segments for p in seg]
    if not pts:
        raise ValueError("nothing to plot")
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = (float(v) for v in np.percentile(ys, [2, 98]))
    if y1 - y0 < 1e-12:
        y0, y1 = y0 - 1.0, y1 + 1.0
    pad = 0.08 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad
    if x1 == x0:
        x1 = x0 + 1.0

    def sx(x):
        return MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2 * MARGIN)

    def sy(y):
        return HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2 * MARGIN)

    lines = []
    for seg in segments:
        run: list[str] = []
        for x, y in seg:
            if y0 <= y <= y1 and math.isfinite(y):
                run.append(f"{sx(x):.2f},{sy(y):.2f}")
            elif run:
                lines.append(run)
                run = []
        if run:
            lines.append(run)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{WIDTH - 2 * MARGIN}" '
        f'height="{HEIGHT - 2 * MARGIN}" fill="none" stroke="black"/>',
    ]
    if y0 < 0 < y1:
        out.append(f'<line x1="{MARGIN}" y1="{sy(0):.2f}" x2="{WIDTH - MARGIN}" y2="{sy(0):.2f}" '
                   f'stroke="#bbb"/>')
    for s in singularities:
        if x0 <= s <= x1:
            out.append(f'<line x1="{sx(s):.2f}" y1="{MARGIN}" x2="{sx(s):.2f}" '
                       f'y2="{HEIGHT - MARGIN}" stroke="red" stroke-dasharray="4,4"/>')
    for run in lines:
        out.append(f'<polyline fill="none" stroke="#1f77b4" stroke-width="1.5" '
                   f'points="{" ".join(run)}"/>')
    out += [
        f'<text x="{MARGIN}" y="{HEIGHT - MARGIN + 18}" font-size="12">{_fmt(x0)}</text>',
        f'<text x="{WIDTH - MARGIN}" y="{HEIGHT - MARGIN + 18}" font-size="12" '
        f'text-anchor="end">{_fmt(x1)}</text>',
        f'<text x="{MARGIN - 6}" y="{HEIGHT - MARGIN}" font-size="12" text-anchor="end">{_fmt(y0)}</text>',
        f'<text x="{MARGIN - 6}" y="{MARGIN + 10}" font-size="12" text-anchor="end">{_fmt(y1)}</text>',
        f'<text x="{WIDTH / 2}" y="{HEIGHT - 16}" font-size="13" text-anchor="middle">{escape(xlabel)}</text>',
        f'<text x="16" y="{HEIGHT / 2}" font-size="13">{escape(ylabel)}</text>',
        f'<text x="{WIDTH / 2}" y="30" font-size="14" text-anchor="middle">{escape(title)}</text>',
        "</svg>",
    ]
    return "\n".join(out) + "\n"
