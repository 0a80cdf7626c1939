"""A small SVG line-plot writer (no plotting dependency needed)."""
from __future__ import annotations

import math
from typing import Iterable, List, Sequence, Tuple
from xml.sax.saxutils import escape

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b")
WIDTH, HEIGHT, MARGIN = 640, 400, 56


def _ticks(lo: float, hi: float, n: int = 5) -> List[float]:
    if hi <= lo:
        return [lo]
    step = 10 ** math.floor(math.log10((hi - lo) / n))
    for m in (1, 2, 5, 10):
        if (hi - lo) / (m * step) <= n:
            step *= m
            break
    start = math.ceil(lo / step) * step
    return [start + k * step for k in range(int((hi - start) / step) + 1)]


def line_plot(series: Sequence[Tuple[Sequence[float], Sequence[float], str]], title: str = "",
              xlabel: str = "", ylabel: str = "", logx: bool = False,
              markers: Iterable[Tuple[float, float]] = (), equal: bool = False) -> str:
    """SVG text for one or more (xs, ys, label) polylines, plus point markers."""
    pts = [(x, y) for xs, ys, _ in series for x, y in zip(xs, ys) if math.isfinite(y)]
    markers = list(markers)
    pts += markers
    tx = (lambda x: math.log10(x)) if logx else (lambda x: x)
    xs = [tx(x) for x, _ in pts]
    ys = [y for _, y in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if equal:
        lo, hi = min(x0, y0), max(x1, y1)
        x0 = y0 = lo
        x1 = y1 = hi
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1
    pw, ph = WIDTH - 2 * MARGIN, HEIGHT - 2 * MARGIN

    def px(x):
        return MARGIN + (tx(x) - x0) / (x1 - x0) * pw

    def py(y):
        return HEIGHT - MARGIN - (y - y0) / (y1 - y0) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
           f'font-family="sans-serif" font-size="11">',
           f'<rect x="{MARGIN}" y="{MARGIN}" width="{pw}" height="{ph}" fill="none" stroke="#444"/>']
    if title:
        out.append(f'<text x="{WIDTH / 2}" y="{MARGIN / 2}" text-anchor="middle" '
                   f'font-size="14">{escape(title)}</text>')
    for t in _ticks(x0, x1):
        X = MARGIN + (t - x0) / (x1 - x0) * pw
        label = f"1e{t:g}" if logx else f"{t:g}"
        out.append(f'<text x="{X:.1f}" y="{HEIGHT - MARGIN + 16}" text-anchor="middle">{label}</text>')
    for t in _ticks(y0, y1):
        Y = HEIGHT - MARGIN - (t - y0) / (y1 - y0) * ph
        out.append(f'<text x="{MARGIN - 6}" y="{Y + 4:.1f}" text-anchor="end">{t:.3g}</text>')
    if y0 < 0 < y1:
        out.append(f'<line x1="{MARGIN}" x2="{WIDTH - MARGIN}" y1="{py(0):.1f}" y2="{py(0):.1f}" '
                   'stroke="#aaa" stroke-dasharray="4 3"/>')
    for n, (sx, sy, label) in enumerate(series):
        color = PALETTE[n % len(PALETTE)]
        path = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(sx, sy) if math.isfinite(y))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{path}"/>')
        out.append(f'<text x="{WIDTH - MARGIN - 4}" y="{MARGIN + 14 * (n + 1)}" text-anchor="end" '
                   f'fill="{color}">{escape(label)}</text>')
    for x, y in markers:
        out.append(f'<circle cx="{px(x):.2f}" cy="{py(y):.2f}" r="3" fill="#d62728"/>')
    if xlabel:
        out.append(f'<text x="{WIDTH / 2}" y="{HEIGHT - 12}" text-anchor="middle">{escape(xlabel)}</text>')
    if ylabel:
        out.append(f'<text x="14" y="{HEIGHT / 2}" text-anchor="middle" '
                   f'transform="rotate(-90 14 {HEIGHT / 2})">{escape(ylabel)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write(path: str, text: str) -> None:
    with open(path, "w") as fh:
        fh.write(text)
