"""Minimal deterministic SVG figure emitters.

Figures are emitted as plain vector text with fixed float formatting, so
identical inputs give byte-identical files and golden-file tests need no
image diffing.  Each emitter returns a complete SVG document as a string;
writing it to disk is the caller's business.  No external plotting
libraries are involved.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

WIDTH = 640
HEIGHT = 420
MARGIN_LEFT = 70
MARGIN_RIGHT = 24
MARGIN_TOP = 44
MARGIN_BOTTOM = 58

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

_FONT = 'font-family="Helvetica, Arial, sans-serif"'


def _f(x: float) -> str:
    # fixed two-decimal coordinates keep output byte-stable
    return f"{x:.2f}"


def _tick_label(x: float) -> str:
    return f"{x:.4g}"


def _plot_area():
    x0 = MARGIN_LEFT
    y0 = MARGIN_TOP
    x1 = WIDTH - MARGIN_RIGHT
    y1 = HEIGHT - MARGIN_BOTTOM
    return x0, y0, x1, y1


def _expand(lo: float, hi: float):
    if not (math.isfinite(lo) and math.isfinite(hi)):
        return 0.0, 1.0
    if lo == hi:
        pad = 0.5 if lo == 0.0 else abs(lo) * 0.1
        return lo - pad, hi + pad
    pad = (hi - lo) * 0.05
    return lo - pad, hi + pad


class _Frame:
    """Data-to-pixel transform plus shared axis/figure scaffolding."""

    def __init__(self, x_lo, x_hi, y_lo, y_hi):
        self.x_lo, self.x_hi = x_lo, x_hi
        self.y_lo, self.y_hi = y_lo, y_hi
        self.px0, self.py0, self.px1, self.py1 = _plot_area()

    def x(self, v: float) -> float:
        span = self.x_hi - self.x_lo
        frac = 0.0 if span == 0 else (v - self.x_lo) / span
        return self.px0 + frac * (self.px1 - self.px0)

    def y(self, v: float) -> float:
        span = self.y_hi - self.y_lo
        frac = 0.0 if span == 0 else (v - self.y_lo) / span
        return self.py1 - frac * (self.py1 - self.py0)

    def header(self, title: str) -> list[str]:
        return [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
            f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
            f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" '
            'fill="#ffffff"/>',
            f'<text x="{WIDTH // 2}" y="24" {_FONT} font-size="15" '
            f'text-anchor="middle">{escape(title)}</text>',
        ]

    def axes(self, x_label: str, y_label: str, n_ticks: int = 5) -> list[str]:
        parts = [
            f'<rect x="{_f(self.px0)}" y="{_f(self.py0)}" '
            f'width="{_f(self.px1 - self.px0)}" '
            f'height="{_f(self.py1 - self.py0)}" fill="none" '
            'stroke="#333333" stroke-width="1"/>'
        ]
        for i in range(n_ticks):
            fx = self.x_lo + (self.x_hi - self.x_lo) * i / (n_ticks - 1)
            px = self.x(fx)
            parts.append(f'<line x1="{_f(px)}" y1="{_f(self.py1)}" '
                         f'x2="{_f(px)}" y2="{_f(self.py1 + 5)}" '
                         'stroke="#333333" stroke-width="1"/>')
            parts.append(f'<text x="{_f(px)}" y="{_f(self.py1 + 19)}" '
                         f'{_FONT} font-size="11" text-anchor="middle">'
                         f'{escape(_tick_label(fx))}</text>')
            fy = self.y_lo + (self.y_hi - self.y_lo) * i / (n_ticks - 1)
            py = self.y(fy)
            parts.append(f'<line x1="{_f(self.px0 - 5)}" y1="{_f(py)}" '
                         f'x2="{_f(self.px0)}" y2="{_f(py)}" '
                         'stroke="#333333" stroke-width="1"/>')
            parts.append(f'<text x="{_f(self.px0 - 8)}" y="{_f(py + 4)}" '
                         f'{_FONT} font-size="11" text-anchor="end">'
                         f'{escape(_tick_label(fy))}</text>')
        mid_x = (self.px0 + self.px1) / 2
        mid_y = (self.py0 + self.py1) / 2
        parts.append(f'<text x="{_f(mid_x)}" y="{HEIGHT - 14}" {_FONT} '
                     f'font-size="13" text-anchor="middle">'
                     f'{escape(x_label)}</text>')
        parts.append(f'<text x="18" y="{_f(mid_y)}" {_FONT} font-size="13" '
                     f'text-anchor="middle" '
                     f'transform="rotate(-90 18 {_f(mid_y)})">'
                     f'{escape(y_label)}</text>')
        return parts


def line_chart(series, title: str, x_label: str, y_label: str,
               marker=None) -> str:
    """Multi-series line chart.

    ``series`` is a list of (name, points) pairs with points as (x, y)
    tuples; non-finite points are skipped.  ``marker`` optionally
    highlights one (x, y, text) position, e.g. a curve minimum.
    """
    xs = [p[0] for _, pts in series for p in pts if math.isfinite(p[0])]
    ys = [p[1] for _, pts in series for p in pts if math.isfinite(p[1])]
    if marker is not None:
        xs.append(marker[0])
        ys.append(marker[1])
    x_lo, x_hi = _expand(min(xs, default=0.0), max(xs, default=1.0))
    y_lo, y_hi = _expand(min(ys, default=0.0), max(ys, default=1.0))
    fr = _Frame(x_lo, x_hi, y_lo, y_hi)

    parts = fr.header(title)
    parts.extend(fr.axes(x_label, y_label))
    for idx, (name, pts) in enumerate(series):
        color = PALETTE[idx % len(PALETTE)]
        clean = [(x, y) for x, y in pts
                 if math.isfinite(x) and math.isfinite(y)]
        coords = " ".join(f"{_f(fr.x(x))},{_f(fr.y(y))}" for x, y in clean)
        if coords:
            parts.append(f'<polyline points="{coords}" fill="none" '
                         f'stroke="{color}" stroke-width="1.5"/>')
        for x, y in clean:
            parts.append(f'<circle cx="{_f(fr.x(x))}" cy="{_f(fr.y(y))}" '
                         f'r="2.5" fill="{color}"/>')
        if len(series) > 1:
            ly = MARGIN_TOP + 14 + 16 * idx
            lx = WIDTH - MARGIN_RIGHT - 130
            parts.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" '
                         f'y2="{ly - 4}" stroke="{color}" '
                         'stroke-width="1.5"/>')
            parts.append(f'<text x="{lx + 28}" y="{ly}" {_FONT} '
                         f'font-size="12">{escape(name)}</text>')
    if marker is not None:
        mx, my, mtext = marker
        parts.append(f'<circle cx="{_f(fr.x(mx))}" cy="{_f(fr.y(my))}" '
                     'r="5" fill="none" stroke="#000000" '
                     'stroke-width="1.5"/>')
        parts.append(f'<text x="{_f(fr.x(mx) + 8)}" y="{_f(fr.y(my) - 8)}" '
                     f'{_FONT} font-size="12">{escape(mtext)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def histogram(values, n_bins: int, title: str, x_label: str,
              lo: float = 0.0, hi: float = 1.0) -> str:
    """Equal-width histogram of values over [lo, hi]; out-of-range values
    land in the nearest edge bin."""
    if n_bins < 1:
        raise ValueError(f"n_bins must be >= 1, got {n_bins}")
    counts = [0] * n_bins
    width = (hi - lo) / n_bins
    for v in values:
        if not math.isfinite(v):
            continue
        idx = int((v - lo) / width) if width > 0 else 0
        counts[min(max(idx, 0), n_bins - 1)] += 1
    top = max(max(counts), 1)
    fr = _Frame(lo, hi, 0.0, top * 1.05)
    parts = fr.header(title)
    parts.extend(fr.axes(x_label, "count"))
    for i, c in enumerate(counts):
        if c == 0:
            continue
        x_left = fr.x(lo + i * width)
        x_right = fr.x(lo + (i + 1) * width)
        y_top = fr.y(c)
        parts.append(f'<rect x="{_f(x_left + 0.5)}" y="{_f(y_top)}" '
                     f'width="{_f(x_right - x_left - 1.0)}" '
                     f'height="{_f(fr.y(0.0) - y_top)}" '
                     f'fill="{PALETTE[0]}" fill-opacity="0.85"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def reliability_diagram(bins, title: str) -> str:
    """Reliability diagram from (lo, hi, count, mean_conf, mean_corr) bins.

    Bars show mean correctness per occupied confidence bin; the dashed
    diagonal marks perfect calibration and dots mark each bin's mean
    confidence.
    """
    fr = _Frame(0.0, 1.0, 0.0, 1.0)
    parts = fr.header(title)
    parts.extend(fr.axes("confidence", "mean correctness"))
    parts.append(f'<line x1="{_f(fr.x(0.0))}" y1="{_f(fr.y(0.0))}" '
                 f'x2="{_f(fr.x(1.0))}" y2="{_f(fr.y(1.0))}" '
                 'stroke="#888888" stroke-width="1" '
                 'stroke-dasharray="5,4"/>')
    for lo, hi, count, mean_conf, mean_corr in bins:
        if count == 0 or mean_corr is None:
            continue
        x_left, x_right = fr.x(lo), fr.x(hi)
        y_top = fr.y(mean_corr)
        parts.append(f'<rect x="{_f(x_left + 0.5)}" y="{_f(y_top)}" '
                     f'width="{_f(x_right - x_left - 1.0)}" '
                     f'height="{_f(fr.y(0.0) - y_top)}" '
                     f'fill="{PALETTE[0]}" fill-opacity="0.75"/>')
        if mean_conf is not None:
            parts.append(f'<circle cx="{_f(fr.x(mean_conf))}" '
                         f'cy="{_f(y_top)}" r="3" fill="#d62728"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _heat_color(v: float) -> str:
    """Blue-white-red ramp over [-1, 1]; NaN renders gray."""
    if not math.isfinite(v):
        return "#dddddd"
    v = max(-1.0, min(1.0, v))
    if v >= 0:
        r, g, b = 255, round(255 * (1 - v)), round(255 * (1 - v))
    else:
        r, g, b = round(255 * (1 + v)), round(255 * (1 + v)), 255
    return f"#{r:02x}{g:02x}{b:02x}"


def heatmap(names, matrix, title: str) -> str:
    """Square correlation heatmap with numeric cell labels."""
    n = len(names)
    if n == 0 or any(len(row) != n for row in matrix) or len(matrix) != n:
        raise ValueError("matrix must be square and match names")
    x0, y0, x1, y1 = _plot_area()
    cell = min((x1 - x0) / n, (y1 - y0) / n)
    grid_w = cell * n
    gx0 = x0 + ((x1 - x0) - grid_w) / 2
    gy0 = y0
    fr = _Frame(0.0, 1.0, 0.0, 1.0)
    parts = fr.header(title)
    for i in range(n):
        for j in range(n):
            v = matrix[i][j]
            cx = gx0 + j * cell
            cy = gy0 + i * cell
            parts.append(f'<rect x="{_f(cx)}" y="{_f(cy)}" '
                         f'width="{_f(cell)}" height="{_f(cell)}" '
                         f'fill="{_heat_color(v)}" stroke="#ffffff" '
                         'stroke-width="1"/>')
            label = "n/a" if not math.isfinite(v) else f"{v:.2f}"
            parts.append(f'<text x="{_f(cx + cell / 2)}" '
                         f'y="{_f(cy + cell / 2 + 4)}" {_FONT} '
                         f'font-size="11" text-anchor="middle">'
                         f'{escape(label)}</text>')
    for i, name in enumerate(names):
        parts.append(f'<text x="{_f(gx0 - 6)}" '
                     f'y="{_f(gy0 + i * cell + cell / 2 + 4)}" {_FONT} '
                     f'font-size="11" text-anchor="end">'
                     f'{escape(str(name))}</text>')
        tx = gx0 + i * cell + cell / 2
        ty = gy0 + n * cell + 12
        parts.append(f'<text x="{_f(tx)}" y="{_f(ty)}" {_FONT} '
                     f'font-size="11" text-anchor="middle" '
                     f'transform="rotate(40 {_f(tx)} {_f(ty)})">'
                     f'{escape(str(name))}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
