"""Data and SVG for the Re psi(1/4 + mu + i t/2) curves."""
from __future__ import annotations

import csv
import io
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

from . import kernels

DEFAULT_MUS = (0.0, 1.0, 4.0, 8.0)
COLORS = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b")


def digamma_curves(mus: Sequence[float] = DEFAULT_MUS, t_min: float = -30.0,
                   t_max: float = 30.0, step: float = 0.1):
    """Return ``(t, values)`` with ``values[j]`` sampled at ``1/4 + mus[j] + i t/2``."""
    if step <= 0:
        raise ValueError("step must be positive")
    if t_max < t_min:
        raise ValueError("t_max must not be below t_min")
    n = int(round((t_max - t_min) / step)) + 1
    t = t_min + step * np.arange(n)
    vals = [kernels.digamma_re_array(0.25 + mu, 0.5 * t) for mu in mus]
    return t, vals


def to_csv(t, vals, mus) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(["t"] + [f"mu={mu:g}" for mu in mus])
    for i, ti in enumerate(t):
        w.writerow([f"{ti:.10g}"] + [f"{v[i]:.12g}" for v in vals])
    return buf.getvalue()


def to_svg(t, vals, mus, width: int = 720, height: int = 420) -> str:
    pad_l, pad_r, pad_t, pad_b = 60, 110, 20, 40
    x0, x1 = float(t[0]), float(t[-1])
    lo = min(float(np.min(v)) for v in vals)
    hi = max(float(np.max(v)) for v in vals)
    if hi == lo:
        hi = lo + 1.0
    if x1 == x0:
        x1 = x0 + 1.0
    pw, ph = width - pad_l - pad_r, height - pad_t - pad_b

    def sx(x):
        return pad_l + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return pad_t + (hi - y) / (hi - lo) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="{pad_l}" y="{pad_t}" width="{pw}" height="{ph}" fill="none" stroke="#444"/>',
    ]
    if lo < 0 < hi:
        out.append(f'<line x1="{pad_l}" y1="{sy(0):.2f}" x2="{pad_l + pw}" y2="{sy(0):.2f}" '
                   'stroke="#bbb" stroke-dasharray="4 3"/>')
    for tick in np.linspace(x0, x1, 7):
        out.append(f'<text x="{sx(tick):.2f}" y="{height - pad_b + 16}" font-size="11" '
                   f'text-anchor="middle">{tick:g}</text>')
    for tick in np.linspace(lo, hi, 6):
        out.append(f'<text x="{pad_l - 6}" y="{sy(tick) + 4:.2f}" font-size="11" '
                   f'text-anchor="end">{tick:.2f}</text>')
    for j, (mu, v) in enumerate(zip(mus, vals)):
        pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(t, v))
        color = COLORS[j % len(COLORS)]
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        out.append(f'<text x="{pad_l + pw + 8}" y="{sy(float(v[-1])) + 4:.2f}" font-size="12" '
                   f'fill="{color}">{escape(f"mu = {mu:g}")}</text>')
    out.append(f'<text x="{pad_l + pw / 2}" y="{height - 6}" font-size="12" '
               'text-anchor="middle">t</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
