"""Minimal SVG line plots, written by hand so the CLI needs no plotting package."""

from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 640, 420
MARGIN = dict(left=70, right=20, top=40, bottom=55)


def _ticks(lo, hi, count=5):
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / count
    mag = 10 ** np.floor(np.log10(raw))
    step = min((s * mag for s in (1, 2, 5, 10) if s * mag >= raw), default=raw)
    start = np.ceil(lo / step) * step
    return np.arange(start, hi + 0.5 * step, step)


def line_plot(path, series, xlabel, ylabel, title=""):
    """
    ``series`` is a list of dicts with keys x, y and optionally label,
    dashed (bool) and markers (bool).  Axes are linear; pass logs yourself.
    """
    xs = np.concatenate([np.asarray(s["x"], float) for s in series])
    ys = np.concatenate([np.asarray(s["y"], float) for s in series])
    ok = np.isfinite(xs) & np.isfinite(ys)
    x0, x1 = xs[ok].min(), xs[ok].max()
    y0, y1 = ys[ok].min(), ys[ok].max()
    pad = 0.05 * (y1 - y0 or 1.0)
    y0, y1 = y0 - pad, y1 + pad
    if x1 == x0:
        x1 = x0 + 1.0
    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def sx(v):
        return MARGIN["left"] + (v - x0) / (x1 - x0) * pw

    def sy(v):
        return MARGIN["top"] + (1 - (v - y0) / (y1 - y0)) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" '
           f'font-size="12">', f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>']
    out.append(f'<rect x="{MARGIN["left"]}" y="{MARGIN["top"]}" width="{pw}" height="{ph}" fill="none" '
               f'stroke="black"/>')
    for t in _ticks(x0, x1):
        out.append(f'<line x1="{sx(t):.1f}" y1="{MARGIN["top"] + ph}" x2="{sx(t):.1f}" '
                   f'y2="{MARGIN["top"] + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{sx(t):.1f}" y="{MARGIN["top"] + ph + 18}" text-anchor="middle">{t:g}</text>')
    for t in _ticks(y0, y1):
        out.append(f'<line x1="{MARGIN["left"] - 5}" y1="{sy(t):.1f}" x2="{MARGIN["left"]}" y2="{sy(t):.1f}" '
                   f'stroke="black"/>')
        out.append(f'<text x="{MARGIN["left"] - 8}" y="{sy(t) + 4:.1f}" text-anchor="end">{t:g}</text>')
    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"]
    for k, s in enumerate(series):
        x = np.asarray(s["x"], float)
        y = np.asarray(s["y"], float)
        good = np.isfinite(x) & np.isfinite(y)
        pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(x[good], y[good]))
        color = colors[k % len(colors)]
        dash = ' stroke-dasharray="6,4"' if s.get("dashed") else ""
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>')
        if s.get("markers"):
            out += [f'<circle cx="{sx(a):.2f}" cy="{sy(b):.2f}" r="2.5" fill="{color}"/>'
                    for a, b in zip(x[good], y[good])]
        if s.get("label"):
            ly = MARGIN["top"] + 16 + 16 * k
            out.append(f'<text x="{MARGIN["left"] + 10}" y="{ly}" fill="{color}">{escape(s["label"])}</text>')
    out.append(f'<text x="{MARGIN["left"] + pw / 2}" y="{HEIGHT - 15}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="18" y="{MARGIN["top"] + ph / 2}" text-anchor="middle" '
               f'transform="rotate(-90 18 {MARGIN["top"] + ph / 2})">{escape(ylabel)}</text>')
    if title:
        out.append(f'<text x="{WIDTH / 2}" y="24" text-anchor="middle" font-size="14">{escape(title)}</text>')
    out.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(out) + "\n")
