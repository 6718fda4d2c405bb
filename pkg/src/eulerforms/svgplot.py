"""Deterministic SVG scatter plot of the F series.

Pure string assembly: same records in, same bytes out.  The figure is a
fixed 900x560 canvas showing F(n) against n, with dashed reference lines at
0 and at -2 log(4/e) = -0.7725887..., the level the series is measured
against.  Skipped indices are recorded in an XML comment so a plot of a
range with precision skips stays self-describing.
"""

from __future__ import annotations

import math
from typing import Iterable

WIDTH = 900
HEIGHT = 560
MARGIN_L = 72
MARGIN_R = 24
MARGIN_T = 36
MARGIN_B = 56

REFERENCE_LEVEL = -2.0 * (math.log(4.0) - 1.0)  # -0.7725887222397812

_POINT = '<circle cx="{x}" cy="{y}" r="2.5" fill="#2b6cb0"/>'
_STYLE = ("text{font-family:Helvetica,Arial,sans-serif;font-size:13px;"
          "fill:#333}.tick{stroke:#ccc;stroke-width:1}"
          ".ref{stroke-width:1.4;stroke-dasharray:6 4;fill:none}")


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _nice_step(span: float, target_ticks: int) -> float:
    raw = span / max(1, target_ticks)
    mag = 10.0 ** math.floor(math.log10(raw)) if raw > 0 else 1.0
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if mult * mag >= raw:
            return mult * mag
    return 10.0 * mag


def emit_figure(records: Iterable[dict], title: str = "F series") -> str:
    """SVG document for rendered F-series records (dicts, as from the CLI).

    Records with status "skip" contribute no point; their indices go into a
    comment near the top of the document.
    """
    recs = list(records)
    pts = [(r["n"], float(r["F"])) for r in recs if r.get("status") == "ok"]
    skips = [r["n"] for r in recs if r.get("status") == "skip"]
    if not pts:
        raise ValueError("no plottable records")

    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    x_lo, x_hi = min(xs), max(xs)
    if x_lo == x_hi:
        x_lo, x_hi = x_lo - 1, x_hi + 1
    y_lo = min(min(ys), REFERENCE_LEVEL) - 0.08
    y_hi = max(max(ys), 0.0) + 0.08

    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B

    def sx(n: float) -> float:
        return MARGIN_L + (n - x_lo) / (x_hi - x_lo) * plot_w

    def sy(v: float) -> float:
        return MARGIN_T + (y_hi - v) / (y_hi - y_lo) * plot_h

    out = []
    out.append(f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
               f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">')
    out.append(f"<!-- eulerforms f-series plot; skips: "
               f"{','.join(map(str, skips)) if skips else 'none'} -->")
    out.append(f"<style>{_STYLE}</style>")
    out.append(f'<rect width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>')
    out.append(f'<text x="{MARGIN_L}" y="22" font-size="16">{title}</text>')

    # axes and ticks
    x_step = _nice_step(x_hi - x_lo, 10)
    tick = math.ceil(x_lo / x_step) * x_step
    while tick <= x_hi + 1e-9:
        px = _fmt(sx(tick))
        out.append(f'<line class="tick" x1="{px}" y1="{MARGIN_T}" '
                   f'x2="{px}" y2="{HEIGHT - MARGIN_B}"/>')
        label = str(int(tick)) if float(tick).is_integer() else _fmt(tick)
        out.append(f'<text x="{px}" y="{HEIGHT - MARGIN_B + 18}" '
                   f'text-anchor="middle">{label}</text>')
        tick += x_step
    y_step = _nice_step(y_hi - y_lo, 8)
    tick = math.ceil(y_lo / y_step) * y_step
    while tick <= y_hi + 1e-9:
        py = _fmt(sy(tick))
        out.append(f'<line class="tick" x1="{MARGIN_L}" y1="{py}" '
                   f'x2="{WIDTH - MARGIN_R}" y2="{py}"/>')
        out.append(f'<text x="{MARGIN_L - 8}" y="{py}" text-anchor="end" '
                   f'dominant-baseline="middle">{_fmt(tick)}</text>')
        tick += y_step

    # reference levels
    for level, color, label in (
            (0.0, "#888888", "0"),
            (REFERENCE_LEVEL, "#c53030", "-2 log(4/e)")):
        py = _fmt(sy(level))
        out.append(f'<line class="ref" stroke="{color}" x1="{MARGIN_L}" '
                   f'y1="{py}" x2="{WIDTH - MARGIN_R}" y2="{py}"/>')
        out.append(f'<text x="{WIDTH - MARGIN_R - 4}" y="{float(py) - 5:.2f}" '
                   f'text-anchor="end" fill="{color}">{label}</text>')

    out.append(f'<line x1="{MARGIN_L}" y1="{HEIGHT - MARGIN_B}" '
               f'x2="{WIDTH - MARGIN_R}" y2="{HEIGHT - MARGIN_B}" '
               f'stroke="#333" stroke-width="1.2"/>')
    out.append(f'<line x1="{MARGIN_L}" y1="{MARGIN_T}" x2="{MARGIN_L}" '
               f'y2="{HEIGHT - MARGIN_B}" stroke="#333" stroke-width="1.2"/>')
    out.append(f'<text x="{(MARGIN_L + WIDTH - MARGIN_R) // 2}" '
               f'y="{HEIGHT - 12}" text-anchor="middle">n</text>')

    for n, v in pts:
        out.append(_POINT.format(x=_fmt(sx(n)), y=_fmt(sy(v))))

    out.append("</svg>")
    return "\n".join(out) + "\n"
