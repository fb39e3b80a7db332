"""Minimal SVG polyline charts, no external renderer."""

from __future__ import annotations

from pathlib import Path

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"]

_W, _H = 720, 480
_ML, _MR, _MT, _MB = 70, 20, 40, 55  # margins


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def line_chart(path, title: str, xlabel: str, ylabel: str, series) -> None:
    """Write a line chart; ``series`` is a list of (label, xs, ys)."""
    xs_all = [x for _, xs, _ in series for x in xs]
    ys_all = [y for _, _, ys in series for y in ys]
    if not xs_all:
        xs_all, ys_all = [0.0, 1.0], [0.0, 1.0]
    x_lo, x_hi = min(xs_all), max(xs_all)
    y_lo, y_hi = min(ys_all), max(ys_all)
    if x_hi == x_lo:
        x_hi = x_lo + 1
    if y_hi == y_lo:
        y_hi = y_lo + 1
    pad = 0.04 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    pw = _W - _ML - _MR
    ph = _H - _MT - _MB

    def px(x):
        return _ML + (x - x_lo) / (x_hi - x_lo) * pw

    def py(y):
        return _MT + ph - (y - y_lo) / (y_hi - y_lo) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W / 2}" y="22" text-anchor="middle" font-size="15">{title}</text>',
        f'<rect x="{_ML}" y="{_MT}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>',
    ]
    ticks = 5
    for t in range(ticks + 1):
        xv = x_lo + t * (x_hi - x_lo) / ticks
        yv = y_lo + t * (y_hi - y_lo) / ticks
        xp, yp = px(xv), py(yv)
        out.append(
            f'<line x1="{_fmt(xp)}" y1="{_MT + ph}" x2="{_fmt(xp)}" y2="{_MT + ph + 5}" stroke="#333"/>'
        )
        out.append(
            f'<text x="{_fmt(xp)}" y="{_MT + ph + 18}" text-anchor="middle">{_fmt(xv)}</text>'
        )
        out.append(
            f'<line x1="{_ML - 5}" y1="{_fmt(yp)}" x2="{_ML}" y2="{_fmt(yp)}" stroke="#333"/>'
        )
        out.append(
            f'<text x="{_ML - 8}" y="{_fmt(yp + 4)}" text-anchor="end">{_fmt(yv)}</text>'
        )
    out.append(
        f'<text x="{_ML + pw / 2}" y="{_H - 12}" text-anchor="middle">{xlabel}</text>'
    )
    out.append(
        f'<text x="18" y="{_MT + ph / 2}" text-anchor="middle" '
        f'transform="rotate(-90 18 {_MT + ph / 2})">{ylabel}</text>'
    )
    for s_i, (label, xs, ys) in enumerate(series):
        color = PALETTE[s_i % len(PALETTE)]
        pts = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in zip(xs, ys))
        out.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.8"/>'
        )
        for x, y in zip(xs, ys):
            out.append(
                f'<circle cx="{_fmt(px(x))}" cy="{_fmt(py(y))}" r="2.5" fill="{color}"/>'
            )
        ly = _MT + 16 + 16 * s_i
        out.append(
            f'<line x1="{_ML + 10}" y1="{ly - 4}" x2="{_ML + 34}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        out.append(f'<text x="{_ML + 40}" y="{ly}">{label}</text>')
    out.append("</svg>")
    Path(path).write_text("\n".join(out) + "\n")
