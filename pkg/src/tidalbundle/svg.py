"""Minimal SVG 1.1 line plots: axes, ticks, polylines, labels.

Diagnostic figures only; deterministic output for identical inputs.
"""

from __future__ import annotations

import numpy as np

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _fmt(v):
    return f"{v:.2f}"


def _ticks(lo, hi, n=5):
    if hi == lo:
        hi = lo + 1.0
    raw = np.linspace(lo, hi, n)
    return raw


def line_plot(series, title="", xlabel="", ylabel="",
              width=640, height=480) -> str:
    """series: iterable of (x array, y array, label). Returns an SVG document."""
    series = [(np.asarray(x, float), np.asarray(y, float), str(label))
              for x, y, label in series]
    if not series:
        raise ValueError("line_plot needs at least one series")
    m_left, m_right, m_top, m_bottom = 64, 16, 28, 44
    pw = width - m_left - m_right
    ph = height - m_top - m_bottom
    xlo = min(float(np.min(x)) for x, _, _ in series)
    xhi = max(float(np.max(x)) for x, _, _ in series)
    ylo = min(float(np.min(y)) for _, y, _ in series)
    yhi = max(float(np.max(y)) for _, y, _ in series)
    if xhi == xlo:
        xlo, xhi = xlo - 0.5, xhi + 0.5
    if yhi == ylo:
        ylo, yhi = ylo - 0.5, yhi + 0.5

    def px(v):
        return m_left + (v - xlo) / (xhi - xlo) * pw

    def py(v):
        return m_top + (yhi - v) / (yhi - ylo) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{m_left}" y="{m_top}" width="{pw}" height="{ph}" '
        'fill="none" stroke="#333333" stroke-width="1"/>',
    ]
    for tx in _ticks(xlo, xhi):
        X = px(tx)
        out.append(f'<line x1="{_fmt(X)}" y1="{m_top + ph}" x2="{_fmt(X)}" '
                   f'y2="{m_top + ph + 5}" stroke="#333333"/>')
        out.append(f'<text x="{_fmt(X)}" y="{m_top + ph + 18}" '
                   f'font-size="11" text-anchor="middle" '
                   f'font-family="sans-serif">{tx:.3g}</text>')
    for ty in _ticks(ylo, yhi):
        Y = py(ty)
        out.append(f'<line x1="{m_left - 5}" y1="{_fmt(Y)}" x2="{m_left}" '
                   f'y2="{_fmt(Y)}" stroke="#333333"/>')
        out.append(f'<text x="{m_left - 8}" y="{_fmt(Y + 4)}" font-size="11" '
                   f'text-anchor="end" font-family="sans-serif">{ty:.3g}</text>')
    for k, (x, y, label) in enumerate(series):
        color = _COLORS[k % len(_COLORS)]
        pts = " ".join(f"{_fmt(px(a))},{_fmt(py(b))}" for a, b in zip(x, y))
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                   'stroke-width="1.5"/>')
        if label:
            ly = m_top + 14 + 14 * k
            out.append(f'<line x1="{m_left + pw - 120}" y1="{ly - 4}" '
                       f'x2="{m_left + pw - 100}" y2="{ly - 4}" '
                       f'stroke="{color}" stroke-width="1.5"/>')
            out.append(f'<text x="{m_left + pw - 95}" y="{ly}" font-size="11" '
                       f'font-family="sans-serif">{label}</text>')
    if title:
        out.append(f'<text x="{width / 2:.1f}" y="18" font-size="13" '
                   f'text-anchor="middle" font-family="sans-serif">{title}</text>')
    if xlabel:
        out.append(f'<text x="{m_left + pw / 2:.1f}" y="{height - 10}" '
                   f'font-size="12" text-anchor="middle" '
                   f'font-family="sans-serif">{xlabel}</text>')
    if ylabel:
        out.append(f'<text x="16" y="{m_top + ph / 2:.1f}" font-size="12" '
                   f'text-anchor="middle" font-family="sans-serif" '
                   f'transform="rotate(-90 16 {m_top + ph / 2:.1f})">{ylabel}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
