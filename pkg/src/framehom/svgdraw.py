"""Deterministic SVG 1.1 diagrams of frameworks and their stress/mechanism data.

Layout is a pure function of the vertex coordinates: positions are scaled
into a fixed canvas, arrows are normalized so the largest resultant has a
fixed pixel length, and numeric annotations are printed to four
significant digits.
"""

from __future__ import annotations

import math

from .framework import Framework

CANVAS = 640.0
MARGIN = 80.0
ARROW_PX = 60.0      # pixel length of the largest vertex resultant
VERTEX_R = 5.0


def _project(p) -> tuple[float, float]:
    if len(p) == 2:
        return float(p[0]), float(p[1])
    # fixed axonometric projection for spatial frameworks
    x, y, z = (float(c) for c in p)
    return x - 0.45 * z, y - 0.25 * z


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _value(x) -> str:
    return f"{float(x):.4g}"


class _Mapper:
    def __init__(self, f: Framework):
        pts = [_project(p) for p in f.positions]
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        w = max(xs) - min(xs)
        h = max(ys) - min(ys)
        span = max(w, h, 1e-9)
        self.scale = (CANVAS - 2 * MARGIN) / span
        self.x0, self.y0 = min(xs), min(ys)
        self.h = h

    def __call__(self, p) -> tuple[float, float]:
        x, y = _project(p)
        return (MARGIN + (x - self.x0) * self.scale,
                CANVAS - MARGIN - (y - self.y0) * self.scale)


def render_svg(f: Framework, *, title: str = "",
               edge_texts: dict | None = None,
               vertex_arrows: dict | None = None,
               show_values: bool = True) -> str:
    """Draw the framework with optional per-edge labels and vertex arrows.

    ``edge_texts`` maps edge index -> annotation string; ``vertex_arrows``
    maps vertex id -> force vector (any dimension matching the framework).
    """
    m = _Mapper(f)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_fmt(CANVAS)}" height="{_fmt(CANVAS)}" '
        f'viewBox="0 0 {_fmt(CANVAS)} {_fmt(CANVAS)}">',
        '<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" '
        'markerWidth="7" markerHeight="7" orient="auto-start-reverse">'
        '<path d="M 0 0 L 10 5 L 0 10 z" fill="green"/></marker></defs>',
        f'<rect width="{_fmt(CANVAS)}" height="{_fmt(CANVAS)}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{_fmt(CANVAS / 2)}" y="28" font-size="16" '
                   f'text-anchor="middle" font-family="monospace">{title}</text>')
    for k, (t, h) in enumerate(f.edges):
        x1, y1 = m(f.positions[t])
        x2, y2 = m(f.positions[h])
        out.append(f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
                   'stroke="black" stroke-width="2"/>')
        if show_values and edge_texts and k in edge_texts:
            mx, my = (x1 + x2) / 2, (y1 + y2) / 2
            out.append(f'<text x="{_fmt(mx)}" y="{_fmt(my - 6)}" font-size="12" '
                       f'text-anchor="middle" font-family="monospace" fill="darkblue">'
                       f'{edge_texts[k]}</text>')
    arrow_scale = 0.0
    if vertex_arrows:
        longest = max(math.sqrt(sum(float(c) ** 2 for c in vec))
                      for vec in vertex_arrows.values())
        if longest > 0:
            arrow_scale = ARROW_PX / longest
    if vertex_arrows and arrow_scale:
        for v, vec in sorted(vertex_arrows.items()):
            norm = math.sqrt(sum(float(c) ** 2 for c in vec))
            if norm * arrow_scale < 1e-6:
                continue
            ux, uy = _project([float(c) for c in vec])
            plen = math.hypot(ux, uy)
            if plen == 0:
                continue
            x, y = m(f.positions[v])
            dx = ux / plen * norm * arrow_scale
            dy = uy / plen * norm * arrow_scale
            out.append(f'<line x1="{_fmt(x)}" y1="{_fmt(y)}" '
                       f'x2="{_fmt(x + dx)}" y2="{_fmt(y - dy)}" stroke="green" '
                       'stroke-width="2.5" marker-end="url(#arrow)"/>')
            if show_values:
                out.append(f'<text x="{_fmt(x + dx + 4)}" y="{_fmt(y - dy - 4)}" '
                           f'font-size="11" font-family="monospace" fill="green">'
                           f'{_value(norm)}</text>')
    for v, p in enumerate(f.positions):
        x, y = m(p)
        out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(VERTEX_R)}" '
                   'fill="white" stroke="black" stroke-width="1.5"/>')
        out.append(f'<text x="{_fmt(x + 8)}" y="{_fmt(y + 12)}" font-size="12" '
                   f'font-family="monospace">{v}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
