"""SVG previews of a layout, yarn edges in dark gray and loop edges in blue."""

from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from .errors import InvalidParameter
from .geometry import Layout, positions_for
from .graph import EdgeKind, KnitGraph

__all__ = ["RenderStyle", "to_svg", "oriented_positions"]


@dataclass(frozen=True)
class RenderStyle:
    """Drawing options; lengths are in stitch units.

    ``scale`` converts stitch units to SVG user units for the width and
    height attributes. With ``orient_rows`` the drawing is rotated so the
    last row sits above the cast-on row.
    """

    node_radius: float = 0.12
    node_color: str = "#222222"
    yarn_color: str = "#555555"
    yarn_width: float = 0.06
    loop_color: str = "#1f5fbf"
    loop_width: float = 0.05
    padding: float = 0.5
    background: str = "#ffffff"
    scale: float = 40.0
    orient_rows: bool = True

    def __post_init__(self):
        if not self.node_radius > 0:
            raise InvalidParameter("node_radius must be > 0")
        if not (self.yarn_width > 0 and self.loop_width > 0):
            raise InvalidParameter("edge widths must be > 0")
        if self.padding < 0 or not self.scale > 0:
            raise InvalidParameter("padding must be >= 0 and scale > 0")


def _fmt(v: float) -> str:
    s = f"{v:.4f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def oriented_positions(P: np.ndarray, g: KnitGraph) -> np.ndarray:
    """Rotate ``P`` about its centroid so rows run upward (+y)."""
    if g.n == 0:
        return P
    rows = np.array([node.row for node in g.nodes])
    first, last = rows.min(), rows.max()
    if first == last:
        return P
    d = P[rows == last].mean(axis=0) - P[rows == first].mean(axis=0)
    if not np.hypot(*d) > 0:
        return P
    angle = math.pi / 2 - math.atan2(d[1], d[0])
    c, s = math.cos(angle), math.sin(angle)
    centre = P.mean(axis=0)
    return (P - centre) @ np.array([[c, s], [-s, c]]) + centre


def to_svg(layout: Layout, g: KnitGraph, style: RenderStyle = RenderStyle()) -> str:
    """SVG 1.1 document with one circle per node and one line per segment."""
    P = positions_for(layout, g) if g.n else np.empty((0, 2))
    if style.orient_rows:
        P = oriented_positions(P, g)
    # flip y so rows increase upward on screen
    Q = np.column_stack([P[:, 0], -P[:, 1]]) if len(P) else P
    pad = style.padding + style.node_radius
    if len(Q):
        lo, hi = Q.min(axis=0) - pad, Q.max(axis=0) + pad
    else:
        lo, hi = np.zeros(2), np.full(2, 2 * pad or 1.0)
    w, h = hi - lo
    box = " ".join(_fmt(v) for v in (lo[0], lo[1], w, h))

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        '<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN" "http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_fmt(w * style.scale)}" '
        f'height="{_fmt(h * style.scale)}" viewBox="{box}">',
        f'<rect x="{_fmt(lo[0])}" y="{_fmt(lo[1])}" width="{_fmt(w)}" height="{_fmt(h)}" fill={quoteattr(style.background)}/>',
    ]
    yarn = f'stroke={quoteattr(style.yarn_color)} stroke-width="{_fmt(style.yarn_width)}"'
    loop = f'stroke={quoteattr(style.loop_color)} stroke-width="{_fmt(style.loop_width)}"'
    out.append('<g id="edges" stroke-linecap="round">')
    for (a, b), kind in zip(g.segments, g.segment_kinds):
        cls, attrs = ("yarn", yarn) if kind is EdgeKind.YARN else ("loop", loop)
        out.append(
            f'<line class="{cls}" x1="{_fmt(Q[a, 0])}" y1="{_fmt(Q[a, 1])}" '
            f'x2="{_fmt(Q[b, 0])}" y2="{_fmt(Q[b, 1])}" {attrs}/>'
        )
    out.append("</g>")
    out.append(f'<g id="nodes" fill={quoteattr(style.node_color)}>')
    r = _fmt(style.node_radius)
    for node in g.nodes:
        x, y = Q[node.id - 1]
        out.append(f'<circle id="n{node.id}" cx="{_fmt(x)}" cy="{_fmt(y)}" r="{r}"><title>{node.id} {escape(node.stitch)} row {node.row}</title></circle>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
