"""SVG drawings of layered graphs.

Layer 1 is the top row. Each row holds its vertices (by id) followed by the
dummy points of arcs passing through it (by arc index), evenly spaced and
centred. Arcs are polylines through their dummy points; reversed arcs are
dash-dotted. Output depends only on the graph and the layering.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

from .graph import DiGraph
from .metrics import Layering, LayeringError, check_feasible

ROW_GAP = 80
COL_GAP = 60
MARGIN = 40
RADIUS = 12
DUMMY_RADIUS = 3
DASH_DOT = "8 4 2 4"


def _fmt(x: float) -> str:
    return f"{x:.1f}".rstrip("0").rstrip(".")


def layout(g: DiGraph, l: Layering) -> tuple[dict, dict, int, int]:
    """Positions of vertices and dummy points.

    Returns ``(vertex_xy, dummy_xy, width_px, height_px)`` where
    ``dummy_xy[(arc_index, layer)]`` is the point of that arc on that row.
    """
    if not check_feasible(g, l):
        raise LayeringError("cannot draw: an arc has both endpoints on one layer")
    a = l.assignment
    height = l.height
    rows: dict[int, list] = {k: [] for k in range(1, height + 1)}
    for v in range(g.n):
        rows[a[v]].append(("v", v))
    for i, (u, v) in enumerate(g.arcs):
        lo, hi = sorted((a[u], a[v]))
        for k in range(lo + 1, hi):
            rows[k].append(("d", i))
    widest = max((len(r) for r in rows.values()), default=1) or 1
    span = (widest - 1) * COL_GAP
    vertex_xy, dummy_xy = {}, {}
    for k, items in rows.items():
        y = MARGIN + (k - 1) * ROW_GAP
        offset = MARGIN + (span - (len(items) - 1) * COL_GAP) / 2
        for j, (kind, ident) in enumerate(items):
            pt = (offset + j * COL_GAP, y)
            if kind == "v":
                vertex_xy[ident] = pt
            else:
                dummy_xy[(ident, k)] = pt
    return vertex_xy, dummy_xy, int(2 * MARGIN + span), int(2 * MARGIN + max(height - 1, 0) * ROW_GAP)


def render_svg(g: DiGraph, l: Layering, labels: list[str] | None = None) -> str:
    vertex_xy, dummy_xy, w, h = layout(g, l)
    a = l.assignment
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        "<defs>",
        '<marker id="arrow" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="6" markerHeight="6" orient="auto">',
        '<path d="M0,0 L10,5 L0,10 z" fill="black"/>',
        "</marker>",
        "</defs>",
    ]
    for k in range(1, l.height + 1):
        y = _fmt(MARGIN + (k - 1) * ROW_GAP)
        out.append(f'<line class="layer" data-layer="{k}" x1="0" y1="{y}" x2="{w}" y2="{y}" stroke="#dddddd"/>')

    for i, (u, v) in enumerate(g.arcs):
        step = 1 if a[v] > a[u] else -1
        pts = [vertex_xy[u]] + [dummy_xy[(i, k)] for k in range(a[u] + step, a[v], step)] + [vertex_xy[v]]
        # stop the arrow at the head's circle
        (x0, y0), (x1, y1) = pts[-2], pts[-1]
        dx, dy = x1 - x0, y1 - y0
        norm = (dx * dx + dy * dy) ** 0.5 or 1.0
        pts[-1] = (x1 - dx / norm * RADIUS, y1 - dy / norm * RADIUS)
        path = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
        reversed_arc = a[v] < a[u]
        style = f' stroke-dasharray="{DASH_DOT}"' if reversed_arc else ""
        cls = "arc reversed" if reversed_arc else "arc"
        out.append(
            f'<polyline class="{cls}" data-arc="{i}" points="{path}" fill="none" stroke="black"{style}'
            ' marker-end="url(#arrow)"/>'
        )

    for (i, k), (x, y) in sorted(dummy_xy.items()):
        out.append(f'<circle class="dummy" data-arc="{i}" data-layer="{k}" cx="{_fmt(x)}" cy="{_fmt(y)}" r="{DUMMY_RADIUS}"/>')
    for v in range(g.n):
        x, y = vertex_xy[v]
        text = escape(labels[v]) if labels else str(v)
        out.append(
            f'<g class="vertex" data-vertex="{v}"><circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{RADIUS}" fill="white" stroke="black"/>'
            f'<text x="{_fmt(x)}" y="{_fmt(y + 4)}" text-anchor="middle" font-size="11">{text}</text></g>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


__all__ = ["layout", "render_svg"]
