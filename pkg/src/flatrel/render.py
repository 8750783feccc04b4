"""SVG picture of a developed fundamental domain."""
from __future__ import annotations

from xml.sax.saxutils import escape

from .homology import chain_sum, halfedge_chain, is_null_homologous, period_chart
from .surface import FlatSurface, bfs_faces

PALETTE = ("#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


def develop(s: FlatSurface) -> dict:
    """Planar position of the origin of every half-edge, triangle by triangle."""
    order, parent = bfs_faces(s)
    pos = {}
    for f in order:
        tri = s.triangles[f]
        via = parent[f]
        if via is None:
            start, at = tri[0], (0.0, 0.0)
        else:
            start = via
            src = s.twin[via]
            base = pos[src]
            at = (base[0] + float(s.hol[src].x), base[1] + float(s.hol[src].y))
        h = start
        x, y = at
        for _ in range(3):
            pos[h] = (x, y)
            x, y = x + float(s.hol[h].x), y + float(s.hol[h].y)
            h = s.nxt[h]
    return pos


def slit_edges(s: FlatSurface) -> list:
    """Edges that pair up with another edge of equal holonomy and endpoints, homologous to it."""
    chart = period_chart(s) if s.backend == "exact" else None
    found = set()
    reps = s.edges
    for i, e in enumerate(reps):
        if s.origin[e] == s.head(e):
            continue
        for f in reps[i + 1:]:
            g = f if s.origin[f] == s.origin[e] else s.twin[f]
            if s.origin[g] != s.origin[e] or s.head(g) != s.head(e) or s.hol[g] != s.hol[e]:
                continue
            if chart is not None:
                diff = chain_sum(halfedge_chain(s, e), halfedge_chain(s, g), coeffs=[1, -1])
                if not is_null_homologous(chart, diff):
                    continue
            found.update((e, f))
    return sorted(found)


def render_svg(s: FlatSurface, connections=(), size: int = 480, title: str | None = None) -> str:
    pos = develop(s)
    points = list(pos.values())
    for sc in connections:
        x, y = pos[sc.start]
        points.append((x + float(sc.holonomy.x), y + float(sc.holonomy.y)))
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
    pad = 0.06 * span
    scale = size / (span + 2 * pad)
    x0, y1 = min(xs) - pad, max(ys) + pad

    def pt(p):
        return f"{(p[0] - x0) * scale:.3f},{(y1 - p[1]) * scale:.3f}"

    slits = set(slit_edges(s))
    width = (max(xs) - min(xs) + 2 * pad) * scale
    height = (max(ys) - min(ys) + 2 * pad) * scale
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0f}" '
        f'height="{height:.0f}" viewBox="0 0 {width:.3f} {height:.3f}">',
    ]
    if title:
        out.append(f"<title>{escape(title)}</title>")
    out.append('<g class="triangles" fill="#f4f4f4" stroke="#999" stroke-width="0.6">')
    for tri in s.triangles:
        out.append(f'<polygon points="{" ".join(pt(pos[h]) for h in tri)}"/>')
    out.append("</g>")
    drawn = set()
    for h in sorted(pos):
        rep = min(h, s.twin[h])
        if rep not in slits or rep in drawn:
            continue
        drawn.add(rep)
        a = pos[h]
        b = (a[0] + float(s.hol[h].x), a[1] + float(s.hol[h].y))
        out.append(f'<line class="slit" x1="{pt(a).split(",")[0]}" y1="{pt(a).split(",")[1]}" '
                   f'x2="{pt(b).split(",")[0]}" y2="{pt(b).split(",")[1]}" '
                   'stroke="#000" stroke-width="2.5"/>')
    for sc in connections:
        a = pos[sc.start]
        b = (a[0] + float(sc.holonomy.x), a[1] + float(sc.holonomy.y))
        out.append(f'<polyline class="saddle" points="{pt(a)} {pt(b)}" fill="none" '
                   'stroke="#ff7f0e" stroke-width="1.2" stroke-dasharray="4 2"/>')
    for h, p in sorted(pos.items()):
        colour = PALETTE[s.origin[h] % len(PALETTE)]
        x, y = pt(p).split(",")
        out.append(f'<circle class="zero" data-label="{s.origin[h]}" cx="{x}" cy="{y}" r="3.5" '
                   f'fill="{colour}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
