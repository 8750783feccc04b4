"""Local retriangulation: point location, point insertion, forcing a segment
to be an edge, and contracting zero-length edges.

All routines work on mutable arrays ``(nxt, twin, origin, hol)`` so they can
be chained before a single :class:`FlatSurface` is built at the end.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import errors
from .scalar import Vec2, dot_sign, in_sector, orient, same_direction
from .surface import FlatSurface, flip_arrays, vertex_orbits

SLIT_BUDGET = 100_000


@dataclass
class Arrays:
    nxt: list
    twin: list
    origin: list
    hol: list

    @classmethod
    def of(cls, s: FlatSurface) -> "Arrays":
        return cls(list(s.nxt), list(s.twin), list(s.origin), list(s.hol))

    def surface(self) -> FlatSurface:
        return FlatSurface(tuple(self.nxt), tuple(self.twin), tuple(self.origin), tuple(self.hol))

    def prev(self, h):
        return self.nxt[self.nxt[h]]

    def head(self, h):
        return self.origin[self.nxt[h]]

    def corners(self, label):
        start = self.origin.index(label)
        out = [start]
        h = self.twin[self.prev(start)]
        while h != start:
            out.append(h)
            h = self.twin[self.prev(h)]
        return out

    def corner_containing(self, label, direction):
        for h in self.corners(label):
            if in_sector(self.hol[h], -self.hol[self.prev(h)], direction):
                return h
        raise ValueError(f"no corner at vertex {label} contains {direction}")

    def new_halfedges(self, count):
        base = len(self.nxt)
        for arr, fill in ((self.nxt, -1), (self.twin, -1), (self.origin, -1), (self.hol, None)):
            arr.extend([fill] * count)
        return list(range(base, base + count))


# ---------------------------------------------------------------- location

@dataclass
class Located:
    """Where the endpoint of a segment from a vertex lands.

    ``kind`` is ``"face"`` or ``"edge"``.  ``h`` is a half-edge of that face
    (or the edge itself) whose origin sits at ``base`` in the development
    centred on the start vertex; ``point`` is the endpoint there.
    """
    kind: str
    h: int
    base: Vec2
    point: Vec2


def locate(arr: Arrays, corner: int, v: Vec2, budget: int = SLIT_BUDGET) -> Located:
    """March the segment ``v`` out of ``corner``; it must avoid every vertex."""
    hol, nxt = arr.hol, arr.nxt
    u = hol[corner]
    w = -hol[arr.prev(corner)]
    zero = v * 0
    if same_direction(u, v):
        # running along the edge itself
        if v.norm2() < u.norm2():
            return Located("edge", corner, zero, v)
        raise errors.SlitHitsConePoint("slit runs into a vertex along an edge")
    e_out = nxt[corner]
    side = orient(w - u, v - u)
    if side > 0:
        return Located("face", corner, zero, v)
    if side == 0:
        return Located("edge", e_out, u, v)
    h_in = arr.twin[e_out]
    x, y = w, u
    for _ in range(budget):
        n = nxt[h_in]
        p = nxt[n]
        apex = y + hol[n]
        o = orient(v, apex)
        if o == 0 and dot_sign(v, apex) > 0:
            beyond = dot_sign(v, apex - v)
            if beyond > 0:
                return Located("face", h_in, x, v)
            raise errors.SlitHitsConePoint("slit meets a vertex")
        if o > 0:
            edge, start, end = n, y, apex
        else:
            edge, start, end = p, apex, x
        side = orient(end - start, v - start)
        if side > 0:
            return Located("face", h_in, x, v)
        if side == 0:
            return Located("edge", edge, start, v)
        if o > 0:
            x = apex
        else:
            y = apex
        h_in = arr.twin[edge]
    raise errors.SlitTooLong("slit leaves the development budget")


# ---------------------------------------------------------------- insertion

def insert_point(arr: Arrays, loc: Located, label: int) -> None:
    """Add a vertex with ``label`` at the located point."""
    if loc.kind == "face":
        _insert_in_face(arr, loc, label)
    else:
        _insert_on_edge(arr, loc, label)


def _insert_in_face(arr: Arrays, loc: Located, label: int) -> None:
    h0 = loc.h
    h1 = arr.nxt[h0]
    h2 = arr.nxt[h1]
    pos = [loc.base, loc.base + arr.hol[h0], loc.base + arr.hol[h0] + arr.hol[h1]]
    sides = [h0, h1, h2]
    new = arr.new_halfedges(6)
    spoke_in = new[0:3]   # vertex j -> q
    spoke_out = new[3:6]  # q -> vertex j
    for j in range(3):
        arr.origin[spoke_in[j]] = arr.origin[sides[j]]
        arr.origin[spoke_out[j]] = label
        arr.hol[spoke_in[j]] = loc.point - pos[j]
        arr.hol[spoke_out[j]] = pos[j] - loc.point
        arr.twin[spoke_in[j]] = spoke_out[j]
        arr.twin[spoke_out[j]] = spoke_in[j]
    for i in range(3):
        j = (i + 1) % 3
        # triangle v_i -> v_j -> q
        arr.nxt[sides[i]] = spoke_in[j]
        arr.nxt[spoke_in[j]] = spoke_out[i]
        arr.nxt[spoke_out[i]] = sides[i]


def _insert_on_edge(arr: Arrays, loc: Located, label: int) -> None:
    h = loc.h
    g = arr.twin[h]
    h1 = arr.nxt[h]
    h2 = arr.nxt[h1]
    g1 = arr.nxt[g]
    g2 = arr.nxt[g1]
    pa = loc.base
    pb = pa + arr.hol[h]
    pc = pb + arr.hol[h1]
    pd = pa + arr.hol[g1]
    q = loc.point
    hq, gq, c1, c2, d1, d2 = arr.new_halfedges(6)
    a_lab, b_lab = arr.origin[h], arr.origin[g]
    c_lab, d_lab = arr.origin[h2], arr.origin[g2]
    layout = {
        h: (a_lab, q - pa), hq: (label, pb - q), g: (b_lab, q - pb), gq: (label, pa - q),
        c1: (label, pc - q), c2: (c_lab, q - pc), d1: (label, pd - q), d2: (d_lab, q - pd),
    }
    for e, (lab, vec_) in layout.items():
        arr.origin[e] = lab
        arr.hol[e] = vec_
    for x, y in ((h, gq), (g, hq), (c1, c2), (d1, d2)):
        arr.twin[x], arr.twin[y] = y, x
    for tri in ((h, c1, h2), (hq, h1, c2), (g, d1, g2), (gq, g1, d2)):
        for i in range(3):
            arr.nxt[tri[i]] = tri[(i + 1) % 3]


# ---------------------------------------------------------------- segments

def _march_crossings(arr: Arrays, corner: int, v: Vec2, budget: int):
    """Edges crossed by the segment ``v`` from ``corner``, ending at a vertex.

    Returns ``(edge, [])`` when the segment is already ``edge``, otherwise
    ``(None, crossings)`` with ``(half_edge, apex_before, apex_after)`` items.
    """
    hol, nxt = arr.hol, arr.nxt
    u = hol[corner]
    if same_direction(u, v):
        if u == v:
            return corner, []
        raise errors.SlitHitsConePoint("segment runs into a vertex along an edge")
    w = -hol[arr.prev(corner)]
    h_in = arr.twin[nxt[corner]]
    x, y = w, u
    before = v * 0
    out = []
    for _ in range(budget):
        n = nxt[h_in]
        apex = y + hol[n]
        out.append((h_in, before, apex))
        o = orient(v, apex)
        if o == 0 and dot_sign(v, apex) > 0:
            if apex == v:
                return None, out
            raise errors.SlitHitsConePoint("segment meets a vertex")
        before = apex
        if o > 0:
            x = apex
            h_in = arr.twin[n]
        else:
            y = apex
            h_in = arr.twin[nxt[n]]
    raise errors.SlitTooLong("segment leaves the development budget")


def _flippable(arr: Arrays, e: int) -> bool:
    f = arr.twin[e]
    e1, e2 = arr.nxt[e], arr.prev(e)
    f1, f2 = arr.nxt[f], arr.prev(f)
    if e in (f1, f2) or f in (e1, e2):
        return False
    new = arr.hol[f2] + arr.hol[e1]
    return orient(new, arr.hol[e2]) > 0 and orient(-new, arr.hol[f2]) > 0


def make_edge(arr: Arrays, start_label: int, v: Vec2, budget: int = SLIT_BUDGET) -> int:
    """Flip until the segment ``v`` from ``start_label`` is an edge; return it."""
    for _ in range(budget):
        corner = arr.corner_containing(start_label, v)
        edge, crossings = _march_crossings(arr, corner, v, budget)
        if edge is not None:
            return edge
        chosen = None
        for h, before, after in crossings:
            if not _flippable(arr, h):
                continue
            if chosen is None:
                chosen = h
            if orient(v, before) * orient(v, after) >= 0:
                chosen = h
                break
        if chosen is None:
            raise errors.SlitTooLong("no convex crossing edge to flip")
        flip_arrays(arr.nxt, arr.twin, arr.origin, arr.hol, chosen)
    raise errors.SlitTooLong("segment insertion exceeded its flip budget")


# ---------------------------------------------------------------- contraction

def contract_zero_edge(arr: Arrays, e: int, removed: set) -> None:
    """Collapse the zero-length edge ``e`` and its two (degenerate) triangles.

    The removed half-edges are added to ``removed``; ``origin`` labels of the
    two endpoints are merged into the smaller one.
    """
    f = arr.twin[e]
    e1, e2 = arr.nxt[e], arr.prev(e)
    f1, f2 = arr.nxt[f], arr.prev(f)
    keep, drop = sorted((arr.origin[e], arr.origin[f]))
    partner = {e1: e2, e2: e1, f1: f2, f2: f1}
    gone = {e, f, e1, e2, f1, f2}
    fix = {}
    for x in (e1, e2, f1, f2):
        a = arr.twin[x]
        if a in gone:
            continue
        y = arr.twin[partner[x]]
        guard = 0
        while y in gone:
            y = arr.twin[partner[y]]
            guard += 1
            if guard > 6:
                raise errors.BadCombinatorics("contraction collapses a whole component")
        fix[a] = y
    for a, y in fix.items():
        arr.twin[a] = y
    removed.update(gone)
    if drop != keep:
        arr.origin[:] = [keep if o == drop else o for o in arr.origin]


def relabel_by_orbits(nxt, twin, first=()) -> list:
    """Fresh labels from vertex orbits; orbits containing ``first`` half-edges come first."""
    orbits = vertex_orbits(nxt, twin)
    where = {}
    for i, orbit in enumerate(orbits):
        for h in orbit:
            where[h] = i
    order = []
    for h in first:
        if where[h] not in order:
            order.append(where[h])
    for i in range(len(orbits)):
        if i not in order:
            order.append(i)
    rank = {orb: r for r, orb in enumerate(order)}
    return [rank[where[h]] for h in range(len(nxt))]
