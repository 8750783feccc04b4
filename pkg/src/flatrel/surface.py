"""Triangulated translation surfaces.

A surface is stored as half-edges ``0..3F-1`` with three permutations:
``nxt`` (the next half-edge counterclockwise around its triangle), ``twin``
(the opposite half-edge of the same edge) and the holonomy vector of every
half-edge.  ``origin[h]`` is the label of the cone point the half-edge
leaves from; labels run ``0..k-1`` and give the fixed numbering of zeros
that REL vectors are indexed by.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
import math

from . import errors
from .scalar import (
    EPS, EXACT, FLOAT, Vec2, cross, in_sector, is_float, orient, to_float,
)

HORIZONTAL = Vec2(1, 0)


@dataclass(frozen=True)
class FlatSurface:
    nxt: tuple
    twin: tuple
    origin: tuple
    hol: tuple

    def __post_init__(self):
        for name in ("nxt", "twin", "origin", "hol"):
            value = getattr(self, name)
            if not isinstance(value, tuple):
                object.__setattr__(self, name, tuple(value))

    @property
    def n_half(self) -> int:
        return len(self.nxt)

    @cached_property
    def num_vertices(self) -> int:
        return max(self.origin) + 1 if self.origin else 0

    @cached_property
    def backend(self) -> str:
        return FLOAT if any(is_float(v) for v in self.hol) else EXACT

    def head(self, h: int) -> int:
        return self.origin[self.nxt[h]]

    def prev(self, h: int) -> int:
        return self.nxt[self.nxt[h]]

    @cached_property
    def triangles(self) -> tuple:
        """Triangles as half-edge triples, each starting at its smallest index."""
        seen = set()
        out = []
        for h in range(self.n_half):
            if h in seen:
                continue
            tri = (h, self.nxt[h], self.nxt[self.nxt[h]])
            seen.update(tri)
            out.append(tri)
        return tuple(out)

    @cached_property
    def face_of(self) -> tuple:
        face = [0] * self.n_half
        for i, tri in enumerate(self.triangles):
            for h in tri:
                face[h] = i
        return tuple(face)

    @cached_property
    def edges(self) -> tuple:
        """One representative half-edge per edge, the smaller of the pair."""
        return tuple(h for h in range(self.n_half) if h < self.twin[h])

    def corners(self, label: int) -> list:
        """Half-edges leaving the vertex ``label``, in counterclockwise order."""
        start = self.origin.index(label)
        out = [start]
        h = self._rotate(start)
        while h != start:
            out.append(h)
            h = self._rotate(h)
        return out

    def _rotate(self, h: int) -> int:
        # next half-edge counterclockwise around origin(h)
        return self.twin[self.prev(h)]

    def corner_containing(self, label: int, direction: Vec2) -> list:
        """All corners at ``label`` whose half-open sector contains ``direction``."""
        return [h for h in self.corners(label)
                if in_sector(self.hol[h], -self.hol[self.prev(h)], direction)]

    def with_hol(self, hol) -> "FlatSurface":
        return FlatSurface(self.nxt, self.twin, self.origin, tuple(hol))

    def __repr__(self):
        return (f"FlatSurface(F={len(self.triangles)}, k={self.num_vertices}, "
                f"backend={self.backend})")


@dataclass(frozen=True)
class StratumSignature:
    orders: tuple
    genus: int

    def __str__(self):
        return "H(" + ",".join(str(m) for m in self.orders) + f"), g={self.genus}"


# ---------------------------------------------------------------- construction

def vertex_orbits(nxt, twin) -> list:
    """Orbits of half-edges around their origin, ordered by smallest member."""
    n = len(nxt)
    seen = [False] * n
    orbits = []
    for h in range(n):
        if seen[h]:
            continue
        orbit = []
        g = h
        while not seen[g]:
            seen[g] = True
            orbit.append(g)
            g = twin[nxt[nxt[g]]]
        orbits.append(orbit)
    return orbits


def from_triangles(nxt, twin, hol) -> FlatSurface:
    """Build a surface, numbering vertices by their smallest outgoing half-edge."""
    origin = [0] * len(nxt)
    for label, orbit in enumerate(vertex_orbits(nxt, twin)):
        for h in orbit:
            origin[h] = label
    return FlatSurface(tuple(nxt), tuple(twin), tuple(origin), tuple(hol))


def polygon_surface(vertices, gluing) -> FlatSurface:
    """Fan-triangulate a convex polygon and glue its sides by translations.

    ``vertices`` run counterclockwise; side ``i`` goes from vertex ``i`` to
    vertex ``i+1``.  ``gluing`` maps each side to the side it is glued to.
    """
    n = len(vertices)
    sides = [vertices[(i + 1) % n] - vertices[i] for i in range(n)]
    nt = n - 2
    nxt = [0] * (3 * nt)
    twin = [-1] * (3 * nt)
    hol = [None] * (3 * nt)
    side_half = {}
    for t in range(nt):
        i = t + 1
        h = 3 * t
        nxt[h], nxt[h + 1], nxt[h + 2] = h + 1, h + 2, h
        hol[h] = vertices[i] - vertices[0]
        hol[h + 1] = sides[i]
        hol[h + 2] = vertices[0] - vertices[i + 1]
        side_half[i] = h + 1
        if t == 0:
            side_half[0] = h
        else:
            twin[h], twin[h - 1] = h - 1, h
    side_half[n - 1] = 3 * (nt - 1) + 2
    for a, b in gluing.items():
        twin[side_half[a]] = side_half[b]
        twin[side_half[b]] = side_half[a]
    if -1 in twin:
        raise errors.TwinMismatch("polygon gluing leaves an unpaired side",
                                  twin.index(-1))
    return from_triangles(nxt, twin, hol)


def symmetric_polygon_surface(sides) -> FlatSurface:
    """Centrally symmetric polygon with sides ``v1..vn, -v1..-vn``, opposite sides glued."""
    n = len(sides)
    all_sides = list(sides) + [-v for v in sides]
    verts = [Vec2(0 * sides[0].x, 0 * sides[0].y)]
    for v in all_sides[:-1]:
        verts.append(verts[-1] + v)
    gluing = {i: i + n for i in range(n)}
    return polygon_surface(verts, gluing)


def relabel(s: FlatSurface, mapping) -> FlatSurface:
    """Rename vertex labels through ``mapping`` (old label -> new label)."""
    return FlatSurface(s.nxt, s.twin, tuple(mapping[o] for o in s.origin), s.hol)


def compact_labels(origin, first=()) -> tuple:
    """Renumber labels to ``0..k-1``; labels in ``first`` come first, the rest by order of appearance."""
    mapping = {}
    for lab in first:
        if lab not in mapping:
            mapping[lab] = len(mapping)
    for lab in origin:
        if lab not in mapping:
            mapping[lab] = len(mapping)
    return tuple(mapping[o] for o in origin)


def as_float(s: FlatSurface) -> FlatSurface:
    return s.with_hol(to_float(v) for v in s.hol)


# ---------------------------------------------------------------- validation

def _close(v: Vec2, scale: float) -> bool:
    return abs(v.x) <= EPS * scale and abs(v.y) <= EPS * scale


def validate(s: FlatSurface) -> None:
    """Raise the first violated invariant, or return None when ``s`` is valid."""
    n = s.n_half
    if n == 0 or n % 3 or not (len(s.twin) == len(s.origin) == len(s.hol) == n):
        raise errors.BadCombinatorics("array lengths must agree and be a positive multiple of 3")
    if sorted(s.nxt) != list(range(n)):
        raise errors.BadCombinatorics("next is not a permutation")
    for h in range(n):
        if s.nxt[h] == h or s.nxt[s.nxt[s.nxt[h]]] != h:
            raise errors.BadCombinatorics("next does not have order 3", h)
    for h in range(n):
        t = s.twin[h]
        if not 0 <= t < n or t == h or s.twin[t] != h:
            raise errors.TwinMismatch("twin is not a fixed-point-free involution", h)
    kinds = {is_float(v) for v in s.hol}
    if len(kinds) > 1:
        raise errors.MixedBackend("surface mixes exact and float holonomies")
    floating = kinds == {True}
    if not floating:
        for v in s.hol:
            if not (isinstance(v.x, (int, Fraction)) and isinstance(v.y, (int, Fraction))):
                raise errors.MixedBackend("exact holonomies must be rationals")
    scale = max(math.sqrt(float(v.norm2())) for v in s.hol) if floating else 0.0
    for h in range(n):
        total = s.hol[h] + s.hol[s.twin[h]]
        if (floating and not _close(total, scale)) or (not floating and not total.is_zero()):
            raise errors.TwinMismatch("hol(twin(e)) != -hol(e)", h)
    for tri in s.triangles:
        total = s.hol[tri[0]] + s.hol[tri[1]] + s.hol[tri[2]]
        if (floating and not _close(total, scale)) or (not floating and not total.is_zero()):
            raise errors.NonClosedTriangle("triangle holonomies do not sum to zero", tri[0])
    for tri in s.triangles:
        for h in tri:
            if orient(s.hol[h], s.hol[s.nxt[h]]) <= 0:
                raise errors.NonPositiveTriangle("triangle is not positively oriented", tri[0])
    _check_connected(s)
    _check_labels(s)


def _check_connected(s: FlatSurface) -> None:
    seen = {0}
    todo = [0]
    while todo:
        h = todo.pop()
        for g in (s.nxt[h], s.twin[h]):
            if g not in seen:
                seen.add(g)
                todo.append(g)
    if len(seen) != s.n_half:
        missing = min(set(range(s.n_half)) - seen)
        raise errors.Disconnected("half-edge graph is not connected", missing)


def _check_labels(s: FlatSurface) -> None:
    labels = set()
    for orbit in vertex_orbits(s.nxt, s.twin):
        found = {s.origin[h] for h in orbit}
        if len(found) != 1:
            raise errors.LabelMismatch("a vertex carries several labels", orbit[0])
        lab = found.pop()
        if lab in labels:
            raise errors.LabelMismatch("two vertices share a label", orbit[0])
        labels.add(lab)
    if labels != set(range(len(labels))):
        raise errors.LabelMismatch("labels are not 0..k-1")


def is_valid(s: FlatSurface) -> bool:
    try:
        validate(s)
    except errors.ValidationError:
        return False
    return True


# ---------------------------------------------------------------- measurements

def triangle_area2(s: FlatSurface, tri) -> object:
    """Twice the signed area of a triangle."""
    return cross(s.hol[tri[0]], s.hol[tri[1]])


def area(s: FlatSurface):
    total = sum((triangle_area2(s, tri) for tri in s.triangles), 0 * s.hol[0].x)
    return total / 2


def vertex_order(s: FlatSurface, label: int) -> int:
    """Order of the zero at ``label``: corners whose sector holds +x, minus one."""
    return len(s.corner_containing(label, HORIZONTAL)) - 1


def vertex_orders(s: FlatSurface) -> tuple:
    return tuple(vertex_order(s, v) for v in range(s.num_vertices))


def genus(s: FlatSurface) -> int:
    chi = s.num_vertices - len(s.edges) + len(s.triangles)
    return (2 - chi) // 2


def stratum(s: FlatSurface) -> StratumSignature:
    orders = vertex_orders(s)
    g = genus(s)
    if sum(orders) != 2 * g - 2:
        raise errors.GaussBonnetMismatch(
            f"orders {orders} do not sum to 2g-2 = {2 * g - 2}")
    return StratumSignature(tuple(sorted(orders, reverse=True)), g)


# ---------------------------------------------------------------- moves

def flip_arrays(nxt, twin, origin, hol, e) -> None:
    """Flip edge ``e`` in place on mutable arrays; ``hol`` may be None."""
    e1 = nxt[e]
    e2 = nxt[e1]
    f = twin[e]
    f1 = nxt[f]
    f2 = nxt[f1]
    # e: A->B, e1: B->C, e2: C->A; f: B->A, f1: A->D, f2: D->B
    nxt[e], nxt[e2], nxt[f1] = e2, f1, e
    nxt[f], nxt[f2], nxt[e1] = f2, e1, f
    origin[e] = origin[f2]
    origin[f] = origin[e2]
    if hol is not None:
        new = hol[f2] + hol[e1]
        hol[e] = new
        hol[f] = -new


def flipped_hol(s: FlatSurface, e: int) -> Vec2:
    f = s.twin[e]
    return s.hol[s.nxt[s.nxt[f]]] + s.hol[s.nxt[e]]


def is_flippable(s: FlatSurface, e: int) -> bool:
    """Strict convexity of the quadrilateral around ``e``."""
    f = s.twin[e]
    if s.face_of[e] == s.face_of[f]:
        return False
    new = flipped_hol(s, e)
    e2 = s.prev(e)
    f2 = s.prev(f)
    return orient(new, s.hol[e2]) > 0 and orient(-new, s.hol[f2]) > 0


def flip(s: FlatSurface, e: int) -> FlatSurface:
    """Replace edge ``e`` by the other diagonal of its quadrilateral."""
    if not is_flippable(s, e):
        raise errors.NonConvexFlip(f"edge {e} does not bound a strictly convex quadrilateral")
    nxt, twin, origin, hol = list(s.nxt), list(s.twin), list(s.origin), list(s.hol)
    flip_arrays(nxt, twin, origin, hol, e)
    return FlatSurface(tuple(nxt), tuple(twin), tuple(origin), tuple(hol))


def gl2_action(M, s: FlatSurface) -> FlatSurface:
    """Apply the matrix ``((a, b), (c, d))`` to every holonomy."""
    (a, b), (c, d) = M
    if a * d - b * c <= 0:
        raise errors.NonPositiveDeterminant("matrix must have positive determinant")
    return s.with_hol(Vec2(a * v.x + b * v.y, c * v.x + d * v.y) for v in s.hol)


def rotate(s: FlatSurface, c: Vec2) -> FlatSurface:
    """Multiply the differential by the complex number ``c`` (nonzero)."""
    return gl2_action(((c.x, -c.y), (c.y, c.x)), s)


def diagonal(lam):
    """The Teichmueller matrix ``diag(lam, 1/lam)``."""
    lam = Fraction(lam)
    return ((lam, 0), (0, 1 / lam))


def horizontalizer(d: Vec2):
    """Rotation-scaling matrix sending ``d`` to the positive real axis."""
    return ((d.x, d.y), (-d.y, d.x))


def components(nxt, twin) -> list:
    """Connected components of the half-edge graph, each a sorted list."""
    n = len(nxt)
    comp = [-1] * n
    out = []
    for start in range(n):
        if comp[start] >= 0:
            continue
        members = []
        comp[start] = len(out)
        todo = [start]
        while todo:
            h = todo.pop()
            members.append(h)
            for g in (nxt[h], twin[h]):
                if comp[g] < 0:
                    comp[g] = len(out)
                    todo.append(g)
        out.append(sorted(members))
    return out


def extract(nxt, twin, origin, hol, members) -> FlatSurface:
    """Restrict arrays to a closed set of half-edges, renumbering from 0."""
    index = {h: i for i, h in enumerate(members)}
    return FlatSurface(
        tuple(index[nxt[h]] for h in members),
        tuple(index[twin[h]] for h in members),
        compact_labels([origin[h] for h in members]),
        tuple(hol[h] for h in members),
    )


def disjoint_union(s1: FlatSurface, s2: FlatSurface):
    """Concatenate arrays; labels of ``s2`` are shifted past those of ``s1``."""
    n1 = s1.n_half
    k1 = s1.num_vertices
    nxt = list(s1.nxt) + [g + n1 for g in s2.nxt]
    twin = list(s1.twin) + [g + n1 for g in s2.twin]
    origin = list(s1.origin) + [o + k1 for o in s2.origin]
    hol = list(s1.hol) + list(s2.hol)
    return nxt, twin, origin, hol


def bfs_faces(s: FlatSurface, root: int = 0):
    """Breadth-first order of triangles with the half-edge each was reached through."""
    parent = {root: None}
    order = [root]
    todo = deque([root])
    while todo:
        f = todo.popleft()
        for h in s.triangles[f]:
            g = s.face_of[s.twin[h]]
            if g not in parent:
                parent[g] = s.twin[h]
                order.append(g)
                todo.append(g)
    return order, parent
