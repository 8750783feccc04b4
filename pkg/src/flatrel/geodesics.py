"""Straight lines on a triangulated surface: separatrices and saddle connections.

Everything works in the development of triangles around a starting cone
point, so positions are exact rational vectors relative to that point.  A
wedge of directions is pushed across edges; whenever the apex of the next
triangle lies strictly inside the wedge it is visible and the segment to it
is a saddle connection.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import math

from . import errors
from .homology import add_halfedge
from .scalar import (
    Vec2, cross, dot, dot_sign, in_open_sector, in_sector, orient,
    primitive_direction, same_direction,
)
from .surface import FlatSurface, HORIZONTAL

DEFAULT_BUDGET = 5_000_000


@dataclass(frozen=True)
class SaddleConnection:
    holonomy: Vec2
    from_zero: int
    to_zero: int
    start: int
    end: int
    path: tuple = ()
    boundary_path: tuple = ()

    @property
    def length_sq(self):
        return self.holonomy.norm2()

    @property
    def is_loop(self) -> bool:
        return self.from_zero == self.to_zero

    def key(self):
        """Identifies the connection: where it leaves and its holonomy."""
        return (self.start, self.holonomy)

    def reverse_key(self):
        return (self.end, -self.holonomy)

    def chain(self, s: FlatSurface) -> dict:
        """A chain homotopic to the segment rel endpoints (its lower boundary path)."""
        out = {}
        for h in self.boundary_path:
            add_halfedge(out, s.twin, h, 1)
        return out

    def crossings(self, s: FlatSurface) -> list:
        """``(triangle, half_edge, point)`` for each edge crossed, relative to the start."""
        if not self.path:
            return []
        d = self.holonomy
        y = s.hol[self.start]
        x = -s.hol[s.prev(self.start)]
        out = []
        for i, h in enumerate(self.path):
            e = y - x
            r = cross(x, e) / cross(d, e)
            out.append((s.face_of[h], h, d * r))
            if i + 1 < len(self.path):
                apex = y + s.hol[s.nxt[h]]
                if self.path[i + 1] == s.twin[s.nxt[h]]:
                    x = apex
                else:
                    y = apex
        return out

    def __repr__(self):
        return (f"SaddleConnection({self.holonomy}, {self.from_zero}->{self.to_zero}, "
                f"crossings={len(self.path)})")


@dataclass
class DirectionClass:
    direction: Vec2
    members: list = field(default_factory=list)

    @property
    def min_length_sq(self):
        return min(m.length_sq for m in self.members)


def _bound_sq(L, L2):
    if (L is None) == (L2 is None):
        raise ValueError("give exactly one of L or L2")
    if isinstance(L, str):
        L = Fraction(L)
    return L * L if L2 is None else L2


def _segment_dist_sq(x: Vec2, y: Vec2):
    """Squared distance from the origin to the segment ``xy``."""
    e = y - x
    ee = e.norm2()
    t = -dot(x, e) / ee
    if t <= 0:
        return x.norm2()
    if t >= 1:
        return y.norm2()
    return (x + e * t).norm2()


# ---------------------------------------------------------------- one ray

def trace_separatrix(s: FlatSurface, corner: int, direction: Vec2, L=None, *, L2=None,
                     budget: int = DEFAULT_BUDGET):
    """Follow the ray leaving ``origin(corner)`` in ``direction`` inside that corner.

    Returns the first saddle connection hit within length ``L``, else None.
    """
    bound = _bound_sq(L, L2)
    u = s.hol[corner]
    w = -s.hol[s.prev(corner)]
    if not in_sector(u, w, direction):
        raise ValueError("direction is not inside the given corner")
    frm = s.origin[corner]
    if same_direction(u, direction):
        if u.norm2() <= bound:
            return SaddleConnection(u, frm, s.head(corner), corner, s.twin[corner],
                                    (), (corner,))
        return None
    h_in = s.twin[s.nxt[corner]]
    x, y = w, u
    path = [h_in]
    lower = [corner]
    dd = direction.norm2()
    for _ in range(budget):
        apex = y + s.hol[s.nxt[h_in]]
        o = orient(direction, apex)
        if o == 0 and dot_sign(direction, apex) > 0:
            if apex.norm2() <= bound:
                lower.append(s.nxt[h_in])
                end = s.prev(h_in)
                return SaddleConnection(apex, frm, s.origin[end], corner, end,
                                        tuple(path), tuple(lower))
            return None
        if o > 0:
            nh = s.twin[s.nxt[h_in]]
            x = apex
        else:
            lower.append(s.nxt[h_in])
            nh = s.twin[s.prev(h_in)]
            y = apex
        e = y - x
        r = cross(x, e) / cross(direction, e)
        if r * r * dd > bound:
            return None
        h_in = nh
        path.append(h_in)
    raise errors.BudgetExceeded("separatrix trace exceeded its step budget")


def horizontal_separatrices(s: FlatSurface):
    """Corners at every vertex whose sector contains the positive real direction."""
    return [h for v in range(s.num_vertices) for h in s.corner_containing(v, HORIZONTAL)]


# ---------------------------------------------------------------- enumeration

def saddle_connections(s: FlatSurface, L=None, *, L2=None, budget: int = DEFAULT_BUDGET,
                       corners=None) -> list:
    """All saddle connections of length at most ``L``, once per orientation.

    Raises BudgetExceeded when more than ``budget`` triangles get developed.
    """
    bound = _bound_sq(L, L2)
    out = []
    developed = 0
    for corner in (range(s.n_half) if corners is None else corners):
        u = s.hol[corner]
        w = -s.hol[s.prev(corner)]
        frm = s.origin[corner]
        if u.norm2() <= bound:
            out.append(SaddleConnection(u, frm, s.head(corner), corner, s.twin[corner],
                                        (), (corner,)))
        first = s.twin[s.nxt[corner]]
        stack = [(first, w, u, u, w, (first,), (corner,))]
        while stack:
            h_in, x, y, lo, hi, path, lower = stack.pop()
            if _segment_dist_sq(x, y) > bound:
                continue
            developed += 1
            if developed > budget:
                raise errors.BudgetExceeded(
                    f"saddle connection search developed more than {budget} triangles")
            n = s.nxt[h_in]
            p = s.nxt[n]
            apex = y + s.hol[n]
            to_lo = s.twin[n]      # edge y -> apex
            to_hi = s.twin[p]      # edge apex -> x
            if in_open_sector(lo, hi, apex):
                lower_apex = lower + (n,)
                if apex.norm2() <= bound:
                    out.append(SaddleConnection(apex, frm, s.origin[p], corner, p,
                                                path, lower_apex))
                stack.append((to_hi, x, apex, apex, hi, path + (to_hi,), lower_apex))
                stack.append((to_lo, apex, y, lo, apex, path + (to_lo,), lower))
            elif orient(lo, apex) <= 0:
                stack.append((to_hi, x, apex, lo, hi, path + (to_hi,), lower + (n,)))
            else:
                stack.append((to_lo, apex, y, lo, hi, path + (to_lo,), lower))
    return out


def direction_classes(connections) -> list:
    """Group connections by direction, sorted by shortest member then direction."""
    groups = {}
    floats = []
    for sc in connections:
        v = sc.holonomy
        if isinstance(v.x, float) or isinstance(v.y, float):
            floats.append(sc)
            continue
        key = primitive_direction(v)
        groups.setdefault(key, []).append(sc)
    classes = [DirectionClass(Vec2(*map(_frac, key)), members) for key, members in groups.items()]
    if floats:
        classes.extend(_float_classes(floats))
    for c in classes:
        c.members.sort(key=lambda m: (m.length_sq, m.from_zero, m.to_zero, m.start))
    classes.sort(key=lambda c: (float(c.min_length_sq), c.min_length_sq,
                                float(c.direction.x), float(c.direction.y)))
    return classes


def _frac(v):
    return Fraction(v)


def _float_classes(conns) -> list:
    ordered = sorted(conns, key=lambda sc: math.atan2(sc.holonomy.y, sc.holonomy.x))
    groups = []
    for sc in ordered:
        if groups and same_direction(groups[-1][0].holonomy, sc.holonomy):
            groups[-1].append(sc)
        else:
            groups.append([sc])
    if len(groups) > 1 and same_direction(groups[0][0].holonomy, groups[-1][0].holonomy):
        groups[0].extend(groups.pop())
    out = []
    for g in groups:
        rep = min(g, key=lambda m: m.length_sq).holonomy
        norm = math.sqrt(rep.norm2())
        out.append(DirectionClass(Vec2(rep.x / norm, rep.y / norm), list(g)))
    return out


# ---------------------------------------------------------------- weights

def weighted_length(sc: SaddleConnection, a):
    """Oriented a-weighted length of a horizontal saddle connection.

    ``length / b`` with ``b`` the weight at the incoming endpoint minus the
    weight at the outgoing one, orientation taken in the +x direction;
    ``math.inf`` when ``b`` vanishes.
    """
    v = sc.holonomy
    if orient(HORIZONTAL, v) != 0:
        raise errors.NotHorizontal(f"holonomy {v} is not horizontal")
    frm, to = sc.from_zero, sc.to_zero
    length = v.x
    if length < 0:
        frm, to, length = to, frm, -length
    b = a[to] - a[frm]
    if b == 0:
        return math.inf
    return length / b


@dataclass
class WeightGraph:
    """Minimal positive a-weighted subgraph of one direction class.

    ``scaled_weight`` is ``<hol, d> / b``; divide by ``|d|`` for the length.
    """
    direction: Vec2
    edges: list
    scaled_weight: object = None

    @property
    def weight(self):
        if self.scaled_weight is None:
            return math.inf
        n2 = self.direction.norm2()
        if n2 == 1:
            return self.scaled_weight
        return self.scaled_weight / math.sqrt(n2)

    def pairs(self):
        return [(e.from_zero, e.to_zero) for e in self.edges]

    def __len__(self):
        return len(self.edges)


def minimal_weight_graph(s: FlatSurface, a, d: DirectionClass) -> WeightGraph:
    best = None
    chosen = []
    for sc in d.members:
        b = a[sc.to_zero] - a[sc.from_zero]
        if b <= 0:
            continue
        w = dot(sc.holonomy, d.direction) / b
        if best is None or _less(w, best):
            best, chosen = w, [sc]
        elif _equal(w, best):
            chosen.append(sc)
    return WeightGraph(d.direction, chosen, best)


def _less(x, y) -> bool:
    if isinstance(x, float) or isinstance(y, float):
        return x < y and not _equal(x, y)
    return x < y


def _equal(x, y) -> bool:
    if isinstance(x, float) or isinstance(y, float):
        return abs(x - y) <= 1e-9 * max(abs(x), abs(y))
    return x == y


def has_cycle(graph) -> bool:
    """Does the undirected multigraph contain a cycle?  Parallel edges count."""
    pairs = graph.pairs() if hasattr(graph, "pairs") else list(graph)
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in pairs:
        ru, rv = find(u), find(v)
        if ru == rv:
            return True
        parent[ru] = rv
    return False


# ---------------------------------------------------------------- flexibility

@dataclass
class Witness:
    direction: Vec2
    graph: WeightGraph
    table: list


@dataclass
class RigidUpTo:
    bound: object
    table: list


def flexibility_witness(s: FlatSurface, a, L=None, *, L2=None, budget: int = DEFAULT_BUDGET,
                        connections=None):
    """Scan direction classes up to length ``L`` for a flexible direction.

    Returns a :class:`Witness` for the first class (shortest first) whose
    minimal positive weight graph is nonempty and acyclic, otherwise
    :class:`RigidUpTo`.  The latter is not a proof of rigidity.
    """
    if not any(a):
        raise errors.NoAdmissibleRelVector("the REL vector must be nonzero")
    bound = _bound_sq(L, L2)
    conns = connections if connections is not None else saddle_connections(s, L2=bound, budget=budget)
    table = []
    for cls in direction_classes(conns):
        g = minimal_weight_graph(s, a, cls)
        cyc = has_cycle(g)
        table.append({"direction": cls.direction, "members": len(cls.members),
                      "minimal": len(g), "cycle": cyc, "scaled_weight": g.scaled_weight})
        if len(g) and not cyc:
            return Witness(cls.direction, g, table)
    return RigidUpTo(L if L is not None else bound, table)


# ---------------------------------------------------------------- bigons

@dataclass
class Bigon:
    first: SaddleConnection
    second: SaddleConnection
    direction: Vec2
    type: tuple


def _upper(d: Vec2) -> bool:
    return d.y > 0 or (d.y == 0 and d.x > 0)


def find_isolated_bigons(s: FlatSurface, L=None, *, L2=None, budget: int = DEFAULT_BUDGET,
                         connections=None) -> list:
    """Homologous pairs that are, alone, the minimal graph of their direction.

    For a pair from ``p`` to ``q`` the weights are ``a = e_q - e_p``; the pair
    counts when the minimal positive graph of its direction is exactly the
    pair and collapsing it under the flow splits the surface.  ``type`` lists
    the genera of the two pieces, larger first.
    """
    from .deformation import BoundaryHit, InfiniteFace, rel_flow
    from .homology import chain_sum, is_null_homologous, period_chart
    from .surface import gl2_action, horizontalizer

    if s.backend != "exact":
        raise errors.FloatBackendUnsupported("bigon types are found by an exact collapse")
    bound = _bound_sq(L, L2)
    conns = connections if connections is not None else saddle_connections(s, L2=bound, budget=budget)
    chart = period_chart(s)
    out = []
    for cls in direction_classes(conns):
        if not _upper(cls.direction):
            continue
        groups = {}
        for sc in cls.members:
            if not sc.is_loop:
                groups.setdefault((sc.from_zero, sc.to_zero, sc.holonomy), []).append(sc)
        for (p, q, _hol), members in sorted(groups.items(), key=lambda kv: (kv[0][0], kv[0][1])):
            if len(members) != 2:
                continue
            first, second = members
            diff = chain_sum(first.chain(s), second.chain(s), coeffs=[1, -1])
            if not is_null_homologous(chart, diff):
                continue
            a = [0] * s.num_vertices
            a[p], a[q] = -1, 1
            graph = minimal_weight_graph(s, a, cls)
            if sorted(graph.edges, key=SaddleConnection.key) != sorted(members, key=SaddleConnection.key):
                continue
            flat = gl2_action(horizontalizer(cls.direction), s)
            hit = rel_flow(flat, a)
            if isinstance(hit, BoundaryHit) and isinstance(hit.classification, InfiniteFace):
                out.append(Bigon(first, second, cls.direction, hit.classification.type))
    return out
