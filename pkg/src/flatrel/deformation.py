"""The real REL flow as an exact event-driven flow, and what happens at its end.

Under the flow with weights ``a`` every half-edge from ``p`` to ``q`` moves
with velocity ``-(a[q] - a[p]) * zeta``, ``zeta`` the horizontal unit vector
by default.  Absolute periods are untouched because the velocity telescopes
to zero around closed cycles.  Vertical components are frozen, so the signed
area of each triangle is affine in time and every event time is an exact
root of a linear function.  When a triangle flattens its long edge is
flipped; when an edge shrinks to a point the flow has reached the boundary
of the stratum.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import math

from . import errors
from .geodesics import (
    DEFAULT_BUDGET, horizontal_separatrices, trace_separatrix, weighted_length,
)
from .homology import absolute_periods, rel_vector
from .scalar import EXACT, Vec2, cross, orient
from .surface import (
    FlatSurface, HORIZONTAL, area, components, extract, flip_arrays, genus,
    gl2_action, rotate, stratum, validate, vertex_order, vertex_orders,
)
from .surgery import (
    Arrays, contract_zero_edge, insert_point, locate, make_edge, relabel_by_orbits,
)

EVENT_BUDGET = 10**6


# ---------------------------------------------------------------- outcomes

@dataclass
class Finished:
    surface: FlatSurface
    elapsed: object
    flips: tuple = ()


@dataclass
class BoundaryHit:
    """The flow stopped at ``time`` because ``collapsing`` edges reached length zero.

    ``surface`` holds the holonomies at that instant, degenerate triangles
    included, so it does not pass :func:`validate`.
    """
    time: object
    surface: FlatSurface
    collapsing: tuple
    classification: object
    flips: tuple = ()


@dataclass
class FiniteFace:
    surface: FlatSurface
    merged: tuple  # (old labels, new label, order) per merged group

    kind = "finite"


@dataclass
class InfiniteFace:
    type: tuple
    components: tuple
    nodes: tuple
    regular: tuple

    kind = "infinite"


@dataclass
class Unclassified:
    reason: str

    kind = "unclassified"


# ---------------------------------------------------------------- the flow

def _velocities(origin, nxt, a, zeta):
    out = []
    for h in range(len(nxt)):
        b = a[origin[nxt[h]]] - a[origin[h]]
        out.append(zeta * (-b))
    return out


def _area_line(hol, vel, h0, h1):
    """Twice the triangle area as ``c0 + c1 * tau``."""
    u, v = hol[h0], hol[h1]
    du, dv = vel[h0], vel[h1]
    return cross(u, v), cross(u, dv) + cross(du, v)


def rel_flow(s: FlatSurface, a, t_target=None, *, direction: Vec2 = HORIZONTAL,
             budget: int = EVENT_BUDGET):
    """Run the REL flow for ``a`` up to ``t_target`` (None: until the boundary).

    Returns :class:`Finished` or :class:`BoundaryHit`.  With ``t_target`` None
    this raises :class:`NoCollapse` when :func:`collapse_time` finds no
    shrinking horizontal connection; the event simulation itself decides
    when the collapse happens.
    """
    if s.backend != EXACT:
        raise errors.FloatBackendUnsupported("the REL flow needs exact holonomies")
    a = rel_vector(a, s.num_vertices)
    if t_target is not None:
        t_target = Fraction(t_target)
        if t_target < 0:
            raise ValueError("flow time must be nonnegative")
    direction = Vec2(Fraction(direction.x), Fraction(direction.y))
    nxt, twin, origin, hol = list(s.nxt), list(s.twin), list(s.origin), list(s.hol)
    n = len(nxt)
    flips = []
    t = Fraction(0)
    vel = _velocities(origin, nxt, a, direction)
    if not any(a):
        if t_target is None:
            raise errors.NoCollapse("the zero REL vector does not move the surface")
        return Finished(s, t_target, ())
    if t_target is None and collapse_time(s, a) == math.inf:
        # without a shrinking horizontal connection the flow runs forever,
        # flipping indefinitely in sheared cylinders
        raise errors.NoCollapse("no horizontal saddle connection shrinks under this REL vector")
    while True:
        tau = None
        seen = set()
        for h in range(n):
            if h in seen:
                continue
            h1 = nxt[h]
            seen.update((h, h1, nxt[h1]))
            c0, c1 = _area_line(hol, vel, h, h1)
            if c1 < 0:
                root = -c0 / c1
                if tau is None or root < tau:
                    tau = root
        if tau is None:
            if t_target is None:
                raise errors.NoCollapse("no triangle ever degenerates under this REL vector")
            hol = [hol[h] + vel[h] * (t_target - t) for h in range(n)]
            return Finished(FlatSurface(tuple(nxt), tuple(twin), tuple(origin), tuple(hol)),
                            t_target, tuple(flips))
        if t_target is not None and t + tau > t_target:
            hol = [hol[h] + vel[h] * (t_target - t) for h in range(n)]
            return Finished(FlatSurface(tuple(nxt), tuple(twin), tuple(origin), tuple(hol)),
                            t_target, tuple(flips))
        t = t + tau
        hol = [hol[h] + vel[h] * tau for h in range(n)]
        zero = _zero_edges(twin, hol)
        if zero:
            return _boundary(nxt, twin, origin, hol, t, zero, flips)
        _resolve_event(nxt, twin, origin, hol, vel, a, direction, flips, budget)
        vel = _velocities(origin, nxt, a, direction)
        zero = _zero_edges(twin, hol)
        if zero:
            return _boundary(nxt, twin, origin, hol, t, zero, flips)
        if t_target is not None and t == t_target:
            return Finished(FlatSurface(tuple(nxt), tuple(twin), tuple(origin), tuple(hol)),
                            t, tuple(flips))


def _zero_edges(twin, hol):
    return tuple(h for h in range(len(twin)) if h < twin[h] and hol[h].is_zero())


def _boundary(nxt, twin, origin, hol, t, zero, flips):
    raw = FlatSurface(tuple(nxt), tuple(twin), tuple(origin), tuple(hol))
    return BoundaryHit(t, raw, zero, classify_degeneration(raw, zero), tuple(flips))


def _resolve_event(nxt, twin, origin, hol, vel, a, direction, flips, budget):
    """Retriangulate at an event so every triangle is positive just after it.

    Lawson flips towards the Delaunay triangulation, with in-circle tests
    taken at the instant just before the event (symbolically, as the sign of
    a polynomial in the time offset).  That triangulation is valid before the
    event, and its limit at the event has no flat triangles unless two
    vertices meet, in which case the meeting pair becomes a zero-length edge.
    """
    n = len(nxt)
    todo = [h for h in range(n) if h < twin[h]]
    while todo:
        e = todo.pop()
        if not _non_delaunay(nxt, twin, hol, vel, e):
            continue
        _do_flip(nxt, twin, origin, hol, vel, e, flips, budget, a, direction)
        f = twin[e]
        todo.extend(min(h, twin[h]) for h in (nxt[e], nxt[nxt[e]], nxt[f], nxt[nxt[f]]))
    if _zero_edges(twin, hol):
        return
    seen = set()
    for h in range(n):
        if h in seen:
            continue
        h1 = nxt[h]
        seen.update((h, h1, nxt[h1]))
        if cross(hol[h], hol[h1]) <= 0:
            raise errors.FlatRelError("a flat triangle survived retriangulation at a flow event")


def _incircle(b: Vec2, c: Vec2, d: Vec2):
    """Negative when ``d`` lies inside the circle through 0, ``b``, ``c`` (ccw)."""
    bn, cn, dn = b.norm2(), c.norm2(), d.norm2()
    return (b.x * (c.y * dn - cn * d.y) - b.y * (c.x * dn - cn * d.x)
            + bn * (c.x * d.y - c.y * d.x))


def _poly_vec(v: Vec2, dv: Vec2):
    # position just before the event: v - eps * dv
    return (v.x, -dv.x), (v.y, -dv.y)


def _pmul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        if x:
            for j, y in enumerate(q):
                out[i + j] += x * y
    return out


def _padd(*ps):
    out = [0] * max(len(p) for p in ps)
    for p in ps:
        for i, x in enumerate(p):
            out[i] += x
    return out


def _psign(p) -> int:
    for x in p:
        if x:
            return 1 if x > 0 else -1
    return 0


def _non_delaunay(nxt, twin, hol, vel, e) -> bool:
    f = twin[e]
    e1, e2 = nxt[e], nxt[nxt[e]]
    if f in (e1, e2):
        return False
    f1 = nxt[f]
    # vectors from the origin of e to the other three quad corners
    now = _incircle(hol[e], -hol[e2], hol[f1])
    if now:
        return now < 0
    b = _poly_vec(hol[e], vel[e])
    c = _poly_vec(-hol[e2], -vel[e2])
    d = _poly_vec(hol[f1], vel[f1])
    rows = []
    for x, y in (b, c, d):
        rows.append((x, y, _padd(_pmul(x, x), _pmul(y, y))))
    (bx, by, bn), (cx, cy, cn), (dx, dy, dn) = rows

    def det2(p, q, r, s_):
        return _padd(_pmul(p, s_), [-v for v in _pmul(q, r)])

    det = _padd(
        _pmul(bx, det2(cy, cn, dy, dn)),
        [-v for v in _pmul(by, det2(cx, cn, dx, dn))],
        _pmul(bn, det2(cx, cy, dx, dy)),
    )
    return _psign(det) < 0


def _do_flip(nxt, twin, origin, hol, vel, e, flips, budget, a, direction):
    if len(flips) >= budget:
        raise errors.EventBudgetExceeded(
            f"REL flow performed {budget} flips without finishing; "
            "events may be accumulating near a non-generic collapse")
    flip_arrays(nxt, twin, origin, hol, e)
    flips.append(e)
    vel[e] = direction * (a[origin[e]] - a[origin[nxt[e]]])
    vel[twin[e]] = -vel[e]


def collapse_time(s: FlatSurface, a, L=None, *, L2=None, budget: int = DEFAULT_BUDGET):
    """Smallest positive a-weighted length among horizontal saddle connections.

    Separatrices are traced out to length ``L`` (default: the sum of all edge
    lengths, which bounds every horizontal cylinder boundary on small
    catalog surfaces).  ``math.inf`` when none shrinks.
    """
    a = rel_vector(a, s.num_vertices)
    if L is None and L2 is None:
        L2 = default_length_sq(s)
    best = math.inf
    for corner in horizontal_separatrices(s):
        sc = trace_separatrix(s, corner, HORIZONTAL, L, L2=L2, budget=budget)
        if sc is None:
            continue
        w = weighted_length(sc, a)
        if w != math.inf and w > 0 and (best == math.inf or w < best):
            best = w
    return best


def default_length_sq(s: FlatSurface):
    """Square of a length bound covering every horizontal saddle connection of interest."""
    total = sum(abs(s.hol[e].x) + abs(s.hol[e].y) for e in s.edges)
    return total * total


# ---------------------------------------------------------------- classification

def classify_degeneration(s: FlatSurface, collapsing) -> object:
    """Sort a collapse into a finite face, an infinite face or neither."""
    zero = [e if e < s.twin[e] else s.twin[e] for e in collapsing]
    zero = sorted(set(zero))
    if not zero:
        raise ValueError("nothing collapses")
    if any(s.origin[e] == s.head(e) for e in zero):
        return Unclassified("a closed loop shrinks to a point")
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            x = parent[x]
        return x

    forest = True
    for e in zero:
        ru, rv = find(s.origin[e]), find(s.head(e))
        if ru == rv:
            forest = False
            break
        parent[max(ru, rv)] = min(ru, rv)
    if forest:
        return _finite_face(s, zero)
    if len(zero) == 2:
        e1, e2 = zero
        if s.origin[e2] != s.origin[e1]:
            e2 = s.twin[e2]
        if s.origin[e1] == s.origin[e2] and s.head(e1) == s.head(e2):
            return _split_node(s, e1, e2)
    return Unclassified("collapsing edges form a cycle that is not a separating pair")


def _finite_face(s: FlatSurface, zero) -> object:
    arr = Arrays.of(s)
    removed = set()
    for e in zero:
        contract_zero_edge(arr, e, removed)
    members = [h for h in range(len(arr.nxt)) if h not in removed]
    index = {h: i for i, h in enumerate(members)}
    piece = extract(arr.nxt, arr.twin, arr.origin, arr.hol, members)
    labels = relabel_by_orbits(piece.nxt, piece.twin)
    result = _unflatten(FlatSurface(piece.nxt, piece.twin, tuple(labels), piece.hol))
    try:
        validate(result)
        stratum(result)
    except errors.FlatRelError as exc:
        return Unclassified(f"collapsed surface is inconsistent: {exc}")
    groups = {}
    for lab in range(s.num_vertices):
        groups.setdefault(_merged_root(s, zero, lab), []).append(lab)
    merged = []
    for root, labs in sorted(groups.items()):
        if len(labs) < 2:
            continue
        h = next(h for h in members if arr.origin[h] == root)
        new = labels[index[h]]
        merged.append((tuple(labs), new, vertex_order(result, new)))
    return FiniteFace(result, tuple(merged))


def _unflatten(s: FlatSurface, budget: int = 10_000) -> FlatSurface:
    """Flip away flat triangles left over after a contraction.

    A flat triangle has one vertex lying on its longest side; flipping that
    side against a positive neighbour splits the neighbour in two positive
    triangles.
    """
    arr = Arrays.of(s)
    for _ in range(budget):
        target = None
        for h in range(len(arr.nxt)):
            h1, h2 = arr.nxt[h], arr.prev(h)
            if cross(arr.hol[h], arr.hol[h1]) != 0:
                continue
            if arr.hol[h].norm2() < max(arr.hol[h1].norm2(), arr.hol[h2].norm2()):
                continue
            g = arr.twin[h]
            if cross(arr.hol[g], arr.hol[arr.nxt[g]]) > 0:
                target = h
                break
        if target is None:
            return arr.surface()
        flip_arrays(arr.nxt, arr.twin, arr.origin, arr.hol, target)
    return arr.surface()


def _merged_root(s: FlatSurface, zero, label: int) -> int:
    """Smallest label joined to ``label`` by collapsing edges."""
    adj = {}
    for e in zero:
        u, v = s.origin[e], s.head(e)
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    seen = {label}
    todo = [label]
    while todo:
        x = todo.pop()
        for y in adj.get(x, ()):
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return min(seen)


def _split_node(s: FlatSurface, e1: int, e2: int) -> object:
    arr = Arrays.of(s)
    t1, t2 = arr.twin[e1], arr.twin[e2]
    arr.twin[e1], arr.twin[t2] = t2, e1
    arr.twin[e2], arr.twin[t1] = t1, e2
    parts = components(arr.nxt, arr.twin)
    if len(parts) != 2:
        return Unclassified("the parallel pair does not separate the surface")
    pieces = []
    nodes = []
    regular = []
    for members in parts:
        loop = e1 if e1 in members else e2
        removed = set()
        sub = Arrays(list(arr.nxt), list(arr.twin), list(arr.origin), list(arr.hol))
        sub.origin[:] = relabel_by_orbits(sub.nxt, sub.twin)
        node_label = min(sub.origin[loop], sub.origin[sub.twin[loop]])
        contract_zero_edge(sub, loop, removed)
        keep = [h for h in members if h not in removed]
        piece = extract(sub.nxt, sub.twin, sub.origin, sub.hol, keep)
        labels = relabel_by_orbits(piece.nxt, piece.twin)
        index = {h: i for i, h in enumerate(keep)}
        anchor = next(h for h in keep if sub.origin[h] == node_label)
        node = labels[index[anchor]]
        piece = _unflatten(FlatSurface(piece.nxt, piece.twin, tuple(labels), piece.hol))
        try:
            validate(piece)
        except errors.ValidationError as exc:
            return Unclassified(f"split component is invalid: {exc}")
        pieces.append(piece)
        nodes.append(node)
        regular.append(vertex_order(piece, node) == 0)
    genera = tuple(sorted((genus(p) for p in pieces), reverse=True))
    return InfiniteFace(genera, tuple(pieces), tuple(nodes), tuple(regular))


# ---------------------------------------------------------------- group actions

def _conj(c: Vec2) -> Vec2:
    return Vec2(c.x, -c.y)


def _map_outcome(outcome, f):
    """Apply a holonomy map to every surface an outcome carries."""
    if isinstance(outcome, Finished):
        return Finished(f(outcome.surface), outcome.elapsed, outcome.flips)
    cls = outcome.classification
    if isinstance(cls, InfiniteFace):
        cls = InfiniteFace(cls.type, tuple(f(p) for p in cls.components), cls.nodes, cls.regular)
    elif isinstance(cls, FiniteFace):
        cls = FiniteFace(f(cls.surface), cls.merged)
    return BoundaryHit(outcome.time, f(outcome.surface), outcome.collapsing, cls, outcome.flips)


def conjugated_rel_flow(s: FlatSurface, a, c: Vec2, t_target=None, *,
                        budget: int = EVENT_BUDGET):
    """Flow for the rotated REL direction: rotate by ``c``, flow, rotate back.

    ``c`` must be an exact point of the unit circle.
    """
    if c.norm2() != 1:
        raise ValueError("rotation must have modulus one")
    out = rel_flow(rotate(s, c), a, t_target, budget=budget)
    back = _conj(c)
    return _map_outcome(out, lambda x: rotate(x, back))


# ---------------------------------------------------------------- gluing

def mark_point(s: FlatSurface, start: int, v: Vec2) -> tuple:
    """Add an order-zero vertex at displacement ``v`` from vertex ``start``.

    Returns ``(surface, label)``.
    """
    arr = Arrays.of(s)
    corner = arr.corner_containing(start, v)
    loc = locate(arr, corner, v)
    label = s.num_vertices
    insert_point(arr, loc, label)
    out = arr.surface()
    validate(out)
    return out, label


def _open_slit(s: FlatSurface, p: int, v: Vec2):
    if vertex_order(s, p) != 0:
        raise ValueError(f"vertex {p} is a zero, not a marked regular point")
    arr = Arrays.of(s)
    corner = arr.corner_containing(p, v)
    loc = locate(arr, corner, v)
    q = s.num_vertices
    insert_point(arr, loc, q)
    edge = make_edge(arr, p, v)
    return arr, edge


def slit_glue(s1: FlatSurface, p1: int, s2: FlatSurface, p2: int, v: Vec2) -> FlatSurface:
    """Cut both surfaces along the segment ``v`` from their marked points and cross-glue.

    Vertex 0 of the result is the common start of the two slits and vertex 1
    the common end; the remaining vertices follow.
    """
    if v.is_zero():
        raise ValueError("slit vector must be nonzero")
    a1, e1 = _open_slit(s1, p1, v)
    a2, e2 = _open_slit(s2, p2, v)
    n1 = len(a1.nxt)
    k1 = max(a1.origin) + 1
    nxt = a1.nxt + [g + n1 for g in a2.nxt]
    twin = a1.twin + [g + n1 for g in a2.twin]
    origin = a1.origin + [o + k1 for o in a2.origin]
    hol = a1.hol + a2.hol
    e2 += n1
    f1, f2 = twin[e1], twin[e2]
    twin[e1], twin[f2] = f2, e1
    twin[e2], twin[f1] = f1, e2
    labels = relabel_by_orbits(nxt, twin, first=(e1, f1))
    out = FlatSurface(tuple(nxt), tuple(twin), tuple(labels), tuple(hol))
    validate(out)
    return out


def coreface_chart(z, gamma: Vec2) -> FlatSurface:
    """Glue the two marked components ``z = (s1, p1, s2, p2)`` along ``gamma``."""
    s1, p1, s2, p2 = z
    return slit_glue(s1, p1, s2, p2, gamma)


def absolute_period_multiset(s: FlatSurface) -> tuple:
    return tuple(sorted(absolute_periods(s), key=lambda v: (v.x, v.y)))
