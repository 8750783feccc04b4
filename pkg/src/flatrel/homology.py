"""Period coordinates on relative homology and REL cocycles.

Chains are dictionaries ``{edge: coefficient}`` keyed by the canonical
(smaller) half-edge of each edge; a coefficient counts that half-edge's
orientation.

A :class:`PeriodChart` comes from a tree/cotree decomposition: a primal
spanning tree ``T`` of the vertex graph, a spanning tree ``C`` of the dual
graph among the remaining edges, and the leftover edges ``L`` (``2g`` of
them).  The edges of ``T`` and ``L`` form a basis of ``H_1(X, Z)``, where
``Z`` is the vertex set; each edge of ``L`` closed up through ``T`` gives a
basis of absolute homology.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
import math

from . import errors
from .scalar import Vec2
from .surface import FlatSurface, flip_arrays


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


@dataclass(frozen=True)
class PeriodChart:
    nxt: tuple
    twin: tuple
    tree: tuple
    dual_tree: tuple
    generators: tuple
    abs_basis: tuple
    face_order: tuple

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def abs_rank(self) -> int:
        return len(self.abs_basis)


# ---------------------------------------------------------------- chains

def halfedge_chain(s: FlatSurface, h: int, coeff: int = 1) -> dict:
    t = s.twin[h]
    return {h: coeff} if h < t else {t: -coeff}


def add_halfedge(chain: dict, twin, h: int, coeff: int) -> None:
    t = twin[h]
    rep, c = (h, coeff) if h < t else (t, -coeff)
    value = chain.get(rep, 0) + c
    if value:
        chain[rep] = value
    else:
        chain.pop(rep, None)


def chain_sum(*chains, coeffs=None) -> dict:
    out = {}
    coeffs = coeffs or [1] * len(chains)
    for chain, c in zip(chains, coeffs):
        for rep, v in chain.items():
            value = out.get(rep, 0) + c * v
            if value:
                out[rep] = value
            else:
                out.pop(rep, None)
    return out


def evaluate(s: FlatSurface, chain: dict) -> Vec2:
    """Period of a chain: the sum of its holonomies."""
    total = Vec2(0 * s.hol[0].x, 0 * s.hol[0].y)
    for rep, c in chain.items():
        total = total + s.hol[rep] * c
    return total


def boundary(s: FlatSurface, chain: dict) -> dict:
    """Endpoint boundary ``sum c (head - tail)`` as ``{label: multiplicity}``."""
    out = {}
    for rep, c in chain.items():
        for lab, sign in ((s.head(rep), c), (s.origin[rep], -c)):
            out[lab] = out.get(lab, 0) + sign
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------- chart

def period_chart(s: FlatSurface, order=None) -> PeriodChart:
    """Deterministic chart; ``order`` optionally permutes the greedy edge order."""
    edges = list(order) if order is not None else list(s.edges)
    uf = _UnionFind(s.num_vertices)
    tree = [e for e in edges if uf.union(s.origin[e], s.head(e))]
    in_tree = set(tree)
    uf_faces = _UnionFind(len(s.triangles))
    dual = [e for e in edges
            if e not in in_tree and uf_faces.union(s.face_of[e], s.face_of[s.twin[e]])]
    in_dual = set(dual)
    leftover = [e for e in edges if e not in in_tree and e not in in_dual]
    generators = tuple(sorted(tree + leftover))

    # dual tree rooted at face 0, processed top-down during reduction
    adj = {}
    for e in dual:
        for h in (e, s.twin[e]):
            adj.setdefault(s.face_of[h], []).append(h)
    face_order = []
    seen = {0}
    todo = deque([0])
    while todo:
        f = todo.popleft()
        for h in adj.get(f, []):
            g = s.face_of[s.twin[h]]
            if g not in seen:
                seen.add(g)
                face_order.append((g, s.twin[h]))
                todo.append(g)

    chart = PeriodChart(s.nxt, s.twin, tuple(tree), tuple(dual), generators, (), tuple(face_order))
    paths = _tree_paths(s, tree)
    abs_basis = []
    for e in leftover:
        chain = halfedge_chain(s, e)
        back = chain_sum(paths[s.head(e)], paths[s.origin[e]], coeffs=[-1, 1])
        chain = chain_sum(chain, back)
        # chain now runs tail -> head -> root -> tail
        abs_basis.append(reduce_chain(chart, chain))
    return PeriodChart(s.nxt, s.twin, tuple(tree), tuple(dual), generators,
                       tuple(abs_basis), tuple(face_order))


def _tree_paths(s: FlatSurface, tree) -> dict:
    """Chain of the tree path from vertex 0 to every vertex."""
    adj = {}
    for e in tree:
        adj.setdefault(s.origin[e], []).append(e)
        adj.setdefault(s.head(e), []).append(s.twin[e])
    paths = {0: {}}
    todo = deque([0])
    while todo:
        v = todo.popleft()
        for h in adj.get(v, []):
            w = s.head(h)
            if w not in paths:
                paths[w] = chain_sum(paths[v], halfedge_chain(s, h))
                todo.append(w)
    return paths


def _check(s: FlatSurface, chart: PeriodChart) -> None:
    if s.nxt != chart.nxt or s.twin != chart.twin:
        raise errors.ChartMismatch("chart was built for a different triangulation")


def reduce_chain(chart: PeriodChart, chain: dict) -> tuple:
    """Coordinates of a chain's relative homology class over the generators."""
    work = dict(chain)
    nxt, twin = chart.nxt, chart.twin
    for _face, h in chart.face_order:
        rep = min(h, twin[h])
        c = work.get(rep, 0)
        if not c:
            continue
        kappa = c if rep == h else -c
        # h + nxt(h) + nxt(nxt(h)) bounds the face
        work.pop(rep)
        add_halfedge(work, twin, nxt[h], -kappa)
        add_halfedge(work, twin, nxt[nxt[h]], -kappa)
    coords = tuple(work.pop(g, 0) for g in chart.generators)
    if work:
        raise errors.ChartMismatch("chain not reducible in this chart")
    return coords


def periods(s: FlatSurface, chart: PeriodChart) -> tuple:
    _check(s, chart)
    return tuple(s.hol[g] for g in chart.generators)


def combine(coeffs, vectors) -> Vec2:
    total = vectors[0] * 0
    for c, v in zip(coeffs, vectors):
        if c:
            total = total + v * c
    return total


def absolute_periods(s: FlatSurface, chart: PeriodChart | None = None) -> tuple:
    chart = chart or period_chart(s)
    per = periods(s, chart)
    return tuple(combine(b, per) for b in chart.abs_basis)


def is_null_homologous(chart: PeriodChart, chain: dict) -> bool:
    return not any(reduce_chain(chart, chain))


# ---------------------------------------------------------------- transport

def transport_chain(s0: FlatSurface, chain: dict, flips) -> dict:
    """Re-express a chain of ``s0`` after the flip sequence ``flips``."""
    nxt, twin, origin = list(s0.nxt), list(s0.twin), list(s0.origin)
    work = dict(chain)
    for e in flips:
        rep = min(e, twin[e])
        c = work.pop(rep, 0)
        if c:
            # rep = nxt(twin rep) + nxt(nxt(twin rep)) before the flip
            t = twin[rep]
            add_halfedge(work, twin, nxt[t], c)
            add_halfedge(work, twin, nxt[nxt[t]], c)
        flip_arrays(nxt, twin, origin, None, e)
    return work


def chart_chains(chart: PeriodChart) -> list:
    return [{g: 1} for g in chart.generators]


def absolute_chains(chart: PeriodChart) -> list:
    """Closed chains realizing the absolute basis of a chart."""
    out = []
    for coeffs in chart.abs_basis:
        chain = {}
        for g, c in zip(chart.generators, coeffs):
            if c:
                add_halfedge(chain, chart.twin, g, c)
        out.append(chain)
    return out


def absolute_periods_after(s0: FlatSurface, chart: PeriodChart, flips, s1: FlatSurface) -> tuple:
    """Absolute periods on ``s1`` of the closed basis of ``s0``'s chart, through ``flips``."""
    return tuple(evaluate(s1, transport_chain(s0, c, flips)) for c in absolute_chains(chart))


def periods_after(s0: FlatSurface, chart: PeriodChart, flips, s1: FlatSurface) -> tuple:
    """Periods on ``s1`` of the chart generators of ``s0``, carried through ``flips``."""
    return tuple(evaluate(s1, transport_chain(s0, c, flips)) for c in chart_chains(chart))


# ---------------------------------------------------------------- REL

def rel_vector(values, k: int | None = None) -> tuple:
    """Validate a zero-sum weight vector, one weight per labeled vertex."""
    a = tuple(v if isinstance(v, (Fraction, float)) else Fraction(v) for v in values)
    if k is not None and len(a) != k:
        raise ValueError(f"REL vector needs {k} entries, got {len(a)}")
    if sum(a) != 0:
        raise ValueError("REL vector entries must sum to zero")
    return a


def rel_cocycle_eval(a, frm: int, to: int):
    """Pairing of the REL cocycle of ``a`` with a relative cycle from ``frm`` to ``to``."""
    return a[to] - a[frm]


def rel_cocycle_on_chain(s: FlatSurface, a, chain: dict):
    return sum((c * rel_cocycle_eval(a, s.origin[rep], s.head(rep)) for rep, c in chain.items()),
               0 * a[0])


def matrix_rank(rows) -> int:
    """Rank of a rational matrix by fraction-exact Gaussian elimination."""
    m = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                factor = m[r][col] / m[rank][col]
                m[r] = [x - factor * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def rel_rank(s: FlatSurface) -> int:
    """Rank of the REL cocycles ``e_i - e_0`` on the relative basis."""
    chart = period_chart(s)
    k = s.num_vertices
    rows = []
    for i in range(1, k):
        a = [Fraction(0)] * k
        a[i] += 1
        a[0] -= 1
        rows.append([rel_cocycle_eval(a, s.origin[g], s.head(g)) for g in chart.generators])
    return matrix_rank(rows) if rows else 0


# ---------------------------------------------------------------- lattices

def period_lattice(vectors) -> tuple:
    """Canonical basis of the Z-module spanned by exact plane vectors.

    Returns ``()``, ``((a, b),)`` or ``((a, b), (0, c))`` in Hermite form, so
    two families span the same module iff the results are equal.
    """
    vs = [(Fraction(v.x), Fraction(v.y)) for v in vectors]
    if not vs:
        return ()
    den = 1
    for x, y in vs:
        den = den * x.denominator // math.gcd(den, x.denominator)
        den = den * y.denominator // math.gcd(den, y.denominator)
    cols = [[int(x * den), int(y * den)] for x, y in vs]
    cols = [c for c in cols if c != [0, 0]]
    # Euclid on the first coordinates
    first = None
    rest = []
    for c in cols:
        if c[0] == 0:
            rest.append(c)
            continue
        if first is None:
            first = c
            continue
        a, b = first, c
        while b[0] != 0:
            q = a[0] // b[0]
            a, b = b, [a[0] - q * b[0], a[1] - q * b[1]]
        first = a
        rest.append(b)
    g2 = 0
    for c in rest:
        g2 = math.gcd(g2, c[1])
    out = []
    if first is not None:
        if first[0] < 0:
            first = [-first[0], -first[1]]
        if g2:
            first = [first[0], first[1] % g2]
        out.append((Fraction(first[0], den), Fraction(first[1], den)))
    if g2:
        out.append((Fraction(0), Fraction(g2, den)))
    return tuple(out)


def absolute_lattice(s: FlatSurface) -> tuple:
    return period_lattice(absolute_periods(s))
