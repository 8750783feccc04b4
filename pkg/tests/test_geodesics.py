import math
from fractions import Fraction

import pytest

from flatrel import errors
from flatrel.catalog import decagon, genus2, genus3, skew_slit_tori, slit_tori, torus
from flatrel.deformation import mark_point, slit_glue
from flatrel.geodesics import (
    RigidUpTo, Witness, direction_classes, find_isolated_bigons, flexibility_witness, has_cycle,
    horizontal_separatrices, minimal_weight_graph, saddle_connections, trace_separatrix,
    weighted_length, WeightGraph, DirectionClass, SaddleConnection,
)
from flatrel.homology import evaluate
from flatrel.scalar import Vec2, cross, vec
from flatrel.surface import as_float, diagonal, gl2_action, rotate

from support import decagon_side_class_oracle, primitive_lattice


def hol_set(conns):
    return sorted((c.holonomy.x, c.holonomy.y) for c in conns)


# ---------------------------------------------------------------- tracing

def test_trace_torus_horizontal_loop():
    s = torus()
    (corner,) = horizontal_separatrices(s)
    sc = trace_separatrix(s, corner, vec(1, 0), 2)
    assert sc.holonomy == vec(1, 0) and sc.from_zero == sc.to_zero == 0


def test_trace_slit_to_other_zero():
    s = slit_tori()
    hits = [trace_separatrix(s, c, vec(1, 0), 1) for c in s.corner_containing(0, vec(1, 0))]
    slit = [h for h in hits if h.to_zero == 1]
    assert slit and all(h.holonomy == vec("1/2", 0) for h in slit)


def test_trace_irrational_direction_misses():
    s = as_float(torus())
    d = Vec2(1.0, math.sqrt(2))
    (corner,) = s.corner_containing(0, d)
    assert trace_separatrix(s, corner, d, 10) is None


def test_trace_requires_direction_in_corner():
    s = torus()
    with pytest.raises(ValueError):
        trace_separatrix(s, 0, vec(-1, 0), 2)


def test_trace_agrees_with_enumeration():
    s = genus3()
    conns = saddle_connections(s, 3)
    for sc in conns[:200]:
        again = trace_separatrix(s, sc.start, sc.holonomy, L2=sc.length_sq)
        assert again == sc


# ---------------------------------------------------------------- enumeration

def test_torus_unit_bound():
    got = hol_set(saddle_connections(torus(), 1))
    assert got == [(x, y) for x, y in primitive_lattice(1)]
    assert len(got) == 4


def test_torus_root_five():
    got = hol_set(saddle_connections(torus(), L2=5))
    assert got == primitive_lattice(5)
    assert len(got) == 16


@pytest.mark.parametrize("L2", [2, 10, 50])
def test_torus_matches_lattice_oracle(L2):
    assert hol_set(saddle_connections(torus(), L2=L2)) == primitive_lattice(L2)


def test_sheared_torus_matches_lattice_oracle():
    m = ((Fraction(1), Fraction(1, 2)), (Fraction(0), Fraction(1)))
    s = gl2_action(m, torus())
    got = sorted((c.holonomy.x, c.holonomy.y) for c in saddle_connections(s, L2=20))
    want = sorted((x + Fraction(y, 2), Fraction(y)) for x, y in primitive_lattice(40)
                  if (x + Fraction(y, 2)) ** 2 + y * y <= 20)
    assert got == want


def test_slit_connections_present():
    s = slit_tori()
    conns = saddle_connections(s, "1/2")
    slits = [c for c in conns if c.holonomy == vec("1/2", 0) and c.from_zero == 0 and c.to_zero == 1]
    assert len(slits) == 2


def test_each_connection_once_per_orientation():
    conns = saddle_connections(genus2(), 4)
    keys = [c.key() for c in conns]
    assert len(keys) == len(set(keys))
    rev = {c.reverse_key() for c in conns}
    assert rev == set(keys)


def test_chains_realize_holonomy():
    s = genus3()
    for sc in saddle_connections(s, 3):
        assert evaluate(s, sc.chain(s)) == sc.holonomy
        pts = sc.crossings(s)
        assert len(pts) == len(sc.path)
        for _tri, _h, p in pts:
            assert cross(sc.holonomy, p) == 0


def test_budget_exceeded():
    with pytest.raises(errors.BudgetExceeded):
        saddle_connections(torus(), 50, budget=10)


def test_direction_classes_exact():
    conns = saddle_connections(slit_tori(), 2)
    for cls in direction_classes(conns):
        for m in cls.members:
            assert cross(cls.direction, m.holonomy) == 0
            assert m.holonomy.x * cls.direction.x + m.holonomy.y * cls.direction.y > 0


def test_direction_classes_float_merge():
    conns = saddle_connections(decagon(), 3)
    classes = direction_classes(conns)
    assert sum(len(c.members) for c in classes) == len(conns)
    for c in classes:
        for m in c.members:
            n = math.hypot(m.holonomy.x, m.holonomy.y)
            assert abs(cross(c.direction, m.holonomy)) <= 1e-9 * n


# ---------------------------------------------------------------- weights

def _sc(x, frm, to):
    return SaddleConnection(vec(x, 0), frm, to, 0, 0)


def test_weighted_length_examples():
    a = (Fraction(-1), Fraction(1))
    assert weighted_length(_sc("1/2", 0, 1), a) == Fraction(1, 4)
    assert weighted_length(_sc("1/2", 0, 0), a) == math.inf
    assert weighted_length(_sc("1/2", 0, 1), [-x for x in a]) == Fraction(-1, 4)
    with pytest.raises(errors.NotHorizontal):
        weighted_length(SaddleConnection(vec(1, 1), 0, 1, 0, 0), a)


def test_weighted_length_reversed_orientation():
    a = (Fraction(-1), Fraction(1))
    assert weighted_length(_sc("-1/2", 1, 0), a) == Fraction(1, 4)


def test_weighted_length_positive_scaling():
    a = (Fraction(-1), Fraction(3), Fraction(-2))
    sc = _sc("3/7", 2, 1)
    for c in (Fraction(1, 3), Fraction(2), Fraction(5, 2)):
        assert weighted_length(sc, [c * x for x in a]) == weighted_length(sc, a) / c


def test_minimal_graph_slit_bigon():
    s = slit_tori()
    cls = next(c for c in direction_classes(saddle_connections(s, 1)) if c.direction == vec(1, 0))
    g = minimal_weight_graph(s, (-1, 1), cls)
    assert len(g) == 2 and has_cycle(g)
    assert g.pairs() == [(0, 1), (0, 1)]
    assert g.weight == Fraction(1, 4)


def test_minimal_graph_loops_only_is_empty():
    s = slit_tori()
    cls = next(c for c in direction_classes(saddle_connections(s, 1)) if c.direction == vec(0, 1))
    assert all(m.is_loop for m in cls.members)
    assert len(minimal_weight_graph(s, (-1, 1), cls)) == 0


def test_minimal_graph_three_zeros_single_edge():
    s = genus3()
    a = (Fraction(-1), Fraction(0), Fraction(1), Fraction(0))
    found = False
    for cls in direction_classes(saddle_connections(s, 2)):
        pos = [m for m in cls.members if a[m.to_zero] - a[m.from_zero] > 0]
        if len(pos) != 1:
            continue
        g = minimal_weight_graph(s, a, cls)
        assert g.edges == pos
        found = True
    assert found


def test_has_cycle():
    assert has_cycle([(0, 1), (0, 1)])
    assert not has_cycle([(0, 1)])
    assert not has_cycle([])
    assert has_cycle([(0, 1), (1, 2), (2, 0)])
    assert not has_cycle([(0, 1), (1, 2), (2, 3)])


# ---------------------------------------------------------------- bigons

def test_isolated_bigon_slit_tori():
    (b,) = find_isolated_bigons(slit_tori(), 1)
    assert b.type == (1, 1)
    assert b.first.holonomy == b.second.holonomy == vec("1/2", 0)


def test_no_bigons_on_torus():
    assert find_isolated_bigons(torus(), 3) == []


def test_genus_two_glued_to_torus_gives_type_two_one():
    base, p = mark_point(genus2(), 0, vec("1/2", "1/4"))
    s = slit_glue(base, p, torus(), 0, vec("1/4", 0))
    types = [b.type for b in find_isolated_bigons(s, "1/4")]
    assert types == [(2, 1)]


# ---------------------------------------------------------------- flexibility

def test_skew_slit_tori_has_witness():
    w = flexibility_witness(skew_slit_tori(), (-1, 1), 3)
    assert isinstance(w, Witness)
    assert len(w.graph) >= 1 and not has_cycle(w.graph)


def test_symmetric_slit_tori_rigid_up_to_bound():
    # both tori are unit squares: every connection between the zeros has a twin
    r = flexibility_witness(slit_tori(), (-1, 1), 3)
    assert isinstance(r, RigidUpTo)
    assert r.table and all(row["minimal"] == 0 or row["cycle"] for row in r.table)


def test_zero_rel_vector_rejected():
    with pytest.raises(errors.NoAdmissibleRelVector):
        flexibility_witness(slit_tori(), (0, 0), 2)


def test_scan_order_shortest_first():
    r = flexibility_witness(slit_tori(), (-1, 1), 2)
    lengths = [row["direction"] for row in r.table]
    assert len(lengths) == len(set(lengths))


def test_decagon_side_direction_has_single_minimal_connection():
    # chords of the polygon parallel to a side: the side itself and the diameter
    # start at one parity, two longer chords at the other
    chords = decagon_side_class_oracle()
    even = sorted(length for length, parity in chords if parity == 0)
    odd = sorted(length for length, parity in chords if parity == 1)
    side = round(2 * math.sin(math.pi / 10), 12)
    assert even[0] == side and even[-1] == 2.0
    assert odd[0] == odd[1] > side
    r = flexibility_witness(decagon(), (-1, 1), 10)
    assert isinstance(r, Witness)
    (edge,) = r.graph.edges
    assert math.sqrt(edge.holonomy.norm2()) == pytest.approx(2 * math.sin(math.pi / 10))


def test_rotation_invariance_of_verdict():
    c = vec("3/5", "4/5")
    s = skew_slit_tori()
    w = flexibility_witness(s, (-1, 1), 3)
    rs = rotate(s, c)
    rw = flexibility_witness(rs, (-1, 1), 3)
    assert isinstance(rw, Witness)
    d = w.direction
    turned = vec(c.x * d.x - c.y * d.y, c.y * d.x + c.x * d.y)
    cls = next(k for k in direction_classes(saddle_connections(rs, 3)) if cross(k.direction, turned) == 0
               and k.direction.x * turned.x + k.direction.y * turned.y > 0)
    g = minimal_weight_graph(rs, (-1, 1), cls)
    assert len(g) == len(w.graph) and not has_cycle(g)


def test_teichmueller_preserves_horizontal_cycle_structure():
    s = slit_tori()
    for lam in (Fraction(2), Fraction(3, 2)):
        t = gl2_action(diagonal(lam), s)
        for surf in (s, t):
            cls = next(c for c in direction_classes(saddle_connections(surf, 2))
                       if c.direction == vec(1, 0))
            assert has_cycle(minimal_weight_graph(surf, (-1, 1), cls))
