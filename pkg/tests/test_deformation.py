import math
from fractions import Fraction

import pytest

from flatrel import errors
from flatrel.catalog import genus2, genus3, skew_slit_tori, slit_tori, torus
from flatrel.deformation import (
    BoundaryHit, FiniteFace, Finished, InfiniteFace, Unclassified, absolute_period_multiset,
    collapse_time, conjugated_rel_flow, coreface_chart, mark_point, rel_flow, slit_glue,
)
from flatrel.homology import absolute_lattice, period_chart, periods
from flatrel.scalar import vec
from flatrel.surface import area, as_float, rotate, stratum, validate, vertex_order

from support import random_slit_glued


def slit_edges(s):
    return [h for h in range(s.n_half) if s.origin[h] == 0 and s.head(h) == 1]


def horizontal_pq(s):
    return {s.hol[h] for h in slit_edges(s) if s.hol[h].y == 0}


def test_slit_shrinks_linearly():
    out = rel_flow(slit_tori(), (-1, 1), Fraction(1, 8))
    assert isinstance(out, Finished)
    validate(out.surface)
    # every P -> Q segment moves by -2t horizontally, the slit and its complement alike
    assert horizontal_pq(out.surface) == {vec("1/4", 0), vec("-3/4", 0)}
    assert area(out.surface) == 2


def test_slit_grows_the_other_way():
    out = rel_flow(slit_tori(), (1, -1), Fraction(1, 8))
    assert horizontal_pq(out.surface) == {vec("3/4", 0), vec("-1/4", 0)}


def test_zero_vector_is_identity():
    s = genus3()
    out = rel_flow(s, (0, 0, 0, 0), 5)
    assert out.surface == s and out.flips == ()


def test_negative_time_rejected():
    with pytest.raises(ValueError):
        rel_flow(slit_tori(), (-1, 1), -1)


def test_vector_must_sum_to_zero():
    with pytest.raises(ValueError):
        rel_flow(slit_tori(), (1, 1), 1)


def test_float_backend_refused():
    with pytest.raises(errors.FloatBackendUnsupported):
        rel_flow(as_float(slit_tori()), (-1, 1), Fraction(1, 8))


def test_collapse_times():
    assert collapse_time(slit_tori(), (-1, 1)) == Fraction(1, 4)
    # the two complementary horizontal connections of length 1/2 run Q -> P
    assert collapse_time(slit_tori(), (1, -1)) == Fraction(1, 4)
    assert collapse_time(torus(), (0,)) == math.inf
    assert collapse_time(slit_tori(), (-2, 2)) == Fraction(1, 8)


def test_absolute_periods_constant_along_flow():
    s = genus3()
    a = (1, -1, 0, 0)
    before = absolute_lattice(s)
    t = collapse_time(s, a) / 2
    out = rel_flow(s, a, t)
    assert absolute_lattice(out.surface) == before
    assert area(out.surface) == area(s)


def test_infinite_face_slit_tori():
    out = rel_flow(slit_tori(), (-1, 1))
    assert isinstance(out, BoundaryHit) and out.time == Fraction(1, 4)
    cls = out.classification
    assert isinstance(cls, InfiniteFace)
    assert cls.type == (1, 1)
    for piece, node in zip(cls.components, cls.nodes):
        validate(piece)
        assert area(piece) == 1
        assert stratum(piece).orders == (0,)
        assert absolute_lattice(piece) == absolute_lattice(torus())
        assert vertex_order(piece, node) == 0
    assert cls.regular == (True, True)


def test_infinite_face_genus_two_one():
    out = rel_flow(genus3(), (0, 1, -1, 0))
    cls = out.classification
    assert isinstance(cls, InfiniteFace) and cls.type == (2, 1)
    assert sum(area(p) for p in cls.components) == area(genus3())


def test_finite_face_merges_two_zeros():
    s = genus2()
    out = rel_flow(s, (-1, 1))
    cls = out.classification
    assert isinstance(cls, FiniteFace)
    validate(cls.surface)
    assert stratum(cls.surface).orders == (2,)
    assert cls.merged == (((0, 1), 0, 2),)
    assert area(cls.surface) == area(s)


def test_finite_face_genus_three():
    cls = rel_flow(genus3(), (1, -1, 0, 0)).classification
    assert isinstance(cls, FiniteFace)
    assert sorted(stratum(cls.surface).orders) == [1, 1, 2]


def test_non_separating_pair_is_unclassified():
    out = rel_flow(slit_tori(), (1, -1))
    assert out.time == Fraction(1, 4)
    assert isinstance(out.classification, Unclassified)
    assert "separate" in out.classification.reason


def test_boundary_surface_is_degenerate():
    out = rel_flow(slit_tori(), (-1, 1))
    assert all(out.surface.hol[e].is_zero() for e in out.collapsing)
    with pytest.raises(errors.ValidationError):
        validate(out.surface)


def test_no_collapse_raises():
    with pytest.raises(errors.NoCollapse):
        rel_flow(slit_tori(), (0, 0))


def test_event_budget():
    with pytest.raises(errors.EventBudgetExceeded):
        rel_flow(genus3(), (1, -1, 0, 0), Fraction(3, 8) * Fraction(99, 100), budget=0)


# ---------------------------------------------------------------- conjugation

def test_conjugation_by_one_is_plain_flow():
    s = skew_slit_tori()
    t = Fraction(1, 10)
    assert conjugated_rel_flow(s, (-1, 1), vec(1, 0), t).surface == rel_flow(s, (-1, 1), t).surface


def test_conjugation_by_minus_one_reverses():
    s = slit_tori()
    t = Fraction(1, 10)
    got = conjugated_rel_flow(s, (-1, 1), vec(-1, 0), t).surface
    want = rel_flow(s, (1, -1), t).surface
    assert periods(got, period_chart(got)) == periods(want, period_chart(want))


def test_conjugation_matches_rotated_direction():
    s = skew_slit_tori()
    c = vec("3/5", "4/5")
    t = Fraction(1, 12)
    got = conjugated_rel_flow(s, (-1, 1), c, t).surface
    direct = rel_flow(s, (-1, 1), t, direction=vec("3/5", "-4/5")).surface
    assert periods(got, period_chart(got)) == periods(direct, period_chart(direct))
    validate(got)


def test_conjugated_boundary_components_rotate_back():
    # rotating by -i turns the vertical slit into (1/2, 0)
    c = vec(0, -1)
    out = conjugated_rel_flow(slit_tori(vec(0, "1/2")), (-1, 1), c)
    assert isinstance(out.classification, InfiniteFace)
    assert out.classification.type == (1, 1)


def test_rotation_must_be_unit():
    with pytest.raises(ValueError):
        conjugated_rel_flow(slit_tori(), (-1, 1), vec(2, 0), 1)


# ---------------------------------------------------------------- gluing

def test_slit_glue_stratum_and_area():
    s = slit_glue(torus(), 0, torus(), 0, vec(0, "1/3"))
    validate(s)
    assert stratum(s).orders == (1, 1)
    assert area(s) == 2
    assert vec(0, "1/3") in {s.hol[h] for h in slit_edges(s)}


def test_slit_glue_keeps_absolute_periods():
    s = slit_glue(torus(), 0, torus(vec(2, 0), vec(0, 1)), 0, vec("1/3", "1/5"))
    # Z^2 + (2Z x Z) = Z^2
    assert absolute_lattice(s) == absolute_lattice(torus())
    assert len(absolute_period_multiset(s)) == 4


def test_slit_through_lattice_point_rejected():
    with pytest.raises(errors.SlitHitsConePoint):
        slit_glue(torus(), 0, torus(), 0, vec(2, 0))


def test_slit_glue_needs_regular_points():
    with pytest.raises(ValueError):
        slit_glue(genus2(), 0, torus(), 0, vec("1/4", 0))


def test_zero_slit_rejected():
    with pytest.raises(ValueError):
        slit_glue(torus(), 0, torus(), 0, vec(0, 0))


def test_mark_point():
    s, p = mark_point(genus2(), 0, vec("1/2", "1/4"))
    validate(s)
    assert p == 2 and vertex_order(s, p) == 0
    assert area(s) == area(genus2())


def test_coreface_chart_absolute_periods():
    import random
    rng = random.Random(3)
    for _ in range(5):
        s, (s1, s2, v) = random_slit_glued(rng)
        again = coreface_chart((s1, 0, s2, 0), v)
        assert absolute_period_multiset(again) == absolute_period_multiset(s)
        assert area(again) == area(s1) + area(s2)


def test_flow_then_collapse_recovers_the_tori():
    import random
    from support import random_torus
    rng = random.Random(11)
    for _ in range(5):
        s1, s2 = random_torus(rng), random_torus(rng)
        v = vec(Fraction(rng.randint(1, 5), 6), 0)
        s = slit_glue(s1, 0, s2, 0, v)
        out = rel_flow(s, (-1, 1))
        cls = out.classification
        assert isinstance(cls, InfiniteFace), cls
        got = sorted(area(p) for p in cls.components)
        assert got == sorted([area(s1), area(s2)])
        lats = sorted(tuple(absolute_lattice(p)) for p in cls.components)
        assert lats == sorted([tuple(absolute_lattice(s1)), tuple(absolute_lattice(s2))])
