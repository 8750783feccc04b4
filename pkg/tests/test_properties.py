import random
from fractions import Fraction

from hypothesis import HealthCheck, given, settings, strategies as st

from flatrel.deformation import collapse_time, rel_flow
from flatrel.geodesics import SaddleConnection, direction_classes, flexibility_witness, \
    minimal_weight_graph, saddle_connections, weighted_length
from flatrel.homology import period_chart, periods, rel_rank
from flatrel.scalar import Vec2, cross, vec
from flatrel.surface import area, gl2_action, stratum, validate

from support import EXACT_BASES, common_periods, random_catalog_surface, random_flips, \
    random_matrix, random_rel, random_slit_glued

SETTINGS = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
seeds = st.integers(min_value=0, max_value=10**6)


@SETTINGS
@given(seeds)
def test_flips_preserve_period_coordinates(seed):
    rng = random.Random(seed)
    _name, s = random_catalog_surface(rng)
    chart = period_chart(s)
    t, flips = random_flips(rng, s, 12)
    validate(t)
    assert common_periods(s, chart, flips, t) == tuple(periods(s, chart))
    assert area(t) == area(s)


@SETTINGS
@given(seeds)
def test_gauss_bonnet_and_rel_rank(seed):
    rng = random.Random(seed)
    _name, s = random_catalog_surface(rng)
    sig = stratum(s)
    assert sum(sig.orders) == 2 * sig.genus - 2
    assert rel_rank(s) == s.num_vertices - 1


@SETTINGS
@given(seeds, st.fractions(min_value=Fraction(1, 10), max_value=10, max_denominator=20))
def test_weighted_length_scales_inversely(seed, c):
    rng = random.Random(seed)
    k = rng.randint(2, 5)
    a = random_rel(rng, k)
    i, j = rng.sample(range(k), 2)
    sc = SaddleConnection(vec(Fraction(rng.randint(1, 9), rng.randint(1, 9)), 0), i, j, 0, 0)
    w = weighted_length(sc, a)
    scaled = weighted_length(sc, [c * x for x in a])
    if a[j] == a[i]:
        assert w == scaled
    else:
        assert scaled == w / c


@SETTINGS
@given(seeds)
def test_flow_commutes_with_linear_maps(seed):
    rng = random.Random(seed)
    s, _ = random_slit_glued(rng)
    m = random_matrix(rng)
    a = (-1, 1)
    ct = collapse_time(s, a)
    t = Fraction(1, 3) if ct == float("inf") else ct / 3
    out = rel_flow(s, a, t)
    ms = gl2_action(m, s)
    zeta = Vec2(m[0][0], m[1][0])
    mout = rel_flow(ms, a, t, direction=zeta)
    chart = period_chart(s)
    mchart = period_chart(ms)
    assert mchart.generators == chart.generators
    lhs = common_periods(ms, mchart, mout.flips, mout.surface)
    rhs = tuple(Vec2(m[0][0] * p.x + m[0][1] * p.y, m[1][0] * p.x + m[1][1] * p.y)
                for p in common_periods(s, chart, out.flips, out.surface))
    assert lhs == rhs


@SETTINGS
@given(seeds)
def test_flow_stays_inside_the_stratum_before_collapse(seed):
    rng = random.Random(seed)
    _name, s = random_catalog_surface(rng, names=("slit-tori", "skew-slit-tori", "genus2"))
    a = random_rel(rng, s.num_vertices)
    ct = collapse_time(s, a)
    t = Fraction(1) if ct == float("inf") else ct * Fraction(rng.randint(1, 9), 10)
    out = rel_flow(s, a, t)
    validate(out.surface)
    assert stratum(out.surface) == stratum(s)
    assert area(out.surface) == area(s)


@SETTINGS
@given(seeds)
def test_rotation_keeps_witness_valid(seed):
    rng = random.Random(seed)
    # rational points on the unit circle
    p, q = rng.randint(1, 6), rng.randint(1, 6)
    n = p * p + q * q
    c = vec(Fraction(p * p - q * q, n), Fraction(2 * p * q, n))
    s = gl2_action(((c.x, -c.y), (c.y, c.x)), EXACT_BASES["skew-slit-tori"]())
    conns = saddle_connections(s, 3)
    verdict = flexibility_witness(s, (-1, 1), 3, connections=conns)
    classes = {k.direction: k for k in direction_classes(conns)}
    for row in verdict.table:
        d = row["direction"]
        cls = classes[d]
        g = minimal_weight_graph(s, (-1, 1), cls)
        assert len(g) == row["minimal"]
        for e in g.edges:
            assert cross(e.holonomy, d) == 0
