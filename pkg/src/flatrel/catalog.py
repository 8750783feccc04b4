"""Built-in seed surfaces.

``catalog:NAME`` or ``catalog:NAME(ARG)`` selects one from the command line;
see :func:`lookup`.
"""
from __future__ import annotations

import math
import re

from .deformation import mark_point, slit_glue
from .scalar import Vec2, parse_vector, vec
from .surface import FlatSurface, from_triangles, polygon_surface, symmetric_polygon_surface

DEFAULT_SLIT = vec("1/2", 0)

# regular decagon with vertices at angles k*pi/5, to 25 significant digits
_COS = {
    0: "1.000000000000000000000000", 1: "0.8090169943749474241022934",
    2: "0.3090169943749474241022934", 3: "-0.3090169943749474241022934",
    4: "-0.8090169943749474241022934", 5: "-1.000000000000000000000000",
}
_SIN = {
    0: "0", 1: "0.5877852522924731291687060", 2: "0.9510565162951535721164393",
    3: "0.9510565162951535721164393", 4: "0.5877852522924731291687060", 5: "0",
}


def torus(a: Vec2 | None = None, b: Vec2 | None = None) -> FlatSurface:
    """Torus ``C / (Za + Zb)`` as two triangles; unit square by default."""
    a = a if a is not None else vec(1, 0)
    b = b if b is not None else vec(0, 1)
    hol = [a, b, -(a + b), -a, -b, a + b]
    return from_triangles([1, 2, 0, 4, 5, 3], [3, 4, 5, 0, 1, 2], hol)


def slit_tori(v: Vec2 = DEFAULT_SLIT, second: FlatSurface | None = None) -> FlatSurface:
    """Two tori glued crosswise along a slit of holonomy ``v`` from their vertex."""
    return slit_glue(torus(), 0, second if second is not None else torus(), 0, v)


def skew_slit_tori(v: Vec2 = DEFAULT_SLIT) -> FlatSurface:
    """Slit-glued tori with the second lattice spanned by (1,0) and (1/3,1)."""
    return slit_tori(v, torus(vec(1, 0), vec("1/3", 1)))


GENUS2_SIDES = (vec(2, 0), vec(1, 1), vec(1, 3), vec(-1, 2), vec(-1, 1))


def genus2() -> FlatSurface:
    """A rational centrally symmetric decagon, opposite sides glued: H(1,1)."""
    return symmetric_polygon_surface(GENUS2_SIDES)


def genus3() -> FlatSurface:
    """``genus2`` with a marked point slit-glued to a unit torus: H(1,1,1,1)."""
    base, p = mark_point(genus2(), 0, vec("1/2", "1/4"))
    return slit_glue(base, p, torus(), 0, vec("1/4", 0))


def decagon() -> FlatSurface:
    """The regular decagon with opposite sides glued (float backend only)."""
    verts = []
    for k in range(10):
        j = k if k <= 5 else 10 - k
        c = float(_COS[j])
        s = float(_SIN[j])
        verts.append(Vec2(c, s if k <= 5 else -s))
    return polygon_surface(verts, {i: i + 5 for i in range(5)})


NAMES = ("torus", "slit-tori", "skew-slit-tori", "genus2", "genus3", "decagon")


def lookup(entry: str) -> FlatSurface:
    """Resolve ``torus``, ``slit-tori(1/2,0)``, ``genus2`` and friends."""
    m = re.fullmatch(r"\s*([a-z0-9-]+)\s*(?:\((.*)\))?\s*", entry)
    if not m:
        raise KeyError(f"unknown catalog entry {entry!r}")
    name, arg = m.group(1), m.group(2)
    if name == "torus" and not arg:
        return torus()
    if name in ("slit-tori", "skew-slit-tori"):
        v = DEFAULT_SLIT
        if arg:
            v = parse_vector(arg) if "," in arg else Vec2(parse_vector(arg + ",0").x, v.y * 0)
        return slit_tori(v) if name == "slit-tori" else skew_slit_tori(v)
    if name == "genus2" and not arg:
        return genus2()
    if name == "genus3" and not arg:
        return genus3()
    if name == "decagon" and not arg:
        return decagon()
    raise KeyError(f"unknown catalog entry {entry!r}; known: {', '.join(NAMES)}")


def decagon_angle_check() -> float:
    """Largest deviation of the stored decagon literals from cos/sin of k*pi/5."""
    worst = 0.0
    for k in range(6):
        worst = max(worst, abs(float(_COS[k]) - math.cos(k * math.pi / 5)),
                    abs(float(_SIN[k]) - math.sin(k * math.pi / 5)))
    return worst
