"""Scalars, plane vectors and the sign predicates everything else is built on.

Two backends exist.  The exact backend uses :class:`fractions.Fraction` and
every predicate is decided exactly.  The float backend exists only for
surfaces with irrational coordinates (the regular decagon); its predicates
treat values within a relative tolerance of :data:`EPS` as zero.
"""
from __future__ import annotations

import math
from fractions import Fraction

EPS = 1e-9

EXACT = "exact"
FLOAT = "float"


class Vec2:
    """A period ``x + iy`` as a pair of scalars.  Immutable by convention."""

    __slots__ = ("x", "y")

    def __init__(self, x, y):
        self.x = x
        self.y = y

    def __add__(self, other):
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other):
        return Vec2(self.x - other.x, self.y - other.y)

    def __neg__(self):
        return Vec2(-self.x, -self.y)

    def __mul__(self, c):
        return Vec2(self.x * c, self.y * c)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return Vec2(self.x / c, self.y / c)

    def __eq__(self, other):
        if not isinstance(other, Vec2):
            return NotImplemented
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y))

    def __iter__(self):
        yield self.x
        yield self.y

    def __repr__(self):
        return f"Vec2({_fmt(self.x)}, {_fmt(self.y)})"

    def norm2(self):
        return self.x * self.x + self.y * self.y

    def is_zero(self):
        if isinstance(self.x, float) or isinstance(self.y, float):
            return abs(self.x) <= EPS and abs(self.y) <= EPS
        return self.x == 0 and self.y == 0


def _fmt(v):
    if isinstance(v, Fraction):
        return str(v)
    return repr(v)


def vec(x, y) -> Vec2:
    """Build an exact vector from ints, Fractions or ``"p/q"`` strings."""
    return Vec2(Fraction(x), Fraction(y))


def cross(u: Vec2, v: Vec2):
    return u.x * v.y - u.y * v.x


def dot(u: Vec2, v: Vec2):
    return u.x * v.x + u.y * v.y


def is_float(v: Vec2) -> bool:
    return isinstance(v.x, float) or isinstance(v.y, float)


def _sign(value, scale) -> int:
    if isinstance(value, float):
        if abs(value) <= EPS * scale:
            return 0
    return (value > 0) - (value < 0)


def orient(u: Vec2, v: Vec2) -> int:
    """Sign of ``cross(u, v)``: +1 when ``v`` is counterclockwise of ``u``."""
    c = cross(u, v)
    if isinstance(c, float):
        return _sign(c, math.sqrt(float(u.norm2()) * float(v.norm2())))
    return (c > 0) - (c < 0)


def dot_sign(u: Vec2, v: Vec2) -> int:
    d = dot(u, v)
    if isinstance(d, float):
        return _sign(d, math.sqrt(float(u.norm2()) * float(v.norm2())))
    return (d > 0) - (d < 0)


def same_direction(u: Vec2, v: Vec2) -> bool:
    """True when ``v`` is a positive multiple of ``u``."""
    return orient(u, v) == 0 and dot_sign(u, v) > 0


def in_sector(lo: Vec2, hi: Vec2, d: Vec2) -> bool:
    """Is ``d`` in the half-open sector ``[lo, hi)`` of angle less than pi?"""
    s = orient(lo, d)
    if s < 0:
        return False
    if s == 0 and dot_sign(lo, d) <= 0:
        return False
    return orient(d, hi) > 0


def in_open_sector(lo: Vec2, hi: Vec2, d: Vec2) -> bool:
    return orient(lo, d) > 0 and orient(d, hi) > 0


def backend_of(v: Vec2) -> str:
    return FLOAT if is_float(v) else EXACT


def to_float(v: Vec2) -> Vec2:
    return Vec2(float(v.x), float(v.y))


def parse_scalar(text) -> Fraction:
    """Parse ``"3/4"``, ``"-2"``, ``"0.25"`` or a number into a Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, float):
        raise TypeError("refusing to convert a float into an exact scalar")
    return Fraction(str(text).strip())


def parse_vector(text: str) -> Vec2:
    """Parse ``"1/2,0"`` into an exact vector."""
    parts = [p for p in text.replace(" ", "").split(",") if p]
    if len(parts) != 2:
        raise ValueError(f"expected two comma separated components, got {text!r}")
    return Vec2(parse_scalar(parts[0]), parse_scalar(parts[1]))


def primitive_direction(v: Vec2) -> tuple[int, int]:
    """The primitive integer vector positively proportional to exact ``v``."""
    x, y = Fraction(v.x), Fraction(v.y)
    den = x.denominator * y.denominator // math.gcd(x.denominator, y.denominator)
    ix, iy = int(x * den), int(y * den)
    g = math.gcd(ix, iy)
    if g == 0:
        raise ValueError("zero vector has no direction")
    return ix // g, iy // g
