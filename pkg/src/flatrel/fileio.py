"""Surface files: UTF-8 JSON, version tagged.

Schema (version 1)::

    {
      "format": "flatrel-surface",
      "version": 1,
      "backend": "exact" | "float",
      "triangles": [[h0, h1, h2], ...],      # next(h0) = h1, next(h1) = h2, next(h2) = h0
      "twin": [t0, t1, ...],                  # one entry per half-edge
      "labels": [l0, l1, ...],                # zero label of each half-edge's origin
      "holonomy": [[[px, qx], [py, qy]], ...] # exact: x = px/qx, y = py/qy
                                              # float: [[x, y], ...]
      "name": "...", "provenance": "..."      # optional
    }

Floats are refused unless the file declares the float backend.
"""
from __future__ import annotations

from fractions import Fraction
import json

from . import errors
from .scalar import EXACT, FLOAT, Vec2
from .surface import FlatSurface, validate

FORMAT = "flatrel-surface"
VERSION = 1


def to_dict(s: FlatSurface, name: str | None = None, provenance: str | None = None) -> dict:
    if s.backend == EXACT:
        hol = [[[Fraction(v.x).numerator, Fraction(v.x).denominator],
                [Fraction(v.y).numerator, Fraction(v.y).denominator]] for v in s.hol]
    else:
        hol = [[float(v.x), float(v.y)] for v in s.hol]
    out = {
        "format": FORMAT,
        "version": VERSION,
        "backend": s.backend,
        "triangles": [list(t) for t in s.triangles],
        "twin": list(s.twin),
        "labels": list(s.origin),
        "holonomy": hol,
    }
    if name is not None:
        out["name"] = name
    if provenance is not None:
        out["provenance"] = provenance
    return out


def dumps(s: FlatSurface, name: str | None = None, provenance: str | None = None) -> str:
    return json.dumps(to_dict(s, name, provenance), indent=1) + "\n"


def loads(text: str, check: bool = True) -> tuple:
    """Parse a surface file; returns ``(surface, metadata)``."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise errors.FileFormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}",
                                     line=exc.lineno) from None
    return from_dict(data, check)


def from_dict(data: dict, check: bool = True) -> tuple:
    if not isinstance(data, dict) or data.get("format") != FORMAT:
        raise errors.FileFormatError(f"not a {FORMAT} file")
    if data.get("version") != VERSION:
        raise errors.FileFormatError(f"unsupported version {data.get('version')!r}")
    backend = data.get("backend", EXACT)
    if backend not in (EXACT, FLOAT):
        raise errors.FileFormatError(f"unknown backend {backend!r}")
    for key in ("triangles", "twin", "labels", "holonomy"):
        if not isinstance(data.get(key), list):
            raise errors.FileFormatError(f"missing or malformed field {key!r}")
    n = len(data["twin"])
    nxt = [-1] * n
    for i, tri in enumerate(data["triangles"]):
        if len(tri) != 3 or not all(isinstance(h, int) and 0 <= h < n for h in tri):
            raise errors.FileFormatError(f"triangle {i} is malformed", half_edge=tri[0] if tri else None)
        for j in range(3):
            if nxt[tri[j]] != -1:
                raise errors.FileFormatError(f"half-edge {tri[j]} appears twice", half_edge=tri[j])
            nxt[tri[j]] = tri[(j + 1) % 3]
    if -1 in nxt:
        raise errors.FileFormatError("some half-edge belongs to no triangle", half_edge=nxt.index(-1))
    if len(data["labels"]) != n or len(data["holonomy"]) != n:
        raise errors.FileFormatError("twin, labels and holonomy must have one entry per half-edge")
    hol = [_vector(v, backend, h) for h, v in enumerate(data["holonomy"])]
    s = FlatSurface(tuple(nxt), tuple(data["twin"]), tuple(data["labels"]), tuple(hol))
    if check:
        validate(s)
    meta = {k: data[k] for k in ("name", "provenance") if k in data}
    return s, meta


def _vector(v, backend, h) -> Vec2:
    try:
        if backend == EXACT:
            (px, qx), (py, qy) = v
            if not all(isinstance(c, int) and not isinstance(c, bool) for c in (px, qx, py, qy)):
                raise errors.FileFormatError(
                    "exact holonomies must be integer pairs; floats need backend 'float'", half_edge=h)
            return Vec2(Fraction(px, qx), Fraction(py, qy))
        x, y = v
        return Vec2(float(x), float(y))
    except errors.FileFormatError:
        raise
    except (TypeError, ValueError, ZeroDivisionError):
        raise errors.FileFormatError(f"holonomy of half-edge {h} is malformed", half_edge=h) from None


def read(path) -> tuple:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def write(path, s: FlatSurface, name: str | None = None, provenance: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(s, name, provenance))
