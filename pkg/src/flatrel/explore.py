"""Randomized search for isolated bigons and the faces their collapses reach."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
import math
import random

from . import errors
from .catalog import lookup
from .deformation import Finished, collapse_time, rel_flow
from .geodesics import find_isolated_bigons
from .surface import gl2_action

BASES = {"genus2": "slit-tori", "genus3": "genus3"}


def _random_matrix(rng: random.Random):
    while True:
        a, d = rng.randint(1, 3), rng.randint(1, 3)
        b = Fraction(rng.randint(-2, 2), rng.randint(1, 3))
        c = Fraction(rng.randint(-2, 2), rng.randint(1, 3))
        if a * d - b * c > 0:
            return ((Fraction(a), b), (c, Fraction(d)))


def _random_rel(rng: random.Random, k: int):
    while True:
        a = [rng.randint(-3, 3) for _ in range(k - 1)]
        a.append(-sum(a))
        if any(a):
            return a


def trial(base: str, seed, index: int, length_factor=1, budget=None) -> dict:
    """One seeded trial; returns the face types reached and any failure."""
    rng = random.Random(f"{seed}-{index}")
    s = gl2_action(_random_matrix(rng), lookup(BASES.get(base, base)))
    try:
        a = _random_rel(rng, s.num_vertices)
        limit = collapse_time(s, a)
        frac = Fraction(rng.randint(1, 9), 10)
        t = limit * frac if limit != math.inf else frac
        moved = rel_flow(s, a, t)
        if isinstance(moved, Finished):
            s = moved.surface
        longest = max(s.hol[e].norm2() for e in s.edges)
        kwargs = {} if budget is None else {"budget": budget}
        bigons = find_isolated_bigons(s, L2=longest * length_factor ** 2, **kwargs)
    except errors.BudgetExceeded:
        return {"types": [], "failure": "budget"}
    except errors.FlatRelError as exc:
        return {"types": [], "failure": type(exc).__name__}
    return {"types": [list(b.type) for b in bigons], "failure": None}


def _run(args):
    return trial(*args)


def explore(base: str = "genus2", trials: int = 100, seed=0, length_factor=1,
            workers: int = 1, budget=None) -> dict:
    """Tally isolated-bigon collapse types over ``trials`` seeded surfaces."""
    jobs = [(base, seed, i, length_factor, budget) for i in range(trials)]
    if workers > 1 and trials:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run, jobs))
    else:
        results = [_run(j) for j in jobs]
    faces = {}
    failures = {}
    with_bigon = 0
    for r in results:
        if r["failure"]:
            failures[r["failure"]] = failures.get(r["failure"], 0) + 1
        if r["types"]:
            with_bigon += 1
        for t in r["types"]:
            key = ",".join(map(str, t))
            faces[key] = faces.get(key, 0) + 1
    return {
        "base": base,
        "trials": trials,
        "seed": str(seed),
        "surfaces_with_isolated_bigons": with_bigon,
        "collapses_by_type": faces,
        "failures": failures,
    }
