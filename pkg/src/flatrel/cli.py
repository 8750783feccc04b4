"""Command line interface: ``flatrel info|flow|scan-flex|glue|render|explore``.

Surfaces are given as file paths or as ``catalog:NAME`` (for example
``catalog:slit-tori(1/2,0)``).  Exit codes: 0 ok, 1 invalid input or
surface, 2 budget exceeded, 3 usage error.
"""
from __future__ import annotations

import argparse
from fractions import Fraction
import json
import math
import os
import sys

from . import errors
from .catalog import lookup
from .deformation import EVENT_BUDGET, BoundaryHit, InfiniteFace, FiniteFace, rel_flow, slit_glue
from .explore import explore
from .fileio import dumps, read, write
from .geodesics import DEFAULT_BUDGET, Witness, flexibility_witness, saddle_connections
from .homology import period_chart, rel_rank, rel_vector
from .render import render_svg
from .scalar import EXACT, FLOAT, parse_scalar, parse_vector
from .surface import area, as_float, genus, stratum, validate

EXIT_OK, EXIT_INVALID, EXIT_BUDGET, EXIT_USAGE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _num(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return x


def _vec(v):
    return [_num(v.x), _num(v.y)]


def load(source: str, backend: str | None = None):
    if source.startswith("catalog:"):
        s = lookup(source[len("catalog:"):])
    else:
        s, _meta = read(source)
    if backend == FLOAT and s.backend == EXACT:
        s = as_float(s)
    elif backend == EXACT and s.backend != EXACT:
        raise errors.MixedBackend("a float surface cannot be converted to the exact backend")
    validate(s)
    return s


def _weights(text: str | None, k: int):
    if text is None:
        raise errors.NoAdmissibleRelVector("no REL vector given (use --a)")
    parts = [p for p in text.replace(" ", "").split(",") if p]
    a = rel_vector([parse_scalar(p) for p in parts], k)
    return a


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=1))
    else:
        print(text)


# ---------------------------------------------------------------- commands

def cmd_info(args) -> int:
    s = load(args.surface, args.backend)
    st = stratum(s)
    chart = period_chart(s)
    payload = {
        "genus": st.genus,
        "orders": list(st.orders),
        "zeros": s.num_vertices,
        "triangles": len(s.triangles),
        "area": _num(area(s)),
        "relative_rank": chart.rank,
        "absolute_rank": chart.abs_rank,
        "backend": s.backend,
        "rel_rank": rel_rank(s) if s.backend == EXACT else None,
    }
    text = "\n".join([
        f"stratum       {st}",
        f"zeros         {s.num_vertices}",
        f"triangles     {len(s.triangles)}",
        f"area          {payload['area']}",
        f"period chart  relative rank {chart.rank}, absolute rank {chart.abs_rank}",
        f"rel rank      {payload['rel_rank']}",
        f"backend       {s.backend}",
    ])
    _emit(args, payload, text)
    return EXIT_OK


def cmd_flow(args) -> int:
    s = load(args.surface, args.backend)
    a = _weights(args.a, s.num_vertices)
    t = None if args.to_boundary else parse_scalar(args.t)
    out = rel_flow(s, a, t, budget=args.event_budget)
    if isinstance(out, BoundaryHit):
        cls = out.classification
        payload = {"result": "boundary", "time": _num(out.time), "flips": len(out.flips),
                   "collapsing": [_vec(out.surface.hol[e]) for e in out.collapsing]}
        lines = [f"boundary hit at t* = {_num(out.time)} after {len(out.flips)} flips"]
        if isinstance(cls, InfiniteFace):
            payload.update(face="infinite", type=list(cls.type), regular=list(cls.regular))
            lines.append(f"infinite face of type {cls.type}, node regular: {cls.regular}")
            files = []
            if args.out_dir:
                os.makedirs(args.out_dir, exist_ok=True)
                for i, piece in enumerate(cls.components):
                    path = os.path.join(args.out_dir, f"component-{i}.json")
                    write(path, piece, name=f"component {i}", provenance="REL collapse")
                    files.append(path)
                lines.append("components written to " + ", ".join(files))
            payload["components"] = files
        elif isinstance(cls, FiniteFace):
            payload.update(face="finite", merged=[[list(g[0]), g[2]] for g in cls.merged],
                           orders=list(stratum(cls.surface).orders))
            lines.append(f"finite face, stratum {stratum(cls.surface)}")
            if args.output:
                write(args.output, cls.surface, provenance="REL collapse")
        else:
            payload.update(face="unclassified", reason=cls.reason)
            lines.append(f"unclassified: {cls.reason}")
        _emit(args, payload, "\n".join(lines))
        return EXIT_OK
    text = dumps(out.surface, provenance=f"REL flow a={args.a} t={args.t}")
    if args.output:
        write(args.output, out.surface, provenance=f"REL flow a={args.a} t={args.t}")
        _emit(args, {"result": "finished", "time": _num(out.elapsed), "flips": len(out.flips),
                     "output": args.output}, f"flowed to t = {_num(out.elapsed)}; wrote {args.output}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_scan_flex(args) -> int:
    s = load(args.surface, args.backend)
    if s.num_vertices < 2:
        raise errors.NoAdmissibleRelVector("a surface with one zero has no nonzero REL vector")
    a = _weights(args.a, s.num_vertices)
    L = parse_scalar(args.length_bound)
    verdict = flexibility_witness(s, a, L, budget=args.budget)
    table = [{"direction": _vec(r["direction"]), "members": r["members"], "minimal": r["minimal"],
              "cycle": r["cycle"], "scaled_weight": _num(r["scaled_weight"])} for r in verdict.table]
    if isinstance(verdict, Witness):
        payload = {"verdict": "witness", "direction": _vec(verdict.direction),
                   "graph": [{"from": e.from_zero, "to": e.to_zero, "holonomy": _vec(e.holonomy)}
                             for e in verdict.graph.edges], "table": table}
        text = (f"flexible: witness direction {_vec(verdict.direction)} with "
                f"{len(verdict.graph)} minimal connection(s) after {len(table)} classes")
    else:
        payload = {"verdict": "rigid_up_to", "bound": _num(L), "table": table}
        text = f"no witness among {len(table)} direction classes up to length {_num(L)}"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_glue(args) -> int:
    s1 = load(args.surface1, args.backend)
    s2 = load(args.surface2, args.backend)
    v = parse_vector(args.v)
    out = slit_glue(s1, args.p1, s2, args.p2, v)
    if args.output:
        write(args.output, out, provenance=f"slit glue v={args.v}")
        _emit(args, {"output": args.output, "stratum": list(stratum(out).orders)},
              f"glued surface in {stratum(out)} written to {args.output}")
    else:
        sys.stdout.write(dumps(out, provenance=f"slit glue v={args.v}"))
    return EXIT_OK


def cmd_render(args) -> int:
    s = load(args.surface, args.backend)
    conns = ()
    if args.length_bound:
        conns = saddle_connections(s, parse_scalar(args.length_bound), budget=args.budget)
    svg = render_svg(s, conns, title=args.surface)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(svg)
    else:
        sys.stdout.write(svg)
    return EXIT_OK


def cmd_explore(args) -> int:
    report = explore(args.stratum, args.trials, args.seed, workers=args.workers)
    lines = [f"{report['trials']} trials on {report['base']} (seed {report['seed']}), "
             f"{report['surfaces_with_isolated_bigons']} with isolated bigons"]
    for key, count in sorted(report["collapses_by_type"].items()):
        lines.append(f"  type ({key}): {count}")
    for key, count in sorted(report["failures"].items()):
        lines.append(f"  failed ({key}): {count}")
    _emit(args, report, "\n".join(lines))
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine readable output")
    common.add_argument("--backend", choices=(EXACT, FLOAT), help="force a scalar backend")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="triangle development budget for saddle connection searches")

    p = _Parser(prog="flatrel", description="Exact translation surfaces: REL flow, saddle connections, gluing.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sub.add_parser("info", parents=[common], help="stratum, area and chart dimensions")
    q.add_argument("surface")
    q.set_defaults(run=cmd_info)

    q = sub.add_parser("flow", parents=[common], help="run the REL flow")
    q.add_argument("surface")
    q.add_argument("--a", required=True, help="comma separated zero-sum weights, e.g. -1,1")
    when = q.add_mutually_exclusive_group(required=True)
    when.add_argument("--t", help="target time")
    when.add_argument("--to-boundary", action="store_true", help="flow until a collapse")
    q.add_argument("-o", "--output", help="write the resulting surface here")
    q.add_argument("--out-dir", help="directory for split components at a boundary hit")
    q.add_argument("--event-budget", type=int, default=EVENT_BUDGET)
    q.set_defaults(run=cmd_flow)

    q = sub.add_parser("scan-flex", parents=[common], help="search for a flexibility witness")
    q.add_argument("surface")
    q.add_argument("--a", help="comma separated zero-sum weights")
    q.add_argument("--length-bound", default="10")
    q.set_defaults(run=cmd_scan_flex)

    q = sub.add_parser("glue", parents=[common], help="slit-glue two surfaces at marked points")
    q.add_argument("surface1")
    q.add_argument("p1", type=int)
    q.add_argument("surface2")
    q.add_argument("p2", type=int)
    q.add_argument("--v", required=True, help="slit holonomy, e.g. 1/2,0")
    q.add_argument("-o", "--output")
    q.set_defaults(run=cmd_glue)

    q = sub.add_parser("render", parents=[common], help="SVG of a developed fundamental domain")
    q.add_argument("surface")
    q.add_argument("--length-bound", help="also draw saddle connections up to this length")
    q.add_argument("-o", "--output")
    q.set_defaults(run=cmd_render)

    q = sub.add_parser("explore", parents=[common], help="random isolated-bigon collapses")
    q.add_argument("--stratum", default="genus2", help="genus2, genus3 or a catalog name")
    q.add_argument("--trials", type=int, default=100)
    q.add_argument("--seed", default="0")
    q.add_argument("--workers", type=int, default=1)
    q.set_defaults(run=cmd_explore)
    return p


_VALUE_FLAGS = ("--a", "--v", "--t")


def _attach_negative_values(argv):
    """Turn ``--a -1,1`` into ``--a=-1,1`` so argparse does not read an option."""
    out = []
    i = 0
    while i < len(argv):
        arg = argv[i]
        if arg in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1][:1] == "-" \
                and argv[i + 1][1:2].isdigit():
            out.append(f"{arg}={argv[i + 1]}")
            i += 2
            continue
        out.append(arg)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_attach_negative_values(argv))
    try:
        return args.run(args)
    except errors.FlatRelError as exc:
        where = ""
        if getattr(exc, "line", None):
            where = f" (line {exc.line})"
        elif getattr(exc, "half_edge", None) is not None:
            where = f" (half-edge {exc.half_edge})"
        print(f"flatrel: {type(exc).__name__}: {exc}{where}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, KeyError, OSError, ZeroDivisionError) as exc:
        print(f"flatrel: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
