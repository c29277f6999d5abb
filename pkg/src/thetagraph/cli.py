"""Command-line interface.

Exit codes: 0 ok, 2 usage or input error, 3 routing did not reach the
target, 4 degenerate input, 5 property failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import document
from .cone_graph import FLAVORS, THETA, YAO, build, build_sweep
from .errors import (
    CycleDetected,
    Degenerate,
    DuplicatePoint,
    ParseError,
    ThetaGraphError,
    UnknownProperty,
)
from .harness import PROPERTIES, PropertyResult, Trial, batch, evaluate, run_suite
from .render import render_report_svg, render_svg
from .routing import REACHED, theta_route
from .structure import barrier, connected_components, i_path, sinks, strongly_connected_components

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CYCLED = 3
EXIT_DEGENERATE = 4
EXIT_PROPERTY = 5

AUDIT_PROPERTIES = (
    "theta3-connected",
    "yao3-connected",
    "i-edge-noncrossing",
    "empty-cone-uncrossed",
    "i-path-monotone-sink",
    "sink-triple-connected",
    "barrier-separates",
)


class Failure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load(args):
    doc = document.load(args.file, validate=getattr(args, "validate", False))
    m = args.m if getattr(args, "m", None) is not None else doc.m
    flavor = getattr(args, "flavor", None) or doc.flavor
    return doc, m, flavor


def _graph(args, flavor=None):
    doc, m, fl = _load(args)
    fl = flavor or fl
    if getattr(args, "sweep", False):
        g = build_sweep(doc.points, m)
    else:
        g = build(doc.points, m, fl, lenient=getattr(args, "lenient", False))
    return doc, g


def _names(ps, ids):
    return [ps.label(i) for i in ids]


def cmd_build(args, out):
    doc, g = _graph(args)
    ps = g.points
    if args.format == "json":
        json.dump({
            "flavor": g.flavor, "m": g.m, "perturbed": g.perturbed,
            "directed": [[ps.label(s), ps.label(t), i] for s, t, i in g.directed_edges],
            "edges": [_names(ps, e) for e in g.edges],
        }, out, indent=2)
        out.write("\n")
    else:
        for s, t, i in g.directed_edges:
            out.write(f"{ps.label(s)} -> {ps.label(t)} cone {i}\n")
        out.write(f"{len(g.edges)} undirected edges\n")
    return EXIT_OK


def cmd_sinks(args, out):
    _, g = _graph(args)
    rep = sinks(g)
    for i in range(g.m):
        out.write(f"{i}-sinks: {' '.join(_names(g.points, rep[i]))}\n")
    return EXIT_OK


def cmd_path(args, out):
    _, g = _graph(args)
    p = i_path(g, g.points.resolve(args.start), args.cls)
    out.write(",".join(_names(g.points, p.vertices)) + "\n")
    return EXIT_OK


def cmd_barrier(args, out):
    _, g = _graph(args)
    b = barrier(g, args.cls, g.points.resolve(args.start), args.start_cone)
    out.write(f"path: {','.join(_names(g.points, b.vertices))}\n")
    out.write(f"start cone: {b.start_cone}\n")
    for v, side in sorted(b.classify().items()):
        out.write(f"{g.points.label(v)} {side}\n")
    return EXIT_OK


def cmd_route(args, out):
    _, g = _graph(args, THETA)
    ps = g.points
    trace = theta_route(g, ps.resolve(args.source), ps.resolve(args.target))
    out.write(",".join(_names(ps, trace.visited)) + "\n")
    out.write(trace.outcome + "\n")
    return EXIT_OK if trace.outcome == REACHED else EXIT_CYCLED


def cmd_components(args, out):
    _, g = _graph(args)
    if args.directed:
        parts = strongly_connected_components(g)
        word = "SCC" if len(parts) == 1 else "SCCs"
    else:
        parts = connected_components(g)
        word = "component" if len(parts) == 1 else "components"
    out.write(f"{len(parts)} {word}\n")
    for part in parts:
        out.write("{" + ",".join(_names(g.points, part)) + "}\n")
    return EXIT_OK


def _write_results(report_dir: Path, stem: str, results) -> None:
    report_dir.mkdir(parents=True, exist_ok=True)
    with open(report_dir / f"{stem}.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["property", "trials", "failures", "passed", "elapsed_s"])
        for r in results:
            w.writerow([r.name, r.trials, r.failures, r.passed, f"{r.elapsed:.3f}"])
    (report_dir / f"{stem}.json").write_text(
        json.dumps([r.to_dict() for r in results], indent=2) + "\n", encoding="utf-8")
    (report_dir / f"{stem}.svg").write_bytes(render_report_svg(results, stem))


def cmd_audit(args, out):
    doc, m, _ = _load(args)
    if m != 3:
        raise Failure(EXIT_USAGE, "the structural audits are defined for m = 3")
    trial = Trial(doc.points)
    results = []
    for name in AUDIT_PROPERTIES:
        msgs = evaluate(name, trial)
        results.append(PropertyResult(name, 1, int(bool(msgs)), [], msgs))
        out.write(f"{name}: {'ok' if not msgs else 'FAIL'}\n")
        for msg in msgs[:10]:
            out.write(f"  {msg}\n")
    if args.report_dir:
        rd = Path(args.report_dir)
        _write_results(rd, "audit", results)
        (rd / "theta.svg").write_bytes(render_svg(trial.graph(THETA), mark_sinks=0))
        (rd / "yao.svg").write_bytes(render_svg(trial.graph(YAO), mark_sinks=0))
    return EXIT_OK if all(r.passed for r in results) else EXIT_PROPERTY


def cmd_fuzz(args, out):
    names = list(PROPERTIES) if "all" in args.property else args.property
    for name in names:
        if name not in PROPERTIES:
            raise UnknownProperty(f"unknown property {name!r}; known: {', '.join(PROPERTIES)}")
    if "even-m-connected" in names and args.m % 2:
        raise Failure(EXIT_USAGE, "even-m-connected needs an even --m")
    specs = batch(args.seed, args.trials, n_min=args.n_min, n_max=args.n_max, bound=args.bound, m=args.m)
    results = list(run_suite(names, specs).values())
    json.dump([r.to_dict() for r in results], out, indent=2)
    out.write("\n")
    if args.report_dir:
        _write_results(Path(args.report_dir), "fuzz", results)
    return EXIT_OK if all(r.passed for r in results) else EXIT_PROPERTY


def cmd_render(args, out):
    doc, g = _graph(args)
    ps = g.points
    overlays = []
    for kind in args.overlay:
        if kind == "path":
            overlays.append(i_path(g, ps.resolve(_need(args.start, "--from")), _need(args.cls, "--class")))
        elif kind == "barrier":
            overlays.append(barrier(g, _need(args.cls, "--class"), ps.resolve(_need(args.start, "--from"))))
        elif kind == "route":
            rg = g if g.flavor == THETA else build(ps, g.m, THETA)
            overlays.append(theta_route(rg, ps.resolve(_need(args.start, "--from")), ps.resolve(_need(args.target, "--to"))))
    cones = [(ps.resolve(a), int(i)) for a, i in (c.split(":") for c in args.cone)]
    svg = render_svg(g, overlays, cones=cones, mark_sinks=args.sinks)
    Path(args.out).write_bytes(svg)
    return EXIT_OK


def _need(value, flag):
    if value is None:
        raise Failure(EXIT_USAGE, f"this overlay needs {flag}")
    return value


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="thetagraph", description="Theta and Yao cone graphs with exact predicates.")
    sub = p.add_subparsers(dest="command", required=True)

    def with_file(name, help_, func, flavor=True):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("file")
        sp.add_argument("--m", type=int, default=None, help="number of cones (default: from the file)")
        if flavor:
            sp.add_argument("--flavor", choices=FLAVORS, default=None)
        sp.add_argument("--lenient", action="store_true", help="tie-break degenerate inputs instead of rejecting")
        sp.add_argument("--validate", action="store_true", help="reject inputs not in general position")
        sp.set_defaults(func=func)
        return sp

    sp = with_file("build", "print the edge list", cmd_build)
    sp.add_argument("--sweep", action="store_true", help="use the sweep builder (theta only)")
    sp.add_argument("--format", choices=("text", "json"), default="text")

    with_file("sinks", "list i-sinks per class", cmd_sinks)

    sp = with_file("path", "trace an i-path", cmd_path)
    sp.add_argument("--from", dest="start", required=True)
    sp.add_argument("--class", dest="cls", type=int, required=True)

    sp = with_file("barrier", "build an i-barrier and classify points", cmd_barrier)
    sp.add_argument("--from", dest="start", required=True)
    sp.add_argument("--class", dest="cls", type=int, required=True)
    sp.add_argument("--start-cone", type=int, default=None)

    sp = with_file("route", "theta-route between two points", cmd_route, flavor=False)
    sp.add_argument("--from", dest="source", required=True)
    sp.add_argument("--to", dest="target", required=True)

    sp = with_file("components", "connected components or SCCs", cmd_components)
    sp.add_argument("--directed", action="store_true")

    sp = with_file("audit", "run every structural audit on one input", cmd_audit, flavor=False)
    sp.add_argument("--report-dir", default=None)

    sp = with_file("render", "draw an SVG figure", cmd_render)
    sp.add_argument("--out", required=True)
    sp.add_argument("--overlay", action="append", default=[], choices=("path", "barrier", "route"))
    sp.add_argument("--from", dest="start", default=None)
    sp.add_argument("--to", dest="target", default=None)
    sp.add_argument("--class", dest="cls", type=int, default=None)
    sp.add_argument("--cone", action="append", default=[], metavar="APEX:I", help="shade cone I of APEX")
    sp.add_argument("--sinks", type=int, default=None, metavar="I", help="ring the i-sinks")

    sp = sub.add_parser("fuzz", help="run property suites on generated inputs")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--property", action="append", required=True,
                    help=f"one of {', '.join(PROPERTIES)} or 'all'; repeatable")
    sp.add_argument("--n-min", type=int, default=1)
    sp.add_argument("--n-max", type=int, default=64)
    sp.add_argument("--bound", type=int, default=10**6)
    sp.add_argument("--m", type=int, default=3)
    sp.add_argument("--report-dir", default=None)
    sp.set_defaults(func=cmd_fuzz)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = _parser().parse_args(argv)
    try:
        return args.func(args, out)
    except Failure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except Degenerate as exc:
        info = {"error": type(exc).__name__, "message": str(exc)}
        if getattr(exc, "pair", None) is not None:
            info["pair"] = list(exc.pair)
        if getattr(exc, "cone", None) is not None:
            info["cone"] = exc.cone
        print(json.dumps(info), file=sys.stderr)
        return EXIT_DEGENERATE
    except (ParseError, DuplicatePoint, UnknownProperty, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CycleDetected as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PROPERTY
    except ThetaGraphError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
