"""Command line front end.

Subcommands: solve (problem JSON -> result JSON), closed-form (named
scenario -> points/error), sweep (closed-form error sequences as CSV),
asymptotics (CSV -> limit report), render (result JSON -> SVG), verify
(solver vs closed-form gallery).

Exit codes: 0 success, 1 any error, 2 solve detected a degenerate
(zero-mass) point.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, replace

import curvequant.closed_form as cf
from curvequant import scenarios
from curvequant.allocation import semicircle_allocate
from curvequant.asymptotics import ErrorSequence, build_report
from curvequant.geometry import Arc, Point2, Segment, UniformCurveMeasure, distortion
from curvequant.render import render_svg
from curvequant.solver import (
    CurveConstraint,
    FreePlane,
    PointSetConstraint,
    Problem,
    Quantizer,
    SolverOptions,
    solve,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_DEGENERATE = 2

SCHEMA_VERSION = 1


class CliError(Exception):
    pass


# ---------------------------------------------------------------------------
# problem/result documents


def _check_fields(obj: dict, where: str, required: set[str], optional: set[str] = frozenset()):
    if not isinstance(obj, dict):
        raise CliError(f"{where}: expected an object")
    for key in obj:
        if key not in required and key not in optional:
            raise CliError(f"{where}: unknown field {key!r}")
    for key in required:
        if key not in obj:
            raise CliError(f"{where}: missing field {key!r}")


def _parse_xy(obj, where: str) -> Point2:
    if (not isinstance(obj, list) or len(obj) != 2
            or not all(isinstance(v, (int, float)) for v in obj)):
        raise CliError(f"{where}: expected [x, y]")
    return Point2(float(obj[0]), float(obj[1]))


def _parse_curve(obj, where: str):
    _check_fields(obj, where, {"type"}, {"p0", "p1", "center", "radius", "theta0", "theta1"})
    kind = obj["type"]
    try:
        if kind == "segment":
            _check_fields(obj, where, {"type", "p0", "p1"})
            return Segment(_parse_xy(obj["p0"], f"{where}.p0"),
                           _parse_xy(obj["p1"], f"{where}.p1"))
        if kind == "arc":
            _check_fields(obj, where, {"type", "center", "radius", "theta0", "theta1"})
            return Arc(_parse_xy(obj["center"], f"{where}.center"),
                       float(obj["radius"]), float(obj["theta0"]), float(obj["theta1"]))
    except ValueError as exc:
        raise CliError(f"{where}: {exc}") from exc
    raise CliError(f"{where}: unknown curve type {kind!r}")


def _parse_constraint(obj, where: str):
    _check_fields(obj, where, {"type"}, {"curve", "points"})
    kind = obj["type"]
    if kind == "free":
        _check_fields(obj, where, {"type"})
        return FreePlane()
    if kind == "curve":
        _check_fields(obj, where, {"type", "curve"})
        return CurveConstraint(_parse_curve(obj["curve"], f"{where}.curve"))
    if kind == "points":
        _check_fields(obj, where, {"type", "points"})
        pts = obj["points"]
        if not isinstance(pts, list) or not pts:
            raise CliError(f"{where}.points: expected a nonempty list")
        return PointSetConstraint(tuple(
            _parse_xy(p, f"{where}.points[{i}]") for i, p in enumerate(pts)))
    raise CliError(f"{where}: unknown constraint type {kind!r}")


def parse_problem_doc(doc, where: str = "problem") -> tuple[Problem, dict]:
    _check_fields(doc, where, {"schema_version", "measure", "constraints", "n"},
                  {"beta", "solver"})
    if doc["schema_version"] != SCHEMA_VERSION:
        raise CliError(f"{where}: unsupported schema_version {doc['schema_version']!r}")
    if not isinstance(doc["measure"], list) or not doc["measure"]:
        raise CliError(f"{where}.measure: expected a nonempty list of curves")
    curves = tuple(_parse_curve(c, f"{where}.measure[{i}]")
                   for i, c in enumerate(doc["measure"]))
    if not isinstance(doc["constraints"], list) or not doc["constraints"]:
        raise CliError(f"{where}.constraints: expected a nonempty list")
    constraints = tuple(_parse_constraint(c, f"{where}.constraints[{i}]")
                        for i, c in enumerate(doc["constraints"]))
    beta = tuple(_parse_xy(b, f"{where}.beta[{i}]")
                 for i, b in enumerate(doc.get("beta", [])))
    if not isinstance(doc["n"], int):
        raise CliError(f"{where}.n: expected an integer")
    solver_over = doc.get("solver", {})
    _check_fields(solver_over, f"{where}.solver", set(),
                  {"restarts", "rng_seed", "param_tol", "max_iters"})
    try:
        problem = Problem(UniformCurveMeasure(curves), constraints, doc["n"], beta=beta)
    except ValueError as exc:
        raise CliError(f"{where}: {exc}") from exc
    return problem, dict(solver_over)


def load_problem_file(path: str) -> tuple[Problem, dict]:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}") from exc
    return parse_problem_doc(doc, where=path)


def _curve_doc(curve) -> dict:
    if isinstance(curve, Segment):
        return {"type": "segment", "p0": [curve.p0.x, curve.p0.y],
                "p1": [curve.p1.x, curve.p1.y]}
    return {"type": "arc", "center": [curve.center.x, curve.center.y],
            "radius": curve.radius, "theta0": curve.theta0, "theta1": curve.theta1}


def _constraint_doc(cons) -> dict:
    if isinstance(cons, FreePlane):
        return {"type": "free"}
    if isinstance(cons, CurveConstraint):
        return {"type": "curve", "curve": _curve_doc(cons.curve)}
    return {"type": "points", "points": [[p.x, p.y] for p in cons.points]}


def problem_doc(problem: Problem) -> dict:
    return {
        "measure": [_curve_doc(c) for c in problem.measure.curves],
        "constraints": [_constraint_doc(c) for c in problem.constraints],
        "beta": [[p.x, p.y] for p in problem.beta],
        "n": problem.n,
    }


def result_doc(problem: Problem, quantizer: Quantizer) -> dict:
    points = []
    for tp in quantizer.points:
        entry = {"kind": tp.kind, "x": tp.point.x, "y": tp.point.y}
        if tp.kind == "constrained":
            entry["constraint"] = tp.constraint_index
            entry["s"] = tp.s
        points.append(entry)
    return {
        "schema_version": SCHEMA_VERSION,
        "problem": problem_doc(problem),
        "points": points,
        "distortion": quantizer.distortion,
        "masses": list(quantizer.masses),
        "converged": quantizer.converged,
        "degenerate_points": list(quantizer.degenerate_points),
    }


def _emit(doc: dict, out) -> None:
    json.dump(doc, out, indent=2)
    out.write("\n")


def _solver_options(args, file_overrides: dict | None = None) -> SolverOptions:
    opts = SolverOptions()
    if file_overrides:
        opts = replace(opts, **file_overrides)
    if getattr(args, "seed", None) is not None:
        opts = replace(opts, rng_seed=args.seed)
    if getattr(args, "restarts", None) is not None:
        opts = replace(opts, restarts=args.restarts)
    return opts


# ---------------------------------------------------------------------------
# subcommands


def cmd_solve(args) -> int:
    problem, overrides = load_problem_file(args.problem)
    quantizer = solve(problem, _solver_options(args, overrides))
    _emit(result_doc(problem, quantizer), sys.stdout)
    return EXIT_DEGENERATE if quantizer.degenerate_points else EXIT_OK


def _closed_form_result(args):
    name, n = args.scenario, args.n
    if name == "interval-left":
        return cf.interval_left_endpoint(n, args.a, args.b), None
    if name == "interval-right":
        return cf.interval_right_endpoint(n, args.a, args.b), None
    if name == "interval-interior":
        c = args.a if args.c is None else args.c
        d = args.b if args.d is None else args.d
        return cf.interval_interior(n, cf.IntervalScenario(args.a, args.b, c, d)), None
    if name == "line-constraint":
        if args.m is None or args.intercept is None:
            raise CliError("line-constraint needs --m and --intercept")
        scen = cf.LineConstraintScenario(args.a, args.b, args.m, args.intercept)
        return cf.line_constraint_optimal(n, scen), None
    if name == "semicircle":
        n1 = args.n1 if args.n1 is not None else semicircle_allocate(n).parts[0]
        return cf.semicircle_conditional(n, n1), (n1, n - n1 + 2)
    if name == "triangle":
        return cf.triangle_conditional(n), cf.triangle_split(n)
    if name == "exam1":
        return cf.exam1_conditional(n), None
    raise CliError(f"unknown scenario {args.scenario!r}")


def cmd_closed_form(args) -> int:
    result, alloc = _closed_form_result(args)
    doc = {
        "scenario": args.scenario,
        "n": args.n,
        "points": [[p.x, p.y] for p in result.points],
        "error": result.error,
    }
    if alloc is not None:
        doc["allocation"] = list(alloc)
    _emit(doc, sys.stdout)
    return EXIT_OK


def _sweep_row(scenario: str, n: int) -> tuple[float, str]:
    if scenario == "triangle":
        parts = cf.triangle_split(n)
        return cf.triangle_error(*parts), "+".join(str(p) for p in parts)
    if scenario == "semicircle":
        n1 = semicircle_allocate(n).parts[0]
        return cf.semicircle_error(n1, n - n1 + 2), f"{n1}+{n - n1 + 2}"
    if scenario == "exam1":
        return cf.exam1_conditional(n).error, ""
    if scenario == "exam2":
        return cf.line_constraint_optimal(
            n, cf.LineConstraintScenario(0.0, 1.0, 1.0, 4.0)).error, ""
    if scenario == "interval-left":
        return cf.interval_left_endpoint(n, 0.0, 1.0).error, ""
    if scenario == "interval-right":
        return cf.interval_right_endpoint(n, 0.0, 1.0).error, ""
    if scenario == "interval-interior":
        return cf.interval_interior(n, cf.IntervalScenario(0.0, 1.0, 0.0, 1.0)).error, ""
    raise CliError(f"unknown sweep scenario {scenario!r}")


def cmd_sweep(args) -> int:
    if args.n_from > args.n_to:
        raise CliError("--from must not exceed --to")
    rows = []
    for n in range(args.n_from, args.n_to + 1):
        t0 = time.perf_counter()
        error, alloc = _sweep_row(args.scenario, n)
        wall = int(round((time.perf_counter() - t0) * 1000.0)) if args.timings else 0
        rows.append(f"{n},{error!r},{alloc},{wall}")
    text = "n,error,alloc,wall_time_ms\n" + "\n".join(rows) + "\n"
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return EXIT_OK


def _read_sweep_csv(path: str) -> ErrorSequence:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}") from exc
    if not lines or not lines[0].startswith("n,error"):
        raise CliError(f"{path}: expected a sweep CSV with header 'n,error,...'")
    entries = []
    for i, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) < 2:
            raise CliError(f"{path}:{i}: malformed row")
        try:
            entries.append((int(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise CliError(f"{path}:{i}: {exc}") from exc
    if len(entries) < 6:
        raise CliError(f"{path}: need at least 6 rows, found {len(entries)}")
    try:
        return ErrorSequence(tuple(entries))
    except ValueError as exc:
        raise CliError(f"{path}: {exc}") from exc


def cmd_asymptotics(args) -> int:
    seq = _read_sweep_csv(args.input)
    report = build_report(seq, kappa=args.kappa, v_infinity=args.v_infinity,
                          tail_window=args.tail_window)
    _emit(asdict(report), sys.stdout)
    return EXIT_OK


def cmd_render(args) -> int:
    try:
        with open(args.result, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise CliError(f"{args.result}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    except OSError as exc:
        raise CliError(f"{args.result}: {exc.strerror}") from exc
    if not isinstance(doc, dict) or "problem" not in doc or "points" not in doc:
        raise CliError(f"{args.result}: not a result document")
    measure_doc = doc["problem"].get("measure")
    if not isinstance(measure_doc, list) or not measure_doc:
        raise CliError(f"{args.result}: result document lacks a measure")
    curves = tuple(_parse_curve(c, f"measure[{i}]") for i, c in enumerate(measure_doc))
    points = []
    for i, entry in enumerate(doc["points"]):
        if not isinstance(entry, dict) or "kind" not in entry:
            raise CliError(f"{args.result}: points[{i}] malformed")
        points.append((entry["kind"], Point2(float(entry["x"]), float(entry["y"]))))
    svg = render_svg(UniformCurveMeasure(curves), points)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(svg)
    return EXIT_OK


def cmd_verify(args) -> int:
    tol = args.tolerance
    names = [args.scenario] if args.scenario else sorted(scenarios.GALLERY)
    failures = 0
    for name in names:
        if name not in scenarios.GALLERY:
            raise CliError(f"unknown scenario {name!r}")
        entry = scenarios.GALLERY[name]
        lo, hi = entry.n_range
        hi = min(hi, args.max_n) if args.max_n is not None else hi
        for n in range(lo, hi + 1):
            problem = entry.build(n)
            reference = distortion(problem.measure, list(entry.config(n)))
            quantizer = solve(problem, _solver_options(args))
            rel = abs(quantizer.distortion - reference) / abs(reference)
            ok = rel <= tol
            failures += 0 if ok else 1
            status = "ok" if ok else "MISMATCH"
            print(f"{name} n={n}: solver={quantizer.distortion!r} "
                  f"closed_form={reference!r} rel={rel:.3e} {status}")
    print(f"verify: {failures} mismatch(es) above rel {tol!r}")
    return EXIT_OK if failures == 0 else EXIT_ERROR


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="curvequant",
                     description="Optimal quantization on unions of plane curves.")
    parser.add_argument("--seed", type=int, default=None,
                        help="solver RNG seed (default 42)")
    parser.add_argument("--restarts", type=int, default=None,
                        help="solver restart count (default 16)")
    parser.add_argument("--tail-window", type=int, default=None,
                        help="tail window size for asymptotics estimates")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve a problem file")
    p.add_argument("problem", help="problem JSON path")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("closed-form", help="closed-form configuration for a scenario")
    p.add_argument("scenario", choices=["interval-left", "interval-right",
                                        "interval-interior", "line-constraint",
                                        "semicircle", "triangle", "exam1"])
    p.add_argument("-n", type=int, required=True, help="point count")
    p.add_argument("--a", type=float, default=0.0, help="support left endpoint")
    p.add_argument("--b", type=float, default=1.0, help="support right endpoint")
    p.add_argument("--c", type=float, default=None, help="subinterval left endpoint")
    p.add_argument("--d", type=float, default=None, help="subinterval right endpoint")
    p.add_argument("--m", type=float, default=None, help="constraint line slope")
    p.add_argument("--intercept", type=float, default=None, help="constraint line intercept")
    p.add_argument("--n1", type=int, default=None, help="force the semicircle base count")
    p.set_defaults(func=cmd_closed_form)

    p = sub.add_parser("sweep", help="closed-form error sequence as CSV")
    p.add_argument("scenario", choices=["triangle", "semicircle", "exam1", "exam2",
                                        "interval-left", "interval-right",
                                        "interval-interior"])
    p.add_argument("--from", dest="n_from", type=int, required=True)
    p.add_argument("--to", dest="n_to", type=int, required=True)
    p.add_argument("--output", required=True, help="CSV path, or - for stdout")
    p.add_argument("--timings", action="store_true",
                   help="record wall times instead of zeros")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("asymptotics", help="limit estimates from a sweep CSV")
    p.add_argument("input", help="sweep CSV path")
    p.add_argument("--kappa", type=float, required=True,
                   help="coefficient dimension parameter")
    p.add_argument("--v-infinity", type=float, default=None,
                   help="known limit value override")
    p.set_defaults(func=cmd_asymptotics)

    p = sub.add_parser("render", help="render a result document to SVG")
    p.add_argument("result", help="result JSON path")
    p.add_argument("--output", required=True, help="SVG path")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("verify", help="compare solver against closed forms")
    p.add_argument("--scenario", default=None, help="restrict to one gallery scenario")
    p.add_argument("--max-n", type=int, default=None, help="cap the per-scenario range")
    p.add_argument("--tolerance", type=float, default=1e-6)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
