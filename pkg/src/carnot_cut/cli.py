"""Command-line front end.

Coordinates of ``t``: wedge model ``(t12, t13, t23)``, cross model
``(t1, t2, t3)`` with ``t1 = t23, t2 = -t13, t3 = t12``.

Exit codes: 0 success, 1 failed verification, 2 invalid input, 3 shooting
did not converge.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .algebra import CrossPoint, GroupPoint, from_cross, to_cross, vec
from .cutlocus import CutPoint, SphereGrid, cut_distance, cut_point, is_cut, sphere_profile, t_cut
from .geodesics import ExtremalParams, InadmissibleTriple, control, extremal_point
from .solver import ShootingFailure, SolverConfig, distance
from .verify import SUITES, run_suite

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_SOLVER = 0, 1, 2, 3

WEDGE_T = ("t12", "t13", "t23")
CROSS_T = ("t1", "t2", "t3")


class InputError(ValueError):
    pass


# -- serialization ---------------------------------------------------------

def _json_value(v, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if not math.isfinite(v):
            raise ValueError(f"non-finite value {v!r} in output record")
        s = format(v, ".17g")
        return s if any(c in s for c in ".en") else s + ".0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_json_value(x, indent, level + 1)}" for k, x in v.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(v, (list, tuple, np.ndarray)):
        if len(v) == 0:
            return "[]"
        if all(isinstance(x, (int, float, np.number)) and not isinstance(x, bool) for x in v):
            return "[" + ", ".join(_json_value(x, indent, level + 1) for x in v) + "]"
        items = [pad + _json_value(x, indent, level + 1) for x in v]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(v).__name__}")


def dumps_json(record: dict) -> str:
    """JSON with every float written to 17 significant digits."""
    return _json_value(record, 2, 0) + "\n"


def _csv_cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def dumps_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


def _record(command: str, inputs: dict, result) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "input": inputs,
        "result": result,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }


def _flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "_"))
        elif isinstance(v, (list, tuple)):
            for i, x in enumerate(v, 1):
                out[f"{key}{i}"] = x
        else:
            out[key] = v
    return out


def _emit(args, record: dict, table: tuple[list[str], list[list]] | None = None) -> None:
    if args.format == "json":
        if table is not None:
            header, rows = table
            record["result"]["columns"] = header
            record["result"]["rows"] = rows
        text = dumps_json(record)
    elif table is not None:
        text = dumps_csv(*table)
    else:
        flat = _flatten(record["result"])
        text = dumps_csv(list(flat), [list(flat.values())])
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- helpers ---------------------------------------------------------------

def _point(values, model: str) -> GroupPoint:
    x, t = vec(values[:3]), vec(values[3:])
    if model == "cross":
        return from_cross(CrossPoint(x, t))
    return GroupPoint(x, t)


def _point_out(p: GroupPoint, model: str) -> dict:
    if model == "cross":
        q = to_cross(p)
        return {"x": q.x.tolist(), "t": q.t.tolist()}
    return {"x": p.x.tolist(), "t": p.t.tolist()}


def _t_names(model: str):
    return CROSS_T if model == "cross" else WEDGE_T


def _params(values) -> ExtremalParams:
    if len(values) != 10:
        raise InputError("expected a1 a2 a3 b1 b2 b3 z1 z2 z3 phi")
    try:
        return ExtremalParams.from_vectors(values[0:3], values[3:6], values[6:9], values[9])
    except InadmissibleTriple as exc:
        raise InputError(str(exc)) from exc


def _solver_cfg(args) -> SolverConfig:
    kw = {"seed": args.seed}
    if args.tol is not None:
        kw["residual_tol"] = args.tol
    return SolverConfig(**kw)


# -- commands --------------------------------------------------------------

def cmd_dist(args) -> int:
    p = _point(args.coords, args.model)
    if not (np.any(p.x) or np.any(p.t)):
        raise InputError("the origin has distance 0 and no minimizer to report")
    tol = 1e-9 if args.tol is None else args.tol
    on_cut = is_cut(p, tol)
    method = args.method
    if method == "auto":
        method = "formula" if on_cut else "shooting"
    result = {}
    if method == "formula":
        if not on_cut:
            raise InputError("point is not on the cut locus; the closed form does not apply")
        cp = CutPoint.from_point(p, tol)
        result.update(distance=cut_distance(cp), method="formula", theta=cp.theta)
    else:
        res = distance(p, _solver_cfg(args))
        result.update(distance=res.distance, method="shooting", residual=res.residual,
                      restarts_used=res.restarts_used, converged_restarts=res.converged,
                      xi=res.minimizer.xi.tolist(), tau=res.minimizer.tau.tolist())
    result["on_cut_locus"] = on_cut
    inputs = {"model": args.model, **_point_out(p, args.model), "method": args.method}
    _emit(args, _record("dist", inputs, result))
    return EXIT_OK


def cmd_cut_time(args) -> int:
    par = _params(args.values)
    tc = t_cut(par)
    result = {"t_cut": str(tc) if not tc.is_finite else tc.value}
    if tc.is_finite:
        cp = cut_point(par)
        result["theta"] = par.phi * tc.value
        result["cut_point"] = _point_out(cp.p, args.model)
        result["cut_distance"] = cut_distance(cp)
    inputs = {"a": par.a.tolist(), "b": par.b.tolist(), "z": par.z.tolist(), "phi": par.phi}
    _emit(args, _record("cut-time", inputs, result))
    return EXIT_OK


def cmd_geodesic(args) -> int:
    par = _params(args.values)
    if args.n_samples < 2:
        raise InputError("n_samples must be >= 2")
    if not (args.s_max >= 0 and math.isfinite(args.s_max)):
        raise InputError("s_max must be finite and >= 0")
    tc = float(t_cut(par))
    header = ["s", "x1", "x2", "x3", *_t_names(args.model), "speed", "is_past_cut"]
    rows = []
    for s in np.linspace(0.0, args.s_max, args.n_samples):
        s = float(s)
        pt = _point_out(extremal_point(par, s), args.model)
        rows.append([s, *pt["x"], *pt["t"], float(np.linalg.norm(control(par, s))), s > tc])
    inputs = {"a": par.a.tolist(), "b": par.b.tolist(), "z": par.z.tolist(), "phi": par.phi,
              "s_max": args.s_max, "n_samples": args.n_samples}
    _emit(args, _record("geodesic", inputs, {"model": args.model}), (header, rows))
    return EXIT_OK


def cmd_sphere(args) -> int:
    if not (args.r > 0 and math.isfinite(args.r)):
        raise InputError("r must be positive")
    grid = SphereGrid(n_theta=args.n_theta, n_mu=args.n_mu, mu_max=args.mu_max, n_angles=args.n_angles)
    try:
        samples = sphere_profile(args.r, grid)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    header = ["x1", "x2", "x3", *_t_names(args.model), "theta", "mu", "at_cut_cap"]
    rows = []
    for smp in samples:
        pt = _point_out(smp.point, args.model)
        rows.append([*pt["x"], *pt["t"], smp.theta, smp.mu, smp.at_cut_cap])
    inputs = {"r": args.r, "n_theta": args.n_theta, "n_mu": args.n_mu, "mu_max": args.mu_max,
              "n_angles": args.n_angles}
    _emit(args, _record("sphere", inputs, {"model": args.model, "count": len(rows)}), (header, rows))
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        results = run_suite(args.suite, seed=args.seed)
    except KeyError as exc:
        raise InputError(exc.args[0]) from exc
    ok = all(r.passed for r in results)
    if args.format == "json":
        rec = _record("verify", {"suite": args.suite, "seed": args.seed},
                      {"passed": ok, "criteria": [r.as_dict() for r in results]})
        _emit(args, rec)
    else:
        header = ["criterion", "name", "passed", "metrics"]
        rows = [[r.number, r.name, r.passed, json.dumps(r.metrics, sort_keys=True)] for r in results]
        _emit(args, _record("verify", {}, {}), (header, rows))
    return EXIT_OK if ok else EXIT_FAILED


# -- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", choices=("wedge", "cross"), default="wedge",
                        help="t coordinates: wedge (t12 t13 t23) or cross (t1 t2 t3)")
    common.add_argument("--tol", type=float, default=None,
                        help="cut-locus membership tolerance (dist) and shooting residual tolerance")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("csv", "json"), default="json")
    common.add_argument("--out", default=None, help="write to this file instead of stdout")

    ap = argparse.ArgumentParser(prog="carnot-cut",
                                 description="Exact and numerical distances in the free step-two "
                                             "Carnot group of rank three.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dist", parents=[common], help="distance from the origin")
    p.add_argument("coords", type=float, nargs=6, metavar="X1 X2 X3 T1 T2 T3")
    p.add_argument("--method", choices=("auto", "formula", "shooting"), default="auto")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("cut-time", parents=[common], help="cut time of an extremal")
    p.add_argument("values", type=float, nargs=10, metavar="A1 A2 A3 B1 B2 B3 Z1 Z2 Z3 PHI")
    p.set_defaults(func=cmd_cut_time)

    p = sub.add_parser("geodesic", parents=[common], help="sample an extremal")
    p.add_argument("values", type=float, nargs=10, metavar="A1 A2 A3 B1 B2 B3 Z1 Z2 Z3 PHI")
    p.add_argument("--s-max", type=float, default=1.0)
    p.add_argument("--n-samples", type=int, default=101)
    p.set_defaults(func=cmd_geodesic)

    p = sub.add_parser("sphere", parents=[common], help="point cloud on a sphere about the origin")
    p.add_argument("r", type=float)
    p.add_argument("--n-theta", type=int, default=17)
    p.add_argument("--n-mu", type=int, default=8)
    p.add_argument("--mu-max", type=float, default=10.0)
    p.add_argument("--n-angles", type=int, default=2)
    p.set_defaults(func=cmd_sphere)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("suite", help="one of: " + ", ".join(sorted(SUITES)))
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ShootingFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
