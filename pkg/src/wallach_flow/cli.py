"""Command-line front end.

Commands::

    wallach-flow field    --a 0.125 --grid 0.5:2:50
    wallach-flow portrait --a 0.3 --starts 24
    wallach-flow verify   --a 0.125 0.3 --n 100 --seed 7 [--ivp]
    wallach-flow analyze  --nu-grid 1:5:401 --a-grid 0.2142857142857143:0.25:41

Global flags ``--output``, ``--format {csv,json}``, ``--seed`` and
``--config FILE`` (a JSON object of flag values; explicit flags win) may be
given before or after the command. Exit codes: 0 success, 1 runtime failure
or inconsistent verdict, 2 invalid configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Any, Optional, Sequence

import numpy as np
from scipy import optimize

from . import __version__
from .analysis import (
    A_TANGENT,
    critical_nus,
    eigen_structure,
    equilibria,
    equilibrium_membership,
    g_h_f,
    planar_classification,
    tangency_points,
)
from .experiments import run_regime_experiment
from .flow import IntegratorOptions, integrate_planar, reproduce_ivp_026
from .geometry import classify_region, gammas, s1_param
from .model import DegenerateError, DomainError, General, Point3, eval_field_general, eval_field_symmetric

SCHEMA = "wallach-flow/1"
FIELD_HEADER = ["x1", "x2", "x3", "f1", "f2", "f3", "gamma1", "gamma2", "gamma3", "region"]
ANALYZE_HEADER = [
    "table", "a", "nu", "F", "G", "H", "nu1", "nu2", "regime",
    "which", "x1", "x2", "x3", "region", "lambda1", "lambda2", "lambda3",
]
DEFAULT_VERIFY_AS = [1 / 9, 1 / 8, 1 / 6, 3 / 14, 0.22, 0.25, 0.3]


class ConfigError(Exception):
    """Invalid command-line or config-file input (exit code 2)."""


# --------------------------------------------------------------------------
# formatting helpers


def fmt(v: Any) -> str:
    """17 significant digits for floats so values round-trip exactly."""
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    if v is None:
        return ""
    return str(v)


def _jsonable(v: Any) -> Any:
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.floating, float)):
        f = float(v)
        return f if math.isfinite(f) else None
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, Point3):
        return [v.x1, v.x2, v.x3]
    return v


def dump_json(payload: dict) -> str:
    body = {"schema": SCHEMA}
    body.update(payload)
    return json.dumps(_jsonable(body), indent=2, allow_nan=False) + "\n"


def dump_csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    return buf.getvalue()


def parse_grid(spec: str) -> np.ndarray:
    """``lo:hi:n`` to ``n`` evenly spaced values including both ends."""
    try:
        lo, hi, n = spec.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError as exc:
        raise ConfigError(f"grid must look like lo:hi:n, got {spec!r}") from exc
    if n < 1 or not (math.isfinite(lo) and math.isfinite(hi)) or hi < lo:
        raise ConfigError(f"invalid grid {spec!r}")
    return np.linspace(lo, hi, n)


def check_a(a: Any, allow_half: bool = True) -> float:
    try:
        a = float(a)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"a={a!r} is not a number; admissible range is (0,1/2)") from exc
    hi_ok = a <= 0.5 if allow_half else a < 0.5
    if not (a > 0 and hi_ok and math.isfinite(a)):
        raise ConfigError(f"a={a!r} is outside the admissible range (0,1/2)")
    return a


# --------------------------------------------------------------------------
# commands


def cmd_field(args) -> tuple[str, str]:
    grid = parse_grid(args.grid)
    if grid[0] <= 0:
        raise ConfigError("field grid must be strictly positive")
    general = any(v is not None for v in (args.a1, args.a2, args.a3))
    if general:
        if None in (args.a1, args.a2, args.a3):
            raise ConfigError("--a1, --a2 and --a3 must be given together")
        for v in (args.a1, args.a2, args.a3):
            check_a(v)
        p = General(args.a1, args.a2, args.a3)
        fn = lambda x: eval_field_general(p, x)  # noqa: E731
        params = {"a1": args.a1, "a2": args.a2, "a3": args.a3}
    else:
        if args.a is None:
            raise ConfigError("field needs --a (or --a1 --a2 --a3)")
        a = check_a(args.a)
        fn = lambda x: eval_field_symmetric(a, x)  # noqa: E731
        params = {"a": a}
    rows = []
    for x1 in grid:
        for x2 in grid:
            for x3 in grid:
                x = Point3(float(x1), float(x2), float(x3))
                f = fn(x)
                rows.append([x.x1, x.x2, x.x3, f[0], f[1], f[2], *gammas(x), classify_region(x).label])
    if args.format == "json":
        return dump_json({"command": "field", "params": dict(params, grid=args.grid),
                          "columns": FIELD_HEADER, "rows": rows}), "json"
    return dump_csv(FIELD_HEADER, rows), "csv"


def _trace_boundary(n_rays: int = 720, r_max: float = 4.0) -> dict:
    """Points of s1, s2, s3 on ``x1 x2 x3 = 1`` by root-finding along rays
    from (1, 1) in logarithmic coordinates."""
    curves: dict = {1: [], 2: [], 3: []}

    def gmin(r, th):
        x1, x2 = math.exp(r * math.cos(th)), math.exp(r * math.sin(th))
        g = gammas((x1, x2, 1.0 / (x1 * x2)))
        s = x1 + x2 + 1.0 / (x1 * x2)
        return min(g) / (s * s), int(np.argmin(g)) + 1

    rs = np.linspace(1e-3, r_max, 400)
    for k in range(n_rays):
        th = 2 * math.pi * k / n_rays
        prev = rs[0]
        for r in rs[1:]:
            if gmin(r, th)[0] < 0:
                root = optimize.brentq(lambda q: gmin(q, th)[0], prev, r, xtol=1e-14)
                cone = gmin(root + 1e-9, th)[1]
                curves[cone].append([math.exp(root * math.cos(th)), math.exp(root * math.sin(th))])
                break
            prev = r
    return curves


def _tangency_markers(a: float) -> list:
    return [{"cone": tp.cone, "nu": tp.nu, "x1": tp.point.x1, "x2": tp.point.x2}
            for i in (1, 2, 3) for tp in tangency_points(a, i)]


def cmd_portrait(args) -> tuple[str, str]:
    if args.a is None:
        raise ConfigError("portrait needs --a")
    a = check_a(args.a, allow_half=False)
    if args.starts < 1:
        raise ConfigError("--starts must be positive")
    rng = np.random.default_rng(args.seed)
    opts = IntegratorOptions(horizon=args.horizon, max_step=0.5)
    trajectories = []
    for _ in range(args.starts):
        u = rng.uniform(-0.8, 0.8, 2)
        start = (math.exp(u[0]), math.exp(u[1]))
        tr = integrate_planar(a, start, opts)
        stride = max(1, len(tr.times) // 400)
        pts = [[t, p.x1, p.x2] for t, p in list(zip(tr.times, tr.points))[::stride]]
        trajectories.append({
            "start": list(start),
            "terminated": tr.terminated_reason.value,
            "events": [{"time": e.time, "cone": e.cone, "direction": e.direction.value, "refined": e.refined,
                        "x1": e.point.x1, "x2": e.point.x2} for e in tr.events],
            "points": pts,
        })
    ps = np.geomspace(0.2, 5.0, 200)
    invariant = {
        "c1": [[float(p ** -2), float(p)] for p in ps],
        "c2": [[float(p), float(p ** -2)] for p in ps],
        "c3": [[float(p), float(p)] for p in ps],
    }
    eq = equilibria(a, 1.0)
    if eq.degenerate:
        equil = [{"which": 0, "x1": 1.0, "x2": 1.0, "kind": "degenerate", "stability": "degenerate"}]
    else:
        equil = []
        for w in range(4):
            pc = planar_classification(a, w)
            equil.append({"which": w, "x1": pc.point[0], "x2": pc.point[1], "kind": pc.kind,
                          "stability": pc.stability, "delta": pc.delta, "rho": pc.rho, "sigma": pc.sigma})
    curves = _trace_boundary()
    payload = {
        "command": "portrait",
        "params": {"a": a, "starts": args.starts, "seed": args.seed, "horizon": args.horizon},
        "equilibria": equil,
        "degenerate": eq.degenerate,
        "boundary": {f"s{i}": curves[i] for i in (1, 2, 3)},
        "s1_closed_form": [list(s1_param(float(t))) for t in np.geomspace(1.0001, 100.0, 200)],
        "invariant_curves": invariant,
        "tangency_markers": _tangency_markers(a),
        "trajectories": trajectories,
    }
    return dump_json(payload), "json"


def cmd_verify(args) -> tuple[str, str]:
    a_values = args.a_list if args.a_list else DEFAULT_VERIFY_AS
    if not isinstance(a_values, (list, tuple)):
        a_values = [a_values]
    a_values = [check_a(a, allow_half=False) for a in a_values]
    if not isinstance(args.n, int) or args.n < 1:
        raise ConfigError("--n must be a positive integer")
    reports = []
    consistent = True
    warnings = []
    for a in a_values:
        rep = run_regime_experiment(a, args.n, seed=args.seed)
        consistent = consistent and rep.consistent
        if rep.inconclusive:
            warnings.append(f"a={a!r}: {len(rep.inconclusive)} inconclusive run(s)")
        d = rep.to_dict()
        if not args.full:
            d.pop("runs")
        reports.append(d)
    payload = {"command": "verify", "params": {"a": a_values, "n": args.n, "seed": args.seed},
               "consistent": consistent, "warnings": warnings, "reports": reports}
    if args.ivp:
        r = reproduce_ivp_026()
        payload["ivp"] = {"a": r.a, "mesh_index": r.mesh_index, "crossing": list(r.crossing),
                          "boundary_y_at_crossing": r.y_boundary, "constant": r.constant,
                          "asymptote_hit": list(r.asymptote_hit)}
    args._exit = 0 if consistent else 1
    if args.format == "csv":
        rows = []
        for rep in reports:
            for kind, counts in rep["crossing_counts"].items():
                for seq, cnt in sorted(counts.items()):
                    rows.append([rep["a"], rep["case"], kind, seq or "-", cnt, rep["verdict"]])
        return dump_csv(["a", "case", "kind", "sequence", "count", "verdict"], rows), "csv"
    return dump_json(payload), "json"


def cmd_analyze(args) -> tuple[str, str]:
    nus = parse_grid(args.nu_grid)
    if nus[0] < 1:
        raise ConfigError("nu grid must start at 1 or above")
    nus = np.unique(np.append(nus, 4.0 / 3.0)) if nus[0] <= 4 / 3 <= nus[-1] else nus
    a_grid = parse_grid(args.a_grid)
    for a in a_grid:
        check_a(float(a), allow_half=False)
    f_rows, root_rows, eq_rows = [], [], []
    for nu in nus:
        G, H, Fv = g_h_f(float(nu))
        f_rows.append({"nu": float(nu), "F": Fv, "G": G, "H": H})
    for a in a_grid:
        a = float(a)
        if abs(a - A_TANGENT) <= 1e-12:
            a = A_TANGENT
        s = critical_nus(a)
        root_rows.append({"a": a, "nu1": s.nu1, "nu2": s.nu2, "regime": s.regime.value})
    for a in args.eq_a:
        a = check_a(a, allow_half=False)
        eq = equilibria(a, 1.0)
        mem = equilibrium_membership(a, 1.0)
        for w, p in enumerate(eq.points):
            try:
                lam = eigen_structure(a, 1.0, w).eigenvalues
            except DegenerateError:
                lam = (0.0, 0.0, 0.0)
            eq_rows.append({"a": a, "which": w, "x1": p.x1, "x2": p.x2, "x3": p.x3,
                            "region": mem[w].label, "eigenvalues": list(lam)})
            if eq.degenerate:
                break
    if args.format == "json":
        return dump_json({"command": "analyze",
                          "params": {"nu_grid": args.nu_grid, "a_grid": args.a_grid, "eq_a": args.eq_a},
                          "F": f_rows, "roots": root_rows, "equilibria": eq_rows}), "json"
    rows = []
    for r in f_rows:
        rows.append(["F", None, r["nu"], r["F"], r["G"], r["H"]] + [None] * 11)
    for r in root_rows:
        rows.append(["roots", r["a"], None, None, None, None, r["nu1"], r["nu2"], r["regime"]] + [None] * 8)
    for r in eq_rows:
        rows.append(["equilibria", r["a"]] + [None] * 7 + [r["which"], r["x1"], r["x2"], r["x3"], r["region"],
                                                           *r["eigenvalues"]])
    return dump_csv(ANALYZE_HEADER, rows), "csv"


# --------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", default=argparse.SUPPRESS, help="output file (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--config", default=argparse.SUPPRESS, help="JSON file with flag values")

    p = argparse.ArgumentParser(prog="wallach-flow", parents=[common],
                                description="Field, phase portraits and cone-crossing checks for the Wallach flow system.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("field", parents=[common], help="evaluate the field and classification on a grid")
    f.add_argument("--a", type=float)
    f.add_argument("--a1", type=float)
    f.add_argument("--a2", type=float)
    f.add_argument("--a3", type=float)
    f.add_argument("--grid", default="0.5:2:10", help="lo:hi:n per coordinate")
    f.set_defaults(func=cmd_field, default_format="csv")

    pt = sub.add_parser("portrait", parents=[common], help="planar phase-portrait data (JSON)")
    pt.add_argument("--a", type=float)
    pt.add_argument("--starts", type=int, default=24)
    pt.add_argument("--horizon", type=float, default=50.0)
    pt.set_defaults(func=cmd_portrait, default_format="json")

    v = sub.add_parser("verify", parents=[common], help="regime experiments against the case table")
    v.add_argument("--a", dest="a_list", type=float, nargs="+")
    v.add_argument("--n", type=int, default=100)
    v.add_argument("--ivp", action="store_true", help="include the fixed-mesh reproduction at a = 0.26")
    v.add_argument("--full", action="store_true", help="include every run in the report")
    v.set_defaults(func=cmd_verify, default_format="json")

    an = sub.add_parser("analyze", parents=[common], help="F, critical nu values and equilibria")
    an.add_argument("--nu-grid", default="1:5:401")
    an.add_argument("--a-grid", default=f"{3 / 14!r}:0.2499:41")
    an.add_argument("--eq-a", type=float, nargs="+", default=[1 / 9, 1 / 8, 1 / 6, 3 / 14, 0.22, 0.3, 0.45])
    an.set_defaults(func=cmd_analyze, default_format="csv")
    return p


def _load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config file must hold a JSON object")
    return {k.replace("-", "_"): v for k, v in cfg.items()}


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        cfg = _load_config(args.config)
        if args.command == "verify" and "a" in cfg:
            cfg["a_list"] = cfg.pop("a")
        explicit = vars(parser.parse_args(argv))
        merged = dict(cfg)
        # flags given on the command line win over the file
        for k, v in explicit.items():
            if k in cfg and _was_given(k, argv):
                merged[k] = v
        for k, v in merged.items():
            setattr(args, k, v)
    if not hasattr(args, "format"):
        args.format = args.default_format
    if not hasattr(args, "seed"):
        args.seed = 0
    if not hasattr(args, "output"):
        args.output = "-"
    return args


def _was_given(dest: str, argv: Optional[Sequence[str]]) -> bool:
    argv = list(sys.argv[1:] if argv is None else argv)
    flags = {"--" + dest.replace("_", "-"), "--" + dest}
    if dest == "a_list":
        flags.add("--a")
    return any(tok.split("=", 1)[0] in flags for tok in argv)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as exc:  # argparse usage errors exit with 2
        return int(exc.code) if isinstance(exc.code, int) else 2
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    args._exit = 0
    try:
        text, _ = args.func(args)
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failure
        print(f"runtime error: {exc}", file=sys.stderr)
        return 1
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return args._exit


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
