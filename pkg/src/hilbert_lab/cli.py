"""Command-line front end: ``hilbert-lab <command> --body FILE --out DIR ...``.

Exit status is 0 on success, 1 when a numerical check fails or a module
raises, and 2 for usage or input-format errors.  Every run leaves
``config.json`` and ``result.json`` (schema ``hilbert-result/1``) in the
output directory; failures leave ``error.json`` instead of a result.
"""

import argparse
import json
import os
import subprocess
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from . import approx as approx_mod
from . import growth as growth_mod
from . import nets as nets_mod
from .bodies import Polytope
from .bodyio import load_body
from .errors import BodyFormatError, DimensionUnsupported, HilbertLabError, ParameterOutOfRange
from .hilbert import HilbertGeometry, Hyperplane, metric_projection
from .measures import DensityKind, QuadratureConfig
from .plots import line_plot

RESULT_SCHEMA = "hilbert-result/1"


class UsageError(Exception):
    pass


def version_stamp():
    """``git describe``-style stamp of the source tree, or the package version outside a checkout."""
    here = Path(__file__).resolve().parent
    try:
        out = subprocess.run(["git", "describe", "--tags", "--always", "--dirty"], cwd=here, capture_output=True,
                             text=True, timeout=5)
        if out.returncode == 0 and out.stdout.strip():
            return f"v{__version__}-g{out.stdout.strip()}"
    except (OSError, subprocess.SubprocessError):
        pass
    return f"v{__version__}"


def _threads(args):
    if args.threads:
        return max(1, args.threads)
    env = os.environ.get("HILBERT_LAB_THREADS")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        raise UsageError(f"HILBERT_LAB_THREADS must be an integer, got {env!r}")


def _window(text):
    if text is None:
        return None
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError:
        raise UsageError(f"--window expects A:B, got {text!r}")
    if not hi > lo:
        raise UsageError("--window needs A < B")
    return lo, hi


def _vector(text, name):
    try:
        return np.array([float(v) for v in text.split(",")])
    except (AttributeError, ValueError):
        raise UsageError(f"{name} expects comma-separated numbers, got {text!r}")


def _geometry(args):
    if not args.body:
        raise UsageError("--body FILE is required for this command")
    body = load_body(args.body)
    geom, amap = HilbertGeometry.normalized(body)
    return geom, {"normalization": geom.normalization, "certificate": geom.certificate,
                  "affine_matrix": amap.matrix.tolist(), "affine_shift": amap.shift.tolist()}


def _default_rmax(geom):
    if isinstance(geom.body, Polytope):
        return 80.0 if geom.dim == 2 else 60.0
    return 8.0 if geom.dim == 2 else 6.0


def _curve(args, geom, kind="ball"):
    rmax = args.rmax or _default_rmax(geom)
    step = args.step or (rmax / 32.0 if isinstance(geom.body, Polytope) else 0.25)
    radii = np.arange(step, rmax + 1e-9, step)
    cfg = QuadratureConfig(seed=args.seed, angular=512 if geom.dim == 3 else None)
    return growth_mod.growth_curve(geom, radii, kind, args.density, cfg, body_id=Path(args.body).stem)


def _slope_json(est):
    return {"slope": est.slope, "half_width": est.half_width, "drift": est.drift,
            "total_half_width": est.total_half_width, "window": list(est.window), "n_points": est.n_points,
            "min_window_slope": est.min_slope, "max_window_slope": est.max_slope}


def _growth_plot(curve, est, path, title):
    r = curve.radii
    series = [{"x": r, "y": np.log(curve.values), "label": "ln Vol B(o, r)", "markers": True}]
    if est is not None:
        series.append({"x": r, "y": est.intercept + est.slope * r, "dashed": True,
                       "label": f"slope {est.slope:.4f} on [{est.window[0]:g}, {est.window[1]:g}]"})
    line_plot(path, series, "r", "ln volume", title)


# ---------------------------------------------------------------- commands


def cmd_entropy(args, out):
    geom, norm = _geometry(args)
    curve = _curve(args, geom)
    growth_mod.write_csv(curve, out / "curve.csv")
    est = growth_mod.entropy_estimate(curve, _window(args.window))
    _growth_plot(curve, est, out / "growth.svg", "ball volume growth")
    return {"entropy": _slope_json(est), "density": curve.density, "method": curve.method, "body": norm}, True


def cmd_growth(args, out):
    geom, norm = _geometry(args)
    curve = _curve(args, geom, args.kind)
    growth_mod.write_csv(curve, out / "curve.csv")
    r, v = curve.radii, curve.values
    c = float(np.sum(v * r**2) / np.sum(r**4))
    r2 = float(1 - np.sum((v - c * r**2) ** 2) / np.sum((v - v.mean()) ** 2))
    try:
        est = growth_mod.entropy_estimate(curve, _window(args.window))
    except HilbertLabError:
        est = None
    _growth_plot(curve, est, out / "growth.svg", f"{args.kind} growth")
    summary = {"quadratic_fit": {"c": c, "r_squared": r2}, "method": curve.method, "body": norm}
    if est is not None:
        summary["log_slope"] = _slope_json(est)
    return summary, True


def _eps_schedule(args, dim):
    sched = approx_mod.default_eps_schedule(dim)
    if args.eps_min is not None:
        if not 0 < args.eps_min < 0.125:
            raise ParameterOutOfRange("--eps-min must lie in (0, 1/8)")
        sched = 2.0 ** -np.arange(3, int(np.floor(-np.log2(args.eps_min))) + 1)
    return sched


def _approx(args, geom):
    sched = _eps_schedule(args, geom.dim)
    if len(sched) < 4:
        raise ParameterOutOfRange("the eps schedule needs at least 4 values")

    def one(e):
        if args.method == "tangent":
            return approx_mod.tangent_polygon_2d(geom, eps=e)
        return approx_mod.greedy_vertex_insertion(geom, e)

    with ThreadPoolExecutor(_threads(args)) as pool:
        records = list(pool.map(one, sched))
    xs = np.array([r.meta["eps_omega"] if args.method == "tangent" else r.eps for r in records])
    counts = np.array([r.vertex_count for r in records], dtype=float)
    slope, hw = approx_mod._slope_ci(-np.log(xs), np.log(counts))
    return approx_mod.ApproximabilityEstimate(slope, hw, xs, counts, records, geom.dim)


def _approx_outputs(est, out):
    approx_mod.write_csv(est.records, out / "approx.csv")
    x = -np.log(est.eps)
    y = np.log(est.counts)
    fit = np.polyfit(x, y, 1)
    line_plot(out / "approx.svg", [
        {"x": x, "y": y, "label": "ln N(eps)", "markers": True},
        {"x": x, "y": np.polyval(fit, x), "dashed": True, "label": f"slope {est.slope:.4f}"},
    ], "-ln eps", "ln vertex count", "polytope approximation")


def cmd_approx(args, out):
    geom, norm = _geometry(args)
    est = _approx(args, geom)
    _approx_outputs(est, out)
    return {"approximability": {"slope": est.slope, "half_width": est.half_width,
                                "polytopal_dimension": est.polytopal_dimension,
                                "within_upper_bound": est.within_upper_bound},
            "method": args.method, "body": norm}, True


def cmd_relation(args, out):
    geom, norm = _geometry(args)
    curve = _curve(args, geom)
    growth_mod.write_csv(curve, out / "curve.csv")
    ent = growth_mod.entropy_estimate(curve, _window(args.window))
    _growth_plot(curve, ent, out / "growth.svg", "ball volume growth")
    app = _approx(args, geom)
    _approx_outputs(app, out)
    combined = float(np.hypot(ent.total_half_width, 2 * app.half_width))
    diff = ent.slope - 2 * app.slope
    # the inequality 2a <= ent is the direction that holds for every body
    holds = bool(2 * app.slope <= ent.slope + combined)
    return {"entropy": _slope_json(ent), "approximability": app.slope, "approximability_half_width": app.half_width,
            "two_a": 2 * app.slope, "ent_minus_2a": diff, "combined_half_width": combined,
            "agree_within_ci": bool(abs(diff) <= combined), "inequality_2a_le_ent": holds, "body": norm}, holds


def cmd_project(args, out):
    geom, norm = _geometry(args)
    if args.point is None or args.normal is None or args.offset is None:
        raise UsageError("project needs --point, --normal and --offset (in normalized coordinates)")
    p = _vector(args.point, "--point")
    n = _vector(args.normal, "--normal")
    if len(p) != geom.dim or len(n) != geom.dim:
        raise UsageError("--point and --normal must match the body dimension")
    scale = np.linalg.norm(n)
    h = Hyperplane(n / scale, args.offset / scale)
    proj = metric_projection(geom, p, h)
    return {"foot": proj.foot.tolist(), "distance": proj.distance, "non_unique": proj.non_unique,
            "certificate": proj.certificate, "body": norm}, True


def cmd_nets(args, out):
    geom, norm = _geometry(args)
    rmax = args.rmax or (6.0 if geom.dim == 2 else 2.5)
    radii = nets_mod.LN3 * np.arange(1, int(np.floor(rmax / nets_mod.LN3 + 1e-12)) + 1)
    with ThreadPoolExecutor(_threads(args)) as pool:
        layers = list(pool.map(lambda r: nets_mod.separated_net_on_sphere(geom, None, r, args.delta), radii))
    family = nets_mod.family_from_layers(geom.body, geom.center, radii, layers, args.delta)
    nets_mod.write_set(family, out / "net.csv")
    window = _window(args.window) or (0.5 * radii[-1], radii[-1])
    crit = nets_mod.critical_exponent_estimate(family, geom, window=window)
    r = np.array(crit.poincare["radii"])
    counts = nets_mod.counting_function(family, geom, r)
    line_plot(out / "counting.svg", [{"x": r, "y": np.log(np.maximum(counts, 1)), "markers": True,
                                      "label": f"slope {crit.slope:.4f}"}], "R", "ln N(R)", "counting function")
    return {"count": len(family), "separation": family.separation, "critical_exponent": crit.slope,
            "half_width": crit.half_width, "window": list(crit.window),
            "poincare_partial_sums": crit.poincare["partial_sums"], "body": norm}, True


def cmd_verify(args, out):
    from . import verify

    only = None
    if args.only:
        try:
            only = {int(v) for v in args.only.split(",")}
        except ValueError:
            raise UsageError("--only expects comma-separated criterion numbers")

    def report(res):
        print(res.line(), flush=True)
        with open(out / "verify.partial.jsonl", "a") as fh:
            fh.write(json.dumps(res.to_json()) + "\n")

    results = verify.run_all(only, report)
    summary = {"criteria": [r.to_json() for r in results], "passed": sum(r.passed for r in results),
               "total": len(results)}
    with open(out / "verify.json", "w") as fh:
        json.dump(summary, fh, indent=2)
    return summary, all(r.passed for r in results)


COMMANDS = {
    "entropy": cmd_entropy,
    "approx": cmd_approx,
    "relation": cmd_relation,
    "growth": cmd_growth,
    "project": cmd_project,
    "nets": cmd_nets,
    "verify": cmd_verify,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--body", help="body JSON file (hilbert-body/1)")
    common.add_argument("--out", default="hilbert-lab-out", help="output directory")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--density", default="busemann", choices=["busemann", "ht"])
    common.add_argument("--rmax", type=float, help="largest radius")
    common.add_argument("--step", type=float, help="radius step")
    common.add_argument("--eps-min", type=float, help="smallest eps in the 2^-k schedule")
    common.add_argument("--threads", type=int, help="worker threads (falls back to HILBERT_LAB_THREADS)")
    common.add_argument("--window", help="regression window A:B")

    parser = argparse.ArgumentParser(prog="hilbert-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"hilbert-lab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("entropy", parents=[common], help="ball-volume growth curve and entropy slope")
    for name in ("approx", "relation"):
        p = sub.add_parser(name, parents=[common], help="polytope approximation" if name == "approx"
                           else "entropy against twice the approximability")
        p.add_argument("--method", default="greedy", choices=["greedy", "tangent"])
    p = sub.add_parser("growth", parents=[common], help="growth curve CSV and log plot")
    p.add_argument("--kind", default="ball", choices=["ball", "sphere"])
    p = sub.add_parser("project", parents=[common], help="metric projection onto a hyperplane")
    p.add_argument("--point")
    p.add_argument("--normal")
    p.add_argument("--offset", type=float)
    p = sub.add_parser("nets", parents=[common], help="separated nets and critical exponent")
    p.add_argument("--delta", type=float, default=nets_mod.LN3 / 4.0)
    p = sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    p.add_argument("--only", help="comma-separated criterion numbers")
    return parser


def _write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, default=_json_default)
        fh.write("\n")


def _json_default(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    return str(x)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help/--version and 2 for usage errors
        return 0 if not exc.code else 2
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    config = {k: v for k, v in vars(args).items()}
    config["threads_resolved"] = None
    stamp = version_stamp()
    try:
        config["threads_resolved"] = _threads(args)
        DensityKind.parse(args.density)
        _write_json(out / "config.json", {"schema": RESULT_SCHEMA, "version": stamp, "config": config})
        result, ok = COMMANDS[args.command](args, out)
    except (UsageError, BodyFormatError, DimensionUnsupported, FileNotFoundError, json.JSONDecodeError) as exc:
        return _fail(out, stamp, config, exc, 2)
    except HilbertLabError as exc:
        return _fail(out, stamp, config, exc, 1)
    _write_json(out / "result.json", {"schema": RESULT_SCHEMA, "version": stamp, "command": args.command,
                                      "config": config, "status": "pass" if ok else "fail", "result": result})
    print(json.dumps({"command": args.command, "status": "pass" if ok else "fail", "out": str(out)}))
    return 0 if ok else 1


def _fail(out, stamp, config, exc, status):
    code = getattr(exc, "code", None) if isinstance(exc, HilbertLabError) else None
    if code is None:
        code = {UsageError: "usage", FileNotFoundError: "file_not_found"}.get(type(exc), "parse_error")
    err = {"schema": RESULT_SCHEMA, "version": stamp, "config": config, "status": "error",
           "error": {"code": code, "type": type(exc).__name__, "message": str(exc)}}
    _write_json(out / "error.json", err)
    print(json.dumps(err["error"]), file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
