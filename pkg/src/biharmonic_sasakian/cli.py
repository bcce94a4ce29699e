"""Command-line entry point.

    biharmonic-sasakian models validate --kind DeformedSphere --a 2
    biharmonic-sasakian curve generate --family theorem6-helix --kappa1 0.6 --expect proper-biharmonic
    biharmonic-sasakian hopf solve --type A1 --c 1 --n 2

Exit codes: 0 expectations met, 1 mathematical mismatch or infeasible
parameters, 2 usage error. Reports go to stdout as JSON; artifacts to
``--out``/``--out-dir``. Environment overrides: BIHARMONIC_TOL (bitension
verdict tolerance), BIHARMONIC_TOL_ORDER (osculating-order threshold),
BIHARMONIC_CLASSIFY_TOL (constraint tolerance).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import constructors as cons
from . import hopf
from .axioms import axiom_suite
from .bitension import Verdict, verdict
from .classify import DEFAULT_TOL as CLASSIFY_TOL
from .classify import CurveClass, classify, order4_profile
from .curves import DEFAULT_TOL_ORDER, curve_record, frenet, frenet_table
from .io import dumps, write_csv, write_json
from .models import ModelError, deformed_sphere_for, model_from_descriptor

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2

FAMILIES = ("theorem6-circle", "theorem6-helix", "circle", "geodesic", "case2", "case3", "order4")
EXPECT = ("proper-biharmonic", "not-biharmonic", "harmonic", "indeterminate")


class UsageError(Exception):
    pass


class Infeasible(Exception):
    pass


def _env_float(name: str, default):
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        val = float(raw)
    except ValueError:
        raise UsageError(f"{name}={raw!r} is not a number")
    if not val > 0:
        raise UsageError(f"{name} must be positive")
    return val


@dataclass(frozen=True)
class RunConfig:
    command: str
    model: dict | None = None
    params: dict = field(default_factory=dict)
    tol: float | None = None
    tol_order: float = DEFAULT_TOL_ORDER
    classify_tol: float = CLASSIFY_TOL
    out: str | None = None
    out_dir: str | None = None
    seed: int = 0
    workers: int = 1
    expect: str | None = None

    def __post_init__(self):
        for name in ("tol", "tol_order", "classify_tol"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise UsageError(f"{name} must be positive")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        skip = {"group", "action", "model", "kind", "n", "a", "c", "tol", "tol_order", "out", "out_dir",
                "seed", "workers", "expect", "func", "model_json"}
        params = {k: v for k, v in vars(args).items() if k not in skip}
        for k in ("n", "c"):
            if getattr(args, k, None) is not None:
                params[k] = getattr(args, k)
        tol = args.tol if getattr(args, "tol", None) is not None else _env_float("BIHARMONIC_TOL", None)
        tol_order = getattr(args, "tol_order", None) or _env_float("BIHARMONIC_TOL_ORDER", DEFAULT_TOL_ORDER)
        return cls(
            command=f"{args.group} {args.action}",
            model=_model_descriptor(args),
            params=params,
            tol=tol,
            tol_order=tol_order,
            classify_tol=_env_float("BIHARMONIC_CLASSIFY_TOL", CLASSIFY_TOL),
            out=getattr(args, "out", None),
            out_dir=getattr(args, "out_dir", None),
            seed=getattr(args, "seed", 0) or 0,
            workers=getattr(args, "workers", 1) or 1,
            expect=getattr(args, "expect", None),
        )


def _model_descriptor(args) -> dict | None:
    if getattr(args, "model_json", None):
        try:
            desc = json.loads(args.model_json)
        except json.JSONDecodeError as e:
            raise UsageError(f"--model is not valid JSON: {e}")
        return desc
    if getattr(args, "kind", None):
        desc = {"kind": args.kind, "n": args.n if args.n is not None else 2}
        if args.a is not None:
            desc["a"] = args.a
        if args.c is not None:
            desc["c"] = args.c
        return desc
    return None


def _emit(cfg: RunConfig, report: dict) -> None:
    text = dumps(report)
    sys.stdout.write(text)
    if cfg.out:
        Path(cfg.out).parent.mkdir(parents=True, exist_ok=True)
        Path(cfg.out).write_text(text, encoding="utf-8")


# --- models ---------------------------------------------------------------


def cmd_models_validate(cfg: RunConfig) -> int:
    if cfg.model is None:
        raise UsageError("give --model JSON or --kind")
    try:
        model = model_from_descriptor(cfg.model)
    except ModelError as e:
        raise UsageError(str(e))
    report = axiom_suite(model, samples=cfg.params.get("samples", 100), seed=cfg.seed)
    _emit(cfg, {"command": cfg.command, **report.to_dict()})
    return EXIT_OK if report.passed else EXIT_MISMATCH


# --- curves ---------------------------------------------------------------


def build_curve(params: dict, seed: int = 0):
    """Curve for a family name plus parameters; raises Infeasible with a reason."""
    fam = params["family"]
    n = params.get("n") or 2
    k1 = params.get("kappa1")
    c = params.get("c")
    length = params.get("length")
    try:
        if fam == "theorem6-circle":
            return cons.circle_curve(n, length)
        if fam == "theorem6-helix":
            return cons.helix_curve(n, 0.6 if k1 is None else k1, length or 2 * math.pi, sigma=params.get("sigma", 1))
        if fam == "circle":
            return cons.legendre_circle(n, 0.5 if k1 is None else k1, length)
        if fam == "geodesic":
            return cons.legendre_geodesic(n, length or 2 * math.pi)
        if c is None:
            raise UsageError(f"family {fam} needs --c")
        model = deformed_sphere_for(c, n)
        length = length or 4.0
        if fam == "case2":
            if c <= -3:
                raise Infeasible("c <= -3: only geodesics are biharmonic")
            kk = math.sqrt((c + 3) / 4) if k1 is None else k1
            return cons.case_curve(model, "circle", [kk], length, seed=seed)
        if fam == "case3":
            if k1 is None:
                if c <= 1:
                    raise Infeasible("c <= 1: no proper-biharmonic case III helix (kappa1^2 = c - 1)")
                k1 = math.sqrt(c - 1)
            return cons.case_curve(model, "III", [k1, 1.0], length, sigma=params.get("sigma", 1), seed=seed)
        if fam == "order4":
            prof = order4_profile(c)
            if not prof.feasible:
                raise Infeasible(prof.reason)
            br = prof.branch(params.get("branch") or "upper")
            return cons.case_curve(model, "IV", list(prof.kappas), length, alpha0=br.alpha0, seed=seed)
    except (cons.ParameterError, cons.DimensionError, ModelError) as e:
        raise Infeasible(str(e))
    raise UsageError(f"unknown family {fam!r}")


_EXPECT_REPORT = {
    "proper-biharmonic": {Verdict.PROPER_BIHARMONIC},
    "not-biharmonic": {Verdict.NOT_BIHARMONIC},
    "harmonic": {Verdict.HARMONIC},
    "indeterminate": {Verdict.INDETERMINATE},
}


def _classification_matches(expect: str, cv, order: int) -> bool:
    if expect == "proper-biharmonic":
        return cv.verdict is CurveClass.PROPER_BIHARMONIC
    if expect == "harmonic":
        return order == 1
    if expect == "not-biharmonic":
        return cv.verdict is not CurveClass.PROPER_BIHARMONIC and order > 1
    return False


def cmd_curve(cfg: RunConfig) -> int:
    action = cfg.command.split()[1]
    try:
        curve = build_curve(cfg.params, cfg.seed)
    except Infeasible as e:
        _emit(cfg, {"command": cfg.command, "params": cfg.params, "feasible": False, "reason": str(e)})
        return EXIT_MISMATCH
    fd = frenet(curve, cfg.tol_order)
    report = verdict(curve, cfg.tol, fd=fd)
    cv = classify(curve.model.c, fd, cfg.classify_tol)
    out = {
        "command": cfg.command,
        "params": cfg.params,
        "model": curve.model.descriptor(),
        "feasible": True,
        "osculating_order": fd.order,
        "kappa_mean": fd.mean_kappas(),
        "report": report.summary(),
        "classification": cv.to_dict(),
    }
    if cfg.out_dir:
        d = Path(cfg.out_dir)
        if action == "generate":
            header = ["s"] + [f"x{i}" for i in range(curve.points.shape[1])]
            write_csv(d / "curve.csv", header, np.column_stack([curve.s, curve.points]).tolist())
            write_json(d / "curve.json", {**curve_record(curve), "report": report.summary()})
        write_csv(d / "bitension.csv", *report.table())
        write_csv(d / "frenet.csv", *frenet_table(fd))
        write_json(d / "classification.json", cv.to_dict())
    if cfg.expect:
        ok = (
            _classification_matches(cfg.expect, cv, fd.order)
            if action == "classify"
            else report.verdict in _EXPECT_REPORT[cfg.expect]
        )
        out["expect"] = {"value": cfg.expect, "met": ok}
    _emit(cfg, out)
    if cfg.expect and not out["expect"]["met"]:
        return EXIT_MISMATCH
    return EXIT_OK


# --- hopf -----------------------------------------------------------------


def _hopf_args(p: dict) -> tuple:
    kind = p.get("type")
    n, pp, qq = p.get("n"), p.get("p"), p.get("q")
    try:
        hopf._check_type(kind, n, pp, qq)
    except ValueError as e:
        raise UsageError(str(e))
    return kind, n, pp, qq


def _scan_point(args):
    return hopf.scan_rows(*args)


def cmd_hopf(cfg: RunConfig) -> int:
    action = cfg.command.split()[1]
    p = cfg.params
    if action == "solve":
        kind, n, pp, qq = _hopf_args(p)
        if p.get("c") is None:
            raise UsageError("hopf solve needs --c")
        sol = hopf.solve_biharmonic_u(kind, p["c"], n, pp, qq)
        _emit(cfg, {"command": cfg.command, **sol.to_dict()})
        if cfg.expect == "proper-biharmonic" and not sol.proper_roots:
            return EXIT_MISMATCH
        if cfg.expect == "none" and sol.proper_roots:
            return EXIT_MISMATCH
        return EXIT_OK
    if action == "threshold":
        kind, n, pp, qq = _hopf_args(p)
        closed = hopf.existence_threshold(kind, n, pp, qq)
        numeric = hopf.numeric_threshold(kind, n, pp, qq)
        _emit(cfg, {"command": cfg.command, "type": kind, "n": hopf._check_type(kind, n, pp, qq)[0], "p": pp, "q": qq,
                    "threshold": closed, "numeric_threshold": numeric, "difference": abs(closed - numeric)})
        return EXIT_OK
    # scan
    if p["c_steps"] < 1 or p["n_min"] < 2 or p["n_max"] < p["n_min"]:
        raise UsageError("need c-steps >= 1 and 2 <= n-min <= n-max")
    cs = np.linspace(p["c_min"], p["c_max"], p["c_steps"])
    grid = hopf.scan_grid(p["types"], range(p["n_min"], p["n_max"] + 1), cs)
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            chunks = list(pool.map(_scan_point, grid, chunksize=max(1, len(grid) // (4 * cfg.workers))))
    else:
        chunks = [_scan_point(g) for g in grid]
    rows = [r for ch in chunks for r in ch]
    if cfg.out_dir:
        write_csv(Path(cfg.out_dir) / "hopf_scan.csv", list(hopf.SCAN_COLUMNS), rows)
    summary = {
        "command": cfg.command,
        "points": len(grid),
        "rows": len(rows),
        "proper_biharmonic_rows": sum(r["verdict"] == "ProperBiharmonic" for r in rows),
        "minimal_rows": sum(r["verdict"] == "Minimal" for r in rows),
        "empty_points": sum(r["verdict"] == "None" for r in rows),
    }
    if cfg.out_dir:
        write_json(Path(cfg.out_dir) / "hopf_scan.json", summary)
    _emit(cfg, summary)
    return EXIT_OK


# --- parser ---------------------------------------------------------------


def _positive_float(s: str) -> float:
    v = float(s)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="biharmonic-sasakian", description=__doc__.splitlines()[0])
    groups = ap.add_subparsers(dest="group", required=True)

    def common(sp, out_dir=True):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", help="write the JSON report here as well")
        if out_dir:
            sp.add_argument("--out-dir", help="directory for CSV/JSON artifacts")

    models = groups.add_parser("models").add_subparsers(dest="action", required=True)
    mv = models.add_parser("validate", help="run the structure-axiom suite")
    mv.add_argument("--model", dest="model_json", help='JSON descriptor, e.g. {"kind": "UnitSphere", "n": 2}')
    mv.add_argument("--kind", choices=("UnitSphere", "DeformedSphere", "FlatSasakian"))
    mv.add_argument("--n", type=int)
    mv.add_argument("--a", type=float)
    mv.add_argument("--c", type=float)
    mv.add_argument("--samples", type=int, default=100)
    common(mv, out_dir=False)
    mv.set_defaults(func=cmd_models_validate)

    curve = groups.add_parser("curve").add_subparsers(dest="action", required=True)
    for name in ("generate", "verify", "classify"):
        sp = curve.add_parser(name)
        sp.add_argument("--family", choices=FAMILIES, required=True)
        sp.add_argument("--n", type=int, default=2)
        sp.add_argument("--kappa1", type=float)
        sp.add_argument("--c", type=float)
        sp.add_argument("--branch", choices=("upper", "lower"))
        sp.add_argument("--sigma", type=int, choices=(-1, 1), default=1)
        sp.add_argument("--length", type=_positive_float)
        sp.add_argument("--tol", type=_positive_float)
        sp.add_argument("--tol-order", type=_positive_float)
        sp.add_argument("--expect", choices=EXPECT)
        common(sp)
        sp.set_defaults(func=cmd_curve)

    hp = groups.add_parser("hopf").add_subparsers(dest="action", required=True)
    for name in ("solve", "threshold"):
        sp = hp.add_parser(name)
        sp.add_argument("--type", choices=hopf.TYPES, required=True)
        sp.add_argument("--n", type=int)
        sp.add_argument("--p", type=int)
        sp.add_argument("--q", type=int)
        if name == "solve":
            sp.add_argument("--c", type=float, required=True)
            sp.add_argument("--expect", choices=("proper-biharmonic", "none"))
        common(sp, out_dir=False)
        sp.set_defaults(func=cmd_hopf)
    sc = hp.add_parser("scan")
    sc.add_argument("--types", nargs="+", choices=hopf.TYPES, default=list(hopf.TYPES))
    sc.add_argument("--n-min", type=int, default=2)
    sc.add_argument("--n-max", type=int, default=6)
    sc.add_argument("--c-min", type=float, default=-2.5)
    sc.add_argument("--c-max", type=float, default=5.0)
    sc.add_argument("--c-steps", type=int, default=31)
    sc.add_argument("--workers", type=int, default=1)
    common(sc)
    sc.set_defaults(func=cmd_hopf)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for k in ("n", "a", "c"):
        if not hasattr(args, k):
            setattr(args, k, None)
    try:
        cfg = RunConfig.from_args(args)
        return args.func(cfg)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
