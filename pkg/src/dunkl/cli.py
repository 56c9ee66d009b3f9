"""Command line interface: ``dunkl transform|modulus|besov|verify|report``.

Exit codes: 0 on success, 2 when a refinement study flags unstable brackets,
1 on errors (including violated constant-1 inequalities).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from .besov import BesovMethod, BesovParams, besov_norm, lipschitz_norm
from .errors import DunklError, ExperimentError, InvalidParameterError
from .harness import (STUDIES, CorpusEntry, ExperimentConfig, build_profile, constant_one_violations,
                      default_studies, default_theorems, emit_report, load_report, run_experiment)
from .inequalities import TheoremId
from .measure import DEFAULT_GRID, RadialProfile, WeightParams, load_profile, make_grid, save_profile
from .smoothness import modulus
from .transform import dunkl_transform_radial

FORMATS = ("csv", "json", "svg-lines")


def _grid_arg(text: str) -> List[float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("grid must be R,panels,nodes")
    return [float(parts[0]), int(parts[1]), int(parts[2])]


def _lambdas_arg(text: str) -> List[float]:
    return [float(x) for x in text.split(",") if x]


def parse_profile_spec(text: str) -> CorpusEntry:
    """``name`` or ``name:key=value,key=value``, e.g. ``gaussian:a=0.5``."""
    name, _, rest = text.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        k, _, v = item.partition("=")
        params[k] = int(v) if k in ("seed", "N") else float(v)
    return CorpusEntry(name, params)


def _profile(args, lam: float):
    if args.input:
        f = load_profile(args.input)
        if not isinstance(f, RadialProfile):
            raise InvalidParameterError(f"{args.input} holds a spectral profile; a spatial one is needed")
        return f
    grid = make_grid(*args.grid) if args.grid else make_grid(*DEFAULT_GRID)
    return build_profile(parse_profile_spec(args.profile), WeightParams(lam), grid)


def _print(obj) -> None:
    print(json.dumps(obj, indent=1, sort_keys=True))


def cmd_transform(args) -> int:
    lam = args.lambda_[0]
    f = _profile(args, lam)
    G = dunkl_transform_radial(f, strict=not f.derived)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    csv_path, _ = save_profile(G, out / "spectrum.csv")
    _print({"lambda_k": lam, "label": f.label, "spectrum": str(csv_path), "nodes": G.grid.size})
    return 0


def cmd_modulus(args) -> int:
    rows = []
    for lam in args.lambda_:
        f = _profile(args, lam)
        for d in args.delta:
            rows.append({"lambda_k": lam, "m": args.m, "delta": d, "p": args.p,
                         "modulus": modulus(f, args.m, d, args.p)})
    _print(rows)
    return 0


def cmd_besov(args) -> int:
    rows = []
    for lam in args.lambda_:
        f = _profile(args, lam)
        if args.method == "LIPSCHITZ":
            val = lipschitz_norm(f, args.s, args.p, args.J)
        else:
            r = args.r if args.r is not None else args.s + 1.0
            bp = BesovParams(args.s, args.p, args.theta, r, args.J)
            val = besov_norm(f, bp, args.method, args.approximant)
        rows.append({"lambda_k": lam, "method": args.method, "s": args.s, "p": args.p, "theta": args.theta,
                     "value": val})
    _print(rows)
    return 0


def _verify_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig.load(args.config) if args.config else ExperimentConfig()
    if args.theorem and not args.all:
        theorems = {t["id"]: t for t in (cfg.theorems if args.config else default_theorems())}
        studies = {s["id"]: s for s in (cfg.studies if args.config else default_studies())}
        sel_t, sel_s = [], []
        for tid in args.theorem:
            if tid in STUDIES:
                sel_s.append(studies.get(tid, {"id": tid, "grid": {}}))
            else:
                TheoremId(tid)
                sel_t.append(theorems.get(tid, {"id": tid, "grid": {}}))
        cfg.theorems, cfg.studies = sel_t, sel_s
        cfg.extremal = None
    if args.lambda_:
        cfg.lambdas = args.lambda_
    if args.grid:
        cfg.grid = args.grid
    if args.out:
        cfg.out_dir = args.out
    if args.refine:
        cfg.refine = True
    if args.J:
        cfg.J = args.J
    cfg.validate()
    return cfg


def cmd_verify(args) -> int:
    if not args.all and not args.theorem and not args.config:
        print("verify: give --all, --theorem or --config", file=sys.stderr)
        return 1
    try:
        cfg = _verify_config(args)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    code = 0
    try:
        report = run_experiment(cfg)
    except ExperimentError as e:
        report = e.report
        print(str(e), file=sys.stderr)
        code = 1
    for fmt in FORMATS:
        emit_report(report, fmt, cfg.out_dir)
    bad = constant_one_violations(report)
    if bad:
        print(f"{len(bad)} constant-1 violation(s), worst ratio {max(r.ratio for r in bad):.9f}", file=sys.stderr)
        code = 1
    summary = {k: {"min": v["min_ratio"], "max": v["max_ratio"], "degenerate": v["degenerate"]}
               for k, v in report.summary.items()}
    _print({"rows": len(report.rows), "failures": len(report.failures), "unstable": report.unstable,
            "seconds": report.header.get("seconds"), "out": cfg.out_dir, "summary": summary})
    if code == 0 and report.unstable:
        code = 2
    return code


def cmd_report(args) -> int:
    report = load_report(args.input)
    paths = []
    for fmt in args.format:
        paths += [str(p) for p in emit_report(report, fmt, args.out)]
    _print({"written": paths})
    return 0


def _add_common(p, profile=True):
    p.add_argument("--lambda", dest="lambda_", type=_lambdas_arg, default=None,
                   help="weight parameter(s) lambda_k, comma separated")
    p.add_argument("--grid", type=_grid_arg, default=None, help="R,panels,nodes")
    if profile:
        p.add_argument("--profile", default="gaussian:a=0.5", help="generator spec, e.g. gaussian:a=0.5")
        p.add_argument("--input", default=None, help="saved profile CSV (overrides --profile)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dunkl", description="Dunkl harmonic analysis toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", help="Dunkl transform of a radial profile")
    _add_common(p)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("modulus", help="modulus of smoothness")
    _add_common(p)
    p.add_argument("--m", type=float, default=1.0)
    p.add_argument("--delta", type=float, nargs="+", default=[1.0])
    p.add_argument("--p", type=float, default=2.0)
    p.set_defaults(func=cmd_modulus)

    p = sub.add_parser("besov", help="Besov norm")
    _add_common(p)
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--theta", type=float, default=2.0)
    p.add_argument("--r", type=float, default=None)
    p.add_argument("--J", type=int, default=10)
    p.add_argument("--method", default="DEFINITION", choices=[m.value for m in BesovMethod] + ["LIPSCHITZ"])
    p.add_argument("--approximant", default="vallee-poussin", choices=["vallee-poussin", "near-best"])
    p.set_defaults(func=cmd_besov)

    p = sub.add_parser("verify", help="run a theorem sweep and write reports")
    _add_common(p, profile=False)
    p.add_argument("--all", action="store_true", help="all theorems and studies with default grids")
    p.add_argument("--theorem", action="append", default=[], help="theorem or study id (repeatable)")
    p.add_argument("--config", default=None, help="experiment config JSON")
    p.add_argument("--out", default=None)
    p.add_argument("--refine", action="store_true", help="repeat on doubled nodes, t-grid and J")
    p.add_argument("--J", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", help="re-emit a saved JSON report")
    p.add_argument("--input", required=True)
    p.add_argument("--format", nargs="+", default=["csv"], choices=FORMATS)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "lambda_", None) is None and args.command in ("transform", "modulus", "besov"):
        args.lambda_ = [0.5]
    try:
        return args.func(args)
    except (DunklError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
