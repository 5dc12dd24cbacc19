"""Command line interface.

Exit codes: 0 all checks passed, 1 a check failed, 2 bad usage or config.
Reports are JSON on stdout with deterministic key order so the same seed
produces byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import Any, Mapping

from .cases import CssType, all_cases, case_info
from .errors import ConfigError, CssError
from .expressions import ScalarFn1D, ScalarFn4D
from .models import CssModel, validate_constraints
from .numerics import QuadratureSpec
from .verify import DEFAULT_TOLERANCES, integrate_null_geodesic, scan

_REQUIRED_KEYS = ("schema", "type", "case", "functions", "delta", "constants", "profile", "box")
_OPTIONAL_KEYS = ("x_ref", "tolerances", "fd_step", "quadrature", "sign_flips")

SCAN_CSV_HEADER = (
    "x0,x1,x2,x3,L0,L1,L2,L3,eps,null_res,div_res,geo_res"
)
GEODESIC_CSV_HEADER = "lambda,x0,x1,x2,x3,p0,p1,p2,p3,H"


def _fail_config(msg: str) -> "ConfigError":
    return ConfigError(msg)


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise _fail_config(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise _fail_config(f"config {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise _fail_config("config root must be a JSON object")
    unknown = sorted(set(cfg) - set(_REQUIRED_KEYS) - set(_OPTIONAL_KEYS))
    if unknown:
        raise _fail_config(f"unknown config keys: {', '.join(unknown)}")
    missing = sorted(set(_REQUIRED_KEYS) - set(cfg))
    if missing:
        raise _fail_config(f"missing required config keys: {', '.join(missing)}")
    if cfg["schema"] != 1:
        raise _fail_config(f"unsupported schema {cfg['schema']!r} (expected 1)")
    return cfg


def _as_box(raw: Any) -> tuple[tuple[float, float], ...]:
    try:
        box = tuple((float(lo), float(hi)) for lo, hi in raw)
    except (TypeError, ValueError) as exc:
        raise _fail_config(f"box must be four [lo, hi] pairs: {raw!r}") from exc
    if len(box) != 4:
        raise _fail_config("box must have exactly four axis ranges")
    return box


def model_from_config(cfg: Mapping[str, Any]) -> CssModel:
    """Build a model from a parsed config mapping (see `_load_config`)."""
    try:
        css_type = CssType.from_label(str(cfg["type"]))
    except (KeyError, ValueError) as exc:
        raise _fail_config(f"unknown type: {exc}") from exc
    try:
        info = case_info(css_type, int(cfg["case"]))
    except (KeyError, ValueError) as exc:
        raise _fail_config(f"unknown case: {exc}") from exc

    raw_fns = cfg["functions"]
    if not isinstance(raw_fns, dict):
        raise _fail_config("'functions' must map names to expression strings")
    slots = {s.name: s.axis for s in info.metric_fns + info.free_fns}
    for name in info.function_names():
        if name not in raw_fns:
            raise _fail_config(f"missing function {name!r} for {info.label}")
    extra = sorted(set(raw_fns) - set(slots))
    if extra:
        raise _fail_config(f"unknown functions for {info.label}: {', '.join(extra)}")

    consts = cfg["constants"]
    if not isinstance(consts, dict):
        raise _fail_config("'constants' must map names to numbers")

    box = _as_box(cfg["box"])
    if "x_ref" in cfg:
        x_ref = tuple(float(v) for v in cfg["x_ref"])
        if len(x_ref) != 4:
            raise _fail_config("x_ref must have four components")
    else:
        x_ref = tuple((lo + hi) / 2.0 for lo, hi in box)

    quad = QuadratureSpec()
    if "quadrature" in cfg:
        q = cfg["quadrature"]
        unknown = sorted(set(q) - {"abs_tol", "rel_tol"})
        if unknown:
            raise _fail_config(f"unknown quadrature keys: {', '.join(unknown)}")
        quad = QuadratureSpec(
            abs_tol=float(q.get("abs_tol", quad.abs_tol)),
            rel_tol=float(q.get("rel_tol", quad.rel_tol)),
        )

    sign_flips = (1, 1, 1, 1)
    if "sign_flips" in cfg:
        sign_flips = tuple(int(v) for v in cfg["sign_flips"])

    try:
        metric_fns = {
            name: ScalarFn1D.parse(str(src), f"x{slots[name]}", domain=box[slots[name]])
            for name, src in raw_fns.items()
        }
        delta = ScalarFn4D.parse(str(cfg["delta"]), ("x0", "x1", "x2", "x3"))
        profile = ScalarFn4D.parse(str(cfg["profile"]), ("u", "v", "w"))
        return CssModel(
            type=css_type,
            case_id=int(cfg["case"]),
            metric_fns=metric_fns,
            delta=delta,
            consts={str(k): float(v) for k, v in consts.items()},
            profile=profile,
            x_ref=x_ref,  # type: ignore[arg-type]
            box=box,
            sign_flips=sign_flips,  # type: ignore[arg-type]
            quadrature=quad,
        )
    except CssError:
        raise
    except (TypeError, ValueError) as exc:
        raise _fail_config(f"bad config value: {exc}") from exc


def _config_tolerances(cfg: Mapping[str, Any]) -> dict[str, float]:
    tol = dict(DEFAULT_TOLERANCES)
    if "tolerances" in cfg:
        raw = cfg["tolerances"]
        unknown = sorted(set(raw) - set(tol))
        if unknown:
            raise _fail_config(f"unknown tolerance keys: {', '.join(unknown)}")
        tol.update({k: float(v) for k, v in raw.items()})
    return tol


def _emit(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True, indent=2))


def _cmd_cases(_args: argparse.Namespace) -> int:
    rows = []
    for info in all_cases():
        rows.append(
            {
                "type": info.type.value,
                "case": info.case,
                "label": info.label,
                "functions": list(s.name for s in info.metric_fns),
                "free_functions": list(s.name for s in info.free_fns),
                "constants": list(info.constants),
                "invariant_args": list(info.invariant_args),
                "split_signature_ok": info.split_ok,
            }
        )
    _emit({"schema": 1, "command": "cases", "count": len(rows), "cases": rows})
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    cfg = _load_config(args.config)
    model = model_from_config(cfg)
    tol = _config_tolerances(cfg)
    violations = validate_constraints(model, grid_n=args.grid_n, tol=tol["constraint"])
    _emit(
        {
            "schema": 1,
            "command": "validate",
            "model": model.info.label,
            "valid": not violations,
            "violations": [
                {"name": v.name, "x": list(v.x), "magnitude": v.magnitude}
                for v in violations
            ],
        }
    )
    return 0 if not violations else 1


def _cmd_scan(args: argparse.Namespace) -> int:
    cfg = _load_config(args.config)
    model = model_from_config(cfg)
    tol = _config_tolerances(cfg)
    fd_step = float(cfg.get("fd_step", 1e-3))
    report = scan(
        model,
        n_points=args.points,
        seed=args.seed,
        fd_step=fd_step,
        tolerances=tol,
        collect_rows=args.csv is not None,
    )
    if args.csv is not None:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(SCAN_CSV_HEADER.split(","))
            for row in report.rows or ():
                writer.writerow([repr(v) for v in row])
    payload = {"schema": 1, "command": "scan", **report.as_dict()}
    _emit(payload)
    return 0 if report.passed else 1


def _cmd_geodesic(args: argparse.Namespace) -> int:
    cfg = _load_config(args.config)
    model = model_from_config(cfg)
    try:
        start = tuple(float(v) for v in args.start.split(","))
    except ValueError as exc:
        raise _fail_config(f"bad --start value {args.start!r}") from exc
    if len(start) != 4:
        raise _fail_config("--start needs four comma separated coordinates")
    for v, (lo, hi) in zip(start, model.box):
        if not (lo <= v <= hi):
            raise _fail_config(f"start point {start!r} is outside the box")
    traj = integrate_null_geodesic(model, start, steps=args.steps, dl=args.dl)
    if args.csv is not None:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(GEODESIC_CSV_HEADER.split(","))
            for lam, xs, ps, hv in traj.samples:
                writer.writerow([repr(lam), *[repr(v) for v in xs], *[repr(v) for v in ps], repr(hv)])
    _emit(
        {
            "schema": 1,
            "command": "geodesic",
            "model": model.info.label,
            "steps_taken": len(traj.samples) - 1,
            "truncated": traj.truncated,
            "hamiltonian_drift": traj.hamiltonian_drift,
            "p_deviation": traj.p_deviation,
        }
    )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="csskit",
        description="Separable space-time models with verified radiation sources.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_cases = sub.add_parser("cases", help="list every supported case")
    p_cases.set_defaults(fn=_cmd_cases)

    p_val = sub.add_parser("validate", help="check a model config against its case constraints")
    p_val.add_argument("config")
    p_val.add_argument("--grid-n", type=int, default=6, help="per-axis sample count")
    p_val.set_defaults(fn=_cmd_validate)

    p_scan = sub.add_parser("scan", help="residual sweep over random interior points")
    p_scan.add_argument("config")
    p_scan.add_argument("--points", type=int, default=1000)
    p_scan.add_argument("--seed", type=int, default=0)
    p_scan.add_argument("--csv", default=None, help="write per-point residual rows here")
    p_scan.set_defaults(fn=_cmd_scan)

    p_geo = sub.add_parser("geodesic", help="integrate a null geodesic from a start point")
    p_geo.add_argument("config")
    p_geo.add_argument("--start", required=True, help="x0,x1,x2,x3")
    p_geo.add_argument("--steps", type=int, default=1000)
    p_geo.add_argument("--dl", type=float, default=1e-3)
    p_geo.add_argument("--csv", default=None, help="write the sampled trajectory here")
    p_geo.set_defaults(fn=_cmd_geodesic)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except CssError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
