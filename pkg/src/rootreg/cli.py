"""Command-line interface.

Subcommands: track, norms, cover, glaeser, trace, experiment.
Exit codes: 0 success, 2 configuration error, 3 numeric failure (with a JSON
diagnostic on stderr).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from .covers import GrowthBudget, extract_subcover
from .curves import RadicalBranchCurve, make_named_curve
from .errors import ConfigError, RootRegError
from .experiments import run_experiment
from .function_spaces import SampledFunction, norm_report, norm_sandwich_check
from .glaeser import glaeser_check, interpolation_bound, radical_envelope, taylor_bound_check
from .pipeline import (
    PipelineConstants,
    family_cubic_walkthrough,
    family_quartic_walkthrough,
    run_induction_trace,
)
from .tracking import CurveFamily, family_random_trig, family_zn_minus_loop, family_zn_minus_t, \
    regularity_report, track_curve


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rootreg",
                                     description="continuous roots of polynomial families "
                                                 "with regularity certification")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("track", "track matched root trajectories of a coefficient curve"),
        ("norms", "norm reports of a sampled or named function"),
        ("cover", "extract an interval subcover for a growth budget"),
        ("glaeser", "derivative-bound and radical-envelope checks"),
        ("trace", "run the recursive pipeline tracer"),
        ("experiment", "run a named experiment"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", type=str, default=None, help="path to a JSON config")
        p.add_argument("--out", type=str, default=None, help="output directory")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--grid", type=int, default=257)
        p.add_argument("--p", type=float, default=1.0)
        p.add_argument("--tol", type=float, default=1e-12)
        p.add_argument("--json", action="store_true", help="machine-readable stdout")
    return parser


def _load_config(args) -> dict:
    if args.config is None:
        raise ConfigError("missing --config", field="config")
    try:
        with open(args.config) as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {args.config}", field="config") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {args.config}: {exc}", field="config") from exc


def load_family(spec: dict) -> CurveFamily:
    """Curve-family JSON: {"degree": n, "domain": [a, b], "family": {...}}."""
    try:
        degree = int(spec["degree"])
        domain = tuple(float(x) for x in spec["domain"])
        fam = spec["family"]
        kind = fam["kind"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed curve family spec: {exc}", field="family") from exc
    if kind == "sampled":
        grid = np.asarray(fam["grid"], dtype=float)
        coeffs = np.array([[complex(re, im) for re, im in col] for col in fam["coeffs"]]).T
        return CurveFamily.from_samples(grid, coeffs, degree)
    if kind != "builtin":
        raise ConfigError(f"unknown family kind {kind!r}", field="family.kind")
    name = fam.get("name")
    if name == "zn-minus-t":
        return family_zn_minus_t(degree, domain)
    if name == "zn-minus-loop":
        return family_zn_minus_loop(degree)
    if name == "random-trig":
        return family_random_trig(degree, int(fam.get("seed", 0)), domain,
                                  degree=int(fam.get("trig_degree", 6)))
    if name == "cubic-walkthrough":
        return family_cubic_walkthrough(domain)
    if name == "quartic-walkthrough":
        return family_quartic_walkthrough(domain)
    if name == "coeff-curves":
        curves = tuple(make_named_curve(c.pop("name"), **c) for c in fam["coeffs"])
        return CurveFamily(degree, curves, domain)
    raise ConfigError(f"unknown builtin family {name!r}", field="family.name")


def _emit(args, payload: dict, csv_writers=()) -> None:
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "report.json"), "w") as fh:
            json.dump(payload, fh, sort_keys=True, indent=2)
            fh.write("\n")
        for fname, rows in csv_writers:
            with open(os.path.join(args.out, fname), "w", newline="") as fh:
                csv.writer(fh).writerows(rows)
    if args.json:
        json.dump(payload, sys.stdout, sort_keys=True)
        sys.stdout.write("\n")
    else:
        _pretty(payload)


def _pretty(payload: dict, indent: str = "") -> None:
    for key, value in payload.items():
        if isinstance(value, dict):
            print(f"{indent}{key}:")
            _pretty(value, indent + "  ")
        elif isinstance(value, list) and len(value) > 6:
            print(f"{indent}{key}: [{len(value)} entries]")
        else:
            print(f"{indent}{key}: {value}")


def _cmd_track(args) -> dict:
    spec = _load_config(args)
    family = load_family(spec)
    system = track_curve(family, initial_grid=args.grid, solver_tol=args.tol)
    reports = [regularity_report(system, i, args.p, family).to_json()
               for i in range(system.degree)]
    payload = {
        "grid_points": len(system.grid),
        "refinement_depth": system.refinement_depth,
        "max_step_jump": system.max_step_jump,
        "branch_reports": reports,
    }
    _emit(args, payload, [("trajectories.csv", system.to_csv_rows())])
    return payload


def _cmd_norms(args) -> dict:
    spec = _load_config(args)
    if "grid" in spec and "values" in spec:
        f = SampledFunction.from_json(spec)
    elif "function" in spec:
        fn = dict(spec["function"])
        curve = make_named_curve(fn.pop("name"), **fn)
        a, b = spec.get("domain", [0.0, 1.0])
        grid = np.linspace(float(a), float(b), int(spec.get("samples", args.grid)))
        f = SampledFunction.from_curve(curve, grid)
    else:
        raise ConfigError("norms config needs either grid/values or a named function")
    payload = {"report": norm_report(f, args.p).to_json()}
    q = spec.get("q")
    if q is not None:
        payload["sandwich"] = norm_sandwich_check(f, float(q), args.p).to_json()
    _emit(args, payload)
    return payload


def _cmd_cover(args) -> dict:
    spec = _load_config(args)
    try:
        domain = tuple(float(x) for x in spec["domain"])
        radicals = tuple(
            RadicalBranchCurve(
                make_named_curve(dict(r["base"]).pop("name"),
                                 **{k: v for k, v in r["base"].items() if k != "name"}),
                int(r["k"]), domain)
            for r in spec["radicals"]
        )
        budget = GrowthBudget(L=float(spec["L"]), D=float(spec["D"]), radicals=radicals,
                              domain=domain)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed budget spec: {exc}", field="budget") from exc
    report = extract_subcover(budget)
    payload = report.to_json()
    _emit(args, payload, [("cover.csv", report.to_csv_rows())])
    return payload


def _cmd_glaeser(args) -> dict:
    spec = _load_config(args)
    op = spec.get("op")
    if op == "interpolation-bound":
        ib = interpolation_bound(int(spec["m"]), float(spec["alpha"]), float(spec["A"]),
                                 float(spec["B"]), float(spec["M"]))
        payload = ib.to_json()
    elif op in ("glaeser-check", "taylor-check", "radical-envelope"):
        fn = dict(spec["function"])
        curve = make_named_curve(fn.pop("name"), **fn)
        interval = tuple(float(x) for x in spec["interval"])
        if op == "radical-envelope":
            env = radical_envelope(curve, interval, int(spec["k"]), float(spec["alpha"]))
            payload = env.to_json()
        elif op == "glaeser-check":
            checks = glaeser_check(curve, interval, int(spec["m"]), float(spec["alpha"]))
            payload = {"checks": [c.to_json() for c in checks]}
        else:
            chk = taylor_bound_check(curve, interval, int(spec["m"]), float(spec["alpha"]),
                                     float(spec["t"]), int(spec["s"]))
            payload = chk.to_json()
    else:
        raise ConfigError(f"unknown glaeser op {op!r}", field="op")
    _emit(args, payload)
    return payload


def _cmd_trace(args) -> dict:
    spec = _load_config(args)
    family = load_family(spec)
    overrides = spec.get("constants", {})
    constants = PipelineConstants(**overrides) if overrides else PipelineConstants()
    trace = run_induction_trace(family, constants, max_depth=int(spec.get("max_depth", 3)))
    payload = trace.to_json()
    _emit(args, payload)
    return payload


def _cmd_experiment(args) -> dict:
    spec = _load_config(args)
    if "seed" not in spec:
        spec["seed"] = args.seed
    out = args.out or "rootreg-out"
    payload = run_experiment(spec, out)
    if args.json:
        json.dump(payload, sys.stdout, sort_keys=True)
        sys.stdout.write("\n")
    else:
        print(f"experiment {spec['name']} written to {out}")
    return payload


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {
        "track": _cmd_track,
        "norms": _cmd_norms,
        "cover": _cmd_cover,
        "glaeser": _cmd_glaeser,
        "trace": _cmd_trace,
        "experiment": _cmd_experiment,
    }[args.command]
    try:
        handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}" + (f" (field: {exc.field})" if exc.field else ""),
              file=sys.stderr)
        return 2
    except RootRegError as exc:
        diag = {"error": type(exc).__name__, "detail": str(exc)}
        for attr in ("cell", "permutation", "witness", "best_ratio"):
            if getattr(exc, attr, None) is not None:
                value = getattr(exc, attr)
                diag[attr] = list(value) if isinstance(value, tuple) else value
        json.dump(diag, sys.stderr, sort_keys=True)
        sys.stderr.write("\n")
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
