"""Seeded experiment runners producing JSON summaries and CSV series.

Outputs are deterministic: identical config + seed produce byte-identical
reports (sorted keys, repr floats, no timestamps).
"""

from __future__ import annotations

import csv
import json
import os

import numpy as np

from . import __version__
from .curves import RadicalBranchCurve, random_trig_curve
from .errors import ConfigError
from .glaeser import check_interpolation_hypothesis, interpolation_bound, radical_envelope
from .covers import GrowthBudget, extract_subcover
from .kernels import BACKEND
from .pipeline import (
    PipelineConstants,
    family_cubic_walkthrough,
    family_quartic_walkthrough,
    run_induction_trace,
)
from .curves import PowerCurve
from .tracking import (
    BoxFamily,
    family_random_trig,
    family_zn_minus_loop,
    family_zn_minus_t,
    holder_quotient,
    monodromy_loop,
    regularity_report,
    track_box,
    track_curve,
)

EXPERIMENTS = ("sharpness", "bound-survey", "cover-demo", "monodromy", "glaeser-suite",
               "appendix-trace")


def run_experiment(config: dict, out_dir: str) -> dict:
    """Dispatch one experiment; writes manifest.json, report.json and CSV
    series into ``out_dir`` and returns the report dict."""
    if not isinstance(config, dict):
        raise ConfigError("config must be a JSON object", field="config")
    name = config.get("name")
    if name not in EXPERIMENTS:
        raise ConfigError(
            f"unknown experiment name {name!r}; expected one of {', '.join(EXPERIMENTS)}",
            field="name",
        )
    seed = int(config.get("seed", 0))
    os.makedirs(out_dir, exist_ok=True)

    runner = {
        "sharpness": _run_sharpness,
        "bound-survey": _run_bound_survey,
        "cover-demo": _run_cover_demo,
        "monodromy": _run_monodromy,
        "glaeser-suite": _run_glaeser_suite,
        "appendix-trace": _run_appendix_trace,
    }[name]
    report = runner(config, seed, out_dir)

    manifest = {
        "config": config,
        "seed": seed,
        "versions": {"package": __version__, "numpy": np.__version__, "backend": BACKEND},
    }
    _write_json(os.path.join(out_dir, "manifest.json"), manifest)
    _write_json(os.path.join(out_dir, "report.json"), report)
    return report


def _write_json(path: str, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _write_csv(path: str, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in rows:
            writer.writerow(row)


# ---------------------------------------------------------------------------


def sharpness_table(n: int, p: float, eps_values, points_per_decade: int = 256):
    """||lambda'||^p_{L^p((eps,1))} for the monomial family with roots t^{1/n},
    tracked on log-spaced grids, plus the closed-form integral."""
    rows = []
    for eps in eps_values:
        decades = np.log10(1.0 / eps)
        m = max(int(points_per_decade * decades), 64)
        grid = np.geomspace(eps, 1.0, m)
        fam = family_zn_minus_t(n, (eps, 1.0))
        system = track_curve(fam, grid=grid)
        rep = regularity_report(system, _largest_branch(system), p, fam, coefficient_scale=1.0)
        q = p * (n - 1.0) / n
        if abs(1.0 - q) < 1e-12:
            closed = n ** (-p) * np.log(1.0 / eps)
        else:
            closed = n ** (-p) * (1.0 - eps ** (1.0 - q)) / (1.0 - q)
        rows.append({
            "eps": float(eps),
            "lp_pow_p": float(rep.lp_of_derivative**p),
            "closed_form": float(closed),
        })
    return rows


def _largest_branch(system) -> int:
    # the branch continuing the positive real root t^{1/n}
    ends = system.trajectories[:, -1]
    return int(np.argmax(ends.real))


def affine_log_fit(eps_values, values):
    """Least-squares fit value = c*log(1/eps) + d; returns (c, d, r_squared)."""
    x = np.log(1.0 / np.asarray(eps_values, dtype=float))
    y = np.asarray(values, dtype=float)
    A = np.stack([x, np.ones_like(x)], axis=1)
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    fit = A @ coef
    ss_res = float(((y - fit) ** 2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(coef[0]), float(coef[1]), r2


def _run_sharpness(config, seed, out_dir):
    n_values = config.get("n_values", [2, 3, 4])
    eps_values = config.get("eps_values", [10.0**-k for k in range(2, 9)])
    report = {"experiment": "sharpness", "cases": []}
    csv_rows = [("n", "p", "eps", "lp_pow_p", "closed_form")]
    for n in n_values:
        p_crit = n / (n - 1.0)
        for p, tag in ((p_crit, "critical"), (p_crit - 0.1, "subcritical")):
            rows = sharpness_table(n, p, eps_values)
            for r in rows:
                csv_rows.append((n, repr(p), repr(r["eps"]), repr(r["lp_pow_p"]),
                                 repr(r["closed_form"])))
            case = {"n": n, "p": p, "regime": tag, "rows": rows}
            if tag == "critical":
                c, d, r2 = affine_log_fit([r["eps"] for r in rows], [r["lp_pow_p"] for r in rows])
                case["log_fit"] = {"slope": c, "intercept": d, "r_squared": r2,
                                   "slope_closed_form": float(n ** (-p))}
            report["cases"].append(case)
    _write_csv(os.path.join(out_dir, "sharpness.csv"), csv_rows)
    return report


def _family_max_ratio(fam, grid, p, scale):
    """Largest bound_ratio over the matched branches (the regularity bound
    covers every continuous root, and branch labels are not grid-stable
    across near-collisions while the branch set is)."""
    system = track_curve(fam, initial_grid=grid)
    ratios = [
        regularity_report(system, i, p, fam, coefficient_scale=scale, with_holder=False)
        for i in range(system.degree)
    ]
    best = int(np.argmax([r.bound_ratio for r in ratios]))
    return system, best, ratios[best]


def _run_bound_survey(config, seed, out_dir):
    n_values = config.get("n_values", [2, 3, 4, 5])
    families = int(config.get("families_per_n", 100))
    grid = int(config.get("grid", 1025))
    report = {"experiment": "bound-survey", "per_degree": []}
    csv_rows = [("n", "seed", "p", "bound_ratio", "bound_ratio_refined", "holder_ok")]
    rng = np.random.default_rng(seed)
    for n in n_values:
        p = n / (n - 1.0) - 0.1
        gamma = 1.0 - 1.0 / p
        ratios, ratios_ref, holder_ok = [], [], True
        for fi in range(families):
            fam_seed = int(rng.integers(0, 2**31))
            fam = family_random_trig(n, fam_seed)
            scale = fam.coefficient_scale()
            sys_a, best, rep_a = _family_max_ratio(fam, grid, p, scale)
            _, _, rep_b = _family_max_ratio(fam, 2 * (grid - 1) + 1, p, scale)
            hq = holder_quotient(sys_a.grid, sys_a.trajectories[best], gamma)
            ok = hq <= rep_a.lp_of_derivative * (1.0 + 1e-9)
            holder_ok &= ok
            ratios.append(rep_a.bound_ratio)
            ratios_ref.append(rep_b.bound_ratio)
            csv_rows.append((n, fam_seed, repr(p), repr(rep_a.bound_ratio),
                             repr(rep_b.bound_ratio), ok))
        mx, mx_ref = float(np.max(ratios)), float(np.max(ratios_ref))
        report["per_degree"].append({
            "n": n,
            "p": p,
            "max_bound_ratio": mx,
            "max_bound_ratio_refined": mx_ref,
            "stability": abs(mx_ref - mx) / mx if mx > 0 else 0.0,
            "holder_consistent": bool(holder_ok),
        })
    _write_csv(os.path.join(out_dir, "bound_survey.csv"), csv_rows)
    return report


def random_budget(seed: int, domain=(0.0, 1.0)) -> GrowthBudget:
    """Seeded growth budget; the base-curve mix forces all three endpoint
    cases across seeds: complex bases never vanish (nonvanishing endpoints),
    a single interior zero splits the domain into one-sided-vanishing
    components, and a t(1-t) factor makes both endpoints vanish."""
    from .curves import PolyCurve, ProductCurve, RampCurve

    rng = np.random.default_rng(seed)
    kind = seed % 3
    rads = []
    for k in (2, 3)[: 1 + seed % 2]:
        g = random_trig_curve(rng, degree=2, scale=1.0)
        if kind == 1:
            # identically zero on a left stretch: one-sided-vanishing component
            w = float(rng.uniform(0.15, 0.4))
            g = ProductCurve(g, RampCurve(w, 3))
        elif kind == 2:
            g = ProductCurve(g, PolyCurve([0.0, 1.0, -1.0]))  # vanishing ends
        rads.append(RadicalBranchCurve(g, k, domain))
    L = float(rng.uniform(0.2, 3.0))
    D = float(rng.uniform(0.02, 0.3))
    return GrowthBudget(L=L, D=D, radicals=tuple(rads), domain=domain)


def _run_cover_demo(config, seed, out_dir):
    count = int(config.get("budgets", 10))
    report = {"experiment": "cover-demo", "covers": []}
    rows = [("budget_seed", "s_minus", "s_plus", "t1", "ell", "kind")]
    for i in range(count):
        budget = random_budget(seed + i)
        rep = extract_subcover(budget)
        worst = max((r.residual / r.target for r in rep.records), default=0.0)
        report["covers"].append({
            "seed": seed + i,
            "records": len(rep.records),
            "max_overlap": rep.max_overlap,
            "total_length": rep.total_length,
            "domain_length": rep.domain_length,
            "max_relative_residual": worst,
        })
        for r in rep.records:
            rows.append((seed + i, repr(r.J[0]), repr(r.J[1]), repr(r.t1), r.ell, r.kind))
    _write_csv(os.path.join(out_dir, "covers.csv"), rows)
    return report


def _run_monodromy(config, seed, out_dir):
    report = {"experiment": "monodromy", "loops": [], "box": None}
    for n in config.get("n_values", [2, 3]):
        perm = monodromy_loop(family_zn_minus_loop(n))
        report["loops"].append({"n": n, "permutation": list(perm)})
    bf = BoxFamily(2, (lambda x, y: 0 * x, lambda x, y: -(x + 1j * y)), ((-1, 1), (-1, 1)))
    box = track_box(bf, 1.5, grid=4, detect=True)
    cell, perm = box.obstruction
    report["box"] = {"obstruction_cell": list(cell), "permutation": list(perm)}
    return report


def _run_glaeser_suite(config, seed, out_dir):
    rng = np.random.default_rng(seed)
    trials = int(config.get("trials", 500))
    max_degree = int(config.get("max_degree", 4))
    checked = 0
    violations = 0
    rows = [("trial", "m", "alpha", "A", "B", "M", "hypothesis_holds", "bound_ok")]
    for trial in range(trials):
        m = int(rng.integers(1, max_degree + 1))
        alpha = float(rng.uniform(0.25, 1.0))
        coeffs = rng.normal(size=m) + 1j * rng.normal(size=m)
        A = float(rng.uniform(0.5, 3.0))
        B = float(rng.uniform(0.5, 2.0))
        M = float(rng.choice([0.0, rng.uniform(0.0, 4.0)]))
        holds = check_interpolation_hypothesis(coeffs, A, B, M, alpha)
        ok = True
        if holds:
            checked += 1
            ib = interpolation_bound(m, alpha, A, B, M)
            ok = bool(np.all(np.abs(coeffs) <= np.asarray(ib.per_coefficient_bounds)))
            violations += 0 if ok else 1
        rows.append((trial, m, repr(alpha), repr(A), repr(B), repr(M), holds, ok))
    env = radical_envelope(PowerCurve(1.0), (-1.0, 1.0), 1, 1.0)
    from .curves import PolyCurve, TrigCurve
    from .glaeser import glaeser_check, taylor_bound_check

    taylor = taylor_bound_check(PolyCurve([0.0, 0.0, 1.0]), (-1.0, 1.0), 1, 1.0, 0.5, 1)
    decay = glaeser_check(TrigCurve([1j], [1.0]), (-1.0, 1.0), 1, 1.0)
    report = {
        "experiment": "glaeser-suite",
        "trials": trials,
        "hypothesis_held": checked,
        "bound_violations": violations,
        "radical_envelope_example": env.to_json(),
        "taylor_bound_example": taylor.to_json(),
        "glaeser_checks": [c.to_json() for c in decay],
    }
    _write_csv(os.path.join(out_dir, "interpolation_bound.csv"), rows)
    return report


def _run_appendix_trace(config, seed, out_dir):
    constants = PipelineConstants()
    report = {"experiment": "appendix-trace", "traces": []}
    for name, fam in (("degree-3", family_cubic_walkthrough()),
                      ("degree-4", family_quartic_walkthrough())):
        trace = run_induction_trace(fam, constants, max_depth=3)
        report["traces"].append({
            "family": name,
            "nodes": trace.count_nodes(),
            "all_passed": trace.all_passed(),
            "failed": [
                {"depth": d, "check": c.name, "lhs": c.lhs, "rhs": c.rhs}
                for d, c in trace.failed_checks()
            ],
        })
        _write_json(os.path.join(out_dir, f"trace_{name}.json"), trace.to_json())
    return report
