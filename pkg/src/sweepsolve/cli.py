"""Command-line front end: solve, sweep, diagnose, estimate-set.

Exit codes: 0 when every requested check passes, 2 when a bound check fails,
1 on any error (parse, validation, I/O, integration).  Artifacts written under
--out are byte-deterministic for a fixed (scenario, seed); timing goes to
stderr only.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import analysis
from .analysis import FarParameters, SamplerConfig
from .dynamics import integrate
from .errors import SweepSolveError
from .scenario_io import (
    dump_json,
    load_scenario,
    read_trajectory_csv,
    report_to_dict,
    scenario_hash,
    write_trajectory_csv,
)
from .set_zoo import instantiate

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_BOUND_FAILED = 2


def _common_flags(sub):
    sub.add_argument("--scenario", required=True, help="path to a scenario JSON document")
    sub.add_argument("--out", default=None, help="output directory (default: scenario output.dir)")
    sub.add_argument("--seed", type=int, default=0, help="seed for sampled estimators")
    sub.add_argument("--jobs", type=int, default=1, help="parallel lambda integrations")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sweepsolve",
        description="Penalized solver and bound certification for degenerate "
                    "state-dependent sweeping dynamics")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("solve", help="integrate one penalty parameter, write CSV + summary")
    _common_flags(p)
    p.add_argument("--lam", type=float, default=None,
                   help="penalty parameter (default: first entry of lambdas)")

    p = subs.add_parser("sweep", help="integrate every lambda, write CSVs + diagnostics report")
    _common_flags(p)

    p = subs.add_parser("diagnose", help="re-check bounds on an existing trajectory CSV")
    _common_flags(p)
    p.add_argument("--traj", required=True, help="trajectory CSV written by solve/sweep")
    p.add_argument("--lam", type=float, default=None,
                   help="penalty parameter (default: read from the CSV header)")

    p = subs.add_parser("estimate-set", help="estimate alpha, kappa_r, L and Hausdorff gaps")
    _common_flags(p)
    p.add_argument("--r", default="1,10", help="comma list of truncation radii")
    p.add_argument("--samples", type=int, default=4096, help="Hausdorff sampler size")
    p.add_argument("--alpha-samples", type=int, default=10000, help="tube samples for alpha")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    try:
        code = _dispatch(args)
    except SweepSolveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    print(f"[sweepsolve] {args.command} finished in {time.perf_counter() - started:.2f}s",
          file=sys.stderr)
    return code


def _dispatch(args) -> int:
    text = Path(args.scenario).read_text(encoding="utf-8")
    scenario = load_scenario(args.scenario)
    digest = scenario_hash(text)
    out_dir = Path(args.out if args.out is not None else scenario.output.dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    if args.command == "solve":
        return _run_solve(args, scenario, digest, out_dir)
    if args.command == "sweep":
        return _run_sweep(args, scenario, digest, out_dir)
    if args.command == "diagnose":
        return _run_diagnose(args, scenario, digest, out_dir)
    if args.command == "estimate-set":
        return _run_estimate_set(args, scenario, digest, out_dir)
    raise AssertionError(f"unhandled command {args.command}")


def _lam_tag(lam: float) -> str:
    return format(lam, "g").replace("-", "m")


def _diag_dict(diag) -> dict:
    return {
        "lambda": diag.lam,
        "status": diag.status,
        "phi_max": diag.phi_max,
        "phi_bound": diag.phi_bound,
        "bound_satisfied": diag.bound_satisfied,
        "worst_ratio": diag.worst_ratio,
        "lipschitz_estimate": diag.lipschitz_estimate,
        "lipschitz_bound": diag.lipschitz_bound,
        "lipschitz_ok": diag.lipschitz_ok,
    }


def _run_solve(args, scenario, digest, out_dir) -> int:
    lam = args.lam if args.lam is not None else scenario.lambdas[0]
    traj = integrate(scenario, lam)
    csv_name = f"trajectory_lam{_lam_tag(lam)}.csv"
    write_trajectory_csv(out_dir / csv_name, traj)

    params = FarParameters(scenario.alpha_assumed, scenario.rho_assumed)
    kt = analysis.kappa_tilde(scenario)
    diag = analysis.diagnose_trajectory(traj, scenario, kt.value, params)
    summary = {
        "subcommand": "solve",
        "scenario_hash": digest,
        "seed": args.seed,
        "kappa_tilde": kt.value,
        "trajectory_csv": csv_name,
        **_diag_dict(diag),
    }
    dump_json(out_dir / "summary.json", summary)
    print(f"lambda={lam:g} phi_max={diag.phi_max:.6g} bound={diag.phi_bound:.6g} "
          f"ok={diag.bound_satisfied}")
    return EXIT_OK if diag.bound_satisfied and diag.lipschitz_ok else EXIT_BOUND_FAILED


def _run_sweep(args, scenario, digest, out_dir) -> int:
    report = analysis.lambda_sweep(scenario, grid_points=scenario.output.grid_points,
                                   seed=args.seed, jobs=max(1, args.jobs))
    for lam in scenario.lambdas:
        entry = next(d for d in report.per_lambda if d.lam == lam)
        if entry.status != "ok":
            continue
        traj = integrate(scenario, lam)  # deterministic re-run keeps memory flat
        write_trajectory_csv(out_dir / f"trajectory_lam{_lam_tag(lam)}.csv", traj)
    payload = {"subcommand": "sweep", "scenario_hash": digest, "seed": args.seed,
               **report_to_dict(report)}
    dump_json(out_dir / "report.json", payload)
    for d in report.per_lambda:
        print(f"lambda={d.lam:g} status={d.status} worst_ratio={d.worst_ratio:.4g} "
              f"bound_ok={d.bound_satisfied}")
    failed_runs = [d for d in report.per_lambda if d.status != "ok"]
    if failed_runs:
        return EXIT_ERROR
    return EXIT_OK if report.all_ok else EXIT_BOUND_FAILED


def _run_diagnose(args, scenario, digest, out_dir) -> int:
    traj = read_trajectory_csv(args.traj)
    lam = args.lam if args.lam is not None else traj.lam
    if lam is None:
        raise SweepSolveError("trajectory CSV carries no lambda; pass --lam")
    traj = type(traj)(traj.times, traj.states, traj.images, traj.phis, lam, traj.stats)
    params = FarParameters(scenario.alpha_assumed, scenario.rho_assumed)
    kt = analysis.kappa_tilde(scenario)
    diag = analysis.diagnose_trajectory(traj, scenario, kt.value, params)
    payload = {"subcommand": "diagnose", "scenario_hash": digest, "seed": args.seed,
               "kappa_tilde": kt.value, "trajectory_csv": str(args.traj),
               **_diag_dict(diag)}
    dump_json(out_dir / "diagnose.json", payload)
    print(f"lambda={lam:g} phi_max={diag.phi_max:.6g} bound_ok={diag.bound_satisfied} "
          f"lipschitz_ok={diag.lipschitz_ok}")
    return EXIT_OK if diag.bound_satisfied and diag.lipschitz_ok else EXIT_BOUND_FAILED


def _run_estimate_set(args, scenario, digest, out_dir) -> int:
    radii = [float(v) for v in str(args.r).split(",") if v.strip()]
    if not radii:
        raise SweepSolveError("--r must list at least one radius")
    sampler = SamplerConfig(kind="grid", count=args.samples, seed=args.seed)
    spec = scenario.moving_set
    t_pairs = analysis.default_time_pairs(scenario.T)
    x_pairs = analysis.default_state_pairs(scenario.x0) if spec.state_dependent else []

    kappa_estimates = {}
    L_hat = 0.0
    for r in radii:
        k_r, L_r = analysis.estimate_kappa(spec, r, t_pairs, x_pairs, sampler,
                                           x_ref=scenario.x0)
        kappa_estimates[format(r, "g")] = k_r
        L_hat = max(L_hat, L_r)

    import math
    rho = scenario.rho_assumed if math.isfinite(scenario.rho_assumed) else 1.0
    inst0 = instantiate(spec, 0.0, scenario.x0)
    alpha_estimate = analysis.estimate_alpha(inst0, rho, args.alpha_samples, args.seed)

    dt = scenario.T / 10.0
    hausdorff_samples = []
    for r in radii:
        inst_a = instantiate(spec, 0.0, scenario.x0)
        inst_b = instantiate(spec, dt, scenario.x0)
        hausdorff_samples.append(
            {"r": r, "dt": dt,
             "value": analysis.truncated_hausdorff(inst_a, inst_b, r, sampler)})

    payload = {
        "subcommand": "estimate-set",
        "scenario_hash": digest,
        "seed": args.seed,
        "sampler": {"kind": sampler.kind, "count": sampler.count},
        "alpha_estimate": alpha_estimate,
        "alpha_tube_rho": rho,
        "alpha_samples": args.alpha_samples,
        "kappa_estimates": kappa_estimates,
        "L_hat": L_hat,
        "hausdorff_samples": hausdorff_samples,
    }
    dump_json(out_dir / "set_estimates.json", payload)
    print(f"alpha_estimate={alpha_estimate:.6g} L_hat={L_hat:.6g} "
          f"kappa={kappa_estimates}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
