"""Command-line front end: solve, sweep, fit-accuracy, and profile-info.

Exit codes: 0 on success, 1 on any validation or usage error, 2 when a solve
completes but reports the scenario globally infeasible.  The literal config
path ``default`` resolves to the packaged default configuration.  Sweep cells
can run in parallel processes via the JAMSPLIT_WORKERS environment variable.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .accuracy import fit as fit_accuracy_params
from .accuracy import load_samples_csv
from .ao import SolveOptions
from .baselines import SCHEMES, solve_scheme
from .configs import default_config_path
from .experiments import (DEFAULT_SWEEP_VALUES, SWEEP_PARAMETERS, SweepSpec,
                          render_plots, run_sweep, write_csv, write_manifest)
from .metrics import split_workload
from .qga import QgaConfig
from .scenario import ConfigError, scenario_from_config
from .seeds import derive_seed

_SCHEME_INDEX = {name: i for i, name in enumerate(SCHEMES)}


def _load_config(path_arg: str) -> dict:
    path = default_config_path() if path_arg == "default" else Path(path_arg)
    if not path.exists():
        raise ConfigError(f"config: no such file: {path}")
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config: invalid JSON ({exc})") from exc


def _cmd_solve(args) -> int:
    cfg = _load_config(args.config)
    if args.seed is not None:
        cfg["seed"] = args.seed
    scn = scenario_from_config(cfg)
    options = SolveOptions(
        qga=QgaConfig(seed=derive_seed(scn.seed, _SCHEME_INDEX[args.scheme])))
    sol = solve_scheme(args.scheme, scn, options)
    sol.save_json(args.out)
    print(f"scheme={sol.scheme} rda={sol.rda:.6f} feasible={sol.feasible} "
          f"partitions={list(sol.partitions)} -> {args.out}")
    if not sol.feasible:
        for note in sol.diagnostics:
            print(f"  {note}", file=sys.stderr)
        return 2
    return 0


def _cmd_sweep(args) -> int:
    cfg = _load_config(args.config)
    schemes = tuple(s.strip() for s in args.schemes.split(",") if s.strip())
    values = tuple(sorted(args.values)) if args.values else DEFAULT_SWEEP_VALUES[args.param]
    master = args.seed if args.seed is not None else int(cfg.get("seed", 0))
    spec = SweepSpec(
        parameter=args.param,
        values=values,
        n_scenarios=args.reps,
        schemes=schemes,
        base_config=cfg,
        master_seed=master,
    )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    result = run_sweep(spec)
    write_csv(result, out_dir / "sweep.csv", include_timing=args.timing)
    write_manifest(spec, out_dir / "manifest.json")
    written = [out_dir / "sweep.csv", out_dir / "manifest.json"]
    if args.plots:
        written += render_plots(result, out_dir)
    print(f"{len(result.rows)} rows -> " + ", ".join(str(p) for p in written))
    return 0


def _cmd_fit_accuracy(args) -> int:
    samples = load_samples_csv(args.samples)
    result = fit_accuracy_params(samples, args.k)
    payload = {
        "k": args.k,
        "amplitude": result.amplitude,
        "slope": result.slope,
        "midpoint": result.midpoint,
        "offset": result.offset,
        "rmse": result.rmse,
    }
    with open(args.out, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"k={args.k} amplitude={result.amplitude:.4f} slope={result.slope:.4f} "
          f"midpoint={result.midpoint:.4f} offset={result.offset:.4f} "
          f"rmse={result.rmse:.5f} -> {args.out}")
    return 0


def _cmd_profile_info(args) -> int:
    cfg = _load_config(args.config)
    scn = scenario_from_config(cfg)
    profile = scn.devices[0].profile
    print(f"{'split':>5} {'segment_cycles':>15} {'device_cycles':>15} "
          f"{'edge_cycles':>15} {'ifd_bits':>10}")
    for k in range(profile.num_points + 1):
        device, edge = split_workload(profile, k)
        print(f"{k:>5} {profile.layer_workloads[k]:>15.0f} {device:>15.0f} "
              f"{edge:>15.0f} {profile.ifd_sizes[k]:>10.0f}")
    print(f"total workload: {profile.total_workload:.0f} cycles; "
          f"{scn.n_devices} devices")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jamsplit",
        description="Split-inference optimization under jamming: solvers, sweeps, fitting.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one scenario with one scheme")
    p_solve.add_argument("--config", required=True,
                         help="scenario config JSON path, or 'default'")
    p_solve.add_argument("--seed", type=int, default=None,
                         help="override the config seed")
    p_solve.add_argument("--scheme", default="proposed", choices=SCHEMES)
    p_solve.add_argument("--out", default="solution.json")

    p_sweep = sub.add_parser("sweep", help="run a seeded parameter sweep")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--param", required=True, choices=SWEEP_PARAMETERS)
    p_sweep.add_argument("--values", type=float, nargs="+", default=None)
    p_sweep.add_argument("--reps", type=int, default=10)
    p_sweep.add_argument("--schemes", default=",".join(SCHEMES))
    p_sweep.add_argument("--out-dir", required=True)
    p_sweep.add_argument("--plots", action="store_true")
    p_sweep.add_argument("--timing", action="store_true",
                         help="include the nonreproducible wall_time column")
    p_sweep.add_argument("--seed", type=int, default=None,
                         help="master seed (defaults to the config seed)")

    p_fit = sub.add_parser("fit-accuracy", help="fit logistic accuracy parameters")
    p_fit.add_argument("--samples", required=True, help="CSV with k,sinr,accuracy columns")
    p_fit.add_argument("--k", type=int, required=True)
    p_fit.add_argument("--out", default="params.json")

    p_info = sub.add_parser("profile-info", help="print the model profile table")
    p_info.add_argument("--config", required=True)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help and 2 for usage errors; fold the latter
        # into the validation exit code.
        return 0 if exc.code == 0 else 1
    handlers = {
        "solve": _cmd_solve,
        "sweep": _cmd_sweep,
        "fit-accuracy": _cmd_fit_accuracy,
        "profile-info": _cmd_profile_info,
    }
    try:
        return handlers[args.command](args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
