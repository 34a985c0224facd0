#!/usr/bin/env python3
"""Run both default trend studies and drop all artifacts under one directory.

For each swept parameter (device compute capability, jammer transmit power)
this solves every scheme on seeded scenario replicates, then writes per-sweep
results.csv, manifest.json, and SVG charts, and prints a mean +/- SE summary
of the system RDA per scheme and sweep point.

Typical use:

    python scripts/run_sweeps.py --out-dir results
    python scripts/run_sweeps.py --reps 20 --workers 4
"""
import argparse
import sys
import time
from pathlib import Path

from jamsplit.configs import default_config
from jamsplit.experiments import (
    SWEEP_PARAMETERS,
    aggregate,
    default_sweep_spec,
    render_plots,
    run_sweep,
    write_csv,
    write_manifest,
)


def summarize(result) -> str:
    lines = []
    agg = aggregate(result)
    values = result.spec.values
    schemes = result.spec.schemes
    header = f"{'value':>12} | " + " | ".join(f"{s:>18}" for s in schemes)
    lines.append(header)
    lines.append("-" * len(header))
    by_cell = {(a.value, a.scheme): a for a in agg}
    for v in values:
        cells = []
        for s in schemes:
            a = by_cell.get((v, s))
            cells.append(f"{a.mean_rda:9.4f} +-{a.se_rda:6.4f}" if a else " " * 18)
        lines.append(f"{v:>12g} | " + " | ".join(cells))
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out-dir", default="results",
                        help="directory receiving one subdirectory per sweep")
    parser.add_argument("--param", choices=SWEEP_PARAMETERS, default=None,
                        help="run only this sweep (default: both)")
    parser.add_argument("--reps", type=int, default=10,
                        help="scenario replicates per sweep point")
    parser.add_argument("--master-seed", type=int, default=0)
    parser.add_argument("--workers", type=int, default=None,
                        help="parallel worker processes for sweep cells")
    parser.add_argument("--timing", action="store_true",
                        help="include the nonreproducible wall_time CSV column")
    parser.add_argument("--no-plots", action="store_true")
    args = parser.parse_args(argv)

    parameters = (args.param,) if args.param else SWEEP_PARAMETERS
    out_root = Path(args.out_dir)
    for parameter in parameters:
        spec = default_sweep_spec(parameter, default_config(),
                                  n_scenarios=args.reps,
                                  master_seed=args.master_seed)
        out_dir = out_root / parameter
        out_dir.mkdir(parents=True, exist_ok=True)
        started = time.perf_counter()
        result = run_sweep(spec, workers=args.workers)
        elapsed = time.perf_counter() - started
        write_csv(result, out_dir / "results.csv", include_timing=args.timing)
        write_manifest(spec, out_dir / "manifest.json",
                       extra={"rows": len(result.rows)})
        if not args.no_plots:
            render_plots(result, out_dir)
        print(f"\n== {parameter}: {len(result.rows)} rows in {elapsed:.1f}s "
              f"-> {out_dir}")
        print(summarize(result))
    return 0


if __name__ == "__main__":
    sys.exit(main())
