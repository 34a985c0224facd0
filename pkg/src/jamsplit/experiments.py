"""Seeded parameter sweeps over scenarios with CSV, SVG, and manifest output.

A sweep fixes a base scenario config, varies one system parameter over a value
grid, and solves several schemes on freshly generated scenario replicates per
value.  Replicate seeds come from a splittable hash of (master seed, replicate
index) shared across the whole value grid, so each replicate is a paired
comparison along the sweep, extending the grid never changes existing rows,
and every artifact is byte-reproducible.
"""
from __future__ import annotations

import copy
import csv
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from ._version import __version__
from .ao import SolveOptions
from .baselines import SCHEMES, solve_scheme
from .qga import QgaConfig
from .scenario import Scenario, scenario_from_config
from .seeds import derive_seed

log = logging.getLogger(__name__)

WORKERS_ENV = "JAMSPLIT_WORKERS"

SWEEP_PARAMETERS = ("device_compute", "jammer_power")
DEFAULT_SWEEP_VALUES = {
    "device_compute": tuple(g * 1e9 for g in (1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0)),
    "jammer_power": (0.0, 0.25, 0.5, 1.0, 1.5, 2.0),
}

_CSV_COLUMNS = ("parameter", "value", "scenario", "seed", "scheme", "rda",
                "total_delay", "avg_accuracy", "feasible")
# Wall time is measured and kept in memory but only written on request:
# timing is inherently nonreproducible and would break byte-identical CSVs.
_TIMING_COLUMN = "wall_time"

_SCHEME_INDEX = {name: i for i, name in enumerate(SCHEMES)}


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    values: tuple[float, ...]
    n_scenarios: int
    schemes: tuple[str, ...]
    base_config: dict
    master_seed: int = 0
    solver: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.parameter not in SWEEP_PARAMETERS:
            raise ValueError(f"parameter must be one of {SWEEP_PARAMETERS}")
        values = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if not values:
            raise ValueError("values must be nonempty")
        if list(values) != sorted(values):
            raise ValueError("values must be sorted ascending")
        if self.n_scenarios < 1:
            raise ValueError("n_scenarios must be at least 1")
        schemes = tuple(self.schemes)
        object.__setattr__(self, "schemes", schemes)
        if not schemes:
            raise ValueError("schemes must be nonempty")
        for s in schemes:
            if s not in SCHEMES:
                raise ValueError(f"unknown scheme {s!r}; expected one of {SCHEMES}")
        if self.master_seed < 0:
            raise ValueError("master_seed must be nonnegative")


@dataclass(frozen=True)
class SweepRow:
    parameter: str
    value: float
    scenario: int
    seed: int
    scheme: str
    rda: float
    total_delay: float
    avg_accuracy: float
    feasible: bool
    wall_time: float


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    rows: tuple[SweepRow, ...]


@dataclass(frozen=True)
class AggregateRow:
    parameter: str
    value: float
    scheme: str
    n: int
    mean_rda: float
    se_rda: float
    mean_delay: float
    se_delay: float
    mean_accuracy: float
    se_accuracy: float


def default_sweep_spec(parameter: str, base_config: dict, *, values=None,
                       n_scenarios: int = 10, schemes=SCHEMES,
                       master_seed: int = 0, solver: dict | None = None) -> SweepSpec:
    return SweepSpec(
        parameter=parameter,
        values=tuple(values) if values is not None else DEFAULT_SWEEP_VALUES[parameter],
        n_scenarios=n_scenarios,
        schemes=tuple(schemes),
        base_config=base_config,
        master_seed=master_seed,
        solver=dict(solver or {}),
    )


def replicate_seed(master_seed: int, replicate: int) -> int:
    """Scenario seed for one replicate, shared by every sweep value.

    Keeping the value index out of the hash pairs the comparison across
    sweep values: the same replicate sees the same device placement at every
    point, so a scheme that ignores the swept parameter (LC under jamming)
    produces identical rows.  Adding sweep values never perturbs existing
    rows either way, since the override is applied after the draw.
    """
    return derive_seed(master_seed, replicate)


def scenario_for_cell(spec: SweepSpec, value_index: int, replicate: int) -> Scenario:
    """Build the scenario a sweep cell solves: seeded replicate with the
    swept parameter overridden in the base config."""
    cfg = copy.deepcopy(spec.base_config)
    cfg["seed"] = replicate_seed(spec.master_seed, replicate)
    value = spec.values[value_index]
    if spec.parameter == "device_compute":
        if isinstance(cfg.get("devices"), list):
            for dev in cfg["devices"]:
                dev["compute"] = value
        elif isinstance(cfg.get("devices"), dict):
            cfg["devices"]["compute"] = value
    else:  # jammer_power
        cfg.setdefault("jammer", {})
        cfg["jammer"]["power"] = value
    return scenario_from_config(cfg)


def _solve_options(spec: SweepSpec, cell_seed: int, scheme: str) -> SolveOptions:
    solver = spec.solver
    qga_kwargs = dict(solver.get("qga", {}))
    qga_kwargs["seed"] = derive_seed(cell_seed, _SCHEME_INDEX[scheme])
    return SolveOptions(
        max_iters=int(solver.get("max_iters", 50)),
        rel_tol=float(solver.get("rel_tol", 1e-4)),
        qga=QgaConfig(**qga_kwargs),
    )


def _solve_cell(args) -> list[SweepRow]:
    spec, value_index, replicate = args
    scn = scenario_for_cell(spec, value_index, replicate)
    cell_seed = scn.seed
    rows = []
    for scheme in spec.schemes:
        started = time.perf_counter()
        try:
            sol = solve_scheme(scheme, scn, _solve_options(spec, cell_seed, scheme))
            rda, delay, acc, feasible = sol.rda, sol.total_delay, sol.avg_accuracy, sol.feasible
        except Exception:
            log.exception("scheme %s failed on cell (%d, %d); recording NaNs",
                          scheme, value_index, replicate)
            rda = delay = acc = math.nan
            feasible = False
        rows.append(SweepRow(
            parameter=spec.parameter,
            value=spec.values[value_index],
            scenario=replicate,
            seed=cell_seed,
            scheme=scheme,
            rda=rda,
            total_delay=delay,
            avg_accuracy=acc,
            feasible=feasible,
            wall_time=time.perf_counter() - started,
        ))
    return rows


def run_sweep(spec: SweepSpec, workers: int | None = None) -> SweepResult:
    """Solve every (value, replicate, scheme) cell of the sweep.

    ``workers`` (or the JAMSPLIT_WORKERS environment variable) enables
    process-parallel cells; rows are always assembled in deterministic
    (value, replicate, scheme) order regardless of completion order.
    """
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1"))
    cells = [(spec, vi, ri) for vi in range(len(spec.values))
             for ri in range(spec.n_scenarios)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_cell = list(pool.map(_solve_cell, cells))
    else:
        per_cell = [_solve_cell(c) for c in cells]
    rows = [row for cell_rows in per_cell for row in cell_rows]
    return SweepResult(spec=spec, rows=tuple(rows))


def _format(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(result: SweepResult, path, include_timing: bool = False) -> None:
    """Write sweep rows as RFC-4180 CSV with full-precision floats.

    Float fields use shortest round-trip formatting, so re-parsing reproduces
    them exactly.  Timing is excluded unless asked for, keeping default output
    byte-identical across reruns.
    """
    columns = _CSV_COLUMNS + ((_TIMING_COLUMN,) if include_timing else ())
    with open(Path(path), "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in result.rows:
            record = [row.parameter, _format(row.value), row.scenario, row.seed,
                      row.scheme, _format(row.rda), _format(row.total_delay),
                      _format(row.avg_accuracy), _format(row.feasible)]
            if include_timing:
                record.append(_format(row.wall_time))
            writer.writerow(record)


def read_csv(path) -> list[SweepRow]:
    """Parse rows written by write_csv back into SweepRow records."""
    rows = []
    with open(Path(path), newline="") as fh:
        reader = csv.DictReader(fh)
        for rec in reader:
            rows.append(SweepRow(
                parameter=rec["parameter"],
                value=float(rec["value"]),
                scenario=int(rec["scenario"]),
                seed=int(rec["seed"]),
                scheme=rec["scheme"],
                rda=float(rec["rda"]),
                total_delay=float(rec["total_delay"]),
                avg_accuracy=float(rec["avg_accuracy"]),
                feasible=rec["feasible"] == "true",
                wall_time=float(rec[_TIMING_COLUMN]) if _TIMING_COLUMN in rec else math.nan,
            ))
    return rows


def aggregate(result: SweepResult) -> list[AggregateRow]:
    """Per (value, scheme) means and standard errors across replicates."""
    groups: dict[tuple[float, str], list[SweepRow]] = {}
    for row in result.rows:
        groups.setdefault((row.value, row.scheme), []).append(row)

    def mean_se(xs):
        n = len(xs)
        mean = sum(xs) / n
        if n < 2:
            return mean, 0.0
        var = sum((x - mean) ** 2 for x in xs) / (n - 1)
        return mean, math.sqrt(var / n)

    out = []
    for value in result.spec.values:
        for scheme in result.spec.schemes:
            rows = groups.get((value, scheme), [])
            if not rows:
                continue
            m_rda, se_rda = mean_se([r.rda for r in rows])
            m_del, se_del = mean_se([r.total_delay for r in rows])
            m_acc, se_acc = mean_se([r.avg_accuracy for r in rows])
            out.append(AggregateRow(
                parameter=result.spec.parameter, value=value, scheme=scheme,
                n=len(rows), mean_rda=m_rda, se_rda=se_rda, mean_delay=m_del,
                se_delay=se_del, mean_accuracy=m_acc, se_accuracy=se_acc,
            ))
    return out


_METRIC_LABELS = {
    "rda": "system RDA",
    "total_delay": "total delay (s)",
    "avg_accuracy": "average accuracy",
}
_PARAM_LABELS = {
    "device_compute": "device compute (cycles/s)",
    "jammer_power": "jammer power (W)",
}


def render_plots(result: SweepResult, out_dir) -> list[Path]:
    """One SVG line chart per metric, mean across replicates per scheme."""
    import matplotlib
    matplotlib.use("Agg", force=True)
    import matplotlib.pyplot as plt

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    agg = aggregate(result)
    mean_attr = {"rda": "mean_rda", "total_delay": "mean_delay",
                 "avg_accuracy": "mean_accuracy"}
    paths = []
    for metric in ("rda", "total_delay", "avg_accuracy"):
        fig, axis = plt.subplots(figsize=(6.0, 4.0))
        for scheme in result.spec.schemes:
            points = [(a.value, getattr(a, mean_attr[metric]))
                      for a in agg if a.scheme == scheme]
            if not points:
                continue
            xs, ys = zip(*points)
            axis.plot(xs, ys, marker="o", label=scheme)
        axis.set_xlabel(_PARAM_LABELS[result.spec.parameter])
        axis.set_ylabel(_METRIC_LABELS[metric])
        axis.grid(True, alpha=0.3)
        axis.legend()
        fig.tight_layout()
        target = out_dir / f"{metric}.svg"
        fig.savefig(target, format="svg")
        plt.close(fig)
        paths.append(target)
    return paths


def write_manifest(spec: SweepSpec, path, extra: dict | None = None) -> None:
    """Record the resolved sweep spec and code version next to the artifacts."""
    import json

    payload = {
        "parameter": spec.parameter,
        "values": list(spec.values),
        "n_scenarios": spec.n_scenarios,
        "schemes": list(spec.schemes),
        "master_seed": spec.master_seed,
        "solver": spec.solver,
        "base_config": spec.base_config,
        "version": __version__,
    }
    if extra:
        payload.update(extra)
    with open(Path(path), "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
