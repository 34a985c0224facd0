"""Alternating optimization over edge allocation, transmit power, and splits.

Starting from the safe fully-local point, each iteration refreshes the three
decision blocks in turn (capacity split, per-device power, split points via
the evolutionary search) and keeps a block's result only if the system RDA
does not drop.  The RDA trace is therefore nondecreasing, and the loop stops
once an iteration's relative improvement falls below tolerance.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import qga
from .metrics import DeviceDecision, DeviceMetrics, SystemEvaluation, system_rda
from .scenario import Scenario
from .seeds import derive_seed
from .subsolvers import STATUS_NOT_TRANSMITTING, allocate_edge_compute, solve_power


@dataclass(frozen=True)
class SolveOptions:
    max_iters: int = 50
    rel_tol: float = 1e-4
    qga: qga.QgaConfig = field(default_factory=qga.QgaConfig)

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.rel_tol < 0.0:
            raise ValueError("rel_tol must be nonnegative")


@dataclass(frozen=True)
class Solution:
    scheme: str
    partitions: tuple[int, ...]
    powers: tuple[float, ...]
    allocations: tuple[float, ...]
    rda: float
    per_device: tuple[DeviceMetrics, ...]
    feasible: bool
    iterations: int
    history: tuple[float, ...]
    diagnostics: tuple[str, ...] = ()

    @property
    def total_delay(self) -> float:
        return sum(m.total_delay for m in self.per_device)

    @property
    def avg_accuracy(self) -> float:
        return sum(m.accuracy for m in self.per_device) / len(self.per_device)

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "partitions": list(self.partitions),
            "powers": list(self.powers),
            "allocations": list(self.allocations),
            "rda": self.rda,
            "feasible": self.feasible,
            "iterations": self.iterations,
            "history": list(self.history),
            "per_device": [m.to_dict() for m in self.per_device],
            "diagnostics": list(self.diagnostics),
        }

    def save_json(self, path) -> None:
        with open(Path(path), "w") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _evaluate(scn: Scenario, partitions, powers, allocs) -> SystemEvaluation:
    decisions = [DeviceDecision(partition=int(k), power=powers[n], edge_alloc=allocs[n])
                 for n, k in enumerate(partitions)]
    return system_rda(scn, decisions)


def _diagnose(scn: Scenario, evaluation: SystemEvaluation, power_reports) -> list[str]:
    notes = []
    consts = scn.constants
    for n, m in enumerate(evaluation.per_device):
        if not m.accuracy_ok:
            notes.append(f"device {n}: accuracy {m.accuracy:.4f} below floor {consts.acc_min}")
        if not m.energy_ok:
            notes.append(f"device {n}: energy {m.total_energy:.4g} J over budget "
                         f"{consts.energy_budget} J")
    if not evaluation.capacity_ok:
        notes.append("edge capacity oversubscribed")
    if not evaluation.power_ok:
        notes.append("some offloading device has power outside (0, max_power]")
    for r in power_reports or []:
        if r.status not in (STATUS_NOT_TRANSMITTING, "optimal", "vacuous-accuracy"):
            notes.append(f"device {r.device}: power solve {r.status}")
    return notes


def solve(
    scn: Scenario,
    options: SolveOptions | None = None,
    *,
    initial: tuple | None = None,
    optimize_power: bool = True,
    partition_runner=None,
    scheme_name: str = "proposed",
) -> Solution:
    """Run the alternating optimization and return the best decisions found.

    ``initial`` optionally warm-starts (partitions, powers).  ``optimize_power``
    False skips the power block (powers stay at their initial values), and
    ``partition_runner`` swaps the split-point search (same call signature as
    qga.run); both hooks exist for the comparison schemes.
    """
    opts = options or SolveOptions()
    n = scn.n_devices
    num_points = scn.devices[0].profile.num_points

    partitions = [num_points] * n
    powers = [scn.constants.max_power] * n
    if initial is not None:
        init_k, init_p = initial
        if len(init_k) != n or len(init_p) != n:
            raise ValueError("initial point must provide one partition and power per device")
        partitions = [int(k) for k in init_k]
        powers = [float(p) for p in init_p]
    allocs = allocate_edge_compute(scn, partitions)

    runner = partition_runner or qga.run
    best = _evaluate(scn, partitions, powers, allocs)
    rda = best.rda
    history: list[float] = []
    reports = None
    iterations = 0

    for it in range(1, opts.max_iters + 1):
        iterations = it
        prev = rda

        cand_allocs = allocate_edge_compute(scn, partitions)
        ev = _evaluate(scn, partitions, powers, cand_allocs)
        if ev.rda >= rda:
            allocs, best, rda = cand_allocs, ev, ev.rda

        if optimize_power:
            cand_powers, reports = solve_power(scn, partitions, current=powers)
            ev = _evaluate(scn, partitions, cand_powers, allocs)
            if ev.rda >= rda:
                powers, best, rda = cand_powers, ev, ev.rda

        iter_cfg = replace(opts.qga, seed=derive_seed(opts.qga.seed, it))
        result = runner(scn, powers, iter_cfg, initial=partitions)
        cand_k = list(result.partitions)
        cand_allocs = allocate_edge_compute(scn, cand_k)
        ev = _evaluate(scn, cand_k, powers, cand_allocs)
        if ev.rda >= rda:
            partitions, allocs, best, rda = cand_k, cand_allocs, ev, ev.rda

        history.append(rda)
        improvement = rda - prev
        if improvement < opts.rel_tol * max(1.0, abs(prev)):
            break

    diagnostics = () if best.feasible else tuple(_diagnose(scn, best, reports))
    return Solution(
        scheme=scheme_name,
        partitions=tuple(int(k) for k in partitions),
        powers=tuple(float(p) for p in powers),
        allocations=tuple(float(f) for f in allocs),
        rda=best.rda,
        per_device=best.per_device,
        feasible=best.feasible,
        iterations=iterations,
        history=tuple(history),
        diagnostics=diagnostics,
    )
