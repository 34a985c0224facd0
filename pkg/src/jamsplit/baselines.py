"""Comparison schemes: local-only, edge-only, fixed-power, and classical GA.

All four reuse the same metric definitions and, where applicable, the same
alternating loop as the proposed scheme, so differences in reported RDA come
from the decision policy alone.
"""
from __future__ import annotations

import math

import numpy as np

from . import ao, qga
from .metrics import DeviceDecision, system_rda
from .scenario import Scenario
from .subsolvers import allocate_edge_compute, solve_power

SCHEMES = ("proposed", "lc", "esc", "ftp", "ga")


def solve_lc(scn: Scenario) -> ao.Solution:
    """Everything computed on the devices; nothing transmitted.

    Independent of the jammer and of every channel quantity, which makes it
    the natural robustness floor.
    """
    n = scn.n_devices
    num_points = scn.devices[0].profile.num_points
    partitions = [num_points] * n
    powers = [scn.constants.max_power] * n
    allocs = [0.0] * n
    ev = system_rda(scn, [DeviceDecision(num_points, powers[i], 0.0) for i in range(n)])
    return ao.Solution(
        scheme="lc",
        partitions=tuple(partitions),
        powers=tuple(powers),
        allocations=tuple(allocs),
        rda=ev.rda,
        per_device=ev.per_device,
        feasible=ev.feasible,
        iterations=0,
        history=(ev.rda,),
    )


def solve_esc(scn: Scenario) -> ao.Solution:
    """Full offload for everyone: raw inputs shipped, all layers on the edge.

    Capacity follows the closed-form split and powers are optimized once; with
    the split pinned at zero nothing else changes across iterations.
    """
    n = scn.n_devices
    partitions = [0] * n
    allocs = allocate_edge_compute(scn, partitions)
    powers, reports = solve_power(scn, partitions)
    ev = system_rda(scn, [DeviceDecision(0, powers[i], allocs[i]) for i in range(n)])
    diagnostics = () if ev.feasible else tuple(ao._diagnose(scn, ev, reports))
    return ao.Solution(
        scheme="esc",
        partitions=tuple(partitions),
        powers=tuple(powers),
        allocations=tuple(allocs),
        rda=ev.rda,
        per_device=ev.per_device,
        feasible=ev.feasible,
        iterations=1,
        history=(ev.rda,),
        diagnostics=diagnostics,
    )


def solve_ftp(scn: Scenario, options: ao.SolveOptions | None = None,
              fixed_power: float | None = None) -> ao.Solution:
    """The alternating loop with the power block disabled.

    Every device transmits at ``fixed_power`` (max_power by default) whenever
    it transmits at all; splits and the capacity share are still optimized.
    """
    p = scn.constants.max_power if fixed_power is None else float(fixed_power)
    if p <= 0.0:
        raise ValueError("fixed_power must be positive")
    n = scn.n_devices
    num_points = scn.devices[0].profile.num_points
    sol = ao.solve(
        scn,
        options,
        initial=([num_points] * n, [p] * n),
        optimize_power=False,
        scheme_name="ftp",
    )
    return sol


def run_classical_ga(scn: Scenario, powers, config: qga.QgaConfig,
                     initial=None) -> qga.QgaResult:
    """Plain binary GA over the same encoding and fitness as the qubit search.

    Roulette-wheel selection on shifted fitness, single-point bit crossover,
    per-bit flip mutation, and elitist reinsertion of the best string.  As in
    the qubit search, ``initial`` optionally seeds the elitist record (and one
    population slot) with an incumbent assignment.  The rotation angles in
    ``config`` are ignored.  Result.state is None.
    """
    n = scn.n_devices
    num_points = scn.devices[0].profile.num_points
    m = qga.bits_per_device(num_points)
    j = n * m
    rng = np.random.default_rng(config.seed)
    evaluator = qga.PopulationEvaluator(scn, powers,
                                        penalty_accuracy=config.penalty_accuracy,
                                        penalty_energy=config.penalty_energy)

    pop = rng.integers(0, 2, size=(config.population, j), dtype=np.int8)
    best_bits = None
    best_fit = -math.inf
    best_parts = None
    if initial is not None:
        best_parts = np.asarray(initial, dtype=int)
        best_fit = float(evaluator.evaluate(best_parts)[0][0])
        best_bits = qga.encode(best_parts, num_points)
        pop[0] = best_bits
    trace = []
    for gen in range(config.generations):
        kmat = qga.decode(pop, n, num_points)
        fit, feas = evaluator.evaluate(kmat)
        i_best = int(np.argmax(fit))
        if fit[i_best] > best_fit:
            best_fit = float(fit[i_best])
            best_bits = pop[i_best].copy()
            best_parts = kmat[i_best].copy()
        trace.append(qga.GenerationStats(generation=gen, best_fitness=best_fit,
                                         mean_fitness=float(fit.mean()),
                                         feasible_fraction=float(feas.mean())))
        # Fitness-proportional selection; roulette weights must be positive, so
        # populations containing nonpositive (penalized) fitness are shifted by
        # their worst finite value before normalizing.
        finite = np.isfinite(fit)
        if finite.all() and fit.min() > 0.0:
            weights = fit.astype(float)
        else:
            floor = float(np.nanmin(np.where(finite, fit, np.nan))) if finite.any() else 0.0
            weights = np.where(finite, fit - floor, 0.0) + 1e-12
        probs = weights / weights.sum()
        parents = rng.choice(config.population, size=config.population, p=probs)
        pop = pop[parents].copy()
        for a, b in zip(range(0, config.population - 1, 2),
                        range(1, config.population, 2)):
            u = rng.random()
            if u < config.crossover_prob and j > 1:
                cut = int(rng.integers(1, j))
                tmp = pop[a, cut:].copy()
                pop[a, cut:] = pop[b, cut:]
                pop[b, cut:] = tmp
        flips = rng.random(pop.shape) < config.mutation_prob
        pop = np.where(flips, 1 - pop, pop).astype(np.int8)
        if best_bits is not None:
            pop[0] = best_bits  # elitism
    if best_parts is None:
        local = np.full(n, num_points, dtype=int)
        allocs = allocate_edge_compute(scn, local)
        best_parts = local
        best_fit = qga.fitness(scn, local, powers, allocs,
                               penalty_accuracy=config.penalty_accuracy,
                               penalty_energy=config.penalty_energy)
    return qga.QgaResult(
        partitions=tuple(int(k) for k in best_parts),
        fitness=float(best_fit),
        trace=tuple(trace),
        state=None,
    )


def solve_ga(scn: Scenario, options: ao.SolveOptions | None = None) -> ao.Solution:
    """The alternating loop with the split search swapped for the classical GA."""
    return ao.solve(scn, options, partition_runner=run_classical_ga, scheme_name="ga")


def solve_scheme(name: str, scn: Scenario, options: ao.SolveOptions | None = None,
                 *, fixed_power: float | None = None) -> ao.Solution:
    """Dispatch a scheme by name; see SCHEMES for the valid identifiers."""
    if name == "proposed":
        return ao.solve(scn, options)
    if name == "lc":
        return solve_lc(scn)
    if name == "esc":
        return solve_esc(scn)
    if name == "ftp":
        return solve_ftp(scn, options, fixed_power=fixed_power)
    if name == "ga":
        return solve_ga(scn, options)
    raise ValueError(f"unknown scheme {name!r}; expected one of {SCHEMES}")
