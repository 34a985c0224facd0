"""Brute-force reference solvers used to pin down expected optimizer output.

Everything here deliberately avoids the closed forms and search shortcuts used
by the package: allocations come from refined grid enumeration on the simplex,
powers from dense feasibility grids, split assignments from exhaustive
enumeration.  Slow but trustworthy.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

from jamsplit import DeviceDecision, evaluate_device, system_rda
from jamsplit.metrics import split_workload
from jamsplit.qga import fitness as qga_fitness


def _positive_compositions(total: int, parts: int):
    """All length-``parts`` tuples of positive ints summing to ``total``."""
    for cuts in itertools.combinations(range(1, total), parts - 1):
        prev = 0
        out = []
        for c in cuts:
            out.append(c - prev)
            prev = c
        out.append(total - prev)
        yield tuple(out)


def simplex_grid_minimize(loads, capacity, coarse=14, refine_levels=9, refine_points=9):
    """Grid-search minimizer of sum(load_i / f_i) subject to sum(f) = capacity.

    Starts from a coarse simplex lattice and repeatedly re-grids a shrinking
    box around the incumbent (parameterizing the first n-1 shares, the last
    takes the remainder), which pushes the objective error far below what a
    single flat grid could afford.  Returns (allocation, objective).
    """
    loads = np.asarray(loads, dtype=float)
    n = loads.size
    if n == 1:
        return np.array([capacity]), float(loads[0] / capacity)

    def objective(shares):
        with np.errstate(divide="ignore"):
            return (loads / (capacity * shares)).sum(axis=-1)

    best_shares = None
    best_obj = math.inf
    for comp in _positive_compositions(coarse, n):
        shares = np.array(comp, dtype=float) / coarse
        obj = float(objective(shares))
        if obj < best_obj:
            best_obj = obj
            best_shares = shares

    half_width = 1.0 / coarse
    for _ in range(refine_levels):
        axes = [np.linspace(best_shares[i] - half_width, best_shares[i] + half_width,
                            refine_points) for i in range(n - 1)]
        mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n - 1)
        last = 1.0 - mesh.sum(axis=1)
        grid = np.concatenate([mesh, last[:, None]], axis=1)
        ok = (grid > 0.0).all(axis=1)
        grid = grid[ok]
        if grid.size:
            objs = objective(grid)
            i = int(np.argmin(objs))
            if objs[i] < best_obj:
                best_obj = float(objs[i])
                best_shares = grid[i]
        half_width *= 2.0 / (refine_points - 1)

    return capacity * best_shares, best_obj


def power_grid_max(scn, device, k, resolution=1e-5):
    """Largest grid power satisfying the accuracy floor and energy budget.

    Checks both constraints directly (logistic written out, no inversion, no
    root finding).  Returns None when no grid point is feasible.
    """
    dev = scn.devices[device]
    consts = scn.constants
    model = scn.accuracy_model
    bits = dev.profile.ifd_sizes[k]
    assert bits > 0.0
    load_device = split_workload(dev.profile, k)[0]
    e_local = consts.chip_coeff * load_device * dev.local_compute ** 2
    interference = scn.jammer.power * scn.channel.jammer_gain + scn.channel.noise_power
    gain = scn.channel.device_gains[device]

    grid = np.arange(resolution, consts.max_power + resolution / 2.0, resolution)
    phi = grid * gain / interference
    with np.errstate(over="ignore"):
        acc = model.amplitude[k] / (
            1.0 + np.exp(-model.slope[k] * (phi - model.midpoint[k]))
        ) + model.offset[k]
    with np.errstate(divide="ignore"):
        t_tx = bits / (dev.bandwidth * np.log2(1.0 + phi))
    energy = e_local + grid * t_tx
    feasible = (acc >= consts.acc_min - 1e-9) & (energy <= consts.energy_budget)
    if not feasible.any():
        return None
    return float(grid[np.nonzero(feasible)[0][-1]])


def exhaustive_partition_optimum(scn, powers, penalty_accuracy=1e6, penalty_energy=1e6):
    """Best penalized fitness over all split assignments, via the scalar path."""
    from jamsplit.subsolvers import allocate_edge_compute

    num_points = scn.devices[0].profile.num_points
    best = (-math.inf, None)
    for combo in itertools.product(range(num_points + 1), repeat=scn.n_devices):
        allocs = allocate_edge_compute(scn, combo)
        fit = qga_fitness(scn, combo, powers, allocs,
                          penalty_accuracy=penalty_accuracy,
                          penalty_energy=penalty_energy)
        if fit > best[0]:
            best = (fit, combo)
    return best


def single_device_rda_optimum(scn, p_resolution=1e-4):
    """Feasible-RDA maximum over (split, power grid) for a one-device scenario.

    The lone offloading device gets the whole edge capacity.  Returns the best
    RDA over all feasible (k, p) pairs; fully local needs no power choice.
    """
    assert scn.n_devices == 1
    consts = scn.constants
    num_points = scn.devices[0].profile.num_points
    best = -math.inf
    ev = system_rda(scn, [DeviceDecision(num_points, consts.max_power, 0.0)])
    if ev.feasible:
        best = ev.rda
    grid = np.arange(p_resolution, consts.max_power + p_resolution / 2.0, p_resolution)
    for k in range(num_points):
        for p in grid:
            m = evaluate_device(scn, 0, DeviceDecision(k, float(p), consts.edge_capacity))
            if m.accuracy_ok and m.energy_ok and m.rda_term > best:
                best = m.rda_term
    return best
