"""Per-block solvers: edge compute allocation and transmit power selection.

Both blocks admit cheap exact treatment.  With split points fixed, the edge
capacity split that minimizes total edge delay weights devices by the square
root of their offloaded cycles.  With splits fixed, each device's best power
is the largest one that still satisfies its accuracy floor and energy budget,
found by bracketing and bisecting a concave energy-slack function.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .accuracy import min_sinr_for_accuracy
from .metrics import split_workload
from .scenario import Scenario

STATUS_OPTIMAL = "optimal"
STATUS_VACUOUS_ACCURACY = "vacuous-accuracy"
STATUS_INFEASIBLE_ACCURACY = "infeasible-accuracy"
STATUS_INFEASIBLE_ENERGY = "infeasible-energy"
STATUS_NOT_TRANSMITTING = "not-transmitting"

_BISECT_TOL = 1e-9  # W
_BRACKET_INIT = 1e-6  # W
_BRACKET_CAP = 1e12  # W; beyond this the energy root is reported as +inf


@dataclass(frozen=True)
class PowerSolveReport:
    device: int
    status: str
    p_lo: float
    p_energy_root: float
    p_star: float


def allocate_capacity(edge_workloads, capacity: float):
    """Split ``capacity`` across entries proportionally to sqrt(workload).

    Entries with zero edge workload receive zero.  Returns all zeros when
    nothing is offloaded.  This is the unique minimizer of the summed edge
    delays under the shared-capacity constraint.
    """
    loads = np.asarray(edge_workloads, dtype=float)
    if np.any(loads < 0.0):
        raise ValueError("edge workloads must be nonnegative")
    roots = np.sqrt(loads)
    denom = roots.sum()
    if denom == 0.0:
        return [0.0] * loads.size
    return [float(v) for v in capacity * roots / denom]


def allocate_edge_compute(scn: Scenario, partitions) -> list[float]:
    """Closed-form edge capacity split for the given per-device split points."""
    partitions = list(partitions)
    if len(partitions) != scn.n_devices:
        raise ValueError(f"expected {scn.n_devices} partitions, got {len(partitions)}")
    edge_loads = [split_workload(scn.devices[n].profile, k)[1]
                  for n, k in enumerate(partitions)]
    return allocate_capacity(edge_loads, scn.constants.edge_capacity)


def kkt_residual(scn: Scenario, partitions, alloc) -> float:
    """Relative spread of the stationarity multipliers across offloading devices.

    At the optimum, weight * edge_load / (max_delay * alloc^2) is one shared
    constant; the residual is (max - min) / max over offloading devices, zero
    when at most one device offloads.
    """
    partitions = list(partitions)
    alloc = list(alloc)
    if len(partitions) != scn.n_devices or len(alloc) != scn.n_devices:
        raise ValueError("partitions and alloc must have one entry per device")
    consts = scn.constants
    vals = []
    for n, k in enumerate(partitions):
        load_edge = split_workload(scn.devices[n].profile, k)[1]
        if load_edge == 0.0:
            continue
        if alloc[n] <= 0.0:
            raise ValueError(f"device {n} offloads but has no edge allocation")
        vals.append(consts.weight * load_edge / (consts.max_delay * alloc[n] ** 2))
    if len(vals) <= 1:
        return 0.0
    top = max(vals)
    return (top - min(vals)) / top


def solve_device_power(
    *,
    ifd_bits: float,
    bandwidth: float,
    device_gain: float,
    interference: float,
    energy_headroom: float,
    sinr_floor: float,
    max_power: float,
) -> tuple[float | None, float, float, str]:
    """Largest feasible transmit power for one offloading device.

    ``interference`` is the jammer-plus-noise power at the receiver and
    ``energy_headroom`` the energy budget left after local computation.  The
    energy slack  headroom * B * log2(1 + p g / I) - p * S  is concave in p
    and zero at p = 0, so its positive root (if any) caps the power; the
    accuracy floor translates to a minimum power via the SINR floor.

    Returns (power or None, p_lo, p_energy_root, status).
    """
    if ifd_bits <= 0.0:
        raise ValueError("solve_device_power expects a transmitting device")

    if math.isinf(sinr_floor) and sinr_floor < 0:
        p_lo = 0.0
        vacuous = True
    elif math.isinf(sinr_floor):
        p_lo = math.inf
        vacuous = False
    else:
        p_lo = max(0.0, sinr_floor * interference / device_gain)
        vacuous = False

    if energy_headroom < 0.0:
        return None, p_lo, math.nan, STATUS_INFEASIBLE_ENERGY

    gain_ratio = device_gain / interference

    def slack(p: float) -> float:
        return energy_headroom * bandwidth * math.log2(1.0 + p * gain_ratio) - p * ifd_bits

    # Initial slope: headroom * B * g / (I ln 2) - S.  Nonpositive means the
    # slack never goes positive and only p = 0 satisfies the budget.
    if energy_headroom * bandwidth * gain_ratio / math.log(2.0) - ifd_bits <= 0.0:
        return None, p_lo, math.nan, STATUS_INFEASIBLE_ENERGY

    lo, hi = 0.0, _BRACKET_INIT
    root = math.inf
    while slack(hi) > 0.0:
        lo = hi
        hi *= 2.0
        if hi > _BRACKET_CAP:
            break
    else:
        while hi - lo > _BISECT_TOL:
            mid = 0.5 * (lo + hi)
            if slack(mid) >= 0.0:
                lo = mid
            else:
                hi = mid
        root = lo  # slack(root) >= 0 by construction

    p_star = min(max_power, root)
    if p_lo <= p_star and p_star > 0.0:
        status = STATUS_VACUOUS_ACCURACY if vacuous else STATUS_OPTIMAL
        return p_star, p_lo, root, status
    return None, p_lo, root, STATUS_INFEASIBLE_ACCURACY


def solve_power(scn: Scenario, partitions, current=None) -> tuple[list[float], list[PowerSolveReport]]:
    """Per-device power maximization given fixed split points.

    Devices that send nothing keep their current power untouched; devices
    whose constraints cannot be met also keep it and are flagged in their
    report.  ``current`` defaults to max_power everywhere.
    """
    partitions = list(partitions)
    if len(partitions) != scn.n_devices:
        raise ValueError(f"expected {scn.n_devices} partitions, got {len(partitions)}")
    if current is None:
        powers = [scn.constants.max_power] * scn.n_devices
    else:
        powers = [float(p) for p in current]
        if len(powers) != scn.n_devices:
            raise ValueError("current powers must have one entry per device")

    consts = scn.constants
    interference = scn.jammer.power * scn.channel.jammer_gain + scn.channel.noise_power
    reports = []
    for n, k in enumerate(partitions):
        dev = scn.devices[n]
        bits = dev.profile.ifd_sizes[k]
        if bits <= 0.0:
            reports.append(PowerSolveReport(device=n, status=STATUS_NOT_TRANSMITTING,
                                            p_lo=0.0, p_energy_root=math.nan,
                                            p_star=powers[n]))
            continue
        load_device = split_workload(dev.profile, k)[0]
        headroom = consts.energy_budget - consts.chip_coeff * load_device * dev.local_compute ** 2
        floor = min_sinr_for_accuracy(scn.accuracy_model, k, consts.acc_min)
        power, p_lo, root, status = solve_device_power(
            ifd_bits=bits,
            bandwidth=dev.bandwidth,
            device_gain=scn.channel.device_gains[n],
            interference=interference,
            energy_headroom=headroom,
            sinr_floor=floor,
            max_power=consts.max_power,
        )
        if power is not None:
            powers[n] = power
        reports.append(PowerSolveReport(device=n, status=status, p_lo=p_lo,
                                        p_energy_root=root,
                                        p_star=powers[n]))
    return powers, reports
