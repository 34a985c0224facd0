"""Delay, energy, accuracy, and revenue bookkeeping for one decision tuple.

The system objective (RDA) sums, over devices, a weighted pair of normalized
revenues: delay revenue (share of the delay budget left over) and accuracy
revenue (where the achieved accuracy sits between the floor and the ceiling).
Both may legitimately go negative; feasibility is tracked by explicit flags,
never by clamping.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .accuracy import accuracy as _accuracy
from .scenario import ModelProfile, Scenario

# Below this linear SINR the link is treated as silent (rate exactly zero).
_MIN_SINR = 1e-300
_CAPACITY_SLACK = 1e-9


@dataclass(frozen=True)
class DeviceDecision:
    """Split point, transmit power, and edge compute share for one device."""

    partition: int
    power: float
    edge_alloc: float


@dataclass(frozen=True)
class DeviceMetrics:
    workload_device: float
    workload_edge: float
    t_local: float
    t_tx: float
    t_edge: float
    e_local: float
    e_tx: float
    sinr: float
    accuracy: float
    delay_revenue: float
    accuracy_revenue: float
    rda_term: float
    accuracy_ok: bool
    energy_ok: bool

    @property
    def total_delay(self) -> float:
        return (self.t_local + self.t_tx) + self.t_edge

    @property
    def total_energy(self) -> float:
        return self.e_local + self.e_tx

    def to_dict(self) -> dict:
        return {
            "workload_device": self.workload_device,
            "workload_edge": self.workload_edge,
            "t_local": self.t_local,
            "t_tx": self.t_tx,
            "t_edge": self.t_edge,
            "e_local": self.e_local,
            "e_tx": self.e_tx,
            "sinr": self.sinr,
            "accuracy": self.accuracy,
            "delay_revenue": self.delay_revenue,
            "accuracy_revenue": self.accuracy_revenue,
            "rda_term": self.rda_term,
            "accuracy_ok": self.accuracy_ok,
            "energy_ok": self.energy_ok,
        }


@dataclass(frozen=True)
class SystemEvaluation:
    rda: float
    per_device: tuple[DeviceMetrics, ...]
    feasible: bool
    capacity_ok: bool
    power_ok: bool


def split_workload(profile: ModelProfile, k: int) -> tuple[float, float]:
    """Device-side and edge-side cycle counts for split point k."""
    if not 0 <= k <= profile.num_points:
        raise ValueError(f"split point {k} outside [0, {profile.num_points}]")
    device = float(sum(profile.layer_workloads[: k + 1]))
    edge = float(sum(profile.layer_workloads[k + 1 :]))
    return device, edge


def sinr(power: float, device_gain: float, jammer_power: float, jammer_gain: float,
         noise_power: float) -> float:
    """Linear SINR of a device uplink under jamming plus receiver noise."""
    if power < 0.0:
        raise ValueError("power must be nonnegative")
    return (power * device_gain) / (jammer_power * jammer_gain + noise_power)


def transmission_rate(bandwidth: float, sinr_value: float) -> float:
    """Shannon rate in bits/s; zero below the silent-link threshold."""
    if sinr_value < _MIN_SINR:
        return 0.0
    return bandwidth * math.log2(1.0 + sinr_value)


def _weighted_rda(weight: float, delay_rev: float, acc_rev: float) -> float:
    # A zero weight removes its term entirely so an infinite delay revenue
    # cannot poison the product.
    term = 0.0
    if weight > 0.0:
        term += weight * delay_rev
    if weight < 1.0:
        term += (1.0 - weight) * acc_rev
    return term


def evaluate_device(scn: Scenario, n: int, decision: DeviceDecision) -> DeviceMetrics:
    """All delay/energy/accuracy quantities for device n under one decision.

    Fully local decisions (k = K) ignore the transmit power and report zero
    SINR.  A silent link with bits to send yields infinite transmit delay
    rather than an error, with the energy flag tripped accordingly.
    """
    dev = scn.devices[n]
    profile = dev.profile
    consts = scn.constants
    k = decision.partition
    load_device, load_edge = split_workload(profile, k)

    t_local = load_device / dev.local_compute
    e_local = consts.chip_coeff * load_device * dev.local_compute ** 2

    if k == profile.num_points:
        phi = 0.0
        t_tx = 0.0
        e_tx = 0.0
        acc = scn.accuracy_model.local_accuracy
    else:
        phi = sinr(decision.power, scn.channel.device_gains[n], scn.jammer.power,
                   scn.channel.jammer_gain, scn.channel.noise_power)
        bits = profile.ifd_sizes[k]
        if bits > 0.0:
            rate = transmission_rate(dev.bandwidth, phi)
            t_tx = bits / rate if rate > 0.0 else math.inf
            e_tx = decision.power * t_tx if math.isfinite(t_tx) else math.inf
        else:
            t_tx = 0.0
            e_tx = 0.0
        acc = _accuracy(scn.accuracy_model, k, phi)

    if load_edge == 0.0:
        t_edge = 0.0
    elif decision.edge_alloc > 0.0:
        t_edge = load_edge / decision.edge_alloc
    else:
        t_edge = math.inf

    total_delay = (t_local + t_tx) + t_edge
    delay_rev = (consts.max_delay - total_delay) / consts.max_delay
    acc_rev = (acc - consts.acc_min) / (consts.acc_max - consts.acc_min)
    rda_term = _weighted_rda(consts.weight, delay_rev, acc_rev)

    return DeviceMetrics(
        workload_device=load_device,
        workload_edge=load_edge,
        t_local=t_local,
        t_tx=t_tx,
        t_edge=t_edge,
        e_local=e_local,
        e_tx=e_tx,
        sinr=phi,
        accuracy=acc,
        delay_revenue=delay_rev,
        accuracy_revenue=acc_rev,
        rda_term=rda_term,
        accuracy_ok=acc >= consts.acc_min,
        energy_ok=(e_local + e_tx) <= consts.energy_budget,
    )


def system_rda(scn: Scenario, decisions) -> SystemEvaluation:
    """Sum the per-device RDA terms and check every system constraint.

    Feasibility requires per-device accuracy and energy, the shared edge
    capacity (up to a hair of relative slack), and a transmit power in
    (0, max_power] for every device that actually splits.
    """
    decisions = list(decisions)
    if len(decisions) != scn.n_devices:
        raise ValueError(f"expected {scn.n_devices} decisions, got {len(decisions)}")
    per_device = tuple(evaluate_device(scn, n, d) for n, d in enumerate(decisions))
    total = 0.0
    for m in per_device:
        total += m.rda_term
    capacity_ok = sum(d.edge_alloc for d in decisions) <= scn.constants.edge_capacity * (
        1.0 + _CAPACITY_SLACK
    )
    power_ok = all(
        0.0 < d.power <= scn.constants.max_power
        for n, d in enumerate(decisions)
        if d.partition < scn.devices[n].profile.num_points
    )
    feasible = (
        all(m.accuracy_ok for m in per_device)
        and all(m.energy_ok for m in per_device)
        and capacity_ok
        and power_ok
    )
    return SystemEvaluation(
        rda=total,
        per_device=per_device,
        feasible=feasible,
        capacity_ok=capacity_ok,
        power_ok=power_ok,
    )
