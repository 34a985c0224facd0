"""System model types and scenario construction for jammed split inference.

A scenario is a set of devices and one jammer dropped in a square region with
the edge server at the center.  Channel gains follow a cubic distance law and
are baked into the scenario at construction so the solvers never re-derive
geometry.
"""
from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .accuracy import DEFAULT_LOCAL_ACCURACY, AccuracyModel, default_accuracy_model

PATH_LOSS_SCALE = 1e-3
PATH_LOSS_EXPONENT = 3.0

DEFAULT_REGION_SIDE = 100.0
DEFAULT_DEVICE_COMPUTE = 2e9  # cycles/s
DEFAULT_DEVICE_BANDWIDTH = 1e6  # Hz
DEFAULT_JAMMER_POWER = 1.0  # W

_MAX_PLACEMENT_ATTEMPTS = 100


class ConfigError(ValueError):
    """Scenario config validation failure; the message names the field path."""


def channel_gain(distance: float) -> float:
    """Cubic-law channel gain 1e-3 * d**-3 for a link of length d meters."""
    if distance <= 0.0:
        raise ValueError("distance must be positive")
    return PATH_LOSS_SCALE * distance ** -PATH_LOSS_EXPONENT


def dbm_to_watts(dbm: float) -> float:
    return 1e-3 * 10.0 ** (dbm / 10.0)


@dataclass(frozen=True)
class ModelProfile:
    """Per-segment DNN workload and intermediate-feature sizes.

    layer_workloads[j] is the compute cost in CPU cycles of segment j; a device
    choosing split point k runs segments 0..k locally and ships ifd_sizes[k]
    bits to the edge server, which runs the rest.  The last entry of ifd_sizes
    is zero: fully local execution transmits nothing.
    """

    layer_workloads: tuple[float, ...]
    ifd_sizes: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "layer_workloads", tuple(float(x) for x in self.layer_workloads))
        object.__setattr__(self, "ifd_sizes", tuple(float(x) for x in self.ifd_sizes))
        if len(self.layer_workloads) != len(self.ifd_sizes):
            raise ValueError("profile: layer_workloads and ifd_sizes must have equal length")
        if len(self.layer_workloads) < 2:
            raise ValueError("profile: needs at least two segments (one real split choice)")
        for j, w in enumerate(self.layer_workloads):
            if w < 0.0:
                raise ValueError(f"profile.layer_workloads[{j}]: must be nonnegative")
        for j, s in enumerate(self.ifd_sizes):
            if s < 0.0:
                raise ValueError(f"profile.ifd_sizes[{j}]: must be nonnegative")
        if self.ifd_sizes[-1] != 0.0:
            raise ValueError("profile.ifd_sizes: last entry must be 0 (fully local sends nothing)")

    @property
    def num_points(self) -> int:
        """Largest split index K; valid split points are 0..K inclusive."""
        return len(self.layer_workloads) - 1

    @property
    def total_workload(self) -> float:
        return sum(self.layer_workloads)


def _conv_macs(kernel: int, cin: int, cout: int, out_hw: int) -> int:
    return kernel * kernel * cin * cout * out_hw * out_hw


def default_profile(cycles_per_mac: float = 1.0) -> ModelProfile:
    """Six-segment profile of an 18-layer residual CNN on 32x32 RGB input.

    Segment boundaries sit after the stem convolution and after each residual
    stage; the final segment also includes the classifier head.  Workloads
    count conv and fully-connected multiply-accumulates at ``cycles_per_mac``
    cycles each; feature maps are shipped as 8-bit activations.
    """
    if cycles_per_mac <= 0.0:
        raise ValueError("cycles_per_mac must be positive")
    segments = [
        [],  # split 0: capture only, raw input offloaded
        [(3, 3, 64, 32)],  # stem conv
        [(3, 64, 64, 32)] * 4,  # stage 1: two blocks, two convs each
        [(3, 64, 128, 16), (3, 128, 128, 16), (1, 64, 128, 16), (3, 128, 128, 16), (3, 128, 128, 16)],
        [(3, 128, 256, 8), (3, 256, 256, 8), (1, 128, 256, 8), (3, 256, 256, 8), (3, 256, 256, 8)],
        [(3, 256, 512, 4), (3, 512, 512, 4), (1, 256, 512, 4), (3, 512, 512, 4), (3, 512, 512, 4)],
    ]
    workloads = [cycles_per_mac * sum(_conv_macs(*c) for c in seg) for seg in segments]
    workloads[-1] += cycles_per_mac * 512 * 10  # classifier head
    bits = 8
    ifd = [
        3 * 32 * 32 * bits,
        64 * 32 * 32 * bits,
        64 * 32 * 32 * bits,
        128 * 16 * 16 * bits,
        256 * 8 * 8 * bits,
        0,
    ]
    return ModelProfile(layer_workloads=tuple(workloads), ifd_sizes=tuple(ifd))


@dataclass(frozen=True)
class Device:
    id: int
    position: tuple[float, float]
    local_compute: float  # cycles/s
    bandwidth: float  # Hz
    profile: ModelProfile

    def __post_init__(self):
        object.__setattr__(self, "position", (float(self.position[0]), float(self.position[1])))
        if self.local_compute <= 0.0:
            raise ValueError(f"devices[{self.id}].compute: must be positive")
        if self.bandwidth <= 0.0:
            raise ValueError(f"devices[{self.id}].bandwidth: must be positive")


@dataclass(frozen=True)
class Jammer:
    position: tuple[float, float]
    power: float  # W

    def __post_init__(self):
        object.__setattr__(self, "position", (float(self.position[0]), float(self.position[1])))
        if self.power < 0.0:
            raise ValueError("jammer.power: must be nonnegative")


@dataclass(frozen=True)
class Channel:
    """Link gains toward the edge server plus the receiver noise power."""

    device_gains: tuple[float, ...]
    jammer_gain: float
    noise_power: float  # W

    def __post_init__(self):
        object.__setattr__(self, "device_gains", tuple(float(g) for g in self.device_gains))
        for i, g in enumerate(self.device_gains):
            if g <= 0.0:
                raise ValueError(f"channel.device_gains[{i}]: must be positive")
        if self.jammer_gain <= 0.0:
            raise ValueError("channel.jammer_gain: must be positive")
        if self.noise_power <= 0.0:
            raise ValueError("channel.noise_power: must be positive")


@dataclass(frozen=True)
class SystemConstants:
    chip_coeff: float  # J * s^2 per cycle, switched-capacitance energy coefficient
    energy_budget: float  # J per inference, device side
    max_power: float  # W
    edge_capacity: float  # cycles/s shared by all offloading devices
    max_delay: float  # s, delay revenue reference
    weight: float  # delay-vs-accuracy revenue weight in [0, 1]
    acc_min: float
    acc_max: float

    def __post_init__(self):
        if self.chip_coeff <= 0.0:
            raise ValueError("constants.chip_coeff: must be positive")
        if self.energy_budget <= 0.0:
            raise ValueError("constants.energy_budget: must be positive")
        if self.max_power <= 0.0:
            raise ValueError("constants.max_power: must be positive")
        if self.edge_capacity <= 0.0:
            raise ValueError("constants.edge_capacity: must be positive")
        if self.max_delay <= 0.0:
            raise ValueError("constants.max_delay: must be positive")
        if not 0.0 <= self.weight <= 1.0:
            raise ValueError("constants.weight: must lie in [0, 1]")
        if not 0.0 < self.acc_min < 1.0:
            raise ValueError("constants.acc_min: must lie in (0, 1)")
        if not self.acc_min < self.acc_max <= 1.0:
            raise ValueError("constants.acc_max: must exceed acc_min and not exceed 1")


def default_constants() -> SystemConstants:
    return SystemConstants(
        chip_coeff=1e-28,
        energy_budget=1.0,
        max_power=0.23,
        edge_capacity=2e10,
        max_delay=2.0,
        weight=0.5,
        acc_min=0.80,
        acc_max=0.95,
    )


@dataclass(frozen=True)
class Scenario:
    devices: tuple[Device, ...]
    jammer: Jammer
    channel: Channel
    constants: SystemConstants
    accuracy_model: AccuracyModel
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "devices", tuple(self.devices))
        if len(self.devices) == 0:
            raise ValueError("devices: at least one device required")
        if len(self.channel.device_gains) != len(self.devices):
            raise ValueError("channel.device_gains: one gain per device required")
        for n, dev in enumerate(self.devices):
            if dev.profile.num_points != self.accuracy_model.num_points:
                raise ValueError(
                    f"devices[{n}].profile: {dev.profile.num_points} split points but "
                    f"accuracy_model has {self.accuracy_model.num_points}"
                )

    @property
    def n_devices(self) -> int:
        return len(self.devices)


def generate_scenario(
    n_devices: int,
    region_side: float = DEFAULT_REGION_SIDE,
    constants: SystemConstants | None = None,
    profile: ModelProfile | None = None,
    accuracy_model: AccuracyModel | None = None,
    seed: int = 0,
    *,
    device_compute: float = DEFAULT_DEVICE_COMPUTE,
    device_bandwidth: float = DEFAULT_DEVICE_BANDWIDTH,
    jammer_power: float = DEFAULT_JAMMER_POWER,
) -> Scenario:
    """Drop devices and a jammer uniformly in a square with the server centered.

    Positions are drawn in a fixed order from one seeded generator, so the
    same seed reproduces the same scenario bit for bit.  A draw landing
    exactly on the server is resampled (at most 100 attempts).
    """
    if n_devices < 1:
        raise ValueError("n_devices must be at least 1")
    if region_side <= 0.0:
        raise ValueError("region_side must be positive")
    if constants is None:
        constants = default_constants()
    if profile is None:
        profile = default_profile()
    if accuracy_model is None:
        accuracy_model = default_accuracy_model()
    rng = np.random.default_rng(seed)
    center = (region_side / 2.0, region_side / 2.0)

    def draw() -> tuple[tuple[float, float], float]:
        for _ in range(_MAX_PLACEMENT_ATTEMPTS):
            x, y = rng.uniform(0.0, region_side, size=2)
            d = math.hypot(x - center[0], y - center[1])
            if d > 0.0:
                return (float(x), float(y)), d
        raise RuntimeError("could not place a node off the server position")

    devices = []
    gains = []
    for n in range(n_devices):
        pos, dist = draw()
        devices.append(
            Device(id=n, position=pos, local_compute=device_compute,
                   bandwidth=device_bandwidth, profile=profile)
        )
        gains.append(channel_gain(dist))
    jam_pos, jam_dist = draw()
    channel = Channel(
        device_gains=tuple(gains),
        jammer_gain=channel_gain(jam_dist),
        noise_power=dbm_to_watts(-110.0),
    )
    return Scenario(
        devices=tuple(devices),
        jammer=Jammer(position=jam_pos, power=jammer_power),
        channel=channel,
        constants=constants,
        accuracy_model=accuracy_model,
        seed=int(seed),
    )


# ---------------------------------------------------------------------------
# JSON config handling


def _require(cfg: dict, key: str, path: str):
    if key not in cfg:
        raise ConfigError(f"{path}.{key}: missing")
    return cfg[key]


def _number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {value!r}")
    return float(value)


def _parse_profile(cfg, path: str = "profile") -> ModelProfile:
    if cfg == "default" or cfg is None:
        return default_profile()
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: expected 'default' or an object")
    if "layer_workloads" in cfg or "ifd_sizes" in cfg:
        try:
            return ModelProfile(
                layer_workloads=tuple(_require(cfg, "layer_workloads", path)),
                ifd_sizes=tuple(_require(cfg, "ifd_sizes", path)),
            )
        except ValueError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    if "cycles_per_mac" in cfg:
        return default_profile(_number(cfg["cycles_per_mac"], f"{path}.cycles_per_mac"))
    raise ConfigError(f"{path}: give layer_workloads/ifd_sizes, cycles_per_mac, or 'default'")


def _parse_accuracy(cfg, path: str = "accuracy_model") -> AccuracyModel:
    if cfg == "default" or cfg is None:
        return default_accuracy_model()
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: expected 'default' or an object")
    try:
        return AccuracyModel(
            amplitude=tuple(_require(cfg, "amplitude", path)),
            slope=tuple(_require(cfg, "slope", path)),
            midpoint=tuple(_require(cfg, "midpoint", path)),
            offset=tuple(_require(cfg, "offset", path)),
            local_accuracy=_number(cfg.get("local_accuracy", DEFAULT_LOCAL_ACCURACY),
                                   f"{path}.local_accuracy"),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _parse_constants(cfg, path: str = "constants") -> tuple[SystemConstants, float]:
    """Returns (constants, noise_power_watts); noise lives under constants in JSON."""
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: expected an object")
    has_dbm = "noise_power_dbm" in cfg
    has_w = "noise_power_w" in cfg
    if has_dbm == has_w:
        raise ConfigError(f"{path}: give exactly one of noise_power_dbm or noise_power_w")
    if has_dbm:
        noise = dbm_to_watts(_number(cfg["noise_power_dbm"], f"{path}.noise_power_dbm"))
    else:
        noise = _number(cfg["noise_power_w"], f"{path}.noise_power_w")
    if noise <= 0.0:
        key = "noise_power_dbm" if has_dbm else "noise_power_w"
        raise ConfigError(f"{path}.{key}: noise_power must be positive")
    try:
        constants = SystemConstants(
            chip_coeff=_number(_require(cfg, "chip_coeff", path), f"{path}.chip_coeff"),
            energy_budget=_number(_require(cfg, "energy_budget", path), f"{path}.energy_budget"),
            max_power=_number(_require(cfg, "max_power", path), f"{path}.max_power"),
            edge_capacity=_number(_require(cfg, "edge_capacity", path), f"{path}.edge_capacity"),
            max_delay=_number(_require(cfg, "max_delay", path), f"{path}.max_delay"),
            weight=_number(_require(cfg, "weight", path), f"{path}.weight"),
            acc_min=_number(_require(cfg, "acc_min", path), f"{path}.acc_min"),
            acc_max=_number(_require(cfg, "acc_max", path), f"{path}.acc_max"),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return constants, noise


def scenario_from_config(cfg: dict) -> Scenario:
    """Build a Scenario from a parsed JSON config.

    Two device forms are accepted: an explicit list of positioned devices, or
    a generator object ``{"count": ..., "region_side": ...}`` whose placements
    are drawn from the config seed.  See the README for the full schema.
    """
    if not isinstance(cfg, dict):
        raise ConfigError("config: expected a JSON object")
    cfg = copy.deepcopy(cfg)
    seed = cfg.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError("seed: expected a nonnegative integer")
    profile = _parse_profile(cfg.get("profile"))
    acc_model = _parse_accuracy(cfg.get("accuracy_model"))
    constants, noise = _parse_constants(_require(cfg, "constants", "config"))
    jam_cfg = _require(cfg, "jammer", "config")
    if not isinstance(jam_cfg, dict):
        raise ConfigError("jammer: expected an object")
    jam_power = _number(_require(jam_cfg, "power", "jammer"), "jammer.power")

    dev_cfg = _require(cfg, "devices", "config")
    if isinstance(dev_cfg, dict):  # generator form
        count = dev_cfg.get("count")
        if isinstance(count, bool) or not isinstance(count, int) or count < 1:
            raise ConfigError("devices.count: expected a positive integer")
        region = _number(dev_cfg.get("region_side", DEFAULT_REGION_SIDE), "devices.region_side")
        try:
            scn = generate_scenario(
                n_devices=count,
                region_side=region,
                constants=constants,
                profile=profile,
                accuracy_model=acc_model,
                seed=seed,
                device_compute=_number(dev_cfg.get("compute", DEFAULT_DEVICE_COMPUTE),
                                       "devices.compute"),
                device_bandwidth=_number(dev_cfg.get("bandwidth", DEFAULT_DEVICE_BANDWIDTH),
                                         "devices.bandwidth"),
                jammer_power=jam_power,
            )
        except ValueError as exc:
            raise ConfigError(f"devices: {exc}") from exc
        # Generator-form noise comes from the constants section, not the default.
        channel = Channel(device_gains=scn.channel.device_gains,
                          jammer_gain=scn.channel.jammer_gain, noise_power=noise)
        return Scenario(devices=scn.devices, jammer=scn.jammer, channel=channel,
                        constants=constants, accuracy_model=acc_model, seed=seed)

    if not isinstance(dev_cfg, list) or not dev_cfg:
        raise ConfigError("devices: expected a nonempty list or a generator object")
    es_pos = cfg.get("es_position", [DEFAULT_REGION_SIDE / 2.0, DEFAULT_REGION_SIDE / 2.0])

    def derived_gain(pos, path):
        d = math.hypot(pos[0] - es_pos[0], pos[1] - es_pos[1])
        if d <= 0.0:
            raise ConfigError(f"{path}: coincides with the edge server position")
        return channel_gain(d)

    devices = []
    gains = []
    for n, d in enumerate(dev_cfg):
        path = f"devices[{n}]"
        if not isinstance(d, dict):
            raise ConfigError(f"{path}: expected an object")
        pos = _require(d, "position", path)
        if not (isinstance(pos, list) and len(pos) == 2):
            raise ConfigError(f"{path}.position: expected [x, y]")
        try:
            devices.append(
                Device(
                    id=n,
                    position=(pos[0], pos[1]),
                    local_compute=_number(d.get("compute", DEFAULT_DEVICE_COMPUTE),
                                          f"{path}.compute"),
                    bandwidth=_number(d.get("bandwidth", DEFAULT_DEVICE_BANDWIDTH),
                                      f"{path}.bandwidth"),
                    profile=profile,
                )
            )
        except ValueError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        gains.append(_number(d["gain"], f"{path}.gain") if "gain" in d
                     else derived_gain(pos, f"{path}.position"))

    jam_pos = jam_cfg.get("position")
    if "gain" in jam_cfg:
        jam_gain = _number(jam_cfg["gain"], "jammer.gain")
    elif isinstance(jam_pos, list) and len(jam_pos) == 2:
        jam_gain = derived_gain(jam_pos, "jammer.position")
    else:
        raise ConfigError("jammer: explicit device lists need jammer.gain or jammer.position")
    if jam_pos is None:
        jam_pos = [0.0, 0.0]

    try:
        channel = Channel(device_gains=tuple(gains), jammer_gain=jam_gain, noise_power=noise)
        return Scenario(
            devices=tuple(devices),
            jammer=Jammer(position=(jam_pos[0], jam_pos[1]), power=jam_power),
            channel=channel,
            constants=constants,
            accuracy_model=acc_model,
            seed=seed,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def scenario_to_config(scn: Scenario) -> dict:
    """Explicit-form config dict that round-trips through scenario_from_config."""
    return {
        "seed": scn.seed,
        "devices": [
            {
                "position": list(dev.position),
                "compute": dev.local_compute,
                "bandwidth": dev.bandwidth,
                "gain": scn.channel.device_gains[n],
            }
            for n, dev in enumerate(scn.devices)
        ],
        "jammer": {
            "position": list(scn.jammer.position),
            "power": scn.jammer.power,
            "gain": scn.channel.jammer_gain,
        },
        "constants": {
            "chip_coeff": scn.constants.chip_coeff,
            "energy_budget": scn.constants.energy_budget,
            "max_power": scn.constants.max_power,
            "edge_capacity": scn.constants.edge_capacity,
            "max_delay": scn.constants.max_delay,
            "weight": scn.constants.weight,
            "acc_min": scn.constants.acc_min,
            "acc_max": scn.constants.acc_max,
            "noise_power_w": scn.channel.noise_power,
        },
        "accuracy_model": {
            "amplitude": list(scn.accuracy_model.amplitude),
            "slope": list(scn.accuracy_model.slope),
            "midpoint": list(scn.accuracy_model.midpoint),
            "offset": list(scn.accuracy_model.offset),
            "local_accuracy": scn.accuracy_model.local_accuracy,
        },
        "profile": {
            "layer_workloads": list(scn.devices[0].profile.layer_workloads),
            "ifd_sizes": list(scn.devices[0].profile.ifd_sizes),
        },
    }


def load_scenario(path) -> Scenario:
    with open(Path(path)) as fh:
        try:
            cfg = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config: invalid JSON ({exc})") from exc
    return scenario_from_config(cfg)


def save_scenario(scn: Scenario, path) -> None:
    with open(Path(path), "w") as fh:
        json.dump(scenario_to_config(scn), fh, indent=2, sort_keys=True)
        fh.write("\n")
