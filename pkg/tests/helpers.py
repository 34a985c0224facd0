"""Shared builders for hand-constructed test scenarios."""
from __future__ import annotations

from jamsplit.accuracy import AccuracyModel, default_accuracy_model
from jamsplit.scenario import (
    Channel,
    Device,
    Jammer,
    ModelProfile,
    Scenario,
    SystemConstants,
    default_constants,
    default_profile,
)


def make_scenario(gains, *, jammer_gain=1e-6, jammer_power=1.0, noise_power=1e-14,
                  compute=2e9, bandwidth=1e6, constants=None, profile=None,
                  accuracy_model=None, seed=0):
    """Scenario with explicit channel gains; positions are placeholders."""
    if profile is None:
        profile = default_profile()
    if accuracy_model is None:
        accuracy_model = default_accuracy_model()
    if constants is None:
        constants = default_constants()
    devices = tuple(
        Device(id=i, position=(float(i), 0.0), local_compute=compute,
               bandwidth=bandwidth, profile=profile)
        for i in range(len(gains))
    )
    return Scenario(
        devices=devices,
        jammer=Jammer(position=(50.0, 50.0), power=jammer_power),
        channel=Channel(device_gains=tuple(gains), jammer_gain=jammer_gain,
                        noise_power=noise_power),
        constants=constants,
        accuracy_model=accuracy_model,
        seed=seed,
    )


def two_segment_profile(load_device=1.25e9, load_edge=1e9, ifd_bits=4194304.0):
    return ModelProfile(layer_workloads=(load_device, load_edge),
                        ifd_sizes=(ifd_bits, 0.0))


def permissive_accuracy_model():
    """Single split point, low offset, so accuracy floors are easy or vacuous."""
    return AccuracyModel(amplitude=(0.9,), slope=(0.5,), midpoint=(5.0,),
                         offset=(0.03,), local_accuracy=0.95)


def energy_root_scenario(energy_budget=1.0, acc_min=0.02, max_power=0.23):
    """One device whose transmit energy constraint has an interior root.

    Device workload 1.25e9 cycles at 2 GHz with chip coefficient 1e-28 burns
    0.5 J locally, leaving 0.5 J of headroom; gain 8e-6 over an interference
    floor of about 1e-6 W gives a link where the energy budget caps power
    strictly below max_power.
    """
    constants = SystemConstants(
        chip_coeff=1e-28,
        energy_budget=energy_budget,
        max_power=max_power,
        edge_capacity=2e10,
        max_delay=2.0,
        weight=0.5,
        acc_min=acc_min,
        acc_max=0.95,
    )
    return make_scenario(
        [8e-6],
        jammer_gain=1e-6,
        jammer_power=1.0,
        noise_power=1e-14,
        constants=constants,
        profile=two_segment_profile(),
        accuracy_model=permissive_accuracy_model(),
    )
