import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jamsplit.subsolvers import (
    STATUS_INFEASIBLE_ACCURACY,
    STATUS_INFEASIBLE_ENERGY,
    STATUS_NOT_TRANSMITTING,
    STATUS_OPTIMAL,
    STATUS_VACUOUS_ACCURACY,
    allocate_capacity,
    allocate_edge_compute,
    kkt_residual,
    solve_device_power,
    solve_power,
)
from helpers import (
    energy_root_scenario,
    make_scenario,
    permissive_accuracy_model,
    two_segment_profile,
)
from oracles import power_grid_max, simplex_grid_minimize


def test_allocation_equal_loads():
    alloc = allocate_capacity([3e9, 3e9, 3e9, 3e9], 2e10)
    assert np.allclose(alloc, 5e9, rtol=1e-12)


def test_allocation_two_device_hand_value():
    alloc = allocate_capacity([4e9, 1e9], 2e10)
    assert alloc[0] == pytest.approx(4e10 / 3, rel=1e-12)
    assert alloc[1] == pytest.approx(2e10 / 3, rel=1e-12)


def test_allocation_single_device_gets_everything():
    assert allocate_capacity([7e8], 2e10)[0] == pytest.approx(2e10, rel=1e-12)


def test_allocation_zero_loads_get_nothing():
    alloc = allocate_capacity([0.0, 5e9, 0.0], 2e10)
    assert alloc[0] == 0.0
    assert alloc[2] == 0.0
    assert alloc[1] == pytest.approx(2e10, rel=1e-12)
    assert list(allocate_capacity([0.0, 0.0], 2e10)) == [0.0, 0.0]


def test_allocation_matches_grid_oracle():
    loads = [4e9, 1e9, 2.5e9]
    capacity = 2e10
    alloc = allocate_capacity(loads, capacity)
    obj = sum(l / f for l, f in zip(loads, alloc))
    _, oracle_obj = simplex_grid_minimize(loads, capacity)
    assert obj <= oracle_obj * (1.0 + 1e-3)


@settings(max_examples=50, deadline=None)
@given(loads=st.lists(st.floats(min_value=1e6, max_value=1e10), min_size=1,
                      max_size=6),
       scale=st.floats(min_value=0.1, max_value=10.0))
def test_allocation_properties(loads, scale):
    capacity = 2e10
    alloc = np.asarray(allocate_capacity(loads, capacity))
    assert alloc.sum() == pytest.approx(capacity, rel=1e-9)
    assert (alloc > 0.0).all()
    # proportional rule is invariant to scaling every load by one factor
    scaled = np.asarray(allocate_capacity([l * scale for l in loads], capacity))
    assert np.allclose(alloc, scaled, rtol=1e-9)
    # and equivariant under permutation
    perm = list(reversed(range(len(loads))))
    swapped = np.asarray(allocate_capacity([loads[i] for i in perm], capacity))
    assert np.allclose(swapped, alloc[perm], rtol=1e-12)


def _three_device_scenario():
    return make_scenario([1e-6, 2e-6, 5e-7], profile=two_segment_profile(),
                         accuracy_model=permissive_accuracy_model())


def test_allocate_edge_compute_skips_local_devices():
    scn = _three_device_scenario()
    alloc = allocate_edge_compute(scn, [0, 1, 0])
    assert alloc[1] == 0.0
    assert alloc[0] + alloc[2] == pytest.approx(scn.constants.edge_capacity,
                                                rel=1e-9)


def test_kkt_residual_at_closed_form():
    scn = _three_device_scenario()
    parts = [0, 0, 0]
    alloc = allocate_edge_compute(scn, parts)
    assert kkt_residual(scn, parts, alloc) <= 1e-9


def test_kkt_residual_flags_equal_split():
    # different split points give the three devices different edge loads, so
    # an equal split is not stationary
    scn = make_scenario([1e-6, 2e-6, 5e-7])
    parts = [0, 1, 2]
    opt = allocate_edge_compute(scn, parts)
    cap = scn.constants.edge_capacity
    equal = [cap / 3.0] * 3
    assert kkt_residual(scn, parts, equal) > 1e-3
    assert kkt_residual(scn, parts, equal) > kkt_residual(scn, parts, opt)


def test_kkt_residual_grows_under_perturbation():
    scn = _three_device_scenario()
    parts = [0, 0, 0]
    opt = allocate_edge_compute(scn, parts)
    bumped = list(opt)
    bumped[0] *= 1.01
    assert kkt_residual(scn, parts, bumped) > kkt_residual(scn, parts, opt)


def test_kkt_residual_rejects_zero_alloc_for_offloader():
    scn = _three_device_scenario()
    with pytest.raises(ValueError):
        kkt_residual(scn, [0, 0, 0], [1e10, 1e10, 0.0])


def test_kkt_residual_degenerate_cases():
    scn = _three_device_scenario()
    assert kkt_residual(scn, [1, 1, 1], [0.0, 0.0, 0.0]) == 0.0
    assert kkt_residual(scn, [0, 1, 1], [2e10, 0.0, 0.0]) == 0.0


def _kernel_kwargs(**overrides):
    base = dict(ifd_bits=524288.0, bandwidth=1e6, device_gain=8e-6,
                interference=1e-6, energy_headroom=0.5, sinr_floor=-math.inf,
                max_power=0.23)
    base.update(overrides)
    return base


def test_power_kernel_vacuous_floor_hits_cap():
    power, p_lo, root, status = solve_device_power(**_kernel_kwargs(
        energy_headroom=100.0))
    assert status == STATUS_VACUOUS_ACCURACY
    assert power == pytest.approx(0.23, rel=1e-12)
    assert p_lo == 0.0
    assert root > 0.23


def test_power_kernel_unreachable_floor():
    power, p_lo, root, status = solve_device_power(**_kernel_kwargs(
        sinr_floor=math.inf))
    assert status == STATUS_INFEASIBLE_ACCURACY
    assert power is None


def test_power_kernel_floor_above_cap():
    # floor demands more transmit power than the cap allows
    floor = 0.5 * 8e-6 / 1e-6  # needs p = 0.5 W
    power, p_lo, root, status = solve_device_power(**_kernel_kwargs(
        sinr_floor=floor))
    assert status == STATUS_INFEASIBLE_ACCURACY
    assert power is None
    assert p_lo == pytest.approx(0.5, rel=1e-9)


def test_power_kernel_negative_headroom():
    power, _, _, status = solve_device_power(**_kernel_kwargs(
        energy_headroom=-0.1))
    assert status == STATUS_INFEASIBLE_ENERGY
    assert power is None


def test_power_kernel_nonpositive_initial_slope():
    # headroom so small the energy slack decreases from p = 0
    power, _, _, status = solve_device_power(**_kernel_kwargs(
        energy_headroom=1e-9))
    assert status == STATUS_INFEASIBLE_ENERGY
    assert power is None


def test_power_kernel_interior_root_matches_oracle():
    scn = energy_root_scenario()
    kw = _kernel_kwargs(ifd_bits=4194304.0,
                        interference=1e-6 + 1e-14)
    power, p_lo, root, status = solve_device_power(**kw)
    assert status == STATUS_OPTIMAL if p_lo > 0 else STATUS_VACUOUS_ACCURACY
    assert root < 0.23
    assert power == pytest.approx(root, abs=1e-9)
    oracle = power_grid_max(scn, 0, 0)
    assert oracle is not None
    assert power == pytest.approx(oracle, abs=2e-5)


def test_power_kernel_root_brackets_sign_change():
    kw = _kernel_kwargs(ifd_bits=4194304.0, interference=1e-6 + 1e-14)
    _, _, root, _ = solve_device_power(**kw)

    def slack(p):
        phi = p * kw["device_gain"] / kw["interference"]
        return kw["energy_headroom"] * kw["bandwidth"] * math.log2(1 + phi) \
            - p * kw["ifd_bits"]

    assert slack(root) >= -1e-12
    assert slack(root + 2e-9) < 0.0


def test_solve_power_full_scenario_statuses():
    scn = energy_root_scenario()
    powers, reports = solve_power(scn, [0])
    assert len(powers) == len(reports) == 1
    assert reports[0].status in (STATUS_OPTIMAL, STATUS_VACUOUS_ACCURACY)
    oracle = power_grid_max(scn, 0, 0)
    assert powers[0] == pytest.approx(oracle, abs=2e-5)


def test_solve_power_local_devices_untouched():
    # device 1 has a strong link, so the accuracy floor is reachable and the
    # energy budget is slack at the cap
    scn = make_scenario([1e-6, 1e-4],
                        profile=two_segment_profile(ifd_bits=524288.0),
                        accuracy_model=permissive_accuracy_model())
    powers, reports = solve_power(scn, [1, 0], current=[0.05, 0.06])
    assert powers[0] == 0.05
    assert reports[0].status == STATUS_NOT_TRANSMITTING
    assert reports[1].status == STATUS_OPTIMAL
    assert powers[1] == pytest.approx(scn.constants.max_power, rel=1e-12)


def test_solve_power_defaults_to_max_power_fallback():
    scn = make_scenario([1e-6], profile=two_segment_profile(),
                        accuracy_model=permissive_accuracy_model())
    powers, reports = solve_power(scn, [1])
    assert powers[0] == scn.constants.max_power
    assert reports[0].status == STATUS_NOT_TRANSMITTING


def test_solve_power_infeasible_keeps_current():
    # link strong enough for the energy budget but too weak for the accuracy
    # floor: p_lo sits above the energy-capped power
    scn = make_scenario([1e-5], profile=two_segment_profile(),
                        accuracy_model=permissive_accuracy_model())
    powers, reports = solve_power(scn, [0], current=[0.11])
    assert reports[0].status == STATUS_INFEASIBLE_ACCURACY
    assert powers[0] == 0.11
    assert reports[0].p_lo > reports[0].p_star


@settings(max_examples=100, deadline=None)
@given(
    bits=st.floats(min_value=1e3, max_value=1e7),
    gain_exp=st.floats(min_value=-9.0, max_value=-4.0),
    interference_exp=st.floats(min_value=-9.0, max_value=-5.0),
    headroom=st.floats(min_value=1e-4, max_value=10.0),
    floor=st.floats(min_value=0.0, max_value=50.0),
)
def test_power_kernel_contract(bits, gain_exp, interference_exp, headroom, floor):
    power, p_lo, root, status = solve_device_power(
        ifd_bits=bits, bandwidth=1e6, device_gain=10.0 ** gain_exp,
        interference=10.0 ** interference_exp, energy_headroom=headroom,
        sinr_floor=floor, max_power=0.23)
    if status in (STATUS_OPTIMAL, STATUS_VACUOUS_ACCURACY):
        assert power is not None
        assert 0.0 < power <= 0.23
        assert power >= p_lo - 1e-12
        # energy slack at the returned power stays nonnegative
        phi = power * 10.0 ** gain_exp / 10.0 ** interference_exp
        slack = headroom * 1e6 * math.log2(1.0 + phi) - power * bits
        assert slack >= -1e-9 * max(1.0, abs(headroom) * 1e6)
    else:
        assert power is None
