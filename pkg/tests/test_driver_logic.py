import itertools
from collections import deque

import pytest
from hypothesis import given, strategies as st

from inkmux.driver_logic import (DriverInputs, DriverState, ElectricalParams, HeaterCell,
                                 electrical_check, fire_condition, heater_current, level_shift,
                                 require_safe, tick)
from inkmux.errors import ConfigError, ElectricalFault, ParameterError
from inkmux.topology import Coord


def shift(state, bit):
    return tick(state, DriverInputs(data=bit, bit_shift_clock=True))


def reference_register(length, bits):
    """Head-first register contents via a bounded deque (independent oracle)."""
    reg = deque([0] * length, maxlen=length)
    for b in bits:
        reg.appendleft(b)
    return list(reg)


def test_shift_example():
    state = DriverState.empty(5)
    for b in (1, 0, 1, 1, 0):
        state = shift(state, b)
    assert list(state.shift_register) == [0, 1, 1, 0, 1]
    assert state.tick == 5
    assert state.latch_bank == (0,) * 5


def test_shift_conservation_exhaustive():
    for length in range(1, 17):
        # every pattern for short registers, a deterministic spread for long ones
        patterns = (itertools.product((0, 1), repeat=length) if length <= 10
                    else (tuple((i >> j) & 1 for j in range(length)) for i in range(0, 2 ** length, 997)))
        for pattern in patterns:
            for k in range(length + 1):
                state = DriverState.empty(length)
                for b in pattern[:k]:
                    state = shift(state, b)
                assert list(state.shift_register) == reference_register(length, pattern[:k])
                assert list(state.shift_register[:k]) == list(reversed(pattern[:k]))


def test_clear_zeroes_everything():
    state = DriverState((1, 0, 1), (1, 1, 1), tick=7)
    state = tick(state, DriverInputs(clear=1))
    assert state.shift_register == (0, 0, 0)
    assert state.latch_bank == (0, 0, 0)
    assert state.tick == 8


def test_clear_wins_over_enable():
    state = DriverState((1, 1), (0, 0))
    state = tick(state, DriverInputs(clear=1, enable=1))
    assert state.latch_bank == (0, 0)
    # ENABLE still high: no new rising edge on the next tick
    state = tick(state, DriverInputs(enable=1, data=1, bit_shift_clock=True))
    assert state.latch_bank == (0, 0)


def test_latch_copies_register():
    state = DriverState((1, 0, 1), (0, 0, 0))
    latched = tick(state, DriverInputs(enable=1))
    assert latched.latch_bank == (1, 0, 1)
    assert latched.shift_register == (1, 0, 1)


def test_latch_only_on_rising_edge():
    state = tick(DriverState((1, 0), (0, 0)), DriverInputs(enable=1))
    state = tick(state, DriverInputs(enable=1, data=0, bit_shift_clock=True))
    state = tick(state, DriverInputs(enable=1, data=0, bit_shift_clock=True))
    assert state.shift_register == (0, 0)
    assert state.latch_bank == (1, 0)


def test_latch_captures_before_same_tick_shift():
    state = DriverState((1, 1, 0), (0, 0, 0))
    state = tick(state, DriverInputs(enable=1, data=0, bit_shift_clock=True))
    assert state.latch_bank == (1, 1, 0)
    assert state.shift_register == (0, 1, 1)


history = st.lists(st.tuples(st.integers(0, 1), st.booleans(), st.integers(0, 1)), max_size=40)


@given(history, st.integers(1, 12))
def test_clear_dominance(events, length):
    state = DriverState.empty(length)
    for data, clk, enable in events:
        state = tick(state, DriverInputs(data=data, bit_shift_clock=clk, enable=enable))
    state = tick(state, DriverInputs(clear=1, enable=1))
    assert state.shift_register == (0,) * length
    assert state.latch_bank == (0,) * length


@given(history, st.integers(1, 12))
def test_latch_isolation(events, length):
    state = DriverState.empty(length)
    for data, clk, enable in events:
        before = state
        state = tick(state, DriverInputs(data=data, bit_shift_clock=clk, enable=enable))
        if not (enable and not before.enable_prev):
            assert state.latch_bank == before.latch_bank
        if not clk:
            assert state.shift_register == before.shift_register


def test_level_shift_examples():
    assert level_shift(3.5) == 8.0
    assert level_shift(0.0) == 0.0
    assert level_shift(5.0, dac_code=255) == 8.5
    assert level_shift(5.0, dac_code=0) == 7.5
    assert level_shift(3.49) == 0.0


def test_level_shift_errors():
    with pytest.raises(ConfigError):
        level_shift(5.0, ElectricalParams(nominal_drive=9.5))
    with pytest.raises(ParameterError):
        level_shift(5.0, dac_code=256)


@given(st.floats(0, 6), st.one_of(st.none(), st.integers(0, 255)))
def test_level_shift_output_range(v, code):
    out = level_shift(v, dac_code=code)
    assert out == 0.0 or 7.5 <= out <= 8.5


def test_fire_condition_examples():
    assert fire_condition(None, True, True, True, 3)
    assert not fire_condition(None, True, True, False, 3)
    assert fire_condition(None, True, True, False, 2)
    assert not fire_condition(None, True, False, True, 2)
    assert fire_condition(None, True, False, False, 1)
    with pytest.raises(ParameterError):
        fire_condition(None, True, True, True, 4)


def test_fire_condition_monotone():
    for dims in (1, 2, 3):
        for before in itertools.product((False, True), repeat=3):
            for i in range(3):
                after = list(before)
                after[i] = True
                if fire_condition(None, *before, dims):
                    assert fire_condition(None, *after, dims)


def test_electrical_check_examples():
    ok = electrical_check(8.0, 5.0)
    assert ok.conducts and ok.in_window and not ok.breakdown_violation
    assert electrical_check(9.2, 5.0).breakdown_violation
    assert not electrical_check(8.0, 0.5).conducts
    assert electrical_check(0.0, 5.0).in_window
    assert not electrical_check(6.0, 5.0).in_window
    with pytest.raises(ElectricalFault):
        require_safe(9.2, 5.0)


def test_electrical_params_invariants():
    with pytest.raises(ConfigError):
        ElectricalParams(drive_window=(7.5, 9.5))
    with pytest.raises(ConfigError):
        ElectricalParams(gate_threshold=4.0)
    with pytest.raises(ConfigError):
        ElectricalParams(heater_resistance=0.0)


def test_heater_current():
    assert heater_current(8.0, HeaterCell(Coord(1), 40.0)) == pytest.approx(0.2)
    assert heater_current(0.0, HeaterCell(Coord(1), 40.0)) == 0.0
    assert heater_current(7.5, HeaterCell(Coord(1), 30.0)) == pytest.approx(0.25)
    assert heater_current(8.0, HeaterCell(Coord(1), 40.0), conducting=False) == 0.0
    with pytest.raises(ParameterError):
        HeaterCell(Coord(1), 0.0)


def test_logic_supply_bounds():
    with pytest.raises(ParameterError):
        DriverInputs(logic_supply=7.0)
    with pytest.raises(ParameterError):
        DriverInputs(logic_supply=0.0)
