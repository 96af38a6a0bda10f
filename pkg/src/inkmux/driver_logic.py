"""Bit-level model of the printhead digital driver.

Serial DATA is clocked into a shift register by BIT_SHFT, copied into the
latch bank on a rising ENABLE edge, and the latched S word gates the heater
pass-gates while ENABLE holds the firing window open.

Conventions:

* DATA enters at the head (index 0, line S1) and moves toward higher S.
* A rising ENABLE latches the register as it stood *before* this tick's
  shift, so the next word may be clocked in while the current one fires.
* CLEAR wins over everything else on the same tick.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .errors import ConfigError, ElectricalFault, ParameterError
from .topology import Coord

DAC_FULL_SCALE = 255


@dataclass(frozen=True)
class DriverInputs:
    data: int = 0
    bit_shift_clock: bool = False
    enable: int = 0
    clear: int = 0
    logic_supply: float = 5.0
    heater_supply: float = 8.0
    p_select: frozenset = field(default_factory=frozenset)
    a_select: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not 0.0 < self.logic_supply <= 6.0:
            raise ParameterError(f"logic supply {self.logic_supply} V outside (0, 6]")


@dataclass(frozen=True)
class DriverState:
    shift_register: tuple[int, ...]
    latch_bank: tuple[int, ...]
    gray_codes: tuple[int, ...] | None = None
    tick: int = 0
    enable_prev: int = 0

    @classmethod
    def empty(cls, length: int, gray_codes=None) -> "DriverState":
        zeros = (0,) * length
        return cls(zeros, zeros, gray_codes)


def tick(state: DriverState, inputs: DriverInputs) -> DriverState:
    """Advance the driver by one base-clock tick."""
    rising = bool(inputs.enable) and not state.enable_prev
    if inputs.clear:
        zeros = (0,) * len(state.shift_register)
        return replace(state, shift_register=zeros, latch_bank=zeros,
                       tick=state.tick + 1, enable_prev=int(bool(inputs.enable)))

    latch = state.shift_register if rising else state.latch_bank
    register = state.shift_register
    if inputs.bit_shift_clock and register:
        register = (int(bool(inputs.data)),) + register[:-1]
    return replace(state, shift_register=register, latch_bank=latch,
                   tick=state.tick + 1, enable_prev=int(bool(inputs.enable)))


@dataclass(frozen=True)
class ElectricalParams:
    logic_high_threshold: float = 3.5
    drive_window: tuple[float, float] = (7.5, 8.5)
    breakdown: float = 9.0
    gate_threshold: float = 1.0
    heater_resistance: float = 40.0
    nominal_drive: float = 8.0

    def __post_init__(self):
        low, high = self.drive_window
        if not 0.0 < low <= high:
            raise ConfigError(f"bad drive window {self.drive_window}")
        if high >= self.breakdown:
            raise ConfigError(
                f"drive window top {high} V must sit below breakdown {self.breakdown} V")
        if self.gate_threshold >= self.logic_high_threshold:
            raise ConfigError("gate threshold must be below the logic input-high level")
        if self.heater_resistance <= 0:
            raise ConfigError("heater resistance must be positive")


@dataclass(frozen=True)
class ElectricalCheck:
    conducts: bool
    in_window: bool
    breakdown_violation: bool


@dataclass
class HeaterCell:
    coord: Coord
    resistance: float = 40.0
    fired_this_frame: bool = False

    def __post_init__(self):
        if self.resistance <= 0:
            raise ParameterError("heater resistance must be positive")


def level_shift(logic_v: float, params: ElectricalParams = ElectricalParams(),
                dac_code: int | None = None) -> float:
    """Translate a logic level to a heater drive voltage (0 V when off).

    With a DAC code the output is linear across the drive window, code 0 at
    the bottom and 255 at the top.
    """
    low, high = params.drive_window
    if not low <= params.nominal_drive <= high:
        raise ConfigError(
            f"nominal drive {params.nominal_drive} V outside window {low}-{high} V")
    if logic_v < 0:
        raise ParameterError("logic voltage must be >= 0")
    if logic_v < params.logic_high_threshold:
        return 0.0
    if dac_code is None:
        return params.nominal_drive
    if not 0 <= dac_code <= DAC_FULL_SCALE:
        raise ParameterError(f"DAC code {dac_code} outside 0..{DAC_FULL_SCALE}")
    return low + (dac_code / DAC_FULL_SCALE) * (high - low)


def fire_condition(cell: HeaterCell | None, p_active: bool, a_active: bool,
                   s_latched: bool, dims: int) -> bool:
    if dims == 3:
        return bool(p_active and a_active and s_latched)
    if dims == 2:
        return bool(p_active and a_active)
    if dims == 1:
        return bool(p_active)
    raise ParameterError(f"dims must be 1, 2 or 3, got {dims}")


def electrical_check(drive_v: float, gate_v: float,
                     params: ElectricalParams = ElectricalParams()) -> ElectricalCheck:
    low, high = params.drive_window
    return ElectricalCheck(
        conducts=gate_v > params.gate_threshold,
        in_window=drive_v == 0.0 or low <= drive_v <= high,
        breakdown_violation=drive_v >= params.breakdown,
    )


def require_safe(drive_v: float, gate_v: float,
                 params: ElectricalParams = ElectricalParams()) -> ElectricalCheck:
    """``electrical_check`` that raises on breakdown, as a running frame must."""
    check = electrical_check(drive_v, gate_v, params)
    if check.breakdown_violation:
        raise ElectricalFault(
            f"heater drive {drive_v} V reaches breakdown {params.breakdown} V")
    return check


def heater_current(drive_v: float, cell: HeaterCell, conducting: bool = True) -> float:
    if not conducting:
        return 0.0
    return drive_v / cell.resistance
