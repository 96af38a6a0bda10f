"""Tick-level simulation of one scan frame.

Two engines produce the same :class:`FrameRun`:

``"python"``
    Sequences :class:`~inkmux.driver_logic.DriverInputs` through
    :func:`~inkmux.driver_logic.tick` one clock at a time, evaluates the
    per-cell firing condition, applies the electrical guards, and can record
    every line into a :class:`~inkmux.trace_io.SignalTrace`.
``"kernel"``
    The compiled array kernel from :mod:`inkmux._kernels`; no trace or
    electrical bookkeeping, used for bulk sweeps.

Neither engine consults :mod:`inkmux.scheduler`; :func:`check_against_schedule`
compares their output with the analytic schedule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .driver_logic import (DriverInputs, DriverState, ElectricalParams, HeaterCell,
                           fire_condition, heater_current, level_shift, require_safe, tick)
from .errors import ParameterError
from .firing_model import Pulse, ThermalParams, pulse_temperature
from .scheduler import ScanSchedule, TimingParams, time_to_fire
from .topology import Topology, nozzle_to_coords
from .trace_io import REAL, SignalTrace

TIME_RTOL = 1e-9


@dataclass
class FrameRun:
    fire_time: np.ndarray       # pulse-end time per nozzle, -1.0 when not fired
    fire_slot: np.ndarray       # slot index per nozzle, -1 when not fired
    fire_count: np.ndarray
    frame_time: float
    pulses: list[Pulse] = field(default_factory=list)
    currents: dict[int, float] = field(default_factory=dict)


def _bits(t: Topology, data) -> np.ndarray:
    bits = np.asarray(data).ravel()
    if bits.shape[0] != t.nozzle_count:
        raise ParameterError(
            f"firing data has {bits.shape[0]} entries, topology has {t.nozzle_count} nozzles")
    return (bits != 0).astype(np.uint8)


def run_frame_kernel(t: Topology, data, timing: TimingParams = TimingParams()) -> FrameRun:
    timing.check_pipelining(t)
    bits = _bits(t, data)
    max_par = timing.max_parallel_fires or 0
    fire_time, fire_slot, fire_count, frame_time = _kernels.frame_kernel(
        t.dims, t.a_max, t.p_max, t.s_max, bits, timing.bit_clock_period,
        timing.pulse_width, timing.settle_time, timing.pipelined_registration, max_par)
    return FrameRun(fire_time, fire_slot, fire_count, float(frame_time))


class _Controller:
    """Sequences driver inputs for one frame and books time and traces."""

    def __init__(self, t, timing, electrical, thermal, trace, t0, logic_supply, levels):
        self.t = t
        self.timing = timing
        self.electrical = electrical
        self.thermal = thermal
        self.trace = trace
        self.now = 0.0
        self.t0 = t0
        self.logic_supply = logic_supply
        self.levels = levels
        self.state = DriverState.empty(t.s_max if t.dims == 3 else 0,
                                       None if levels is None else tuple(int(v) for v in levels))
        n = t.nozzle_count
        self.run = FrameRun(np.full(n, -1.0), np.full(n, -1, dtype=np.int64),
                            np.zeros(n, dtype=np.int64), 0.0)
        self.cells = {}
        for nozzle in range(1, n + 1):
            c = nozzle_to_coords(t, nozzle)
            self.cells.setdefault((c.p, c.a), []).append(
                (nozzle, HeaterCell(c, electrical.heater_resistance)))
        if trace is not None:
            self._declare()

    # trace helpers
    def _declare(self):
        tr, t = self.trace, self.t
        for name in ("CLEAR", "DATA", "BIT_SHFT", "ENABLE"):
            tr.declare(name)
        for p in range(1, t.p_max + 1):
            tr.declare(f"P{p}")
        if t.dims >= 2:
            for a in range(1, t.a_max + 1):
                tr.declare(f"A{a}")
        if t.dims == 3:
            for s in range(1, t.s_max + 1):
                tr.declare(f"S{s}")
        tr.declare("VDRIVE", REAL)
        for nozzle in range(1, t.nozzle_count + 1):
            tr.declare(f"HEAT{nozzle}")
        for nozzle in range(1, t.nozzle_count + 1):
            tr.declare(f"TEMP{nozzle}", REAL, self.thermal.ambient_temp)

    def _rec(self, at, name, value):
        if self.trace is not None:
            self.trace.record_time(self.t0 + at, name, value)

    def step(self, inputs: DriverInputs, duration: float):
        if inputs.bit_shift_clock:
            self._rec(self.now, "DATA", inputs.data)
            self._rec(self.now, "BIT_SHFT", 1)
            self._rec(self.now + 0.5 * duration, "BIT_SHFT", 0)
        self.state = tick(self.state, inputs)
        self.now += duration

    def shift_word(self, word, enable=0, p_select=frozenset(), a_select=frozenset()):
        # last S line first so that S1's bit ends at the head
        for bit in reversed(word):
            self.step(DriverInputs(data=bit, bit_shift_clock=True, enable=enable,
                                   logic_supply=self.logic_supply,
                                   heater_supply=self.electrical.nominal_drive,
                                   p_select=p_select, a_select=a_select),
                      self.timing.bit_clock_period)

    def pulse(self, slot, p, a, enable, next_word=None):
        """One firing window for lines (p, a); ``next_word`` is shifted meanwhile."""
        t = self.t
        pw = self.timing.pulse_width
        p_sel = frozenset([p])
        a_sel = frozenset([a]) if a is not None else frozenset()
        start = self.now
        self._rec(start, f"P{p}", 1)
        if a is not None:
            self._rec(start, f"A{a}", 1)

        inputs = DriverInputs(enable=enable, logic_supply=self.logic_supply,
                              heater_supply=self.electrical.nominal_drive,
                              p_select=p_sel, a_select=a_sel)
        head = pw if next_word is None else pw - len(next_word) * self.timing.bit_clock_period
        self.step(inputs, head)

        firing = []
        if enable:
            check = require_safe(inputs.heater_supply, self.logic_supply, self.electrical)
            latch = self.state.latch_bank
            for nozzle, cell in self.cells.get((p, a), ()):
                s_on = bool(latch[cell.coord.s - 1]) if t.dims == 3 else True
                a_on = (a in a_sel) if t.dims >= 2 else True
                if fire_condition(cell, p in p_sel, a_on, s_on, t.dims):
                    code = None if self.levels is None else int(self.levels[nozzle - 1])
                    drive = (level_shift(self.logic_supply, self.electrical, code)
                             if check.conducts else 0.0)
                    firing.append((nozzle, cell, drive, check.conducts))
            self._rec(start, "ENABLE", 1)
            if t.dims == 3:
                for s, bit in enumerate(latch, 1):
                    self._rec(start, f"S{s}", bit)
            for nozzle, _, drive, _ in firing:
                self._rec(start, "VDRIVE", drive)
                self._rec(start, f"HEAT{nozzle}", 1)

        if next_word is not None:
            self.shift_word(next_word, enable, p_sel, a_sel)

        end = self.now
        for nozzle, cell, drive, conducts in firing:
            cell.fired_this_frame = True
            i = nozzle - 1
            self.run.fire_count[i] += 1
            self.run.fire_time[i] = end
            self.run.fire_slot[i] = slot
            self.run.pulses.append(Pulse(nozzle, slot, self.t0 + start, drive, pw,
                                         cell.resistance))
            self.run.currents[nozzle] = heater_current(drive, cell, conducts)
            self._rec(end, f"HEAT{nozzle}", 0)
            self._rec(end, f"TEMP{nozzle}",
                      pulse_temperature(drive, cell.resistance, pw, self.thermal))

        self._rec(end, "ENABLE", 0)
        self._rec(end, "VDRIVE", 0.0)
        self._rec(end, f"P{p}", 0)
        if a is not None:
            self._rec(end, f"A{a}", 0)
        self.step(DriverInputs(logic_supply=self.logic_supply,
                               heater_supply=self.electrical.nominal_drive),
                  self.timing.settle_time)


def _slot_words(t: Topology, bits, limit):
    """(p, a, select word) per slot for a 3D frame, honouring the fire limit."""
    out = []
    for p in range(1, t.p_max + 1):
        for a in range(1, t.a_max + 1):
            base = ((p - 1) * t.a_max + (a - 1)) * t.s_max
            lines = [s for s in range(t.s_max) if base + s < t.nozzle_count and bits[base + s]]
            chunks = [lines] if not limit else [lines[i:i + limit]
                                                for i in range(0, len(lines), limit)] or [[]]
            for chunk in chunks:
                word = [0] * t.s_max
                for s in chunk:
                    word[s] = 1
                out.append((p, a, tuple(word)))
    return out


def run_frame(t: Topology, data, timing: TimingParams = TimingParams(),
              electrical: ElectricalParams = ElectricalParams(),
              thermal: ThermalParams = ThermalParams(), trace: SignalTrace | None = None,
              t0: float = 0.0, logic_supply: float = 5.0, levels=None) -> FrameRun:
    """Clock one frame through the driver model tick by tick.

    ``levels`` switches on gray-scale drive: one 8-bit DAC code per nozzle.
    Raises :class:`~inkmux.errors.ElectricalFault` if a firing window would
    put the heater rail at or above breakdown.
    """
    timing.check_pipelining(t)
    bits = _bits(t, data)
    ctl = _Controller(t, timing, electrical, thermal, trace, t0, logic_supply, levels)

    if t.dims == 3:
        slots = _slot_words(t, bits, timing.max_parallel_fires)
        if timing.pipelined_registration:
            ctl.shift_word(slots[0][2])
        for k, (p, a, word) in enumerate(slots):
            if not timing.pipelined_registration:
                ctl.shift_word(word)
            nxt = slots[k + 1][2] if timing.pipelined_registration and k + 1 < len(slots) else None
            ctl.pulse(k, p, a, 1, nxt)
    else:
        k = 0
        for p in range(1, t.p_max + 1):
            for a in range(1, t.a_max + 1):
                n = p if t.dims == 1 else (p - 1) * t.a_max + a
                fire = int(n <= t.nozzle_count and bits[n - 1])
                ctl.pulse(k, p, None if t.dims == 1 else a, fire)
                k += 1

    ctl.run.frame_time = ctl.now
    return ctl.run


def simulate_frame(t: Topology, data, timing: TimingParams = TimingParams(),
                   engine: str = "kernel", **kwargs) -> FrameRun:
    if engine == "kernel":
        return run_frame_kernel(t, data, timing)
    if engine == "python":
        return run_frame(t, data, timing, **kwargs)
    raise ParameterError(f"unknown engine {engine!r}")


def _close(x: float, y: float) -> bool:
    return math.isclose(x, y, rel_tol=TIME_RTOL, abs_tol=1e-15)


def check_against_schedule(run: FrameRun, schedule: ScanSchedule) -> list[str]:
    """Describe every disagreement between a simulated frame and the schedule."""
    problems = []
    if not _close(run.frame_time, schedule.frame_time):
        problems.append(f"frame time {run.frame_time!r} != {schedule.frame_time!r}")
    for i in range(schedule.topology.nozzle_count):
        nozzle = i + 1
        expected = time_to_fire(schedule, nozzle)
        if run.fire_count[i] != (0 if expected is None else 1):
            problems.append(f"nozzle {nozzle} fired {int(run.fire_count[i])} times")
            continue
        if expected is None:
            continue
        if run.fire_slot[i] != schedule.fire_slot[nozzle]:
            problems.append(f"nozzle {nozzle} slot {int(run.fire_slot[i])} "
                            f"!= {schedule.fire_slot[nozzle]}")
        if not _close(float(run.fire_time[i]), expected):
            problems.append(f"nozzle {nozzle} time {float(run.fire_time[i])!r} != {expected!r}")
    return problems
