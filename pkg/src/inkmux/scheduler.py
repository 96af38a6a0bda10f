"""Analytic scan schedules and scheme comparisons.

Timing model, per scan slot::

    duration = registration + pulse_width + settle_time

Registration is ``S_max`` bit clocks in 3D (the select word is shifted in
before it is latched) and zero in 1D/2D, where lines are decoded directly.
With ``pipelined_registration`` the next word is shifted while the current
one fires, so only the first slot pays for registration.

Slots run P-major with A fastest. Every frame sweeps every (P, A) pair,
whether or not anything fires in it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ParameterError
from .topology import Explicit, Topology

# published headline figures, reported next to the model's own numbers
REPORTED_REDUCTION = 0.70
REPORTED_SPEEDUP = 3.0


@dataclass(frozen=True)
class TimingParams:
    bit_clock_period: float = 1e-7
    pulse_width: float = 3e-6
    settle_time: float = 0.0
    pipelined_registration: bool = False
    max_parallel_fires: int | None = None

    def __post_init__(self):
        if self.bit_clock_period < 0 or self.settle_time < 0:
            raise ParameterError("durations must be >= 0")
        if self.pulse_width <= 0:
            raise ParameterError("pulse_width must be > 0")
        if self.max_parallel_fires is not None and self.max_parallel_fires < 1:
            raise ParameterError("max_parallel_fires must be >= 1")

    def registration_time(self, t: Topology) -> float:
        return t.s_max * self.bit_clock_period if t.dims == 3 else 0.0

    def check_pipelining(self, t: Topology):
        if self.pipelined_registration and self.registration_time(t) > self.pulse_width:
            raise ParameterError(
                "pipelined registration needs the select word to shift within one "
                f"pulse ({self.registration_time(t)} s > {self.pulse_width} s)")


@dataclass(frozen=True)
class ScanSlot:
    slot_index: int
    p_line: int
    a_line: int | None
    s_vector: tuple[int, ...]
    fired_nozzles: frozenset
    start_time: float
    duration: float
    registration_time: float = 0.0
    pulse_width: float = 0.0

    @property
    def pulse_end(self) -> float:
        return self.start_time + self.registration_time + self.pulse_width


@dataclass(frozen=True)
class ScanSchedule:
    topology: Topology
    timing: TimingParams
    slots: tuple[ScanSlot, ...]
    frame_time: float
    fire_slot: dict = field(default_factory=dict, repr=False, compare=False)

    def lines_touched(self) -> dict[str, set[int]]:
        p = {s.p_line for s in self.slots}
        a = {s.a_line for s in self.slots if s.a_line is not None}
        return {"P": p, "A": a}

    @property
    def fired_total(self) -> int:
        return sum(len(s.fired_nozzles) for s in self.slots)

    def to_dict(self) -> dict:
        return {
            "axes": list(self.topology.axes),
            "dims": self.topology.dims,
            "nozzles": self.topology.nozzle_count,
            "timing": timing_dict(self.timing),
            "frame_time": self.frame_time,
            "max_firing_frequency": max_firing_frequency(self) if self.frame_time > 0 else None,
            "slot_count": len(self.slots),
            "fired_total": self.fired_total,
            "slots": [
                {
                    "slot": s.slot_index,
                    "p": s.p_line,
                    "a": s.a_line,
                    "s_vector": list(s.s_vector),
                    "fired": sorted(s.fired_nozzles),
                    "start_time": s.start_time,
                    "duration": s.duration,
                }
                for s in self.slots
            ],
        }


def timing_dict(timing: TimingParams) -> dict:
    return {
        "bit_clock_period": timing.bit_clock_period,
        "pulse_width": timing.pulse_width,
        "settle_time": timing.settle_time,
        "pipelined_registration": timing.pipelined_registration,
        "max_parallel_fires": timing.max_parallel_fires,
    }


def _as_bits(t: Topology, data) -> np.ndarray:
    bits = np.asarray(data, dtype=np.int64).ravel()
    if bits.shape[0] != t.nozzle_count:
        raise ParameterError(
            f"firing data has {bits.shape[0]} entries, topology has {t.nozzle_count} nozzles")
    return (bits != 0).astype(np.uint8)


def _select_words(t: Topology, bits, p, a, limit):
    """Yield the select words one (P, A) column needs, split by ``limit``."""
    active = []
    for s in range(1, t.s_max + 1):
        n = ((p - 1) * t.a_max + (a - 1)) * t.s_max + s
        if n <= t.nozzle_count and bits[n - 1]:
            active.append((s, n))
    if limit is None or len(active) <= limit:
        groups = [active]
    else:
        groups = [active[i:i + limit] for i in range(0, len(active), limit)]
    for group in groups:
        word = [0] * t.s_max
        for s, _ in group:
            word[s - 1] = 1
        yield tuple(word), frozenset(n for _, n in group)


def build_schedule(t: Topology, data: Sequence[int],
                   timing: TimingParams = TimingParams()) -> ScanSchedule:
    bits = _as_bits(t, data)
    timing.check_pipelining(t)
    reg = timing.registration_time(t)
    pw, st = timing.pulse_width, timing.settle_time

    slots = []
    fire_slot = {}
    start = 0.0
    for p in range(1, t.p_max + 1):
        for a in range(1, t.a_max + 1):
            if t.dims == 3:
                columns = list(_select_words(t, bits, p, a, timing.max_parallel_fires))
            else:
                n = p if t.dims == 1 else (p - 1) * t.a_max + a
                fired = frozenset([n]) if n <= t.nozzle_count and bits[n - 1] else frozenset()
                columns = [((), fired)]
            for word, fired in columns:
                k = len(slots)
                slot_reg = reg if (k == 0 or not timing.pipelined_registration) else 0.0
                duration = slot_reg + pw + st
                slot = ScanSlot(k, p, None if t.dims == 1 else a, word, fired, start,
                                duration, slot_reg, pw)
                slots.append(slot)
                for n in fired:
                    fire_slot[n] = k
                start = start + duration
    return ScanSchedule(t, timing, tuple(slots), start, fire_slot)


def time_to_fire(s: ScanSchedule, nozzle: int) -> float | None:
    """End of the firing pulse for ``nozzle``; None when its data bit is 0."""
    if not 1 <= nozzle <= s.topology.nozzle_count:
        raise IndexError(f"nozzle {nozzle} outside 1..{s.topology.nozzle_count}")
    k = s.fire_slot.get(nozzle)
    if k is None:
        return None
    return s.slots[k].pulse_end


def max_firing_frequency(s: ScanSchedule) -> float:
    if s.frame_time <= 0:
        raise ParameterError("frame_time must be > 0")
    return 1.0 / s.frame_time


def scan_line_count(t: Topology) -> dict[str, int]:
    counts = {"P": t.p_max}
    if t.dims >= 2:
        counts["A"] = t.a_max
    if t.dims == 3:
        counts["S"] = t.s_max
    return counts


@dataclass(frozen=True)
class SchemeComparison:
    nozzles: int
    schedule_2d: ScanSchedule
    schedule_3d: ScanSchedule

    @property
    def last_2d(self) -> float:
        return time_to_fire(self.schedule_2d, self.nozzles)

    @property
    def last_3d(self) -> float:
        return time_to_fire(self.schedule_3d, self.nozzles)

    @property
    def last_nozzle_reduction(self) -> float:
        return 1.0 - self.last_3d / self.last_2d

    @property
    def last_nozzle_speedup(self) -> float:
        return self.last_2d / self.last_3d

    @property
    def frame_reduction(self) -> float:
        return 1.0 - self.schedule_3d.frame_time / self.schedule_2d.frame_time

    @property
    def frame_speedup(self) -> float:
        return self.schedule_2d.frame_time / self.schedule_3d.frame_time

    def to_dict(self) -> dict:
        def scheme(s: ScanSchedule, last: float):
            return {
                "axes": list(s.topology.axes),
                "pads": s.topology.pads,
                "scan_lines": scan_line_count(s.topology),
                "slot_count": len(s.slots),
                "frame_time": s.frame_time,
                "last_nozzle_time": last,
                "max_firing_frequency": max_firing_frequency(s),
            }

        return {
            "nozzles": self.nozzles,
            "timing": timing_dict(self.schedule_2d.timing),
            "2D": scheme(self.schedule_2d, self.last_2d),
            "3D": scheme(self.schedule_3d, self.last_3d),
            "last_nozzle": {
                "reduction": self.last_nozzle_reduction,
                "remaining_fraction": self.last_3d / self.last_2d,
                "speedup": self.last_nozzle_speedup,
            },
            "frame": {
                "reduction": self.frame_reduction,
                "remaining_fraction": self.schedule_3d.frame_time / self.schedule_2d.frame_time,
                "speedup": self.frame_speedup,
            },
            "reported": {
                "reduction": REPORTED_REDUCTION,
                "speedup": REPORTED_SPEEDUP,
                "note": "headline 30% is read as remaining_fraction, i.e. a ~70% reduction",
            },
        }


def compare_schemes(nozzles: int, axes_2d: Sequence[int], axes_3d: Sequence[int],
                    timing: TimingParams = TimingParams()) -> SchemeComparison:
    t2 = Topology.build(2, nozzles, Explicit(axes_2d))
    t3 = Topology.build(3, nozzles, Explicit(axes_3d))
    ones = np.ones(nozzles, dtype=np.uint8)
    return SchemeComparison(nozzles, build_schedule(t2, ones, timing),
                            build_schedule(t3, ones, timing))

