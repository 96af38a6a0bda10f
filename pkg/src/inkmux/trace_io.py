"""Signal traces, Value Change Dump output and machine-readable reports."""

from __future__ import annotations

import bisect
import json
from dataclasses import dataclass, field
from typing import IO, Any

from .errors import OrderingError, ParameterError

_TIMESCALES = {
    1.0: "1s", 1e-1: "100ms", 1e-2: "10ms", 1e-3: "1ms", 1e-4: "100us", 1e-5: "10us",
    1e-6: "1us", 1e-7: "100ns", 1e-8: "10ns", 1e-9: "1ns", 1e-10: "100ps",
    1e-11: "10ps", 1e-12: "1ps", 1e-13: "100fs", 1e-14: "10fs", 1e-15: "1fs",
}

WIRE = "wire"
REAL = "real"


def timescale_label(seconds: float) -> str:
    for value, label in _TIMESCALES.items():
        if abs(seconds - value) <= value * 1e-9:
            return label
    raise ParameterError(f"timescale {seconds} s is not 1/10/100 of a VCD unit")


def vcd_identifier(index: int) -> str:
    """Compact printable identifier code: '!' .. '~' in little-endian base 94."""
    chars = []
    while True:
        index, digit = divmod(index, 94)
        chars.append(chr(33 + digit))
        if index == 0:
            return "".join(chars)


@dataclass(frozen=True)
class Signal:
    name: str
    kind: str = WIRE
    initial: Any = 0


@dataclass(frozen=True)
class Event:
    tick: int
    signal: int     # index into SignalTrace.signals
    value: Any


@dataclass
class SignalTrace:
    """Change-only event log over integer ticks of ``timescale`` seconds.

    Events sharing a tick are kept in signal-declaration order; repeated
    changes of one signal within a tick keep their recording order.
    """

    timescale: float = 1e-9
    signals: list[Signal] = field(default_factory=list)
    events: list[Event] = field(default_factory=list)

    def __post_init__(self):
        timescale_label(self.timescale)
        self._index = {sig.name: i for i, sig in enumerate(self.signals)}
        self._value = [sig.initial for sig in self.signals]
        self._keys = [(e.tick, e.signal) for e in self.events]

    def declare(self, name: str, kind: str = WIRE, initial: Any = None) -> int:
        if name in self._index:
            return self._index[name]
        if kind not in (WIRE, REAL):
            raise ParameterError(f"unknown signal kind {kind!r}")
        if initial is None:
            initial = 0.0 if kind == REAL else 0
        self.signals.append(Signal(name, kind, initial))
        self._index[name] = len(self.signals) - 1
        self._value.append(initial)
        return len(self.signals) - 1

    def signal_id(self, name: str) -> int:
        return self._index[name]

    @property
    def last_tick(self) -> int:
        return self.events[-1].tick if self.events else 0

    def value(self, name: str):
        return self._value[self._index[name]]

    def record(self, tick: int, signal: str | int, value) -> "SignalTrace":
        if isinstance(signal, str):
            if signal not in self._index:
                self.declare(signal, REAL if isinstance(value, float) else WIRE)
            signal = self._index[signal]
        if tick < self.last_tick:
            raise OrderingError(f"tick {tick} recorded after tick {self.last_tick}")
        if self.signals[signal].kind == WIRE:
            value = int(bool(value))
        else:
            value = float(value)
        if self._value[signal] == value:
            return self
        self._value[signal] = value
        key = (tick, signal)
        pos = bisect.bisect_right(self._keys, key)
        self._keys.insert(pos, key)
        self.events.insert(pos, Event(tick, signal, value))
        return self

    def record_time(self, seconds: float, signal, value) -> "SignalTrace":
        return self.record(self.to_tick(seconds), signal, value)

    def to_tick(self, seconds: float) -> int:
        return int(round(seconds / self.timescale))

    def named_events(self) -> list[tuple[int, str, Any]]:
        return [(e.tick, self.signals[e.signal].name, e.value) for e in self.events]


def record(trace: SignalTrace, tick: int, signal, value) -> SignalTrace:
    return trace.record(tick, signal, value)


def _format_value(sig: Signal, value, ident: str) -> str:
    if sig.kind == REAL:
        return f"r{float(value)!r} {ident}"
    return f"{int(value)}{ident}"


def emit_vcd(trace: SignalTrace, sink: IO[str], module: str = "printhead") -> None:
    """Write ``trace`` as a VCD. The output depends only on the trace."""
    idents = [vcd_identifier(i) for i in range(len(trace.signals))]
    out = [
        "$version inkmux $end",
        f"$timescale {timescale_label(trace.timescale)} $end",
        f"$scope module {module} $end",
    ]
    for sig, ident in zip(trace.signals, idents):
        width = 64 if sig.kind == REAL else 1
        out.append(f"$var {sig.kind} {width} {ident} {sig.name} $end")
    out += ["$upscope $end", "$enddefinitions $end", "$dumpvars"]
    out += [_format_value(sig, sig.initial, ident) for sig, ident in zip(trace.signals, idents)]
    out.append("$end")
    current = None
    for event in trace.events:
        if event.tick != current:
            current = event.tick
            out.append(f"#{current}")
        out.append(_format_value(trace.signals[event.signal], event.value, idents[event.signal]))
    sink.write("\n".join(out) + "\n")


def to_document(obj) -> Any:
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    if isinstance(obj, list):
        return [to_document(o) for o in obj]
    return obj


def dumps_report(obj) -> str:
    return json.dumps(to_document(obj), indent=2, sort_keys=True) + "\n"


def emit_report(obj, sink: IO[str]) -> None:
    """Serialize a report object (anything with ``to_dict``) as stable JSON."""
    sink.write(dumps_report(obj))
