"""Flat ``key = value`` configuration files.

Keys are dotted by section, e.g.::

    # faster clock, pipelined select words
    timing.bit_clock_period = 5e-8
    timing.pipelined_registration = true
    electrical.nominal_drive = 8.0
    thermal.superheat_limit = 312
    factorization.strategy = equal

Absent keys keep their defaults. Unknown keys are rejected. Environment
variables are never consulted.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, fields
from pathlib import Path

from .driver_logic import ElectricalParams
from .errors import ConfigError, InkmuxError
from .firing_model import ThermalParams
from .scheduler import TimingParams
from .topology import FactorizationStrategy, parse_strategy

_SECTION = "inkmux"


@dataclass(frozen=True)
class Config:
    timing: TimingParams = field(default_factory=TimingParams)
    electrical: ElectricalParams = field(default_factory=ElectricalParams)
    thermal: ThermalParams = field(default_factory=ThermalParams)
    strategy: FactorizationStrategy = "equal"


def _to_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _optional_int(text: str):
    return None if text.strip().lower() in ("", "none") else int(text)


_CONVERTERS = {
    "timing": {"bit_clock_period": float, "pulse_width": float, "settle_time": float,
               "pipelined_registration": _to_bool, "max_parallel_fires": _optional_int},
    "electrical": {"logic_high_threshold": float, "drive_window_low": float,
                   "drive_window_high": float, "breakdown": float, "gate_threshold": float,
                   "heater_resistance": float, "nominal_drive": float},
    "thermal": {"ambient_temp": float, "superheat_limit": float,
                "heating_rate_coefficient": float, "ambient_pressure": float},
}


def parse_config(text: str) -> Config:
    parser = configparser.ConfigParser(interpolation=None, delimiters=("=",),
                                       comment_prefixes=("#", ";"),
                                       inline_comment_prefixes=("#",))
    parser.optionxform = str
    try:
        parser.read_string(f"[{_SECTION}]\n{text}")
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None

    values: dict[str, dict] = {"timing": {}, "electrical": {}, "thermal": {}}
    strategy: FactorizationStrategy = "equal"
    for key, raw in parser.items(_SECTION):
        section, _, name = key.partition(".")
        if key == "factorization.strategy":
            try:
                strategy = parse_strategy(raw)
            except InkmuxError as exc:
                raise ConfigError(str(exc)) from None
            continue
        convert = _CONVERTERS.get(section, {}).get(name)
        if convert is None:
            raise ConfigError(f"unknown config key {key!r}")
        try:
            values[section][name] = convert(raw)
        except ValueError as exc:
            raise ConfigError(f"{key}: {exc}") from None

    elec = values["electrical"]
    if "drive_window_low" in elec or "drive_window_high" in elec:
        low, high = ElectricalParams().drive_window
        elec["drive_window"] = (elec.pop("drive_window_low", low),
                                elec.pop("drive_window_high", high))
    try:
        return Config(TimingParams(**values["timing"]), ElectricalParams(**elec),
                      ThermalParams(**values["thermal"]), strategy)
    except InkmuxError as exc:
        raise ConfigError(str(exc)) from None


def load_config(path=None) -> Config:
    if path is None:
        return Config()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)


def config_dict(cfg: Config) -> dict:
    def plain(obj):
        return {f.name: getattr(obj, f.name) for f in fields(obj)}

    elec = plain(cfg.electrical)
    elec["drive_window"] = list(elec["drive_window"])
    return {"timing": plain(cfg.timing), "electrical": elec, "thermal": plain(cfg.thermal)}

