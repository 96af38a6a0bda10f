"""Lumped thermal model of one heater pulse.

Heating is linear in delivered energy with no losses::

    peak = ambient + coefficient * (V**2 / R) * duration

The default coefficient is calibrated so that the nominal pulse (8.0 V into
40 ohm for 3 us) lands exactly on the 312 C superheat limit. A droplet is
ejected when the peak reaches that limit.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError, ParameterError

CALIBRATION_VOLTAGE = 8.0
CALIBRATION_RESISTANCE = 40.0
CALIBRATION_PULSE = 3e-6


def pulse_energy(v: float, r: float, duration: float) -> float:
    return (v * v / r) * duration


def calibrated_coefficient(ambient: float = 25.0, superheat_limit: float = 312.0,
                           v: float = CALIBRATION_VOLTAGE,
                           r: float = CALIBRATION_RESISTANCE,
                           duration: float = CALIBRATION_PULSE) -> float:
    """Coefficient (C per joule) that takes the given pulse to the limit."""
    return (superheat_limit - ambient) / pulse_energy(v, r, duration)


@dataclass(frozen=True)
class ThermalParams:
    ambient_temp: float = 25.0
    superheat_limit: float = 312.0
    heating_rate_coefficient: float | None = None
    ambient_pressure: float = 1.0   # bar; informational

    def __post_init__(self):
        if self.heating_rate_coefficient is None:
            object.__setattr__(self, "heating_rate_coefficient",
                               calibrated_coefficient(self.ambient_temp, self.superheat_limit))
        if self.superheat_limit <= self.ambient_temp:
            raise ConfigError("superheat limit must exceed ambient temperature")
        if self.heating_rate_coefficient <= 0:
            raise ConfigError("heating_rate_coefficient must be > 0")


@dataclass(frozen=True)
class Pulse:
    nozzle: int
    slot: int
    start_time: float
    drive_voltage: float
    duration: float
    resistance: float = CALIBRATION_RESISTANCE


@dataclass(frozen=True)
class FiringRecord:
    nozzle: int
    slot: int
    start_time: float
    drive_voltage: float
    peak_temp: float
    ejected: bool
    energy: float

    def to_dict(self) -> dict:
        return {
            "nozzle": self.nozzle, "slot": self.slot, "start_time": self.start_time,
            "drive_voltage": self.drive_voltage, "peak_temp": self.peak_temp,
            "ejected": self.ejected, "energy": self.energy,
        }


def pulse_temperature(v: float, r: float, duration: float,
                      params: ThermalParams = ThermalParams()) -> float:
    if r <= 0:
        raise ParameterError("resistance must be > 0")
    if duration < 0:
        raise ParameterError("duration must be >= 0")
    return params.ambient_temp + params.heating_rate_coefficient * pulse_energy(v, r, duration)


def droplet_ejected(pulse: Pulse, params: ThermalParams = ThermalParams()) -> FiringRecord:
    peak = pulse_temperature(pulse.drive_voltage, pulse.resistance, pulse.duration, params)
    return FiringRecord(
        nozzle=pulse.nozzle,
        slot=pulse.slot,
        start_time=pulse.start_time,
        drive_voltage=pulse.drive_voltage,
        peak_temp=peak,
        ejected=peak >= params.superheat_limit,
        energy=pulse_energy(pulse.drive_voltage, pulse.resistance, pulse.duration),
    )


def ejection_threshold_voltage(r: float, duration: float,
                               params: ThermalParams = ThermalParams()) -> float:
    """Lowest drive voltage that reaches the superheat limit."""
    rise = params.superheat_limit - params.ambient_temp
    return (rise * r / (params.heating_rate_coefficient * duration)) ** 0.5
