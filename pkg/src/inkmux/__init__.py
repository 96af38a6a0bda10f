"""Simulator and scan scheduler for multiplexed inkjet printhead drivers."""

from .driver_logic import (DriverInputs, DriverState, ElectricalParams, HeaterCell,
                           electrical_check, fire_condition, heater_current, level_shift, tick)
from .errors import (CapacityError, ConfigError, ConsistencyError, ElectricalFault,
                     InkmuxError, OrderingError, ParameterError, ParseError)
from .firing_model import FiringRecord, Pulse, ThermalParams, droplet_ejected, pulse_temperature
from .frame import FrameRun, check_against_schedule, run_frame, simulate_frame
from .job_pipeline import (RasterPage, SwathPlan, load_raster, rasterize_to_frames,
                           throughput_estimate)
from .scheduler import (ScanSchedule, ScanSlot, TimingParams, build_schedule, compare_schemes,
                        max_firing_frequency, scan_line_count, time_to_fire)
from .topology import (Coord, Explicit, PadReport, Topology, coords_to_nozzle, crossover_table,
                       factorize_axes, nozzle_to_coords, pad_count)
from .trace_io import SignalTrace, emit_report, emit_vcd, record

__version__ = "0.1.0"
