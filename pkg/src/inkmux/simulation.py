"""End-to-end print-job simulation.

Every frame of a swath plan is clocked through the tick-level driver model,
checked against its analytic schedule, and each pulse is passed through the
thermal model. A disagreement with the schedule is fatal.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .config import Config, config_dict
from .errors import ConsistencyError
from .firing_model import FiringRecord, droplet_ejected
from .frame import check_against_schedule, run_frame
from .job_pipeline import RasterPage, Throughput, rasterize_to_frames, throughput_estimate
from .scheduler import build_schedule, timing_dict
from .topology import Topology
from .trace_io import SignalTrace


@dataclass
class JobResult:
    topology: Topology
    config: Config
    page: RasterPage
    throughput: Throughput
    records: list[FiringRecord] = field(default_factory=list)
    frame_ejections: list[int] = field(default_factory=list)
    frame_times: list[float] = field(default_factory=list)

    @property
    def ejections(self) -> int:
        return sum(r.ejected for r in self.records)

    def to_dict(self) -> dict:
        return {
            "axes": list(self.topology.axes),
            "dims": self.topology.dims,
            "nozzles": self.topology.nozzle_count,
            "pads": self.topology.pads,
            "page": {"width": self.page.width, "height": self.page.height,
                     "mode": self.page.mode, "inked_pixels": self.page.inked},
            "timing": timing_dict(self.config.timing),
            "config": config_dict(self.config),
            "throughput": self.throughput.to_dict(),
            "firing_records": len(self.records),
            "ejections": self.ejections,
            "frame_ejections": self.frame_ejections,
            "max_peak_temp": max((r.peak_temp for r in self.records), default=None),
        }


def simulate_job(page: RasterPage, topology: Topology, config: Config = Config(),
                 trace: SignalTrace | None = None, gray: bool = False) -> JobResult:
    """Print ``page`` frame by frame. ``gray`` drives the DAC from gray levels."""
    plan = rasterize_to_frames(page, topology)
    records: list[FiringRecord] = []
    frame_ejections = []
    frame_times = []
    t0 = 0.0
    frame_time = None
    for index, bits in enumerate(plan.frames):
        levels = plan.levels[index] if gray and plan.levels is not None else None
        run = run_frame(topology, bits, config.timing, config.electrical, config.thermal,
                        trace=trace, t0=t0, levels=levels)
        schedule = build_schedule(topology, bits, config.timing)
        problems = check_against_schedule(run, schedule)
        if problems:
            raise ConsistencyError(
                f"frame {index}: tick simulation disagrees with schedule: "
                + "; ".join(problems[:5]))
        frame_records = [droplet_ejected(p, config.thermal) for p in run.pulses]
        records.extend(frame_records)
        frame_ejections.append(sum(r.ejected for r in frame_records))
        frame_times.append(run.frame_time)
        frame_time = schedule.frame_time
        t0 += run.frame_time

    return JobResult(topology, config, page, throughput_estimate(plan, frame_time),
                     records, frame_ejections, frame_times)
