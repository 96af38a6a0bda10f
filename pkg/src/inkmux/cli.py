"""Command-line entry point.

Exit codes: 0 ok, 2 usage, 3 input parse, 4 capacity/config,
5 electrical fault, 6 internal consistency.
"""

from __future__ import annotations

import argparse
import sys
import traceback
from pathlib import Path

import numpy as np

from . import topology as topo
from .config import load_config
from .errors import (CapacityError, ConfigError, ConsistencyError, ElectricalFault,
                     InkmuxError, ParameterError, ParseError)
from .job_pipeline import load_raster
from .scheduler import build_schedule, compare_schemes
from .simulation import simulate_job
from .trace_io import SignalTrace, dumps_report, emit_vcd

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_CONFIG, EXIT_ELECTRICAL, EXIT_CONSISTENCY = 0, 2, 3, 4, 5, 6


def _axes(text: str) -> list[int]:
    try:
        axes = [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"axes must be comma-separated integers: {text!r}")
    if not axes or any(a < 1 for a in axes):
        raise argparse.ArgumentTypeError(f"axis sizes must be >= 1: {text!r}")
    return axes


def _write(text: str, path: str | None):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _us(seconds: float) -> str:
    return f"{seconds * 1e6:.3f} us"


# pads ----------------------------------------------------------------------

def cmd_pads(args) -> int:
    if args.table:
        reports = topo.pad_table(args.nozzles)
    else:
        strategy = topo.Explicit(args.axes) if args.axes else args.strategy
        dims = len(args.axes) if args.axes else args.dims
        reports = [topo.pad_count(dims, args.nozzles, strategy)]
    doc = {"nozzles": args.nozzles, "rows": [r.to_dict() for r in reports]}
    if args.json:
        _write(dumps_report(doc), None)
    else:
        print(f"{'scheme':<7}{'axes':<16}{'capacity':>9}{'pads':>7}")
        for r in reports:
            axes = "x".join(map(str, r.axes_used))
            print(f"{topo.SCHEME_NAMES[r.scheme]:<7}{axes:<16}{r.capacity:>9}{r.pads:>7}")
    if args.report:
        _write(dumps_report(doc), args.report)
    return EXIT_OK


# crossover -----------------------------------------------------------------

def cmd_crossover(args) -> int:
    crossings = topo.crossover_table(args.max)
    doc = {
        "crossovers": [{"pair": "/".join(c.pair), "nozzles": c.nozzles} for c in crossings],
        "reported_readings": list(topo.REPORTED_CROSSOVER_READINGS),
        "note": "reported_readings are published curve readings, not solutions of the "
                "closed forms",
        "table": topo.pad_curve_rows(args.max),
    }
    if args.json:
        _write(dumps_report(doc), None)
    else:
        for c in crossings:
            where = "beyond range" if c.nozzles is None else f"{c.nozzles:.6f}"
            print(f"{'/'.join(c.pair)} crossover at Y = {where}")
        readings = ", ".join(map(str, topo.REPORTED_CROSSOVER_READINGS))
        print(f"published curve readings (annotation only): {readings}")
        print(f"{'Y':>6}{'1D':>10}{'2D':>10}{'3D':>10}")
        for row in doc["table"]:
            print(f"{row['nozzles']:>6}{row['1D']:>10.2f}{row['2D']:>10.2f}{row['3D']:>10.2f}")
    if args.report:
        _write(dumps_report(doc), args.report)
    return EXIT_OK


# schedule ------------------------------------------------------------------

def cmd_schedule(args) -> int:
    cfg = load_config(args.config)
    t = topo.Topology.from_axes(args.axes, args.nozzles)
    if args.data is None:
        data = np.ones(t.nozzle_count, dtype=np.uint8)
    else:
        if set(args.data) - {"0", "1"} or len(args.data) != t.nozzle_count:
            raise ParameterError(f"--data needs {t.nozzle_count} characters of 0/1")
        data = np.array([int(c) for c in args.data], dtype=np.uint8)
    schedule = build_schedule(t, data, cfg.timing)
    if args.json:
        _write(dumps_report(schedule), None)
    else:
        print(f"{t.scheme} axes {list(t.axes)}: {len(schedule.slots)} slots, "
              f"frame {_us(schedule.frame_time)}, {schedule.fired_total} fires")
    if args.report:
        _write(dumps_report(schedule), args.report)
    return EXIT_OK


# compare -------------------------------------------------------------------

def cmd_compare(args) -> int:
    cfg = load_config(args.config)
    cmp = compare_schemes(args.nozzles, args.axes2d, args.axes3d, cfg.timing)
    if args.json:
        _write(dumps_report(cmp), None)
    else:
        for name, s, last in (("2D", cmp.schedule_2d, cmp.last_2d),
                              ("3D", cmp.schedule_3d, cmp.last_3d)):
            print(f"{name} axes {list(s.topology.axes)}: pads {s.topology.pads}, "
                  f"{len(s.slots)} slots, frame {_us(s.frame_time)}, "
                  f"last nozzle {_us(last)}, {1e-3 / s.frame_time:.2f} kHz")
        print(f"last nozzle: reduction {cmp.last_nozzle_reduction:.1%} "
              f"(3D takes {1 - cmp.last_nozzle_reduction:.1%} of 2D), "
              f"speedup {cmp.last_nozzle_speedup:.2f}x")
        print(f"frame: reduction {cmp.frame_reduction:.1%}, speedup {cmp.frame_speedup:.2f}x")
        print("published: about 70% reduction, 3x speed")
    if args.report:
        _write(dumps_report(cmp), args.report)
    return EXIT_OK


# simulate ------------------------------------------------------------------

def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    page = load_raster(args.job)
    t = topo.Topology.from_axes(args.axes, args.nozzles)
    trace = SignalTrace(timescale=args.timescale) if args.vcd else None
    result = simulate_job(page, t, cfg, trace=trace, gray=args.gray)
    if args.vcd:
        with open(args.vcd, "w") as fh:
            emit_vcd(trace, fh)
    tp = result.throughput
    print(f"{t.scheme} axes {list(t.axes)}: {tp.frames_count} frames, "
          f"frame {_us(tp.frame_time)}, page {tp.page_time * 1e3:.3f} ms, "
          f"{len(result.records)} pulses, {result.ejections} ejections")
    if args.report:
        _write(dumps_report(result), args.report)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="inkmux", description="Multiplexed inkjet printhead driver simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config=True):
        p.add_argument("--json", action="store_true", help="print the JSON document")
        p.add_argument("--report", metavar="PATH", help="also write the JSON document here")
        if config:
            p.add_argument("--config", metavar="PATH", help="key = value parameter file")

    p = sub.add_parser("pads", help="pad count for one scheme or a 1D/2D/3D table")
    p.add_argument("--nozzles", type=int, required=True)
    p.add_argument("--dims", type=int, choices=(1, 2, 3), default=3)
    p.add_argument("--axes", type=_axes)
    p.add_argument("--strategy", choices=("equal", "pow2"), default="equal")
    p.add_argument("--table", action="store_true")
    common(p, config=False)
    p.set_defaults(func=cmd_pads)

    p = sub.add_parser("crossover", help="pad-curve crossovers and curve table")
    p.add_argument("--max", type=int, default=1000)
    common(p, config=False)
    p.set_defaults(func=cmd_crossover)

    p = sub.add_parser("schedule", help="analytic scan schedule for one frame")
    p.add_argument("--axes", type=_axes, required=True)
    p.add_argument("--nozzles", type=int)
    p.add_argument("--data", help="firing bits as a 0/1 string (default all ones)")
    common(p)
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("compare", help="2D vs 3D scan-time comparison")
    p.add_argument("--nozzles", type=int, required=True)
    p.add_argument("--axes2d", type=_axes, required=True)
    p.add_argument("--axes3d", type=_axes, required=True)
    common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("simulate", help="clock a raster job through the driver model")
    p.add_argument("--job", required=True, help="PBM/PGM page")
    p.add_argument("--axes", type=_axes, required=True)
    p.add_argument("--nozzles", type=int)
    p.add_argument("--vcd", metavar="PATH")
    p.add_argument("--timescale", type=float, default=1e-9, help="VCD seconds per tick")
    p.add_argument("--gray", action="store_true", help="drive the DAC from gray levels")
    common(p)
    p.set_defaults(func=cmd_simulate)
    return parser


def _origin(exc: BaseException) -> str:
    """Name of the innermost inkmux module in the traceback."""
    name = "inkmux"
    for frame, _ in traceback.walk_tb(exc.__traceback__):
        module = frame.f_globals.get("__name__", "")
        if module.startswith("inkmux."):
            name = module.split(".", 1)[1]
    return name


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    codes = [
        (ParseError, EXIT_PARSE),
        (ElectricalFault, EXIT_ELECTRICAL),
        (ConsistencyError, EXIT_CONSISTENCY),
        ((CapacityError, ConfigError, ParameterError), EXIT_CONFIG),
    ]
    try:
        return args.func(args)
    except InkmuxError as exc:
        for kind, code in codes:
            if isinstance(exc, kind):
                break
        else:
            code = EXIT_CONFIG
        print(f"inkmux {args.command}: [{_origin(exc)}] {exc}", file=sys.stderr)
        return code
    except OSError as exc:
        print(f"inkmux {args.command}: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
