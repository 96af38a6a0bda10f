"""Raster pages in, per-frame firing vectors out.

Pages are read from portable bitmaps (P1/P4) and graymaps (P2/P5). Bitmap
1 means ink. Graymap values are read as ink density, so a value of 128 or
more fires.

One printhead column prints one page column. The page is cut into
horizontal bands ``nozzle_count`` rows tall; band ``b`` of column ``c``
becomes frame ``b * width + c``, and row ``i`` of a band drives nozzle
``i + 1``. The last band is zero-padded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ParseError
from .scheduler import ScanSchedule
from .topology import Topology

GRAY_THRESHOLD = 128
BINARY = "binary"
GRAY = "gray"


@dataclass
class RasterPage:
    width: int
    height: int
    pixels: np.ndarray          # row-major, shape (height * width,)
    mode: str = BINARY

    def __post_init__(self):
        self.pixels = np.asarray(self.pixels, dtype=np.uint8).ravel()
        if self.pixels.shape[0] != self.width * self.height:
            raise ValueError(
                f"{self.width}x{self.height} page needs {self.width * self.height} pixels, "
                f"got {self.pixels.shape[0]}")
        if self.mode not in (BINARY, GRAY):
            raise ValueError(f"unknown page mode {self.mode!r}")
        if self.mode == BINARY and self.pixels.max(initial=0) > 1:
            raise ValueError("binary page pixels must be 0 or 1")

    @property
    def grid(self) -> np.ndarray:
        return self.pixels.reshape(self.height, self.width)

    def binary(self) -> np.ndarray:
        """Firing bits, thresholding gray pages."""
        if self.mode == GRAY:
            return (self.grid >= GRAY_THRESHOLD).astype(np.uint8)
        return self.grid.copy()

    @property
    def inked(self) -> int:
        return int(self.binary().sum())


class _Reader:
    """Netpbm header/body tokenizer that remembers byte offsets."""

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def skip_space(self):
        data = self.data
        while self.pos < len(data):
            ch = data[self.pos]
            if ch == ord("#"):
                while self.pos < len(data) and data[self.pos] not in b"\r\n":
                    self.pos += 1
            elif chr(ch).isspace():
                self.pos += 1
            else:
                return

    def token(self, what: str) -> tuple[bytes, int]:
        self.skip_space()
        start = self.pos
        while self.pos < len(self.data) and not chr(self.data[self.pos]).isspace() \
                and self.data[self.pos] != ord("#"):
            self.pos += 1
        if start == self.pos:
            raise ParseError(f"truncated file: expected {what}", start)
        return self.data[start:self.pos], start

    def integer(self, what: str) -> int:
        tok, at = self.token(what)
        if not tok.isdigit():
            raise ParseError(f"expected {what}, found {tok[:16]!r}", at)
        return int(tok)


def parse_netpbm(data: bytes) -> RasterPage:
    if len(data) < 2 or data[:1] != b"P" or data[1:2] not in b"1245":
        raise ParseError(f"unsupported magic {data[:2]!r}; need P1, P2, P4 or P5", 0)
    kind = data[1:2].decode()
    r = _Reader(data)
    r.pos = 2
    width = r.integer("width")
    height = r.integer("height")
    if width < 1 or height < 1:
        raise ParseError("page dimensions must be positive", r.pos)
    maxval = 1
    if kind in "25":
        r.skip_space()
        at = r.pos
        maxval = r.integer("maxval")
        if not 1 <= maxval <= 255:
            raise ParseError(f"unsupported maxval {maxval}; need 1..255", at)
    count = width * height

    if kind == "4":
        body_start = r.pos + 1
        row_bytes = (width + 7) // 8
        need = row_bytes * height
        body = data[body_start:body_start + need]
        if len(body) < need:
            raise ParseError(f"truncated raster: {need} bytes needed, {len(body)} present",
                             body_start + len(body))
        rows = np.unpackbits(np.frombuffer(body, np.uint8).reshape(height, row_bytes), axis=1)
        return RasterPage(width, height, rows[:, :width].ravel(), BINARY)

    if kind == "5":
        body_start = r.pos + 1
        body = data[body_start:body_start + count]
        if len(body) < count:
            raise ParseError(f"truncated raster: {count} bytes needed, {len(body)} present",
                             body_start + len(body))
        values = np.frombuffer(body, np.uint8).astype(np.int64)
        if values.max(initial=0) > maxval:
            bad = int(np.argmax(values > maxval))
            raise ParseError(f"sample {values[bad]} exceeds maxval {maxval}", body_start + bad)
        return RasterPage(width, height, _scale(values, maxval), GRAY)

    values = np.empty(count, dtype=np.int64)
    for i in range(count):
        if kind == "1":
            # plain bitmaps may run samples together without separators
            r.skip_space()
            if r.pos >= len(data):
                raise ParseError(f"truncated raster: sample {i} of {count} missing", r.pos)
            ch = data[r.pos:r.pos + 1]
            if ch not in b"01":
                raise ParseError(f"bad bitmap sample {ch!r}", r.pos)
            values[i] = int(ch)
            r.pos += 1
        else:
            tok, at = r.token(f"sample {i} of {count}")
            if not tok.isdigit() or int(tok) > maxval:
                raise ParseError(f"bad graymap sample {tok[:16]!r}", at)
            values[i] = int(tok)
    if kind == "1":
        return RasterPage(width, height, values, BINARY)
    return RasterPage(width, height, _scale(values, maxval), GRAY)


def _scale(values: np.ndarray, maxval: int) -> np.ndarray:
    return (values * 255 // maxval).astype(np.uint8)


def load_raster(path) -> RasterPage:
    return parse_netpbm(Path(path).read_bytes())


def dump_pbm(page: RasterPage) -> bytes:
    """Plain (P1) encoding of a page's firing bits."""
    rows = [" ".join(str(int(v)) for v in row) for row in page.binary()]
    return (f"P1\n{page.width} {page.height}\n" + "\n".join(rows) + "\n").encode()


@dataclass
class SwathPlan:
    frames: np.ndarray          # (frames_count, nozzles_per_column) firing bits
    nozzles_per_column: int
    width: int
    height: int
    levels: np.ndarray | None = None    # gray codes, same shape, gray pages only

    @property
    def frames_count(self) -> int:
        return self.frames.shape[0]

    @property
    def bands(self) -> int:
        return self.frames_count // self.width

    def to_dict(self) -> dict:
        out = {
            "width": self.width,
            "height": self.height,
            "nozzles_per_column": self.nozzles_per_column,
            "frames_count": self.frames_count,
            "frames": self.frames.tolist(),
        }
        if self.levels is not None:
            out["levels"] = self.levels.tolist()
        return out


def _band_frames(grid: np.ndarray, nozzles: int) -> np.ndarray:
    height, width = grid.shape
    bands = math.ceil(height / nozzles)
    padded = np.zeros((bands * nozzles, width), dtype=grid.dtype)
    padded[:height] = grid
    # (band, row-in-band, column) -> (band, column, row-in-band)
    return padded.reshape(bands, nozzles, width).transpose(0, 2, 1).reshape(bands * width,
                                                                           nozzles)


def rasterize_to_frames(page: RasterPage, t: Topology) -> SwathPlan:
    frames = _band_frames(page.binary(), t.nozzle_count)
    levels = None
    if page.mode == GRAY:
        levels = _band_frames(page.grid, t.nozzle_count)
    return SwathPlan(frames, t.nozzle_count, page.width, page.height, levels)


def render_page(plan: SwathPlan) -> RasterPage:
    """Inverse of :func:`rasterize_to_frames` on the thresholded bits."""
    n = plan.nozzles_per_column
    stacked = plan.frames.reshape(plan.bands, plan.width, n).transpose(0, 2, 1)
    grid = stacked.reshape(plan.bands * n, plan.width)[:plan.height]
    return RasterPage(plan.width, plan.height, grid.ravel(), BINARY)


@dataclass(frozen=True)
class Throughput:
    frames_count: int
    frame_time: float
    page_time: float
    pages_per_minute: float
    nozzle_frequency: float

    def to_dict(self) -> dict:
        return {
            "frames_count": self.frames_count,
            "frame_time": self.frame_time,
            "page_time": self.page_time,
            "pages_per_minute": self.pages_per_minute,
            "nozzle_frequency": self.nozzle_frequency,
        }


def throughput_estimate(plan: SwathPlan, schedule: ScanSchedule | float) -> Throughput:
    """Page time assuming back-to-back frames; scanning cost ignores the data."""
    frame_time = schedule if isinstance(schedule, float) else schedule.frame_time
    if plan.frames_count < 1:
        raise ValueError("swath plan has no frames")
    page_time = plan.frames_count * frame_time
    return Throughput(plan.frames_count, frame_time, page_time, 60.0 / page_time,
                      1.0 / frame_time)
