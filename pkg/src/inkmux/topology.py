"""Addressing architectures for multiplexed heater arrays.

A topology splits the heater array into line groups. The axis list is
ordered by line group:

* 1D: ``[P]``          direct drive, one line per heater
* 2D: ``[A, P]``       row/column matrix
* 3D: ``[A, P, S]``    address x power x select

Nozzles are linearised P-major, then A, with S varying fastest::

    n = ((p - 1) * A + (a - 1)) * S + s        (1-based throughout)

so heater 1 sits at (P1, A1, S1). Cells past ``nozzle_count`` are padding and
never receive firing data.

The pad count of a topology is ``sum(axes) + 1``; the extra pad is the
shared common/ground return.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

from .errors import CapacityError, ParameterError

AXIS_NAMES = {1: ("P",), 2: ("A", "P"), 3: ("A", "P", "S")}
SCHEME_NAMES = {1: "1D", 2: "2D", 3: "3D"}

# crossover readings printed on the published pad-count curve; they do not
# solve the closed forms and are carried as annotations only
REPORTED_CROSSOVER_READINGS = (10, 30)


@dataclass(frozen=True)
class Explicit:
    """Factorization strategy that uses caller-supplied axes verbatim."""

    axes: tuple[int, ...]

    def __init__(self, axes: Sequence[int]):
        object.__setattr__(self, "axes", tuple(int(a) for a in axes))


# "equal" | "pow2" | Explicit(...)
FactorizationStrategy = Union[str, Explicit]


@dataclass(frozen=True)
class Topology:
    dims: int
    axes: tuple[int, ...]
    nozzle_count: int

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(int(a) for a in self.axes))
        if self.dims not in (1, 2, 3):
            raise ParameterError(f"dims must be 1, 2 or 3, got {self.dims}")
        if len(self.axes) != self.dims:
            raise ParameterError(
                f"{self.dims}D topology needs {self.dims} axes, got {list(self.axes)}")
        if any(a < 1 for a in self.axes):
            raise ParameterError(f"axis sizes must be >= 1, got {list(self.axes)}")
        if self.nozzle_count < 1:
            raise ParameterError("nozzle_count must be >= 1")
        if self.capacity < self.nozzle_count:
            raise CapacityError(
                f"axes {list(self.axes)} cover {self.capacity} cells, "
                f"fewer than {self.nozzle_count} nozzles")

    @classmethod
    def build(cls, dims: int, nozzles: int, strategy: FactorizationStrategy = "equal"):
        return cls(dims, tuple(factorize_axes(dims, nozzles, strategy)), nozzles)

    @classmethod
    def from_axes(cls, axes: Sequence[int], nozzles: int | None = None):
        axes = tuple(axes)
        return cls(len(axes), axes, math.prod(axes) if nozzles is None else nozzles)

    @property
    def capacity(self) -> int:
        return math.prod(self.axes)

    @property
    def p_max(self) -> int:
        return self.axes[0] if self.dims == 1 else self.axes[1]

    @property
    def a_max(self) -> int:
        return 1 if self.dims == 1 else self.axes[0]

    @property
    def s_max(self) -> int:
        return self.axes[2] if self.dims == 3 else 1

    @property
    def pads(self) -> int:
        return sum(self.axes) + 1

    @property
    def scheme(self) -> str:
        return SCHEME_NAMES[self.dims]


@dataclass(frozen=True)
class Coord:
    p: int
    a: int | None = None
    s: int | None = None

    def __str__(self):
        parts = [f"P{self.p}"]
        if self.a is not None:
            parts.append(f"A{self.a}")
        if self.s is not None:
            parts.append(f"S{self.s}")
        return ",".join(parts)


@dataclass(frozen=True)
class PadReport:
    scheme: int
    nozzles: int
    pads: int
    axes_used: tuple[int, ...] = field(default_factory=tuple)

    @property
    def capacity(self) -> int:
        return math.prod(self.axes_used)

    def to_dict(self) -> dict:
        return {
            "scheme": SCHEME_NAMES[self.scheme],
            "dims": self.scheme,
            "nozzles": self.nozzles,
            "capacity": self.capacity,
            "axes": list(self.axes_used),
            "axis_names": list(AXIS_NAMES[self.scheme]),
            "pads": self.pads,
        }


def _check_dims(dims):
    if dims not in (1, 2, 3):
        raise ParameterError(f"dims must be 1, 2 or 3, got {dims}")


def integer_root_ceil(n: int, k: int) -> int:
    """Smallest integer c with c**k >= n."""
    c = max(1, round(n ** (1.0 / k)))
    while c ** k < n:
        c += 1
    while c > 1 and (c - 1) ** k >= n:
        c -= 1
    return c


def factorize_axes(dims: int, nozzles: int,
                   strategy: FactorizationStrategy = "equal") -> list[int]:
    """Pick axis sizes whose product covers ``nozzles``.

    ``equal`` starts from ``dims`` copies of the ceiling root and shrinks axes
    one step at a time while coverage holds. ``pow2`` splits
    ``ceil(log2(nozzles))`` as evenly as possible over the axes, larger
    exponents first. Both return axes in descending order.
    """
    _check_dims(dims)
    if nozzles < 1:
        raise ParameterError(f"nozzles must be >= 1, got {nozzles}")

    if isinstance(strategy, Explicit):
        axes = list(strategy.axes)
        if len(axes) != dims:
            raise ParameterError(f"{dims}D needs {dims} axes, got {axes}")
        if any(a < 1 for a in axes):
            raise ParameterError(f"axis sizes must be >= 1, got {axes}")
        if math.prod(axes) < nozzles:
            raise CapacityError(
                f"axes {axes} cover {math.prod(axes)} cells, fewer than {nozzles} nozzles")
        return axes

    if strategy == "equal":
        axes = [integer_root_ceil(nozzles, dims)] * dims
        product = math.prod(axes)
        shrunk = True
        while shrunk:
            shrunk = False
            for i in range(dims):
                if axes[i] > 1 and product // axes[i] * (axes[i] - 1) >= nozzles:
                    product = product // axes[i] * (axes[i] - 1)
                    axes[i] -= 1
                    shrunk = True
        return sorted(axes, reverse=True)

    if strategy == "pow2":
        total = (nozzles - 1).bit_length()
        base, extra = divmod(total, dims)
        return [2 ** (base + (i < extra)) for i in range(dims)]

    raise ParameterError(f"unknown factorization strategy {strategy!r}")


def parse_strategy(text: str) -> FactorizationStrategy:
    """``"equal"``, ``"pow2"`` or a comma list such as ``"16,8"``."""
    text = text.strip()
    if text in ("equal", "pow2"):
        return text
    try:
        return Explicit([int(x) for x in text.split(",")])
    except ValueError:
        raise ParameterError(f"bad factorization strategy {text!r}") from None


def pad_count(dims: int, nozzles: int,
              strategy: FactorizationStrategy = "equal") -> PadReport:
    axes = factorize_axes(dims, nozzles, strategy)
    return PadReport(dims, nozzles, sum(axes) + 1, tuple(axes))


def nozzle_to_coords(t: Topology, n: int) -> Coord:
    if not 1 <= n <= t.nozzle_count:
        raise IndexError(f"nozzle {n} outside 1..{t.nozzle_count}")
    i = n - 1
    if t.dims == 1:
        return Coord(n)
    if t.dims == 2:
        p, a = divmod(i, t.a_max)
        return Coord(p + 1, a + 1)
    col, s = divmod(i, t.s_max)
    p, a = divmod(col, t.a_max)
    return Coord(p + 1, a + 1, s + 1)


def coords_to_nozzle(t: Topology, c: Coord) -> int:
    def bounded(value, limit, name):
        if value is None or not 1 <= value <= limit:
            raise IndexError(f"{name}={value} outside 1..{limit}")
        return value

    p = bounded(c.p, t.p_max, "P")
    if t.dims == 1:
        n = p
    else:
        a = bounded(c.a, t.a_max, "A")
        if t.dims == 2:
            n = (p - 1) * t.a_max + a
        else:
            s = bounded(c.s, t.s_max, "S")
            n = ((p - 1) * t.a_max + (a - 1)) * t.s_max + s
    if n > t.nozzle_count:
        raise IndexError(f"{c} is a padding cell beyond nozzle {t.nozzle_count}")
    return n


def closed_form_pads(dims: int, nozzles: float) -> float:
    """Continuous pad curve for equal axes: Y+1, 2*sqrt(Y)+1, 3*cbrt(Y)+1."""
    _check_dims(dims)
    return dims * nozzles ** (1.0 / dims) + 1.0


def _bisect(f, lo, hi, tol=1e-9):
    flo = f(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if (fmid < 0) == (flo < 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class Crossover:
    pair: tuple[str, str]
    nozzles: float | None   # None when the crossing lies beyond max_nozzles


def crossover_table(max_nozzles: int = 4096) -> list[Crossover]:
    """Real nozzle counts where the closed-form pad curves meet.

    Every pair starts with the higher-order scheme costing more pads at Y=1,
    so each crossing is bracketed on [1, max_nozzles].
    """
    if max_nozzles < 2:
        raise ParameterError("max_nozzles must be >= 2")
    out = []
    for lo_dims, hi_dims in ((1, 2), (2, 3), (1, 3)):
        def f(y, lo_dims=lo_dims, hi_dims=hi_dims):
            return closed_form_pads(lo_dims, y) - closed_form_pads(hi_dims, y)

        pair = (SCHEME_NAMES[lo_dims], SCHEME_NAMES[hi_dims])
        if f(float(max_nozzles)) < 0:
            out.append(Crossover(pair, None))
        else:
            out.append(Crossover(pair, _bisect(f, 1.0, float(max_nozzles))))
    return out


def pad_curve_rows(max_nozzles: int) -> list[dict]:
    return [
        {"nozzles": y, "1D": closed_form_pads(1, y), "2D": closed_form_pads(2, y),
         "3D": closed_form_pads(3, y)}
        for y in range(1, max_nozzles + 1)
    ]


def pad_table(nozzles: int, strategy: FactorizationStrategy = "equal") -> list[PadReport]:
    """1D/2D/3D pad comparison for one array size."""
    return [pad_count(d, nozzles, strategy) for d in (1, 2, 3)]
