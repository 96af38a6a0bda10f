"""Compare the numba-compiled frame kernel with its interpreted fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Both variants run the same random frames; results are checked for equality
before timings are reported.
"""

import argparse
import time

import numpy as np

from inkmux import _kernels
from inkmux.topology import Topology

CASES = [[32, 32], [10, 10, 10], [16, 16, 16], [40, 40, 25]]


def frames(axes, count, rng):
    t = Topology.from_axes(axes)
    for _ in range(count):
        bits = rng.integers(0, 2, t.capacity).astype(np.uint8)
        yield (t.dims, t.a_max, t.p_max, t.s_max, bits, 1e-7, 3e-6, 0.0, False, 0)


def best_of(kernel, inputs, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        for args in inputs:
            kernel(*args)
        best = min(best, time.perf_counter() - start)
    return best / len(inputs)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--frames", type=int, default=5)
    args = parser.parse_args()
    if _kernels.frame_kernel_jit is None:
        raise SystemExit("numba is not installed; nothing to compare")

    rng = np.random.default_rng(0)
    print(f"{'axes':<12}{'nozzles':>8}{'python ms':>12}{'numba ms':>11}{'speedup':>9}")
    for axes in CASES:
        inputs = list(frames(axes, args.frames, rng))
        for a, b in zip(_kernels.frame_kernel_py(*inputs[0]),
                        _kernels.frame_kernel_jit(*inputs[0])):    # also warms the JIT
            assert np.array_equal(a, b)
        py = best_of(_kernels.frame_kernel_py, inputs, args.repeat)
        jit = best_of(_kernels.frame_kernel_jit, inputs, args.repeat)
        label = "x".join(map(str, axes))
        print(f"{label:<12}{int(np.prod(axes)):>8}{py * 1e3:>12.3f}{jit * 1e3:>11.4f}"
              f"{py / jit:>8.0f}x")


if __name__ == "__main__":
    main()
