"""Compiled frame-simulation kernel.

The kernel is written once as plain Python over numpy arrays. When numba is
importable and ``INKMUX_DISABLE_JIT`` is unset (or "0") it is compiled with
``@njit``; otherwise the same function runs interpreted. Both entry points
stay importable (``frame_kernel_jit`` is None without numba) so they can be
benchmarked side by side.
"""

import os

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None

JIT_DISABLED = os.environ.get("INKMUX_DISABLE_JIT", "") not in ("", "0")
USE_JIT = njit is not None and not JIT_DISABLED


def _frame_kernel(dims, a_max, p_max, s_max, bits, bit_clock, pulse, settle,
                  pipelined, max_par):
    """Clock one frame through the shift register / latch / pass-gate model.

    ``bits`` holds one firing bit per used nozzle. ``max_par`` <= 0 means no
    limit on simultaneous fires. Returns per-nozzle pulse-end times (-1 when
    not fired), slot indices, fire counts, and the frame duration.
    """
    n = bits.shape[0]
    fire_time = np.full(n, -1.0)
    fire_slot = np.full(n, -1, dtype=np.int64)
    fire_count = np.zeros(n, dtype=np.int64)
    n_cols = p_max * a_max
    t = 0.0

    if dims != 3:
        for col in range(n_cols):
            if col < n and bits[col] != 0:
                t += pulse
                fire_count[col] += 1
                fire_time[col] = t
                fire_slot[col] = col
            else:
                t += pulse
            t += settle
        return fire_time, fire_slot, fire_count, t

    n_slots = 0
    for col in range(n_cols):
        active = 0
        for s in range(s_max):
            idx = col * s_max + s
            if idx < n and bits[idx] != 0:
                active += 1
        if max_par > 0 and active > max_par:
            n_slots += (active + max_par - 1) // max_par
        else:
            n_slots += 1

    words = np.zeros((n_slots, s_max), dtype=np.uint8)
    slot_col = np.zeros(n_slots, dtype=np.int64)
    k = 0
    for col in range(n_cols):
        slot_col[k] = col
        used = 0
        for s in range(s_max):
            idx = col * s_max + s
            if idx < n and bits[idx] != 0:
                if max_par > 0 and used == max_par:
                    k += 1
                    slot_col[k] = col
                    used = 0
                words[k, s] = 1
                used += 1
        k += 1

    register = np.zeros(s_max, dtype=np.uint8)
    latch = np.zeros(s_max, dtype=np.uint8)
    if pipelined:
        for j in range(s_max):
            for i in range(s_max - 1, 0, -1):
                register[i] = register[i - 1]
            register[0] = words[0, s_max - 1 - j]
            t += bit_clock

    for k in range(n_slots):
        if not pipelined:
            for j in range(s_max):
                for i in range(s_max - 1, 0, -1):
                    register[i] = register[i - 1]
                register[0] = words[k, s_max - 1 - j]
                t += bit_clock
        # ENABLE rising edge
        for s in range(s_max):
            latch[s] = register[s]
        if pipelined and k + 1 < n_slots:
            t += pulse - s_max * bit_clock
            for j in range(s_max):
                for i in range(s_max - 1, 0, -1):
                    register[i] = register[i - 1]
                register[0] = words[k + 1, s_max - 1 - j]
                t += bit_clock
        else:
            t += pulse
        col = slot_col[k]
        for s in range(s_max):
            idx = col * s_max + s
            if latch[s] != 0 and idx < n:
                fire_count[idx] += 1
                fire_time[idx] = t
                fire_slot[idx] = k
        t += settle
    return fire_time, fire_slot, fire_count, t


frame_kernel_py = _frame_kernel
frame_kernel_jit = njit(cache=True)(_frame_kernel) if njit is not None else None
frame_kernel = frame_kernel_jit if USE_JIT else frame_kernel_py
