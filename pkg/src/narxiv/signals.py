"""Excitation signals and ground-truth data synthesis.

prbs produces a maximal-length pseudo-random binary sequence from a
Fibonacci LFSR; duffing_ueda_simulate integrates the forced oscillator
y'' + k y' + mu y**3 = A cos(t) with fixed-step classical RK4 and samples
the steady state after a transient discard.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DivergenceError
from .model import Dataset

__all__ = ["prbs", "duffing_ueda_simulate", "MAXIMAL_TAPS"]

# Maximal-length feedback taps (polynomial exponents) per register size.
# Each entry is verified by the test suite to give period 2**bits - 1.
MAXIMAL_TAPS: dict[int, tuple[int, ...]] = {
    2: (2, 1),
    3: (3, 2),
    4: (4, 3),
    5: (5, 3),
    6: (6, 5),
    7: (7, 6),
    8: (8, 6, 5, 4),
    9: (9, 5),
    10: (10, 7),
    11: (11, 9),
    12: (12, 6, 4, 1),
    13: (13, 4, 3, 1),
    14: (14, 5, 3, 1),
    15: (15, 14),
    16: (16, 15, 13, 4),
}


def prbs(
    length: int,
    register_bits: int = 9,
    seed: int = 1,
    hold_samples: int = 1,
    low: float = -1.0,
    high: float = 1.0,
) -> np.ndarray:
    """Maximal-length PRBS mapped to {low, high}.

    Parameters
    ----------
    length : int
        Number of samples to emit.
    register_bits : int
        LFSR register size, 2..16; the bit stream repeats with period
        2**register_bits - 1.
    seed : int
        Initial register contents; must be nonzero after masking to the
        register width.  Same seed, same sequence.
    hold_samples : int
        How many output samples each register bit is held for.
    low, high : float
        Levels the 0/1 bits map to.

    Returns
    -------
    numpy.ndarray
        The excitation sequence, values in {low, high}.
    """
    if register_bits not in MAXIMAL_TAPS:
        raise ValueError(
            f"unsupported register size {register_bits}; known sizes "
            f"{sorted(MAXIMAL_TAPS)}"
        )
    if length < 1:
        raise ValueError("length must be positive")
    if hold_samples < 1:
        raise ValueError("hold_samples must be positive")
    mask = (1 << register_bits) - 1
    state = seed & mask
    if state == 0:
        raise ValueError("seed must be nonzero in the register width")
    taps = MAXIMAL_TAPS[register_bits]
    out = np.empty(length)
    n_bits = -(-length // hold_samples)
    idx = 0
    for _ in range(n_bits):
        bit = state & 1
        value = high if bit else low
        take = min(hold_samples, length - idx)
        out[idx : idx + take] = value
        idx += take
        feedback = 0
        for tap in taps:
            feedback ^= (state >> (tap - 1)) & 1
        state = ((state << 1) | feedback) & mask
    return out


def duffing_ueda_simulate(
    k: float = 0.1,
    mu: float = 1.0,
    amplitude: float = 1.2,
    dt: float | None = None,
    n_periods: int = 40,
    samples_per_period: int = 20,
    transient_periods: int = 50,
    y0: float = 0.0,
    v0: float = 0.0,
    name: str = "duffing_ueda",
) -> Dataset:
    """Sampled steady-state response of y'' + k y' + mu y**3 = A cos(t).

    Integrates with classical fixed-step RK4 from (y0, v0), discards
    transient_periods forcing periods, then records n_periods periods at
    samples_per_period samples each.  dt defaults to a tenth of the sample
    spacing and is snapped so an integer number of steps fits one sample.
    The recorded input is the forcing value with phase zero at the first
    retained sample; the recorded output is y.
    """
    if samples_per_period < 1 or n_periods < 1 or transient_periods < 0:
        raise ValueError("period counts must be positive")
    sample_time = 2.0 * math.pi / samples_per_period
    if dt is None:
        substeps = 10
    else:
        if dt <= 0:
            raise ValueError("dt must be positive")
        substeps = max(1, round(sample_time / dt))
    step = sample_time / substeps

    n_samples = n_periods * samples_per_period
    discard = transient_periods * samples_per_period
    total_steps = (discard + n_samples) * substeps

    y = y0
    v = v0
    u_out = np.empty(n_samples)
    y_out = np.empty(n_samples)
    sample_idx = 0
    offset = discard * substeps

    def accel(t: float, yy: float, vv: float) -> float:
        return amplitude * math.cos(t) - k * vv - mu * yy * yy * yy

    for n in range(total_steps + 1):
        if n >= offset and (n - offset) % substeps == 0:
            if sample_idx < n_samples:
                # phase restarts at zero on the first retained sample
                u_out[sample_idx] = amplitude * math.cos((n - offset) * step)
                y_out[sample_idx] = y
                sample_idx += 1
        if n == total_steps:
            break
        t = n * step
        k1y = v
        k1v = accel(t, y, v)
        k2y = v + 0.5 * step * k1v
        k2v = accel(t + 0.5 * step, y + 0.5 * step * k1y, v + 0.5 * step * k1v)
        k3y = v + 0.5 * step * k2v
        k3v = accel(t + 0.5 * step, y + 0.5 * step * k2y, v + 0.5 * step * k2v)
        k4y = v + step * k3v
        k4v = accel(t + step, y + step * k3y, v + step * k3v)
        y = y + (step / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        v = v + (step / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        if not (math.isfinite(y) and math.isfinite(v)):
            raise DivergenceError(f"integration diverged at step {n}", step=n)

    return Dataset(u_out, y_out, sample_time=sample_time, name=name)
