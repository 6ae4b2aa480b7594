#!/usr/bin/env python3
"""Benchmark the compiled interval kernels against the pure-numpy fallback.

Besides timing, every case asserts that the two backends return bitwise
identical endpoints; a speedup wouldn't mean much if the numbers moved.

Run:  python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from narxiv import _kernels_py

try:
    from narxiv import _kernels
except ImportError:
    _kernels = None


def _time(fn, *args, repeat=5):
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def _assert_equal(a, b, label):
    if isinstance(a, tuple):
        for x, y in zip(a, b):
            _assert_equal(x, y, label)
        return
    if not np.array_equal(np.asarray(a), np.asarray(b)):
        raise AssertionError(f"backend mismatch in {label}")


def main():
    if _kernels is None:
        print("compiled kernels not built; nothing to compare")
        return

    rng = np.random.default_rng(1)
    n = 200_000
    xlo = rng.uniform(-1e3, 1e3, n)
    xhi = xlo + rng.uniform(0, 1, n)
    ylo = rng.uniform(-1e3, 1e3, n)
    yhi = ylo + rng.uniform(0, 1, n)
    dlo = np.abs(ylo) + 0.5
    dhi = dlo + (yhi - ylo)

    p, q = 18, 800  # normal-equations shape of the oscillator pipeline
    alo = rng.uniform(-2, 2, (p, q))
    ahi = alo + rng.uniform(0, 1e-6, (p, q))
    blo = np.ascontiguousarray(alo.T)
    bhi = np.ascontiguousarray(ahi.T)

    cases = [
        ("add (200k)", "add", (xlo, xhi, ylo, yhi)),
        ("sub (200k)", "sub", (xlo, xhi, ylo, yhi)),
        ("mul (200k)", "mul", (xlo, xhi, ylo, yhi)),
        ("div (200k)", "div", (xlo, xhi, dlo, dhi)),
        ("pow n=3 (200k)", "pow_int", (xlo / 1e3, xhi / 1e3, 3)),
        (f"matmul {p}x{q} . {q}x{p}", "matmul", (alo, ahi, blo, bhi)),
        ("accumulate (200k)", "accumulate", (xlo, xhi)),
    ]

    print(f"{'case':<24} {'python':>10} {'compiled':>10} {'speedup':>9}")
    for label, name, args in cases:
        t_py, r_py = _time(getattr(_kernels_py, name), *args)
        t_c, r_c = _time(getattr(_kernels, name), *args)
        _assert_equal(r_py, r_c, label)
        print(f"{label:<24} {t_py * 1e3:>8.1f}ms {t_c * 1e3:>8.1f}ms {t_py / t_c:>8.1f}x")
    print("all outputs bitwise identical across backends")


if __name__ == "__main__":
    main()
