"""Pure-numpy interval kernels.

Fallback backend with the same contract as the compiled extension in
_kernels.pyx: elementwise interval arithmetic on (lo, hi) float64 array
pairs, tight integer powers, and matrix products with strict left-to-right
accumulation.  Both backends produce bitwise-identical endpoints; the
benchmark suite relies on that.

The vectorised code replays the scalar algorithms from _rounding: nearest
rounding plus error-free transforms to decide which side to widen, with
per-corner defensive widening where the error term cannot be trusted
(split overflow, product-error underflow).
"""

from __future__ import annotations

import numpy as np

from ._rounding import BIG, SUM_BIG, TINY, add_down, add_up
from .errors import IntervalDivisionError, IntervalOverflowError

NAME = "python"

_SPLITTER = 134217729.0
_NINF = -np.inf
_PINF = np.inf


def _check_out(lo: np.ndarray, hi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if not (np.isfinite(lo).all() and np.isfinite(hi).all()):
        raise IntervalOverflowError("interval operation overflowed to a non-finite endpoint")
    return lo, hi


def _two_sum(a, b):
    s = a + b
    t = s - a
    e = (a - (s - t)) + (b - t)
    return s, e


def _prod_err(a, b, p):
    ta = _SPLITTER * a
    ah = ta - (ta - a)
    al = a - ah
    tb = _SPLITTER * b
    bh = tb - (tb - b)
    bl = b - bh
    return ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _sum_dir(a, b, up: bool):
    with np.errstate(all="ignore"):
        s, e = _two_sum(a, b)
        guard = ~np.isfinite(s) | (np.abs(s) >= SUM_BIG)
        if up:
            widen = guard | (e > 0.0)
            return np.where(widen, np.nextafter(s, _PINF), s)
        widen = guard | (e < 0.0)
        return np.where(widen, np.nextafter(s, _NINF), s)


def add(xlo, xhi, ylo, yhi):
    """Elementwise interval sum."""
    return _check_out(_sum_dir(xlo, ylo, up=False), _sum_dir(xhi, yhi, up=True))


def sub(xlo, xhi, ylo, yhi):
    """Elementwise interval difference (add of the negation)."""
    return add(xlo, xhi, -yhi, -ylo)


def _mul_raw(xlo, xhi, ylo, yhi):
    # Each rounded corner product carries its exact error where the Dekker
    # transform is reliable; zero-operand corners are exact by IEEE semantics
    # (a true +-0.0, sign included); everything else is untrusted.  An
    # extreme endpoint is widened one step only when a corner attaining it
    # may have a true value beyond it: trusted corners by their error sign,
    # untrusted +-0.0 corners (underflow) by the sign of the zero, nonzero
    # untrusted corners always.
    with np.errstate(all="ignore"):
        xm = (np.abs(xlo) < BIG, np.abs(xhi) < BIG)
        ym = (np.abs(ylo) < BIG, np.abs(yhi) < BIG)
        p = np.stack([xlo * ylo, xlo * yhi, xhi * ylo, xhi * yhi])
        e = np.stack(
            [
                _prod_err(xlo, ylo, p[0]),
                _prod_err(xlo, yhi, p[1]),
                _prod_err(xhi, ylo, p[2]),
                _prod_err(xhi, yhi, p[3]),
            ]
        )
        zero_op = np.stack(
            [
                (xlo == 0.0) | (ylo == 0.0),
                (xlo == 0.0) | (yhi == 0.0),
                (xhi == 0.0) | (ylo == 0.0),
                (xhi == 0.0) | (yhi == 0.0),
            ]
        )
        in_range = np.stack(
            [xm[0] & ym[0], xm[0] & ym[1], xm[1] & ym[0], xm[1] & ym[1]]
        ) & np.isfinite(p) & (np.abs(p) > TINY)
        trusted = zero_op | in_range
        e = np.where(zero_op, 0.0, e)
        negative = np.signbit(p)
        pmin = p.min(axis=0)
        pmax = p.max(axis=0)
        widen_lo = (
            (p == pmin) & np.where(trusted, e < 0.0, (p != 0.0) | negative)
        ).any(axis=0)
        widen_hi = (
            (p == pmax) & np.where(trusted, e > 0.0, (p != 0.0) | ~negative)
        ).any(axis=0)
        lo = np.where(widen_lo, np.nextafter(pmin, _NINF), pmin)
        hi = np.where(widen_hi, np.nextafter(pmax, _PINF), pmax)
    return lo, hi


def mul(xlo, xhi, ylo, yhi):
    """Elementwise interval product (corner min/max, outward rounded)."""
    return _check_out(*_mul_raw(xlo, xhi, ylo, yhi))


def div(xlo, xhi, ylo, yhi):
    """Elementwise interval quotient; every divisor must exclude zero."""
    if np.any((ylo <= 0.0) & (yhi >= 0.0)):
        raise IntervalDivisionError("divisor interval contains zero")
    with np.errstate(all="ignore"):
        num = np.stack([xlo, xlo, xhi, xhi])
        den = np.stack([ylo, yhi, ylo, yhi])
        q = num / den
        p = q * den
        e = _prod_err(q, den, p)
        exact = (p == num) & (e == 0.0)
        dd = num - p
        s, t = _two_sum(dd, -e)
        resid = np.where(s != 0.0, s, t)
        direction = np.where(exact, 0.0, np.sign(resid) * np.sign(den))
        # a zero numerator divides exactly (true +-0.0) whatever the divisor
        guard = (num != 0.0) & (
            ~np.isfinite(q)
            | ~((np.abs(num) > TINY) & (np.abs(num) < BIG))
            | ~((np.abs(den) > TINY) & (np.abs(den) < BIG))
            | ((q != 0.0) & ~((np.abs(q) > TINY) & (np.abs(q) < BIG)))
        )
        qmin = q.min(axis=0)
        qmax = q.max(axis=0)
        lo_bad = ((q == qmin) & (guard | (direction < 0.0))).any(axis=0)
        hi_bad = ((q == qmax) & (guard | (direction > 0.0))).any(axis=0)
        lo = np.where(lo_bad, np.nextafter(qmin, _NINF), qmin)
        hi = np.where(hi_bad, np.nextafter(qmax, _PINF), qmax)
    return _check_out(lo, hi)


def _pow_chain(v, n: int):
    # enclosure of v**n per element via a degenerate product chain
    lo = v.copy()
    hi = v.copy()
    for _ in range(n - 1):
        lo, hi = _mul_raw(lo, hi, v, v)
    return lo, hi


def pow_int(xlo, xhi, n: int):
    """Elementwise tight power: enclosure of the image {x**n : x in X}."""
    if n < 0:
        raise ValueError("exponent must be nonnegative")
    xlo = np.asarray(xlo, dtype=np.float64)
    xhi = np.asarray(xhi, dtype=np.float64)
    if n == 0:
        return np.ones_like(xlo), np.ones_like(xhi)
    if n == 1:
        return xlo.copy(), xhi.copy()
    lo_lo, lo_hi = _pow_chain(xlo, n)
    hi_lo, hi_hi = _pow_chain(xhi, n)
    if n % 2 == 1:
        return _check_out(lo_lo, hi_hi)
    nonneg = xlo >= 0.0
    nonpos = xhi <= 0.0
    lo = np.where(nonneg, lo_lo, np.where(nonpos, hi_lo, 0.0))
    hi = np.where(nonneg, hi_hi, np.where(nonpos, lo_hi, np.maximum(lo_hi, hi_hi)))
    return _check_out(lo, hi)


def matmul(alo, ahi, blo, bhi):
    """Interval matrix product with left-to-right accumulation over the
    shared dimension; (m,k) x (k,n) -> (m,n)."""
    m, k = alo.shape
    n = blo.shape[1]
    acc_lo = np.zeros((m, n))
    acc_hi = np.zeros((m, n))
    for t in range(k):
        plo, phi = _mul_raw(
            alo[:, t : t + 1], ahi[:, t : t + 1], blo[t : t + 1, :], bhi[t : t + 1, :]
        )
        acc_lo = _sum_dir(acc_lo, plo, up=False)
        acc_hi = _sum_dir(acc_hi, phi, up=True)
    return _check_out(acc_lo, acc_hi)


def accumulate(xlo, xhi):
    """Running interval sum (left to right); returns the final (lo, hi)."""
    lo = 0.0
    hi = 0.0
    for a, b in zip(xlo.tolist(), xhi.tolist()):
        lo = add_down(lo, a)
        hi = add_up(hi, b)
    if not (np.isfinite(lo) and np.isfinite(hi)):
        raise IntervalOverflowError("interval sum overflowed")
    return lo, hi
