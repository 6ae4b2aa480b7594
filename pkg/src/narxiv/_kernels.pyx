# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled interval kernels.

Same contract and bitwise-identical results as _kernels_py; that module is
the readable reference for the algorithms.  The Dekker split product stays
inlined here rather than calling libm fma(): both deliver the exact rounding
error of a double product inside the magnitude guards, and the split avoids
a function call in the innermost loop.
"""

import numpy as np

from .errors import IntervalDivisionError, IntervalOverflowError

cdef extern from "math.h" nogil:
    double nextafter(double, double)
    double fabs(double)
    int isfinite(double)
    int signbit(double)

NAME = "compiled"

cdef double BIG = 2.0 ** 996
cdef double TINY = 2.0 ** -968
cdef double SUM_BIG = 2.0 ** 1020
cdef double PINF = float("inf")
cdef double NINF = float("-inf")
cdef double SPLITTER = 134217729.0  # 2**27 + 1


cdef inline double _prod_err(double a, double b, double p) nogil:
    cdef double ta = SPLITTER * a
    cdef double ah = ta - (ta - a)
    cdef double al = a - ah
    cdef double tb = SPLITTER * b
    cdef double bh = tb - (tb - b)
    cdef double bl = b - bh
    return ((ah * bh - p) + ah * bl + al * bh) + al * bl


cdef inline double _sum_dir(double a, double b, bint up) nogil:
    cdef double s = a + b
    cdef double t, e
    if (not isfinite(s)) or fabs(s) >= SUM_BIG:
        return nextafter(s, PINF if up else NINF)
    t = s - a
    e = (a - (s - t)) + (b - t)
    if up:
        return nextafter(s, PINF) if e > 0.0 else s
    return nextafter(s, NINF) if e < 0.0 else s


cdef inline bint _corner(double x, double y, double p, double* e) nogil:
    # returns trust flag; e is the exact corner error when trusted.
    # zero-operand corners are exact by IEEE semantics (a true +-0.0, sign
    # included); inside the magnitude window the Dekker error is exact.
    if x == 0.0 or y == 0.0:
        e[0] = 0.0
        return True
    if isfinite(p) and fabs(x) < BIG and fabs(y) < BIG and fabs(p) > TINY:
        e[0] = _prod_err(x, y, p)
        return True
    e[0] = 0.0
    return False


cdef inline bint _widen_low(bint trusted, double p, double e) nogil:
    # untrusted nonzero: unknown side.  untrusted +-0.0 came from underflow,
    # where the sign of the zero is the sign of the true product.
    if trusted:
        return e < 0.0
    return p != 0.0 or signbit(p)


cdef inline bint _widen_high(bint trusted, double p, double e) nogil:
    if trusted:
        return e > 0.0
    return p != 0.0 or (not signbit(p))


cdef inline void _mul_entry(double a, double b, double c, double d,
                            double* out_lo, double* out_hi) nogil:
    cdef double p0 = a * c
    cdef double p1 = a * d
    cdef double p2 = b * c
    cdef double p3 = b * d
    cdef double e0, e1, e2, e3
    cdef bint t0 = _corner(a, c, p0, &e0)
    cdef bint t1 = _corner(a, d, p1, &e1)
    cdef bint t2 = _corner(b, c, p2, &e2)
    cdef bint t3 = _corner(b, d, p3, &e3)
    cdef double pmin = p0
    cdef double pmax = p0
    if p1 < pmin: pmin = p1
    if p2 < pmin: pmin = p2
    if p3 < pmin: pmin = p3
    if p1 > pmax: pmax = p1
    if p2 > pmax: pmax = p2
    if p3 > pmax: pmax = p3
    cdef bint widen_lo = (
        (p0 == pmin and _widen_low(t0, p0, e0))
        or (p1 == pmin and _widen_low(t1, p1, e1))
        or (p2 == pmin and _widen_low(t2, p2, e2))
        or (p3 == pmin and _widen_low(t3, p3, e3))
    )
    cdef bint widen_hi = (
        (p0 == pmax and _widen_high(t0, p0, e0))
        or (p1 == pmax and _widen_high(t1, p1, e1))
        or (p2 == pmax and _widen_high(t2, p2, e2))
        or (p3 == pmax and _widen_high(t3, p3, e3))
    )
    out_lo[0] = nextafter(pmin, NINF) if widen_lo else pmin
    out_hi[0] = nextafter(pmax, PINF) if widen_hi else pmax


cdef inline double _sign(double x) nogil:
    if x > 0.0:
        return 1.0
    if x < 0.0:
        return -1.0
    return 0.0


cdef inline void _quot_corner(double x, double y,
                              double* q_out, double* dir_out, bint* guard_out) nogil:
    # a zero numerator divides exactly (true +-0.0) whatever the divisor
    cdef double q = x / y
    cdef bint guard = x != 0.0 and (
        (not isfinite(q))
        or (not (TINY < fabs(x) < BIG))
        or (not (TINY < fabs(y) < BIG))
        or (q != 0.0 and not (TINY < fabs(q) < BIG))
    )
    cdef double p, e, dd, s, tt, t, resid
    cdef double direction = 0.0
    if not guard:
        p = q * y
        e = _prod_err(q, y, p)
        if not (p == x and e == 0.0):
            dd = x - p
            s = dd + (-e)
            tt = s - dd
            t = (dd - (s - tt)) + ((-e) - tt)
            resid = s if s != 0.0 else t
            direction = _sign(resid) * _sign(y)
    q_out[0] = q
    dir_out[0] = direction
    guard_out[0] = guard


cdef inline void _div_entry(double a, double b, double c, double d,
                            double* out_lo, double* out_hi) nogil:
    cdef double q[4]
    cdef double dr[4]
    cdef bint gd[4]
    _quot_corner(a, c, &q[0], &dr[0], &gd[0])
    _quot_corner(a, d, &q[1], &dr[1], &gd[1])
    _quot_corner(b, c, &q[2], &dr[2], &gd[2])
    _quot_corner(b, d, &q[3], &dr[3], &gd[3])
    cdef double qmin = q[0]
    cdef double qmax = q[0]
    cdef int i
    for i in range(1, 4):
        if q[i] < qmin: qmin = q[i]
        if q[i] > qmax: qmax = q[i]
    cdef bint lo_bad = False
    cdef bint hi_bad = False
    for i in range(4):
        if q[i] == qmin and (gd[i] or dr[i] < 0.0):
            lo_bad = True
        if q[i] == qmax and (gd[i] or dr[i] > 0.0):
            hi_bad = True
    out_lo[0] = nextafter(qmin, NINF) if lo_bad else qmin
    out_hi[0] = nextafter(qmax, PINF) if hi_bad else qmax


cdef inline void _pow_chain_entry(double v, int n, double* lo, double* hi) nogil:
    cdef double l = v
    cdef double h = v
    cdef int i
    for i in range(n - 1):
        _mul_entry(l, h, v, v, &l, &h)
    lo[0] = l
    hi[0] = h


def _check_out(lo, hi):
    if not (np.isfinite(lo).all() and np.isfinite(hi).all()):
        raise IntervalOverflowError("interval operation overflowed to a non-finite endpoint")
    return lo, hi


def add(const double[::1] xlo, const double[::1] xhi, const double[::1] ylo, const double[::1] yhi):
    cdef Py_ssize_t m = xlo.shape[0]
    out_lo = np.empty(m)
    out_hi = np.empty(m)
    cdef double[::1] olo = out_lo
    cdef double[::1] ohi = out_hi
    cdef Py_ssize_t i
    with nogil:
        for i in range(m):
            olo[i] = _sum_dir(xlo[i], ylo[i], False)
            ohi[i] = _sum_dir(xhi[i], yhi[i], True)
    return _check_out(out_lo, out_hi)


def sub(const double[::1] xlo, const double[::1] xhi, const double[::1] ylo, const double[::1] yhi):
    cdef Py_ssize_t m = xlo.shape[0]
    out_lo = np.empty(m)
    out_hi = np.empty(m)
    cdef double[::1] olo = out_lo
    cdef double[::1] ohi = out_hi
    cdef Py_ssize_t i
    with nogil:
        for i in range(m):
            olo[i] = _sum_dir(xlo[i], -yhi[i], False)
            ohi[i] = _sum_dir(xhi[i], -ylo[i], True)
    return _check_out(out_lo, out_hi)


def mul(const double[::1] xlo, const double[::1] xhi, const double[::1] ylo, const double[::1] yhi):
    cdef Py_ssize_t m = xlo.shape[0]
    out_lo = np.empty(m)
    out_hi = np.empty(m)
    cdef double[::1] olo = out_lo
    cdef double[::1] ohi = out_hi
    cdef Py_ssize_t i
    cdef double lo, hi
    with nogil:
        for i in range(m):
            _mul_entry(xlo[i], xhi[i], ylo[i], yhi[i], &lo, &hi)
            olo[i] = lo
            ohi[i] = hi
    return _check_out(out_lo, out_hi)


def div(const double[::1] xlo, const double[::1] xhi, const double[::1] ylo, const double[::1] yhi):
    cdef Py_ssize_t m = xlo.shape[0]
    cdef Py_ssize_t i
    for i in range(m):
        if ylo[i] <= 0.0 <= yhi[i]:
            raise IntervalDivisionError("divisor interval contains zero")
    out_lo = np.empty(m)
    out_hi = np.empty(m)
    cdef double[::1] olo = out_lo
    cdef double[::1] ohi = out_hi
    cdef double lo, hi
    with nogil:
        for i in range(m):
            _div_entry(xlo[i], xhi[i], ylo[i], yhi[i], &lo, &hi)
            olo[i] = lo
            ohi[i] = hi
    return _check_out(out_lo, out_hi)


def pow_int(const double[::1] xlo, const double[::1] xhi, int n):
    if n < 0:
        raise ValueError("exponent must be nonnegative")
    cdef Py_ssize_t m = xlo.shape[0]
    out_lo = np.empty(m)
    out_hi = np.empty(m)
    cdef double[::1] olo = out_lo
    cdef double[::1] ohi = out_hi
    cdef Py_ssize_t i
    cdef double ll_lo, ll_hi, hh_lo, hh_hi
    if n == 0:
        out_lo[:] = 1.0
        out_hi[:] = 1.0
        return out_lo, out_hi
    if n == 1:
        out_lo[:] = np.asarray(xlo)
        out_hi[:] = np.asarray(xhi)
        return out_lo, out_hi
    with nogil:
        for i in range(m):
            _pow_chain_entry(xlo[i], n, &ll_lo, &ll_hi)
            _pow_chain_entry(xhi[i], n, &hh_lo, &hh_hi)
            if n % 2 == 1:
                olo[i] = ll_lo
                ohi[i] = hh_hi
            elif xlo[i] >= 0.0:
                olo[i] = ll_lo
                ohi[i] = hh_hi
            elif xhi[i] <= 0.0:
                olo[i] = hh_lo
                ohi[i] = ll_hi
            else:
                olo[i] = 0.0
                ohi[i] = ll_hi if ll_hi > hh_hi else hh_hi
    return _check_out(out_lo, out_hi)


def matmul(const double[:, ::1] alo, const double[:, ::1] ahi,
           const double[:, ::1] blo, const double[:, ::1] bhi):
    cdef Py_ssize_t m = alo.shape[0]
    cdef Py_ssize_t k = alo.shape[1]
    cdef Py_ssize_t n = blo.shape[1]
    out_lo = np.empty((m, n))
    out_hi = np.empty((m, n))
    cdef double[:, ::1] olo = out_lo
    cdef double[:, ::1] ohi = out_hi
    cdef Py_ssize_t i, j, t
    cdef double acc_lo, acc_hi, plo, phi
    with nogil:
        for i in range(m):
            for j in range(n):
                acc_lo = 0.0
                acc_hi = 0.0
                for t in range(k):
                    _mul_entry(alo[i, t], ahi[i, t], blo[t, j], bhi[t, j], &plo, &phi)
                    acc_lo = _sum_dir(acc_lo, plo, False)
                    acc_hi = _sum_dir(acc_hi, phi, True)
                olo[i, j] = acc_lo
                ohi[i, j] = acc_hi
    return _check_out(out_lo, out_hi)


def accumulate(const double[::1] xlo, const double[::1] xhi):
    cdef Py_ssize_t m = xlo.shape[0]
    cdef double lo = 0.0
    cdef double hi = 0.0
    cdef Py_ssize_t i
    with nogil:
        for i in range(m):
            lo = _sum_dir(lo, xlo[i], False)
            hi = _sum_dir(hi, xhi[i], True)
    if not (isfinite(lo) and isfinite(hi)):
        raise IntervalOverflowError("interval sum overflowed")
    return lo, hi
