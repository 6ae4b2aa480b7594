"""Directed-rounding primitives used by the scalar interval type and the
pure-Python kernel backend.

Everything here computes in round-to-nearest and then adjusts the result by
one step toward -inf or +inf only when the operation was inexact in that
direction.  Exact operations (integer endpoints, powers of two, identities)
therefore stay exact, while inexact ones are widened just enough to keep the
true real result enclosed.

Exactness is detected with error-free transformations: TwoSum for addition
and Dekker's split product for multiplication.  Both deliver the rounding
error of the nearest-rounded result as an exact float, so the sign of that
error tells which side needs widening.  Outside a safe magnitude window
(huge operands where the split overflows, tiny products where the error
term itself underflows) the error is untrusted and the affected corner
widens defensively, except where IEEE semantics still pin the answer: a
zero operand gives a true +-0.0, and an underflowed zero keeps the sign of
the true result.  The defensive cases cost at most one extra ulp and never
lose enclosure.
"""

from __future__ import annotations

import math

INF = math.inf
_SPLITTER = 134217729.0  # 2**27 + 1

# Magnitude guards: outside these, error-free transforms are not trusted.
BIG = 2.0**996
TINY = 2.0**-968
SUM_BIG = 2.0**1020


def two_sum(a: float, b: float) -> tuple[float, float]:
    """Return (s, e) with s = fl(a+b) and a + b = s + e exactly."""
    s = a + b
    t = s - a
    e = (a - (s - t)) + (b - t)
    return s, e


def prod_err(a: float, b: float, p: float) -> float:
    """Exact error of p = fl(a*b), via Dekker splitting (valid inside guards)."""
    ta = _SPLITTER * a
    ah = ta - (ta - a)
    al = a - ah
    tb = _SPLITTER * b
    bh = tb - (tb - b)
    bl = b - bh
    return ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _down(x: float) -> float:
    return math.nextafter(x, -INF)


def _up(x: float) -> float:
    return math.nextafter(x, INF)


def add_down(a: float, b: float) -> float:
    """Largest float <= the exact a + b."""
    s = a + b
    if not math.isfinite(s) or abs(s) >= SUM_BIG:
        return _down(s)
    t = s - a
    e = (a - (s - t)) + (b - t)
    return _down(s) if e < 0.0 else s


def add_up(a: float, b: float) -> float:
    """Smallest float >= the exact a + b."""
    s = a + b
    if not math.isfinite(s) or abs(s) >= SUM_BIG:
        return _up(s)
    t = s - a
    e = (a - (s - t)) + (b - t)
    return _up(s) if e > 0.0 else s


def sub_down(a: float, b: float) -> float:
    return add_down(a, -b)


def sub_up(a: float, b: float) -> float:
    return add_up(a, -b)


def _corner_error(x: float, y: float, p: float) -> float | None:
    """Exact error of the corner product, or None when it cannot be trusted.

    Zero-operand corners are exact by IEEE semantics (a true +-0.0, sign
    included).  Inside the magnitude window the Dekker error is exact.
    Outside it (split overflow, |p| at or below the underflow threshold,
    non-finite p) the error term is unreliable and the corner is untrusted.
    """
    if x == 0.0 or y == 0.0:
        return 0.0
    if math.isfinite(p) and abs(x) < BIG and abs(y) < BIG and abs(p) > TINY:
        return prod_err(x, y, p)
    return None


def _widen_low(p: float, e: float | None) -> bool:
    # untrusted nonzero: unknown side.  untrusted +-0.0 came from underflow,
    # where the sign of the zero is the sign of the true product.
    if e is not None:
        return e < 0.0
    return p != 0.0 or math.copysign(1.0, p) < 0.0


def _widen_high(p: float, e: float | None) -> bool:
    if e is not None:
        return e > 0.0
    return p != 0.0 or math.copysign(1.0, p) > 0.0


def mul_endpoints(a: float, b: float, c: float, d: float) -> tuple[float, float]:
    """Directed-rounded endpoints of [a,b] * [c,d].

    The true product range is [min S, max S] over the four corner products
    S.  Each rounded corner carries its exact error (or an untrusted marker
    outside the magnitude window); an extreme endpoint is widened one step
    only when some corner attaining it may have a true value beyond it, so
    exact corners stay exact.
    """
    corners = ((a, c), (a, d), (b, c), (b, d))
    ps = []
    es = []
    for x, y in corners:
        p = x * y
        ps.append(p)
        es.append(_corner_error(x, y, p))
    lo_p = min(ps)
    hi_p = max(ps)
    widen_lo = any(_widen_low(p, e) for p, e in zip(ps, es) if p == lo_p)
    widen_hi = any(_widen_high(p, e) for p, e in zip(ps, es) if p == hi_p)
    return (_down(lo_p) if widen_lo else lo_p), (_up(hi_p) if widen_hi else hi_p)


def _quot_dir(x: float, y: float) -> tuple[float, int | None]:
    """Return (q, direction) with q = fl(x/y).

    direction is the sign of (x/y - q), 0 when the quotient is exact, or
    None when magnitudes fall outside the trusted window (callers must then
    widen both ways).
    """
    q = x / y
    if not math.isfinite(q):
        return q, None
    if x == 0.0:
        return q, 0  # 0/y is a true +-0.0 whatever the magnitude of y
    if not (TINY < abs(x) < BIG):
        return q, None
    if not (TINY < abs(y) < BIG):
        return q, None
    if q != 0.0 and not (TINY < abs(q) < BIG):
        return q, None
    p = q * y
    e = prod_err(q, y, p)
    if p == x and e == 0.0:
        return q, 0
    # sign of x - q*y, resolved exactly through TwoSum of the residual parts
    dd = x - p
    s, t = two_sum(dd, -e)
    num = s if s != 0.0 else t
    num_sign = 1 if num > 0.0 else -1
    return q, num_sign * (1 if y > 0.0 else -1)


def div_endpoints(a: float, b: float, c: float, d: float) -> tuple[float, float]:
    """Directed-rounded endpoints of [a,b] / [c,d] with 0 outside [c,d]."""
    quots = [_quot_dir(x, y) for x, y in ((a, c), (a, d), (b, c), (b, d))]
    lo_q = min(q for q, _ in quots)
    hi_q = max(q for q, _ in quots)
    lo_safe = all(s is not None and s >= 0 for q, s in quots if q == lo_q)
    hi_safe = all(s is not None and s <= 0 for q, s in quots if q == hi_q)
    lo = lo_q if lo_safe else _down(lo_q)
    hi = hi_q if hi_safe else _up(hi_q)
    return lo, hi


def pow_point_enclosure(v: float, n: int) -> tuple[float, float]:
    """Enclosure of the exact v**n (n >= 1) by a degenerate product chain."""
    lo = hi = v
    for _ in range(n - 1):
        lo, hi = mul_endpoints(lo, hi, v, v)
    return lo, hi


def sqrt_enclosure(x: float) -> tuple[float, float]:
    """Enclosure of the exact square root of x >= 0."""
    if x == 0.0:
        return 0.0, 0.0
    s = math.sqrt(x)
    if not (TINY < x < BIG):
        return max(0.0, _down(s)), _up(s)
    p = s * s
    e = prod_err(s, s, p)
    if p == x and e == 0.0:
        return s, s
    dd = x - p
    ss, tt = two_sum(dd, -e)
    num = ss if ss != 0.0 else tt
    if num > 0.0:  # true sqrt above s
        return s, _up(s)
    return _down(s), s
