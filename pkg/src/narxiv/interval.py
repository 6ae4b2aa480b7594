"""Closed real intervals with outward-rounded arithmetic.

An Interval is a pair of finite doubles lo <= hi standing for every real in
[lo, hi].  All arithmetic satisfies the inclusion property: whenever x is in
X and y is in Y, the point result x op y lies in X op Y.  Endpoints are kept
exact when the underlying float operation is exact and are widened by one
step otherwise (see _rounding), so identities such as X + [0,0] == X hold
bitwise.

A degenerate interval (lo == hi) represents a single real number exactly.
Intervals are immutable and safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import _rounding as rnd
from .errors import (
    IntervalDivisionError,
    IntervalOverflowError,
    InvalidIntervalError,
    NonFiniteError,
)

__all__ = ["Interval", "hull", "intersect"]


def _check_finite(value: float, what: str = "endpoint") -> float:
    value = float(value)
    if not math.isfinite(value):
        raise NonFiniteError(f"non-finite {what}: {value!r}")
    return value


@dataclass(frozen=True, slots=True)
class Interval:
    """Closed interval [lo, hi] of reals, endpoints finite doubles."""

    lo: float
    hi: float

    def __post_init__(self):
        object.__setattr__(self, "lo", _check_finite(self.lo, "lower endpoint"))
        object.__setattr__(self, "hi", _check_finite(self.hi, "upper endpoint"))
        if self.lo > self.hi:
            raise InvalidIntervalError(f"lower endpoint {self.lo!r} above upper {self.hi!r}")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_endpoints(cls, a: float, b: float) -> "Interval":
        """Interval holding [a, b]; endpoints are stored exactly."""
        return cls(a, b)

    @classmethod
    def from_point(cls, value: float) -> "Interval":
        """Degenerate interval holding a single real exactly."""
        value = _check_finite(value, "value")
        return cls._wrap(value, value)

    @classmethod
    def _wrap(cls, lo: float, hi: float) -> "Interval":
        # internal: endpoints already validated/ordered, possibly non-finite
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise IntervalOverflowError(f"interval endpoint overflowed: [{lo!r}, {hi!r}]")
        obj = object.__new__(cls)
        object.__setattr__(obj, "lo", lo)
        object.__setattr__(obj, "hi", hi)
        return obj

    # -- basic queries -----------------------------------------------------

    def width(self) -> float:
        """hi - lo, rounded upward."""
        return rnd.sub_up(self.hi, self.lo)

    def midpoint(self) -> float:
        mid = 0.5 * (self.lo + self.hi)
        if math.isfinite(mid):
            return mid
        return 0.5 * self.lo + 0.5 * self.hi

    def is_degenerate(self) -> bool:
        return self.lo == self.hi

    def contains(self, point: float) -> bool:
        return self.lo <= point <= self.hi

    def is_subset(self, other: "Interval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0.0 <= self.hi

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(value) -> "Interval":
        if isinstance(value, Interval):
            return value
        return Interval.from_point(value)

    def __add__(self, other) -> "Interval":
        other = self._coerce(other)
        return Interval._wrap(rnd.add_down(self.lo, other.lo), rnd.add_up(self.hi, other.hi))

    __radd__ = __add__

    def __sub__(self, other) -> "Interval":
        other = self._coerce(other)
        return Interval._wrap(rnd.sub_down(self.lo, other.hi), rnd.sub_up(self.hi, other.lo))

    def __rsub__(self, other) -> "Interval":
        return self._coerce(other) - self

    def __neg__(self) -> "Interval":
        return Interval._wrap(-self.hi, -self.lo)

    def __mul__(self, other) -> "Interval":
        other = self._coerce(other)
        lo, hi = rnd.mul_endpoints(self.lo, self.hi, other.lo, other.hi)
        return Interval._wrap(lo, hi)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Interval":
        other = self._coerce(other)
        if other.contains_zero():
            raise IntervalDivisionError(f"divisor {other} contains zero")
        lo, hi = rnd.div_endpoints(self.lo, self.hi, other.lo, other.hi)
        return Interval._wrap(lo, hi)

    def __rtruediv__(self, other) -> "Interval":
        return self._coerce(other) / self

    def __pow__(self, n: int) -> "Interval":
        return self.power(n)

    def power(self, n: int) -> "Interval":
        """Tight enclosure of the image {x**n : x in self}.

        For even n with 0 inside, the lower endpoint is 0 (the image
        minimum), not the sign-mixed product a naive chain would give.
        """
        n = _check_exponent(n)
        if n == 0:
            return Interval._wrap(1.0, 1.0)
        if n == 1:
            return self
        if n % 2 == 1:
            lo = rnd.pow_point_enclosure(self.lo, n)[0]
            hi = rnd.pow_point_enclosure(self.hi, n)[1]
        elif self.lo >= 0.0:
            lo = rnd.pow_point_enclosure(self.lo, n)[0]
            hi = rnd.pow_point_enclosure(self.hi, n)[1]
        elif self.hi <= 0.0:
            lo = rnd.pow_point_enclosure(self.hi, n)[0]
            hi = rnd.pow_point_enclosure(self.lo, n)[1]
        else:
            lo = 0.0
            hi = max(rnd.pow_point_enclosure(self.lo, n)[1], rnd.pow_point_enclosure(self.hi, n)[1])
        return Interval._wrap(lo, hi)

    def mul_chain_power(self, n: int) -> "Interval":
        """X**n by repeated interval multiplication.

        Wider than power() whenever sign mixing matters; exposed because the
        two expression forms genuinely differ in interval arithmetic.
        """
        n = _check_exponent(n)
        if n == 0:
            return Interval._wrap(1.0, 1.0)
        result = self
        for _ in range(n - 1):
            result = result * self
        return result

    def sqrt(self) -> "Interval":
        """Outward-rounded square root; requires lo >= 0."""
        if self.lo < 0.0:
            raise InvalidIntervalError(f"sqrt of interval reaching below zero: {self}")
        lo = rnd.sqrt_enclosure(self.lo)[0]
        hi = rnd.sqrt_enclosure(self.hi)[1]
        return Interval._wrap(lo, hi)

    # -- set operations ----------------------------------------------------

    def intersect(self, other: "Interval") -> "Interval | None":
        """Set intersection; None when the intervals are disjoint."""
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            return None
        return Interval._wrap(lo, hi)

    def hull(self, other: "Interval") -> "Interval":
        """Smallest interval containing both operands."""
        return Interval._wrap(min(self.lo, other.lo), max(self.hi, other.hi))

    # -- text form ---------------------------------------------------------

    def __str__(self) -> str:
        return f"[{self.lo!r},{self.hi!r}]"

    __repr__ = __str__

    @classmethod
    def parse(cls, text: str) -> "Interval":
        """Inverse of str(); endpoints round-trip to identical bits."""
        body = text.strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise InvalidIntervalError(f"not an interval literal: {text!r}")
        parts = body[1:-1].split(",")
        if len(parts) != 2:
            raise InvalidIntervalError(f"not an interval literal: {text!r}")
        try:
            lo = float(parts[0])
            hi = float(parts[1])
        except ValueError as exc:
            raise InvalidIntervalError(f"bad endpoint in {text!r}") from exc
        return cls(lo, hi)


def _check_exponent(n: int) -> int:
    if not isinstance(n, int) or isinstance(n, bool):
        raise TypeError(f"exponent must be an integer, got {n!r}")
    if n < 0:
        raise ValueError(f"exponent must be nonnegative, got {n}")
    return n


def intersect(x: Interval, y: Interval) -> Interval | None:
    return x.intersect(y)


def hull(x: Interval, y: Interval) -> Interval:
    return x.hull(y)
