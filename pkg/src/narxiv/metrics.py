"""Normalized root-mean-square error, point and interval variants.

RMSE = sqrt(sum (y - yhat)^2) / sqrt(sum (y - ybar)^2) with ybar the mean
of the measured output, so a perfect model scores 0 and the mean predictor
scores 1.  The interval variant evaluates the same expression entirely in
interval arithmetic: interval mean, squares through the tight power, sums
accumulated left to right, outward-rounded square roots, interval division.
"""

from __future__ import annotations

import math

import numpy as np

from ._backend import kernels
from .errors import DimensionMismatchError, ZeroDenominatorError
from .interval import Interval
from .linalg import IntervalVector

__all__ = ["rmse_point", "rmse_interval"]


def rmse_point(y, y_hat) -> float:
    """Point RMSE normalized by deviation from the output mean."""
    y = np.asarray(y, dtype=np.float64)
    y_hat = np.asarray(y_hat, dtype=np.float64)
    if y.shape != y_hat.shape or y.ndim != 1:
        raise DimensionMismatchError(f"shapes {y.shape} and {y_hat.shape}")
    if y.shape[0] < 2:
        raise DimensionMismatchError("need at least two samples")
    mean = float(np.mean(y))
    denom = float(np.sum((y - mean) ** 2))
    if denom == 0.0:
        raise ZeroDenominatorError("measured output is constant")
    num = float(np.sum((y - y_hat) ** 2))
    return math.sqrt(num) / math.sqrt(denom)


def _interval_sum_of_squares(diff: IntervalVector) -> Interval:
    sq_lo, sq_hi = kernels.pow_int(diff.lo, diff.hi, 2)
    lo, hi = kernels.accumulate(sq_lo, sq_hi)
    return Interval(lo, hi)


def rmse_interval(y: IntervalVector, y_hat: IntervalVector) -> Interval:
    """Interval RMSE; encloses the point RMSE of every member pair.

    Raises ZeroDenominatorError when the denominator interval reaches zero
    (constant or near-constant measured output).
    """
    if len(y) != len(y_hat):
        raise DimensionMismatchError(f"lengths {len(y)} and {len(y_hat)}")
    n = len(y)
    if n < 2:
        raise DimensionMismatchError("need at least two samples")
    total = y.sum()
    count = Interval.from_point(float(n))
    mean = total / count
    mean_vec = IntervalVector(np.full(n, mean.lo), np.full(n, mean.hi))
    denom_sq = _interval_sum_of_squares(y - mean_vec)
    if denom_sq.contains_zero():
        raise ZeroDenominatorError("denominator interval contains zero")
    num_sq = _interval_sum_of_squares(y - y_hat)
    return num_sq.sqrt() / denom_sq.sqrt()
