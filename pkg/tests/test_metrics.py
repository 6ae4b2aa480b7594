import numpy as np
import pytest

from narxiv.errors import DimensionMismatchError, ZeroDenominatorError
from narxiv.interval import Interval
from narxiv.linalg import IntervalVector
from narxiv.metrics import rmse_interval, rmse_point


def test_perfect_predictor_scores_zero():
    y = np.array([1.0, -2.0, 0.5, 3.0])
    assert rmse_point(y, y.copy()) == 0.0


def test_mean_predictor_scores_one():
    rng = np.random.default_rng(0)
    y = rng.uniform(-5, 5, 200)
    y_hat = np.full_like(y, y.mean())
    assert rmse_point(y, y_hat) == pytest.approx(1.0, abs=1e-12)


def test_constant_output_is_an_error():
    y = np.ones(10)
    with pytest.raises(ZeroDenominatorError):
        rmse_point(y, y + 0.1)


def test_length_mismatch():
    with pytest.raises(DimensionMismatchError):
        rmse_point(np.ones(3), np.ones(4))


def test_interval_rmse_degenerate_contains_point():
    rng = np.random.default_rng(1)
    for _ in range(100):
        n = rng.integers(5, 60)
        y = rng.uniform(-3, 3, n)
        y_hat = y + rng.normal(0, 0.3, n)
        point = rmse_point(y, y_hat)
        box = rmse_interval(
            IntervalVector.from_points(y), IntervalVector.from_points(y_hat)
        )
        assert box.contains(point)
        assert box.width() < 1e-10 * max(1.0, point)


def test_interval_rmse_widens_with_prediction_uncertainty():
    rng = np.random.default_rng(2)
    y = rng.uniform(-2, 2, 80)
    y_hat = y + rng.normal(0, 0.1, 80)
    y_iv = IntervalVector.from_points(y)
    narrow = rmse_interval(y_iv, IntervalVector(y_hat - 1e-6, y_hat + 1e-6))
    wide = rmse_interval(y_iv, IntervalVector(y_hat - 1e-3, y_hat + 1e-3))
    assert narrow.is_subset(wide)
    assert wide.width() > narrow.width()


def test_interval_rmse_zero_denominator():
    y = IntervalVector.from_points(np.ones(10))
    with pytest.raises(ZeroDenominatorError):
        rmse_interval(y, y)


def test_interval_rmse_returns_interval():
    y = IntervalVector.from_points([0.0, 1.0, 2.0, 3.0])
    y_hat = IntervalVector.from_points([0.1, 0.9, 2.2, 2.9])
    box = rmse_interval(y, y_hat)
    assert isinstance(box, Interval)
    assert box.lo >= 0.0
