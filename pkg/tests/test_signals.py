import math

import numpy as np
import pytest

from narxiv.model import Dataset
from narxiv.signals import MAXIMAL_TAPS, duffing_ueda_simulate, prbs


# -- PRBS ---------------------------------------------------------------------


def test_prbs_three_bit_period():
    s = prbs(21, register_bits=3, seed=1, hold_samples=1, low=0.0, high=1.0)
    assert np.array_equal(s[:7], s[7:14])
    assert np.array_equal(s[:7], s[14:21])
    assert not np.array_equal(s[:7], np.roll(s[:7], 1))


def test_prbs_values_are_two_levels():
    s = prbs(50, register_bits=4, seed=7, low=0.0, high=1.0)
    assert set(np.unique(s)) <= {0.0, 1.0}


def test_prbs_deterministic():
    a = prbs(200, register_bits=9, seed=5)
    b = prbs(200, register_bits=9, seed=5)
    assert np.array_equal(a, b)


def test_prbs_hold_repeats_bits():
    s = prbs(40, register_bits=5, seed=3, hold_samples=4)
    for i in range(0, 40, 4):
        assert len(set(s[i : i + 4])) == 1


def test_prbs_zero_seed_rejected():
    with pytest.raises(ValueError):
        prbs(10, register_bits=5, seed=0)
    with pytest.raises(ValueError):
        prbs(10, register_bits=5, seed=32)  # masks to zero


def test_prbs_unsupported_register():
    with pytest.raises(ValueError):
        prbs(10, register_bits=17)


@pytest.mark.parametrize("bits", sorted(MAXIMAL_TAPS))
def test_prbs_maximal_period(bits):
    period = 2**bits - 1
    s = prbs(2 * period, register_bits=bits, seed=1, low=0.0, high=1.0)
    assert np.array_equal(s[:period], s[period : 2 * period])
    # balance property of maximal sequences: ones outnumber zeros by one
    assert int(s[:period].sum()) == 2 ** (bits - 1)


@pytest.mark.parametrize("bits", [3, 5, 7])
def test_prbs_two_valued_autocorrelation(bits):
    period = 2**bits - 1
    s = prbs(period, register_bits=bits, seed=1, low=-1.0, high=1.0)
    values = set()
    for shift in range(period):
        values.add(int(np.dot(s, np.roll(s, shift))))
    assert values == {period, -1}


# -- Duffing-Ueda ------------------------------------------------------------------


def test_rest_solution_stays_at_rest():
    data = duffing_ueda_simulate(amplitude=0.0, n_periods=3, transient_periods=1)
    assert np.all(data.y == 0.0)
    assert np.all(data.u == 0.0)


def test_steady_state_is_bounded():
    data = duffing_ueda_simulate(n_periods=20)
    assert np.abs(data.y).max() < 3.0
    assert isinstance(data, Dataset)
    assert data.sample_time == pytest.approx(2 * math.pi / 20)


def test_recorded_input_is_the_forcing():
    data = duffing_ueda_simulate(n_periods=4)
    expected = 1.2 * np.cos(np.arange(len(data)) * data.sample_time)
    np.testing.assert_allclose(data.u, expected, atol=1e-9)


def test_halving_dt_barely_moves_the_trajectory():
    base = 2 * math.pi / 20 / 10
    a = duffing_ueda_simulate(dt=base, n_periods=5)
    b = duffing_ueda_simulate(dt=base / 2, n_periods=5)
    assert np.abs(a.y - b.y).max() < 1e-5


def test_integrator_order_is_four():
    spacing = 2 * math.pi / 20
    reference = duffing_ueda_simulate(dt=spacing / 64, n_periods=3, transient_periods=2)
    errors = []
    steps = [spacing / 2, spacing / 4, spacing / 8]
    for dt in steps:
        run = duffing_ueda_simulate(dt=dt, n_periods=3, transient_periods=2)
        errors.append(np.abs(run.y - reference.y).max())
    fit = np.polyfit(np.log(steps), np.log(errors), 1)
    assert fit[0] == pytest.approx(4.0, abs=0.3)


def test_determinism():
    a = duffing_ueda_simulate(n_periods=3)
    b = duffing_ueda_simulate(n_periods=3)
    assert np.array_equal(a.y, b.y) and np.array_equal(a.u, b.u)
