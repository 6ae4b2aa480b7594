import numpy as np
import pytest

from narxiv.estimation import estimate
from narxiv.model import Dataset, candidate_terms
from narxiv.selection import select_structure
from narxiv.signals import duffing_ueda_simulate, prbs


def make_linear_dataset(n=600, seed=3, a=0.5, b=0.3, noise=0.0, rng=None):
    """y(k) = a y(k-1) + b u(k-1) (+ noise) driven by a PRBS input."""
    u = prbs(n, register_bits=9, seed=seed)
    y = np.zeros(n)
    e = np.zeros(n) if noise == 0.0 else (rng or np.random.default_rng(0)).normal(0, noise, n)
    for k in range(1, n):
        y[k] = a * y[k - 1] + b * u[k - 1] + e[k]
    return Dataset(u, y, name="linear-surrogate")


@pytest.fixture(scope="session")
def linear_dataset():
    return make_linear_dataset()


@pytest.fixture(scope="session")
def duffing_split():
    """Estimation/validation halves of one forced-oscillator record.

    A short transient discard keeps the settling arc in the estimation set;
    a pure steady-state record has too few distinct rows to identify the
    cubic lag-6 structure.
    """
    spp = 20
    full = duffing_ueda_simulate(n_periods=60, transient_periods=5, samples_per_period=spp)
    n_est = 40 * spp
    est = Dataset(full.u[:n_est], full.y[:n_est], full.sample_time, "duffing-est")
    val = Dataset(full.u[n_est:], full.y[n_est:], full.sample_time, "duffing-val")
    return est, val


@pytest.fixture(scope="session")
def duffing_model(duffing_split):
    """Selected structure plus point/interval estimates for case 3."""
    est_ds, _ = duffing_split
    candidates = candidate_terms(l=3, n_y=6, n_u=0, d=1)
    report = select_structure(candidates, est_ds, d=1, max_terms=18)
    result = estimate(est_ds, report.chosen)
    return report, result
