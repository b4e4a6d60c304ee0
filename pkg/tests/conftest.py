import numpy as np
import pytest

from cesarops.catalog import catalog_measures, load_builtin_measure


@pytest.fixture(scope="session")
def catalog():
    return catalog_measures()


@pytest.fixture(scope="session")
def hat_table():
    return load_builtin_measure("hat_table")


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)


def random_series(rng, degree, scale=1.0):
    """Random complex polynomial coefficients as a PowerSeries."""
    from cesarops.series import PowerSeries
    coeffs = (rng.standard_normal(degree + 1)
              + 1j * rng.standard_normal(degree + 1)) * scale
    return PowerSeries(coeffs)
