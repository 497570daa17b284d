import numpy as np
import pytest

from powsec.timeseries import from_values


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def series(values, name="s", start="2015-01-01"):
    return from_values(name, np.asarray(values, dtype=float), start=start)


@pytest.fixture
def make_series():
    return series
