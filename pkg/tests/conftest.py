import numpy as np
import pytest

from twmd.sfcw import RadarParams


@pytest.fixture
def rng():
    return np.random.default_rng(20260808)


@pytest.fixture
def small_params():
    """Desk-scale radar: 64 frequency bins, same step/prf as the defaults."""
    return RadarParams(n_freq=64)
