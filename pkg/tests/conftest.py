import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from paleodemog import data
from paleodemog.grids import GridSpec, sweep

settings.register_profile(
    "suite",
    max_examples=200,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def west():
    return data.load_family("west")


@pytest.fixture(scope="session")
def south():
    return data.load_family("south")


@pytest.fixture(scope="session")
def booth():
    return data.load_pattern("booth")


@pytest.fixture(scope="session")
def maori():
    return data.load_pattern("maori1962")


@pytest.fixture(scope="session")
def default_surface():
    return sweep(GridSpec())


@pytest.fixture(scope="session")
def south_surface():
    return sweep(GridSpec(family="south"))


@pytest.fixture(scope="session")
def maori_surface():
    return sweep(GridSpec(pattern="maori1962"))


@pytest.fixture(scope="session")
def child_indices():
    return np.array([0, 1, 2])
