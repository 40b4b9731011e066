import numpy as np
import pytest

from entropy_toolkit import GroundSet, IngletonFrame


@pytest.fixture
def ground():
    return GroundSet("ijkl")


@pytest.fixture
def frame(ground):
    return IngletonFrame.default(ground)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
