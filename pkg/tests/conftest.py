import numpy as np
import pytest

from utils.core_field import BeamSpec


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def unit_beam():
    return BeamSpec(a=1.0, k=1.0)
