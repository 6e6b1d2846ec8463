import numpy as np
import pytest
from hypothesis import settings

from config import DEFAULT_SEED

settings.register_profile("repro", derandomize=True, deadline=None, max_examples=40)
settings.load_profile("repro")


@pytest.fixture
def rng():
    return np.random.default_rng(DEFAULT_SEED)
