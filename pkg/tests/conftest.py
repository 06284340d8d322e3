import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from recurb import catalog  # noqa: E402


@pytest.fixture(scope="session")
def entry():
    """Factory for cached catalog entries."""
    def get(entry_id, **params):
        return catalog.instantiate(entry_id, params)
    return get


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
