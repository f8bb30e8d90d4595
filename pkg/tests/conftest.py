import os

import numpy as np
import pytest


@pytest.fixture
def rng():
    """Seeded generator; override the seed with STRONGCOUPLE_SEED."""
    seed = int(os.environ.get("STRONGCOUPLE_SEED", "1234"))
    return np.random.default_rng(seed)


@pytest.fixture
def random_density(rng):
    """Factory for random full-rank density matrices."""

    def make(dim=2):
        m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        rho = m @ m.conj().T
        return rho / np.trace(rho).real

    return make
