import numpy as np
import pytest

from substream.core.subspace import orthonormalize

@pytest.fixture
def rng():
    return np.random.default_rng(1234)

@pytest.fixture
def random_basis(rng):
    def make(d, k):
        return orthonormalize(rng.standard_normal((d, k)))
    return make
