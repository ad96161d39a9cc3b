import numpy as np
import pytest


@pytest.fixture
def coherent_2x2():
    """Two unit columns 30 degrees apart; the canonical hard case for the
    plain Dantzig selector and an easy win for an optimized denoising matrix."""
    return np.array([[np.sqrt(3) / 2, 1.0 / 2], [1.0 / 2, np.sqrt(3) / 2]])
