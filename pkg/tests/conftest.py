import numpy as np
import pytest

from cusplevy import billiard as B


@pytest.fixture(scope="session")
def geom():
    """Default one-cusp table: flatness 3, unit walls, unit closing arc."""
    return B.build_cusp_table(3.0, 1.0, 1.0)


@pytest.fixture()
def rng():
    return np.random.default_rng(20260809)
