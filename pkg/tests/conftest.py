import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from weakstar import Grid, build_torus_system, kernel_spec


@pytest.fixture(scope="session")
def grid1():
    return Grid(1, 2**14)


@pytest.fixture(scope="session")
def small_system():
    return build_torus_system(1, 8.0)


@pytest.fixture(scope="session")
def kernel_b2():
    # beta=2 kernel with a truncation near 4e4, cheap enough to share
    return kernel_spec(2.0, 1, tail_tolerance=1e-4)


@pytest.fixture(scope="session")
def system_b2(kernel_b2):
    return build_torus_system(1, kernel_b2.lambda_truncation)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
