import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from nodalfact.scalar import GF, QQ  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def fp():
    return GF()


@pytest.fixture
def qq():
    return QQ
