import sys
from pathlib import Path

import mpmath
import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture(autouse=True)
def _reset_mpmath_precision():
    # oracles use mpmath's global context; keep tests independent of each other
    yield
    mpmath.mp.prec = 53
