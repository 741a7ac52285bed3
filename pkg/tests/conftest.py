import os
import tempfile

# Logs and tracebacks of the test session go to a throwaway home
os.environ.setdefault("PATHATLAS_HOME", tempfile.mkdtemp(prefix="pathatlas-tests-"))

import numpy as np  # noqa: E402
import pytest  # noqa: E402

from pathatlas.atlas import builtin  # noqa: E402
from pathatlas.corpus import moebius_loop, random_path  # noqa: E402


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)


@pytest.fixture
def sphere():
    return builtin("sphere-stereo")


@pytest.fixture
def sphere_path(rng):
    return random_path(rng, "sphere-stereo", pieces=3)


@pytest.fixture
def loop():
    return moebius_loop(1.5)
