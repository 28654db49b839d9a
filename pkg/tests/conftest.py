import numpy as np
import pytest

from streamlab.generators import SyntheticSpec, generate


@pytest.fixture
def appendix_c_small():
    return generate(SyntheticSpec(m=4096, n=65536, seed=3))


@pytest.fixture
def zipf_stream():
    return generate(SyntheticSpec(m=4096, n=1024, seed=5, variant="zipf", zipf_s=1.1))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
