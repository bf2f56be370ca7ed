import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def complex_vector(rng, n, norm):
    z = rng.normal(size=n) + 1j * rng.normal(size=n)
    return z * (norm / np.linalg.norm(z))
