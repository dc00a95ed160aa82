import random

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

PRIMES = [2, 3, 5, 13, 101, 211, 1009, 10007]


@pytest.fixture
def rng():
    return random.Random(1234)
