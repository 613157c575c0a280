import pytest
from hypothesis import HealthCheck, settings, strategies as st

from redeilab.field import is_prime

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

SMALL_PRIMES = [p for p in range(3, 102) if is_prime(p)]


def primes(lo=3, hi=101):
    return st.sampled_from([p for p in SMALL_PRIMES if lo <= p <= hi])


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(20261016)
