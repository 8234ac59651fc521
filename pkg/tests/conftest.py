import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from tschirnhaus.linalg import discriminant_monic

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], max_examples=60,
)
settings.load_profile("default")


def random_rational(rng: random.Random, height: int = 9, den: int = 4) -> Fraction:
    return Fraction(rng.randint(-height, height), rng.randint(1, den))


def random_squarefree(rng: random.Random, n: int, height: int = 10) -> list:
    """Random integer coefficient vector with nonzero discriminant."""
    while True:
        a = [rng.randint(-height, height) for _ in range(n)]
        if discriminant_monic(a) != 0:
            return a


@pytest.fixture
def rng():
    return random.Random(20240601)
