from __future__ import annotations

import os
import random

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(12345)


def rand_vec(rng: random.Random, d: int, r: int = 20, nonzero: bool = False) -> tuple[int, ...]:
    while True:
        v = tuple(rng.randint(-r, r) for _ in range(d))
        if not nonzero or any(v):
            return v
