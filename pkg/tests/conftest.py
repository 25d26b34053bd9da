import random

import pytest

from toricproj.adapt import adapt_all
from toricproj.fan import star_subdivide, two_cones
from toricproj.fan_io import builtin

CORPUS = ["p2", "p1p1", "p1p1p1", "p3", "oda75"]

# ray labels v1..v7 -> ray indices
V = {k: k - 1 for k in range(1, 8)}


def random_subdivided(seed, base="p3", max_steps=5):
    rng = random.Random(seed)
    fan = builtin(base)
    for _ in range(rng.randint(1, max_steps)):
        u, v = rng.choice(two_cones(fan))
        fan, _ = star_subdivide(fan, u, v)
    return fan


RANDOM_FANS = [random_subdivided(seed) for seed in range(20)]


@pytest.fixture(scope="session")
def oda():
    return builtin("oda75")


@pytest.fixture(scope="session")
def oda_run(oda):
    return adapt_all(oda)


@pytest.fixture(scope="session")
def gamma(oda_run):
    return oda_run[0]
