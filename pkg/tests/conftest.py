import random
from fractions import Fraction

import pytest

from hypersphere_lab.geometry import PointSet, general_position_check


def random_fraction(rng, bound=10):
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_rational_point(rng, d, bound=10):
    return tuple(random_fraction(rng, bound) for _ in range(d))


def random_general_position_set(d, n, seed, bound=10, max_attempts=100):
    """Random rational points, resampled until general position holds."""
    rng = random.Random(seed)
    for _ in range(max_attempts):
        points = []
        seen = set()
        while len(points) < n:
            p = random_rational_point(rng, d, bound)
            if p not in seen:
                seen.add(p)
                points.append(p)
        ps = PointSet.build(points, metadata={"generator": "random", "seed": seed})
        if general_position_check(ps) is None:
            return ps
    raise RuntimeError(f"could not find a general-position set for d={d}, n={n}")


@pytest.fixture
def rng():
    return random.Random(12345)
