import math
import random

import pytest

from ketsp.generate import random_getsph
from ketsp.geometry import convex_hull, make_points


def pts(*coords, scale=1000):
    return make_points(coords, scale)


def close(a, b, rel=1e-9):
    return math.isclose(a, b, rel_tol=rel, abs_tol=1e-12)


def sampled_getsph(seed, n, m, l, **kw):
    """random_getsph, retrying the layout when interior sampling fails."""
    rng = random.Random(seed)
    for _ in range(50):
        try:
            return random_getsph(rng, n, m, l, **kw)
        except ValueError:
            continue
    raise RuntimeError("could not sample an instance")


def hull_in_cyclic_order(points, order) -> bool:
    ring = convex_hull(points).hull
    rank = {h: i for i, h in enumerate(ring)}
    seq = [rank[v] for v in order if v in rank]
    start = seq.index(0)
    seq = seq[start:] + seq[:start]
    return seq == sorted(seq) or seq[:1] + seq[1:][::-1] == sorted(seq)


@pytest.fixture
def square4():
    return pts((0, 0), (4, 0), (4, 4), (0, 4))
