"""Seeded instance generators for tests, benchmarks and ``ketsp gen``."""

from __future__ import annotations

import math
import random

from .errors import PreconditionError
from .geometry import DEFAULT_SCALE, Point, hull_order_xy, side_xy, Side
from .instance import GetsphInstance


def convex_position(rng: random.Random, h: int, radius: int, tries: int = 1000) -> list[tuple[int, int]]:
    """``h`` grid points in strictly convex position on a circle of ``radius``."""
    if h < 1:
        return []
    for _ in range(tries):
        angles = sorted(rng.uniform(0, 2 * math.pi) for _ in range(h))
        pts = [(round(radius * math.cos(a)), round(radius * math.sin(a))) for a in angles]
        if len(set(pts)) != h:
            continue
        if h <= 2:
            return pts
        _, strict = hull_order_xy(pts)
        if len(strict) == h:
            return pts
    raise PreconditionError(f"cannot place {h} convex grid points on radius {radius}")


def strictly_inside(rng: random.Random, polygon: list[tuple[int, int]], count: int,
                    taken: set, tries: int = 100000) -> list[tuple[int, int]]:
    xs = [p[0] for p in polygon]
    ys = [p[1] for p in polygon]
    out = []
    for _ in range(tries):
        if len(out) == count:
            return out
        p = (rng.randint(min(xs), max(xs)), rng.randint(min(ys), max(ys)))
        if p in taken or side_xy(p, polygon) is not Side.INTERIOR:
            continue
        taken.add(p)
        out.append(p)
    if len(out) == count:
        return out
    raise PreconditionError(f"could not sample {count} interior points")


def ketsp_points(n: int, k: int, seed: int, radius: int = 100,
                 scale: int = DEFAULT_SCALE) -> list[Point]:
    """``n - k`` points in convex position plus ``k`` strictly inside.

    ``radius`` is in output units; points are snapped to a grid of spacing
    ``1 / scale`` only after scaling, so large radii keep convexity robust.
    """
    if k < 0 or n < k + 3:
        raise PreconditionError(f"need n >= k + 3, got n={n}, k={k}")
    rng = random.Random(seed)
    grid_radius = radius * scale
    hull = convex_position(rng, n - k, grid_radius)
    ordered = [hull[i] for i in hull_order_xy(hull)[0]]
    inner = strictly_inside(rng, ordered, k, set(hull))
    return [Point(x, y, i, scale) for i, (x, y) in enumerate(hull + inner)]


def uniform_points(n: int, seed: int, extent: int = 1000, scale: int = 1) -> list[Point]:
    """``n`` distinct grid points drawn uniformly from [0, extent]^2."""
    if n > (extent + 1) ** 2:
        raise PreconditionError(f"only {(extent + 1) ** 2} grid points fit in extent {extent}, asked for {n}")
    rng = random.Random(seed)
    seen: set = set()
    out = []
    while len(out) < n:
        p = (rng.randint(0, extent), rng.randint(0, extent))
        if p not in seen:
            seen.add(p)
            out.append(Point(p[0], p[1], len(out), scale))
    return out


def random_getsph(rng: random.Random, n: int, m: int, l: int, radius: int = 10000,
                  scale: int = 1000, interior_terminals: float = 0.5) -> GetsphInstance:
    """A random instance with ``n`` inner points, ``m`` terminal and ``l`` hull pairs.

    Hull pairs are distinct edges of a random convex polygon; terminal-pair
    endpoints are polygon vertices or extra points strictly inside.
    """
    h = max(3, l) + rng.randint(0, 2)
    poly = convex_position(rng, h, radius)
    poly = [poly[i] for i in hull_order_xy(poly)[0]]
    taken = set(poly)
    coords = list(poly)
    inner = strictly_inside(rng, poly, n, taken)
    inner_ids = tuple(range(len(coords), len(coords) + n))
    coords += inner
    edges = rng.sample(range(h), l)
    hull_pairs = tuple((e, (e + 1) % h) if rng.random() < 0.5 else ((e + 1) % h, e)
                       for e in edges)
    terminal = []
    for _ in range(m):
        ends = []
        for _ in range(2):
            if rng.random() < interior_terminals:
                (p,) = strictly_inside(rng, poly, 1, taken)
                coords.append(p)
                ends.append(len(coords) - 1)
            else:
                choices = [v for v in range(h) if v not in ends]
                ends.append(rng.choice(choices))
        terminal.append(tuple(ends))
    points = tuple(Point(x, y, i, scale) for i, (x, y) in enumerate(coords))
    return GetsphInstance(points, inner_ids, tuple(terminal), hull_pairs)


def kernel_instance(n: int, q: int, seed: int) -> GetsphInstance:
    """``n`` inner points inside a ``q``-gon whose edges are the hull pairs.

    Vertices lie on the parabola y = x^2 at distinct integer x, which keeps
    any number of them strictly convex on the integer grid.
    """
    from .solver import hull_instance

    rng = random.Random(seed)
    xs = sorted(rng.sample(range(-10 * q, 10 * q), q))
    hull = [(x, x * x) for x in xs]
    inner = strictly_inside(rng, hull, n, set(hull))
    return hull_instance([Point(x, y, i, 1) for i, (x, y) in enumerate(hull + inner)])
