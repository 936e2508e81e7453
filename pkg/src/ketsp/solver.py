"""End-to-end k-ETSP: optimal tours when only k points lie inside the hull.

Hull-boundary points are visited in their cyclic order by some optimal tour,
so the tour is a set of paths, one per hull edge, that jointly pick up the k
interior points.  That path system is kernelized once at the root and handed
to the separator search.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Sequence

from .errors import DegenerateInstanceError
from .geometry import Point, check_distinct, convex_hull, distance, perturb_duplicates
from .instance import GetsphInstance, Tour, tour_length
from .kernel import reduce_instance
from .separator import SearchStats, SolverConfig, solve_getsph


@dataclass
class KetspResult:
    tour: Tour
    k: int
    kernel_stats: dict = field(default_factory=dict)
    search_stats: SearchStats = field(default_factory=SearchStats)
    wall_time: float = 0.0


def _prepare(points: Sequence[Point], perturb: bool) -> tuple[list[Point], list[int]]:
    """Points re-numbered 0..n-1, plus the caller's label for each position."""
    pts = list(points)
    if len(pts) < 3:
        raise DegenerateInstanceError(f"need at least 3 points, got {len(pts)}")
    if perturb:
        pts = perturb_duplicates(pts)
    check_distinct(pts)
    labels = [p.id for p in pts]
    if min(labels) < 0 or len(set(labels)) != len(labels):
        labels = list(range(len(pts)))
    return [Point(p.x, p.y, i, p.scale) for i, p in enumerate(pts)], labels


def hull_instance(points: Sequence[Point]) -> GetsphInstance:
    """V = strict interior, T = empty, H = consecutive hull-boundary pairs.

    ``points[i].id`` must equal ``i``.
    """
    dec = convex_hull(points)
    ring = dec.hull
    hull = tuple((ring[i], ring[(i + 1) % len(ring)]) for i in range(len(ring)))
    return GetsphInstance(tuple(points), tuple(sorted(dec.inner)), (), hull)


def stitch_tour(paths) -> list[int]:
    """Concatenate hull-pair paths given in cyclic hull order into one tour."""
    return [p for path in paths for p in path[:-1]]


def solve_ketsp(points: Sequence[Point], cfg: SolverConfig | None = None,
                perturb: bool = False) -> KetspResult:
    """Optimal tour through ``points``.

    Tour order lists point ids, starting at the lexicographically smallest
    hull point and running counter-clockwise along the hull.
    """
    cfg = cfg or SolverConfig()
    start = time.perf_counter()
    pts, labels = _prepare(points, perturb)
    inst = hull_instance(pts)
    stats = SearchStats()
    kernel = reduce_instance(inst)
    kernel_stats = {
        "pairs": inst.l,
        "fixed": len(kernel.fixed_pairs),
        "surviving": kernel.reduced.l,
        "fixed_length": kernel.fixed_length,
    }
    if inst.n == 0:
        paths = inst.hull
        root_length = 0.0
    else:
        sol = solve_getsph(kernel.reduced, cfg, stats)
        root_length = sol.total_length
        paths = kernel.lift(sol, inst).paths
    order = stitch_tour(paths)
    length = tour_length(pts, order)
    expected = root_length + kernel.fixed_length
    assert math.isclose(length, expected, rel_tol=1e-9, abs_tol=1e-12), (length, expected)
    return KetspResult(Tour(tuple(labels[i] for i in order), length), inst.n, kernel_stats, stats,
                       time.perf_counter() - start)


def lower_bound_hull(points: Sequence[Point]) -> float:
    """Perimeter of the convex hull, a lower bound on every tour."""
    pts, _ = _prepare(points, False)
    ring = [pts[h] for h in convex_hull(pts).hull]
    return math.fsum(distance(ring[i], ring[i - 1]) for i in range(len(ring)))
