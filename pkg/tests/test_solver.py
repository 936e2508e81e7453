import math
import random

import pytest

from ketsp.errors import DegenerateInstanceError, DistinctnessError
from ketsp.generate import ketsp_points
from ketsp.geometry import Point, convex_hull
from ketsp.instance import held_karp_tsp, tour_length
from ketsp.separator import SolverConfig
from ketsp.solver import hull_instance, lower_bound_hull, solve_ketsp

from conftest import close, hull_in_cyclic_order, pts


def test_square_without_inner_points_skips_search():
    res = solve_ketsp(pts((0, 0), (2, 0), (2, 2), (0, 2)))
    assert res.k == 0 and close(res.tour.length, 8)
    assert res.search_stats.separators_tried == 0 and res.search_stats.calls == 0


def test_square_with_center(square4):
    points = square4 + [Point(2000, 2000, 4, 1000)]
    res = solve_ketsp(points)
    assert res.k == 1
    assert close(res.tour.length, 12 + 4 * math.sqrt(2))
    assert res.kernel_stats == {"pairs": 4, "fixed": 3, "surviving": 1, "fixed_length": 12.0}


def test_errors_for_tiny_or_duplicate_input():
    with pytest.raises(DegenerateInstanceError):
        solve_ketsp(pts((0, 0), (1, 0)))
    dup = pts((0, 0), (2, 0), (2, 2), (0, 0))
    with pytest.raises(DistinctnessError):
        solve_ketsp(dup)
    assert solve_ketsp(dup, perturb=True).tour.length > 0


def test_lower_bound_hull_examples(square4):
    assert close(lower_bound_hull(pts((0, 0), (2, 0), (2, 2), (0, 2))), 8)
    assert close(lower_bound_hull(square4 + [Point(2000, 2000, 4, 1000)]), 16)
    collinear = square4 + [Point(2000, 0, 4, 1000)]
    assert close(lower_bound_hull(collinear), 16)


def test_collinear_boundary_points_join_the_hull_pairs(square4):
    points = square4 + [Point(2000, 0, 4, 1000)]
    inst = hull_instance(points)
    assert inst.n == 0 and inst.l == 5
    assert close(solve_ketsp(points).tour.length, 16)


def test_matches_held_karp_on_random_instances():
    for seed in range(200):
        rng = random.Random(seed)
        n = rng.randint(6, 10)
        p = ketsp_points(n, rng.randint(0, min(4, n - 3)), seed)
        res = solve_ketsp(p)
        hk = held_karp_tsp(p)
        assert close(res.tour.length, hk.length), seed
        assert sorted(res.tour.order) == list(range(n))
        assert close(tour_length(p, res.tour.order), res.tour.length)
        assert lower_bound_hull(p) <= res.tour.length * (1 + 1e-12)
        assert hull_in_cyclic_order(p, res.tour.order)


def test_tour_starts_on_hull_and_runs_counter_clockwise():
    p = ketsp_points(9, 3, 4)
    res = solve_ketsp(p)
    ring = convex_hull(p).hull
    hull_seq = [v for v in res.tour.order if v in ring]
    start = ring.index(hull_seq[0])
    assert hull_seq == list(ring[start:] + ring[:start])


def test_labels_survive_reordering():
    p = ketsp_points(8, 2, 3)
    relabelled = [Point(q.x, q.y, 100 + q.id, q.scale) for q in p]
    res = solve_ketsp(relabelled)
    assert sorted(res.tour.order) == [100 + i for i in range(8)]


def test_forced_search_end_to_end():
    cfg = SolverConfig(c=1.0, dp_threshold=0, size_threshold=0)
    searched = 0
    for seed in range(25):
        p = ketsp_points(9, 1 + seed % 4, seed)
        res = solve_ketsp(p, cfg)
        assert close(res.tour.length, held_karp_tsp(p).length), seed
        searched += res.search_stats.calls > 0
    assert searched == 25
