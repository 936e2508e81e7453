import itertools
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from ketsp.errors import PreconditionError
from ketsp.matching import CostOracle, min_cost_matching_compact, min_cost_matching_naive
from ketsp.selection import select, select_k_smallest_blockwise, smallest

from conftest import close


def test_blockwise_examples():
    assert select_k_smallest_blockwise([5, 1, 4, 2, 3], 2) == [1, 2]
    assert select_k_smallest_blockwise([5, 1, 4], 0) == []
    assert select_k_smallest_blockwise([(3, "b"), (1, "a")], 5) == [(1, "a"), (3, "b")]


def test_blockwise_matches_sort_prefix():
    rng = random.Random(3)
    items = [(rng.randint(0, 500), i) for i in range(10**4)]
    assert select_k_smallest_blockwise(iter(items), 37) == sorted(items)[:37]


def test_blockwise_ties_broken_by_key():
    items = [(1.0, k) for k in (9, 3, 7, 1, 5)]
    assert select_k_smallest_blockwise(items, 3) == [(1.0, 1), (1.0, 3), (1.0, 5)]


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=200), st.data())
def test_select_returns_rank(items, data):
    k = data.draw(st.integers(0, len(items) - 1))
    assert select(list(items), k) == sorted(items)[k]
    assert sorted(smallest(list(items), k)) == sorted(items)[:k]


def _exhaustive(costs):
    p, q = len(costs), len(costs[0])
    return min(sum(costs[u][v] for u, v in enumerate(perm)) for perm in itertools.permutations(range(q), p))


def test_naive_examples():
    m = min_cost_matching_naive([[5, 3]])
    assert m.total_cost == 3 and m.match_of_u == [1]
    assert min_cost_matching_naive([[1, 2], [2, 1]]).total_cost == 2
    with pytest.raises(PreconditionError):
        min_cost_matching_naive([[1], [2]])


def test_naive_matches_exhaustive_assignment():
    rng = random.Random(8)
    for _ in range(200):
        p = rng.randint(1, 3)
        q = rng.randint(p, 6)
        costs = [[rng.randint(0, 20) for _ in range(q)] for _ in range(p)]
        m = min_cost_matching_naive(costs)
        assert len(set(m.match_of_u)) == p
        assert m.total_cost == _exhaustive(costs)


def _oracle(rng, p, q, integer=False):
    table = [[rng.randint(0, 9) if integer else rng.random() for _ in range(q)] for _ in range(p)]
    return table, CostOracle(p, q, lambda u, v: table[u][v])


def test_compact_examples():
    rng = random.Random(1)
    table, oracle = _oracle(rng, 1, 30)
    m = min_cost_matching_compact(oracle)
    assert m.match_of_u == [min(range(30), key=lambda v: (table[0][v], v))]
    sigma = [2, 0, 3, 1]
    perm = CostOracle(4, 4, lambda u, v: 0.0 if v == sigma[u] else 1.0)
    m = min_cost_matching_compact(perm)
    assert m.total_cost == 0 and m.match_of_u == sigma
    with pytest.raises(PreconditionError):
        min_cost_matching_compact(CostOracle(0, 3, lambda u, v: 0.0))
    with pytest.raises(PreconditionError):
        min_cost_matching_compact(CostOracle(3, 2, lambda u, v: 0.0))


@pytest.mark.parametrize("integer", [False, True])
def test_compact_matches_naive_with_dual_feasibility(integer):
    rng = random.Random(20 + integer)
    for _ in range(150):
        p = rng.randint(2, 8)
        q = rng.randint(p, 64)
        table, oracle = _oracle(rng, p, q, integer)
        fast = min_cost_matching_compact(oracle, check_duals=True)
        slow = min_cost_matching_naive(table)
        assert len(set(fast.match_of_u)) == p
        assert close(fast.total_cost, math.fsum(table[u][v] for u, v in enumerate(fast.match_of_u)))
        assert close(fast.total_cost, slow.total_cost)
        for u in range(p):
            for v in range(q):
                assert fast.reduced_cost(oracle.cost, u, v) >= -1e-9


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(0, 12), st.randoms(use_true_random=False))
def test_matched_side_suffices_for_every_subset(p, extra, rng):
    q = p + extra
    table = [[rng.random() for _ in range(q)] for _ in range(p)]
    used = sorted(min_cost_matching_naive(table).match_of_u)
    for r in range(1, p + 1):
        for subset in itertools.combinations(range(p), r):
            rows = [table[u] for u in subset]
            everywhere = min_cost_matching_naive(rows).total_cost
            restricted = min_cost_matching_naive([[row[v] for v in used] for row in rows]).total_cost
            assert close(everywhere, restricted)
