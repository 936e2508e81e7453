"""Minimum-cost matching of a small side U into a large side V.

Both routines grow the matching one U-vertex at a time along a cheapest
augmenting path found by Dijkstra on reduced costs
``cost(u, v) - pot_u[u] + pot_v[v]``.  Free V-vertices always keep potential
zero, which is what lets the compact routine look at a single cheapest free
edge per U-vertex instead of all of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import PreconditionError
from .selection import select_k_smallest_blockwise

INF = math.inf


@dataclass(frozen=True)
class CostOracle:
    p: int
    q: int
    cost: Callable[[int, int], float]


@dataclass
class Matching:
    match_of_u: list[int]
    total_cost: float
    pot_u: list[float]
    pot_v: dict[int, float] = field(default_factory=dict)

    def reduced_cost(self, cost: Callable[[int, int], float], u: int, v: int) -> float:
        return cost(u, v) - self.pot_u[u] + self.pot_v.get(v, 0.0)


def _augment(match_u, match_v, prev, i, j):
    while True:
        nxt = match_u[i]
        match_u[i] = j
        match_v[j] = i
        if nxt == -1:
            return
        j = nxt
        i = prev[j]


def min_cost_matching_naive(costs: Sequence[Sequence[float]]) -> Matching:
    """Successive shortest augmenting paths over the full p x q edge set."""
    p = len(costs)
    q = len(costs[0]) if p else 0
    if p > q:
        raise PreconditionError(f"left side ({p}) larger than right side ({q})")
    pu = [0.0] * p
    pv = [0.0] * q
    match_u = [-1] * p
    match_v = [-1] * q
    for r in range(p):
        dist = [INF] * q
        prev = [-1] * q
        done = [False] * q
        row_dist = {}
        i, d_i = r, 0.0
        while True:
            row_dist[i] = d_i
            row, base = costs[i], d_i - pu[i]
            for j in range(q):
                if not done[j]:
                    nd = base + row[j] + pv[j]
                    if nd < dist[j]:
                        dist[j] = nd
                        prev[j] = i
            j = min((j for j in range(q) if not done[j]), key=lambda t: (dist[t], t))
            done[j] = True
            if match_v[j] == -1:
                break
            i, d_i = match_v[j], dist[j]
        delta = dist[j]
        for t in range(q):
            if done[t]:
                pv[t] += delta - dist[t]
        for t, d in row_dist.items():
            pu[t] += delta - d
        _augment(match_u, match_v, prev, prev[j], j)
    total = math.fsum(costs[u][match_u[u]] for u in range(p))
    return Matching(match_u, total, pu, {v: pv[v] for v in range(q) if pv[v] != 0.0})


def min_cost_matching_compact(oracle: CostOracle, check_duals: bool = False) -> Matching:
    """Cheapest matching of all of U into V in O(p^3 + pq) time, O(p + q) space.

    Each U-vertex keeps a candidate list of its ceil(q/p) cheapest free
    V-vertices, rebuilt every ceil(q/p) augmentations.  The Dijkstra graph of
    one augmentation holds only the edges into already-matched V-vertices plus
    the first still-free candidate of every reached U-vertex.
    """
    p, q, cost = oracle.p, oracle.q, oracle.cost
    if p == 0 or p > q:
        raise PreconditionError(f"need 1 <= p <= q, got p={p}, q={q}")
    span = max(1, -(-q // p))
    pu = [0.0] * p
    pv: dict[int, float] = {}
    match_u = [-1] * p
    match_v = [-1] * q
    matched_cols: list[int] = []
    cand: list[list[tuple[float, int]]] = []
    ptr = [0] * p
    since_rebuild = span

    def cheapest_free(u):
        lst, k = cand[u], ptr[u]
        while match_v[lst[k][1]] != -1:
            k += 1
        ptr[u] = k
        return lst[k]

    for r in range(p):
        if since_rebuild >= span:
            cand = [select_k_smallest_blockwise(
                ((cost(u, v), v) for v in range(q) if match_v[v] == -1), span)
                for u in range(p)]
            ptr = [0] * p
            since_rebuild = 0
        dist = {col: INF for col in matched_cols}
        prev: dict[int, int] = {}
        settled: set[int] = set()
        row_dist = {}
        sink = (INF, q)
        sink_row = -1
        i, d_i = r, 0.0
        while True:
            row_dist[i] = d_i
            base = d_i - pu[i]
            for col in matched_cols:
                if col not in settled:
                    nd = base + cost(i, col) + pv[col]
                    if nd < dist[col]:
                        dist[col] = nd
                        prev[col] = i
            c, v = cheapest_free(i)
            if (base + c, v) < sink:
                sink = (base + c, v)
                sink_row = i
            best = sink
            for col in matched_cols:
                if col not in settled and (dist[col], col) < best:
                    best = (dist[col], col)
            if best is sink:
                break
            col = best[1]
            settled.add(col)
            i, d_i = match_v[col], dist[col]
        delta, j = sink
        for col in settled:
            pv[col] += delta - dist[col]
        for t, d in row_dist.items():
            pu[t] += delta - d
        prev[j] = sink_row
        pv[j] = 0.0
        _augment(match_u, match_v, prev, sink_row, j)
        matched_cols.append(j)
        since_rebuild += 1
        if check_duals:
            _assert_dual_feasible(cost, q, match_u, match_v, pu, pv)
    total = math.fsum(cost(u, match_u[u]) for u in range(p))
    return Matching(match_u, total, pu, {v: x for v, x in pv.items() if x != 0.0})


def _assert_dual_feasible(cost, q, match_u, match_v, pu, pv, tol=1e-9):
    for u in range(len(match_u)):
        if match_u[u] == -1:
            continue
        for v in range(q):
            rc = cost(u, v) - pu[u] + pv.get(v, 0.0)
            scale = max(1.0, abs(cost(u, v)))
            assert rc >= -tol * scale, f"negative reduced cost {rc} on ({u}, {v})"
            if match_u[u] == v:
                assert abs(rc) <= tol * scale, f"matched edge ({u}, {v}) not tight"
