"""Quadratic bikernel: fix all but n^2 pairs as direct edges.

Every ordered pair (v, v') of inner points (diagonal included) is matched to
a pair (t, t') at price d(t, v) + d(v', t') - d(t, t'), the extra length of
routing t -> v ... v' -> t' instead of t -> t'.  Some optimal solution uses
only pairs hit by a cheapest matching of all n^2 inner pairs, so every other
pair can be closed with its direct edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import Point, distance
from .instance import GetsphInstance, Pair, PathSolution, solution_from_paths
from .matching import CostOracle, min_cost_matching_compact


def attach_cost(v: Point, v2: Point, t: Point, t2: Point) -> float:
    return distance(t, v) + distance(v2, t2) - distance(t, t2)


@dataclass(frozen=True)
class FixedPair:
    kind: str
    index: int
    pair: Pair
    length: float


@dataclass(frozen=True)
class KernelResult:
    reduced: GetsphInstance
    fixed_pairs: tuple[FixedPair, ...]
    fixed_length: float
    survivors: tuple[tuple[str, int], ...]

    def lift(self, sol: PathSolution, original: GetsphInstance) -> PathSolution:
        """Expand a solution of the reduced instance to the original one."""
        if not sol.feasible:
            return sol
        by_slot = {}
        for slot, path in zip(self.survivors, sol.paths):
            by_slot[slot] = path
        for f in self.fixed_pairs:
            by_slot[(f.kind, f.index)] = f.pair
        paths = [by_slot[("terminal", i)] for i in range(original.m)]
        paths += [by_slot[("hull", i)] for i in range(original.l)]
        return solution_from_paths(original.points, paths)


def reduce_instance(inst: GetsphInstance) -> KernelResult:
    pts = inst.points
    slots = [("terminal", i) for i in range(inst.m)] + [("hull", i) for i in range(inst.l)]
    pairs = inst.pairs
    n, q = inst.n, len(pairs)
    if q <= n * n:
        keep = set(range(q))
    elif n == 0:
        keep = set()
    else:
        inner = [pts[v] for v in inst.inner]
        direct = [distance(pts[a], pts[b]) for a, b in pairs]
        to_v = [[distance(pts[a], v) for v in inner] for a, _ in pairs]
        from_v = [[distance(v, pts[b]) for v in inner] for _, b in pairs]

        def cost(w: int, j: int) -> float:
            return to_v[j][w // n] + from_v[j][w % n] - direct[j]

        match = min_cost_matching_compact(CostOracle(n * n, q, cost))
        keep = set(match.match_of_u)
    fixed = tuple(FixedPair(slots[j][0], slots[j][1], pairs[j], distance(pts[pairs[j][0]], pts[pairs[j][1]]))
                  for j in range(q) if j not in keep)
    kept = [j for j in range(q) if j in keep]
    reduced = GetsphInstance(
        pts, inst.inner,
        tuple(pairs[j] for j in kept if slots[j][0] == "terminal"),
        tuple(pairs[j] for j in kept if slots[j][0] == "hull"))
    survivors = tuple(slots[j] for j in kept)
    return KernelResult(reduced, fixed, math.fsum(f.length for f in fixed), survivors)
