"""Path-system instances, solutions, and the exact reference solvers.

A :class:`GetsphInstance` asks for one path per terminal pair and per hull
pair such that every inner point lies on exactly one path, minimising the
total Euclidean length.  Point ids are indices into ``points``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import CapacityError, DegenerateInstanceError
from .geometry import Point, distance, hull_order_xy, seg_cross_xy

DP_LIMIT = 15
BRUTE_INNER_LIMIT = 8
BRUTE_PAIR_LIMIT = 6
HELD_KARP_LIMIT = 18
BRUTE_TOUR_LIMIT = 10

Pair = tuple[int, int]


@dataclass(frozen=True)
class GetsphInstance:
    points: tuple[Point, ...]
    inner: tuple[int, ...]
    terminal: tuple[Pair, ...] = ()
    hull: tuple[Pair, ...] = ()

    @property
    def n(self) -> int:
        return len(self.inner)

    @property
    def m(self) -> int:
        return len(self.terminal)

    @property
    def l(self) -> int:  # noqa: E743
        return len(self.hull)

    @property
    def size(self) -> int:
        return self.n + 2 * self.m + 2 * self.l

    @property
    def pairs(self) -> tuple[Pair, ...]:
        return self.terminal + self.hull

    def used_ids(self) -> list[int]:
        ids = set(self.inner)
        for a, b in self.pairs:
            ids.update((a, b))
        return sorted(ids)

    def problems(self) -> list[str]:
        """Structural defects of the instance (empty when well formed)."""
        out = []
        k = len(self.points)
        for pid in self.used_ids():
            if not 0 <= pid < k:
                out.append(f"point id {pid} out of range")
        if out:
            return out
        if len(set(self.inner)) != len(self.inner):
            out.append("repeated inner point")
        endpoints = {x for pr in self.pairs for x in pr}
        if endpoints & set(self.inner):
            out.append("an inner point is also a pair endpoint")
        if self.hull:
            ids = self.used_ids()
            boundary, _ = hull_order_xy([self.points[i].xy for i in ids])
            cyc = [ids[i] for i in boundary]
            adjacent = {frozenset((cyc[i], cyc[(i + 1) % len(cyc)])) for i in range(len(cyc))}
            for a, b in self.hull:
                if frozenset((a, b)) not in adjacent:
                    out.append(f"hull pair ({a}, {b}) is not a hull edge")
        return out


@dataclass(frozen=True)
class PathSolution:
    paths: tuple[tuple[int, ...], ...] | None
    total_length: float

    @property
    def feasible(self) -> bool:
        return self.paths is not None


INFEASIBLE = PathSolution(None, math.inf)


@dataclass(frozen=True)
class Tour:
    order: tuple[int, ...]
    length: float


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def path_length(points: Sequence[Point], path: Sequence[int]) -> float:
    return math.fsum(distance(points[a], points[b]) for a, b in zip(path, path[1:]))


def tour_length(points: Sequence[Point], order: Sequence[int]) -> float:
    if len(order) < 2:
        return 0.0
    return path_length(points, list(order) + [order[0]])


def solution_from_paths(points: Sequence[Point], paths) -> PathSolution:
    paths = tuple(tuple(p) for p in paths)
    return PathSolution(paths, math.fsum(path_length(points, p) for p in paths))


def direct_solution(inst: GetsphInstance) -> PathSolution:
    return solution_from_paths(inst.points, inst.pairs)


def validate_solution(inst: GetsphInstance, sol: PathSolution,
                      check_crossing: bool = False) -> ValidationReport:
    rep = ValidationReport()
    if not sol.feasible:
        rep.violations.append("infeasible: no solution")
        return rep
    pairs = inst.pairs
    if len(sol.paths) != len(pairs):
        rep.violations.append(f"missing path: {len(sol.paths)} paths for {len(pairs)} pairs")
        return rep
    inner = set(inst.inner)
    seen: dict[int, int] = {}
    for i, (path, (a, b)) in enumerate(zip(sol.paths, pairs)):
        if len(path) < 2 or path[0] != a or path[-1] != b:
            rep.violations.append(f"endpoints: path {i} does not run from {a} to {b}")
            continue
        for v in path[1:-1]:
            if v not in inner:
                rep.violations.append(f"path {i} passes through non-inner point {v}")
            elif v in seen:
                rep.violations.append(f"coverage: inner point {v} used twice")
            else:
                seen[v] = i
    missing = inner - set(seen)
    if missing:
        rep.violations.append(f"coverage: inner points {sorted(missing)} not visited")
    total = math.fsum(path_length(inst.points, p) for p in sol.paths)
    if not math.isclose(total, sol.total_length, rel_tol=1e-9, abs_tol=1e-12):
        rep.violations.append(f"length: reported {sol.total_length}, recomputed {total}")
    if check_crossing:
        xy = [p.xy for p in inst.points]
        segs = [(xy[a], xy[b]) for path in sol.paths for a, b in zip(path, path[1:])]
        for s, t in itertools.combinations(range(len(segs)), 2):
            if seg_cross_xy(*segs[s], *segs[t]):
                rep.violations.append(f"crossing: segments {segs[s]} and {segs[t]}")
    return rep


def _dist_tables(inst: GetsphInstance):
    pts = inst.points
    inner = [pts[v] for v in inst.inner]
    dmat = np.array([[distance(a, b) for b in inner] for a in inner]).reshape(len(inner), len(inner))
    start = np.array([[distance(pts[t], v) for v in inner] for t, _ in inst.pairs])
    end = np.array([[distance(v, pts[t2]) for v in inner] for _, t2 in inst.pairs])
    direct = np.array([distance(pts[t], pts[t2]) for t, t2 in inst.pairs])
    return dmat, start, end, direct


def _layers(n: int) -> list[np.ndarray]:
    masks = np.arange(1 << n, dtype=np.int64)
    pop = np.zeros(1 << n, dtype=np.int64)
    for v in range(n):
        pop += (masks >> v) & 1
    return [masks[pop == s] for s in range(n + 1)]


def dp_solve(inst: GetsphInstance, limit: int = DP_LIMIT) -> PathSolution:
    """Exact subset dynamic program over the inner points.

    Pairs are processed in order; for pair i the table ``walk[S, v]`` holds the
    cheapest way to have finished pairs < i and to be standing on inner point
    v on pair i's path, having used exactly the inner points in S.
    """
    n, pairs = inst.n, inst.pairs
    if n > limit:
        raise CapacityError(f"dp_solve: {n} inner points exceeds the limit of {limit}")
    if n == 0:
        return direct_solution(inst)
    if not pairs:
        return INFEASIBLE
    dmat, start, end, direct = _dist_tables(inst)
    full = 1 << n
    layers = _layers(n)
    done = np.full(full, np.inf)
    done[0] = 0.0
    walk_parent = []
    close_choice = []
    for i in range(len(pairs)):
        walk = np.full((full, n), np.inf)
        parent = np.full((full, n), -2, dtype=np.int8)
        for s in range(1, n + 1):
            ms = layers[s]
            for v in range(n):
                sel = ms[((ms >> v) & 1) == 1]
                prev = sel ^ (1 << v)
                from_start = done[prev] + start[i, v]
                via = walk[prev] + dmat[:, v][None, :]
                arg = via.argmin(axis=1)
                best = via[np.arange(len(sel)), arg]
                use_start = from_start <= best
                walk[sel, v] = np.where(use_start, from_start, best)
                parent[sel, v] = np.where(use_start, -1, arg)
        closed = walk + end[i][None, :]
        arg = closed.argmin(axis=1)
        best = closed[np.arange(full), arg]
        skip = done + direct[i]
        use_skip = skip <= best
        done = np.where(use_skip, skip, best)
        close_choice.append(np.where(use_skip, -1, arg).astype(np.int8))
        walk_parent.append(parent)
    if not np.isfinite(done[full - 1]):
        return INFEASIBLE
    paths = []
    mask = full - 1
    for i in range(len(pairs) - 1, -1, -1):
        t, t2 = pairs[i]
        v = int(close_choice[i][mask])
        middle = []
        while v >= 0:
            middle.append(inst.inner[v])
            u = int(walk_parent[i][mask, v])
            mask ^= 1 << v
            v = u
        paths.append((t, *reversed(middle), t2))
    paths.reverse()
    return solution_from_paths(inst.points, paths)


def brute_solve(inst: GetsphInstance) -> PathSolution:
    """Enumerate every assignment of inner points to pairs and every order."""
    n, pairs = inst.n, inst.pairs
    if n > BRUTE_INNER_LIMIT or len(pairs) > BRUTE_PAIR_LIMIT:
        raise CapacityError(f"brute_solve: n={n}, pairs={len(pairs)} over the limit")
    if n == 0:
        return direct_solution(inst)
    if not pairs:
        return INFEASIBLE
    pts = inst.points
    memo: dict = {}

    def best_path(i, members):
        key = (i, members)
        if key not in memo:
            t, t2 = pairs[i]
            memo[key] = min(((path_length(pts, (t, *perm, t2)), (t, *perm, t2))
                             for perm in itertools.permutations(members)),
                            key=lambda c: c[0])
        return memo[key]

    best = (math.inf, None)
    for assign in itertools.product(range(len(pairs)), repeat=n):
        groups = [tuple(v for v, a in zip(inst.inner, assign) if a == i)
                  for i in range(len(pairs))]
        chosen = [best_path(i, g) for i, g in enumerate(groups)]
        total = math.fsum(c[0] for c in chosen)
        if total < best[0]:
            best = (total, [c[1] for c in chosen])
    return solution_from_paths(pts, best[1])


def held_karp_tsp(points: Sequence[Point]) -> Tour:
    """Optimal closed tour by the subset dynamic program; point 0 is the anchor."""
    k = len(points)
    if k > HELD_KARP_LIMIT:
        raise CapacityError(f"held_karp_tsp: {k} points exceeds the limit of {HELD_KARP_LIMIT}")
    if k == 0:
        raise DegenerateInstanceError("tour of an empty point set")
    ids = [p.id for p in points]
    if k <= 3:
        return Tour(tuple(ids), tour_length(points, list(range(k))) if k > 1 else 0.0)
    n = k - 1
    d = np.array([[distance(a, b) for b in points] for a in points])
    inner = d[1:, 1:]
    full = 1 << n
    layers = _layers(n)
    best = np.full((full, n), np.inf)
    parent = np.full((full, n), -1, dtype=np.int8)
    for v in range(n):
        best[1 << v, v] = d[0, v + 1]
    for s in range(2, n + 1):
        ms = layers[s]
        for v in range(n):
            sel = ms[((ms >> v) & 1) == 1]
            prev = sel ^ (1 << v)
            via = best[prev] + inner[:, v][None, :]
            arg = via.argmin(axis=1)
            best[sel, v] = via[np.arange(len(sel)), arg]
            parent[sel, v] = arg
    closing = best[full - 1] + d[1:, 0]
    v = int(closing.argmin())
    mask = full - 1
    order = []
    while v >= 0:
        order.append(v + 1)
        u = int(parent[mask, v])
        mask ^= 1 << v
        v = u if mask else -1
    order.append(0)
    order.reverse()
    return Tour(tuple(ids[i] for i in order), tour_length(points, order))


def brute_force_tsp(points: Sequence[Point]) -> Tour:
    """Optimal closed tour by trying every order with point 0 fixed first."""
    k = len(points)
    if k > BRUTE_TOUR_LIMIT:
        raise CapacityError(f"brute_force_tsp: {k} points exceeds the limit of {BRUTE_TOUR_LIMIT}")
    if k == 0:
        raise DegenerateInstanceError("tour of an empty point set")
    best = min(((0, *perm) for perm in itertools.permutations(range(1, k))),
               key=lambda order: tour_length(points, order))
    return Tour(tuple(points[i].id for i in best), tour_length(points, best))
