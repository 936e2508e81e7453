"""Recursive search over simple cycle separators.

A node of the recursion is a path-system instance.  After kernelization and
placing two enclosing points, every short simple polygon through instance
points and enclosing points is tried as a separator.  For each one, every
way the unknown optimum may pass through the separator (an
:class:`IntersectionPattern`) splits the node into an interior and an
exterior instance, both solved recursively and glued back together.

Hull pairs of all recursion nodes live in one shared list; a node owns a
contiguous, lexicographically sorted slice of it and hands its children
sub-slices.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .errors import SearchExhaustedError
from .geometry import EnclosingFrame, Side, distance, enclosing_points, orientation_table
from .instance import (DP_LIMIT, INFEASIBLE, GetsphInstance, Pair, PathSolution,
                       direct_solution, dp_solve, solution_from_paths, validate_solution)
from .kernel import reduce_instance

I1, I2 = -1, -2
IN, OUT = Side.INTERIOR, Side.EXTERIOR


@dataclass(frozen=True)
class SolverConfig:
    c: float = 4.0
    dp_threshold: int = 12
    size_threshold: int = 40
    balance_rho: float = 0.75
    exhaustive_fallback: bool = True
    dp_limit: int = DP_LIMIT
    workers: int = 1

    def __post_init__(self):
        if self.c < 1:
            raise ValueError("separator constant c must be at least 1")
        if self.dp_threshold < 0 or self.size_threshold < 0 or self.dp_limit < 1:
            raise ValueError("thresholds must be non-negative")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        if not 0 < self.balance_rho < 1:
            raise ValueError("balance_rho must lie in (0, 1)")


@dataclass
class SearchStats:
    calls: int = 0
    max_depth: int = 0
    separators_tried: int = 0
    separators_repeated: int = 0
    patterns_tried: int = 0
    subproblems_solved: int = 0
    pruned: int = 0
    fallbacks: int = 0
    incumbent_kept: int = 0
    dp_base_cases: int = 0
    kernel_reductions: int = 0
    pairs_fixed: int = 0
    winning_separators: list[tuple[int, int]] = field(default_factory=list)

    def merge(self, other: "SearchStats") -> None:
        for name, value in other.__dict__.items():
            if name == "max_depth":
                self.max_depth = max(self.max_depth, value)
            elif name == "winning_separators":
                self.winning_separators.extend(value)
            else:
                setattr(self, name, getattr(self, name) + value)

    def as_dict(self) -> dict:
        d = dict(self.__dict__)
        d["winning_separators"] = [list(w) for w in self.winning_separators]
        return d


def separator_bound(inst: GetsphInstance, c: float) -> int:
    return math.ceil(c * math.sqrt(inst.n + 2 * inst.m + 2))


@dataclass(frozen=True)
class SeparatorCandidate:
    """A simple polygon through instance points and the enclosing points.

    ``cycle`` holds point ids, with -1 and -2 standing for the two enclosing
    points; ``sides`` classifies every other point of the instance.
    """
    cycle: tuple[int, ...]
    roles: tuple[str, ...]
    sides: dict[int, Side]

    def side(self, pid: int) -> Side:
        return self.sides.get(pid, Side.BOUNDARY)


@dataclass(frozen=True)
class Chain:
    pair: int
    nodes: tuple[int, ...]
    edge_sides: tuple[Side, ...]

    @property
    def edges(self) -> list[Pair]:
        return list(zip(self.nodes, self.nodes[1:]))


@dataclass(frozen=True)
class IntersectionPattern:
    chains: tuple[Chain, ...]
    kept_sides: dict[int, Side]


@dataclass(frozen=True)
class CombinePlan:
    original: GetsphInstance
    interior: GetsphInstance
    exterior: GetsphInstance
    fragments: tuple[tuple[tuple[Side, int], ...], ...]

    @property
    def weighted_sizes(self) -> tuple[int, int]:
        return (self.interior.n + 2 * self.interior.m, self.exterior.n + 2 * self.exterior.m)

    def within_guard(self, rho: float) -> bool:
        """Each side that still has inner points shrinks to at most rho * (n + 2m)."""
        limit = rho * (self.original.n + 2 * self.original.m)
        return all(sub.n == 0 or size <= limit
                   for sub, size in zip((self.interior, self.exterior), self.weighted_sizes))


def _roles(inst: GetsphInstance) -> dict[int, str]:
    roles = {}
    for a, b in inst.hull:
        roles[a] = roles[b] = "hull-endpoint"
    for a, b in inst.terminal:
        roles[a] = roles[b] = "terminal-endpoint"
    for v in inst.inner:
        roles[v] = "inner"
    return roles


def _weights(inst: GetsphInstance) -> dict[int, int]:
    w = {v: 1 for v in inst.inner}
    for a, b in inst.terminal:
        w[a] = w.get(a, 0) + 1
        w[b] = w.get(b, 0) + 1
    return w


def enumerate_separators(inst: GetsphInstance, frame: EnclosingFrame,
                         cfg: SolverConfig) -> Iterator[SeparatorCandidate]:
    """Yield every balanced simple polygon of length 3..ceil(c*sqrt(n+2m+2)).

    Each polygon is yielded once: it starts at its smallest node reference
    and its second node is smaller than its last.  Polygons with a non-node
    point on their boundary are skipped.  Order is by length, then
    lexicographic.
    """
    roles = _roles(inst)
    roles[I1] = roles[I2] = "enclosing"
    refs = sorted(roles)
    xy = {pid: inst.points[pid].xy for pid in refs if pid >= 0}
    xy[I1], xy[I2] = frame.i1.xy, frame.i2.xy
    coords = [xy[r] for r in refs]
    count = len(refs)
    weights = _weights(inst)
    total = inst.n + 2 * inst.m
    limit = min(separator_bound(inst, cfg.c), count)

    # Edges through a third point are unusable.  Between the remaining
    # ("clean") edges, meeting anywhere but a shared endpoint can only be a
    # proper crossing, so one exact orientation table decides everything.
    combos = list(itertools.combinations(range(count), 2))
    table = orientation_table(coords, combos)
    xs = np.array([p[0] for p in coords], dtype=object)
    ys = np.array([p[1] for p in coords], dtype=object)
    ends = np.array(combos, dtype=np.intp).reshape(-1, 2)
    lo_x = np.minimum(xs[ends[:, 0]], xs[ends[:, 1]])[:, None]
    hi_x = np.maximum(xs[ends[:, 0]], xs[ends[:, 1]])[:, None]
    lo_y = np.minimum(ys[ends[:, 0]], ys[ends[:, 1]])[:, None]
    hi_y = np.maximum(ys[ends[:, 0]], ys[ends[:, 1]])[:, None]
    blocked = ((table == 0) & (lo_x <= xs) & (xs <= hi_x) & (lo_y <= ys) & (ys <= hi_y)).astype(bool)
    blocked[np.arange(len(combos)), ends[:, 0]] = False
    blocked[np.arange(len(combos)), ends[:, 1]] = False
    clean = np.flatnonzero(~blocked.any(axis=1))
    eid = [[-1] * count for _ in range(count)]
    for e, r in enumerate(clean.tolist()):
        i, j = combos[r]
        eid[i][j] = eid[j][i] = e
    sub = table[clean].astype(np.int16)
    ce = ends[clean]
    proper = (sub[:, ce[:, 0]] * sub[:, ce[:, 1]] < 0)
    proper &= proper.T
    hits = [int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little")
            for row in proper]
    orient_rows = table.tolist()
    row_of = {pr: r for r, pr in enumerate(combos)}
    y = [p[1] for p in coords]

    def evaluate(path):
        k = len(path)
        edges = []
        for i in range(k):
            u, v = path[i], path[(i + 1) % k]
            flip = 1 if u < v else -1
            edges.append((y[u], y[v], orient_rows[row_of[(u, v) if u < v else (v, u)]], flip))
        sides = {}
        w_in = w_out = 0
        for t in range(count):
            if t in path:
                continue
            py = y[t]
            inside = False
            for yu, yv, row, flip in edges:
                if (yu > py) != (yv > py) and (yv > yu) == (row[t] * flip > 0):
                    inside = not inside
            ref = refs[t]
            w = weights.get(ref, 0)
            if inside:
                sides[ref] = IN
                w_in += w
            else:
                sides[ref] = OUT
                w_out += w
        if 3 * w_in > 2 * total or 3 * w_out > 2 * total:
            return None
        sides.pop(I1, None)
        sides.pop(I2, None)
        return SeparatorCandidate(tuple(refs[i] for i in path),
                                  tuple(roles[refs[i]] for i in path), sides)

    def extend(path, used, forbid, k):
        last, start = path[-1], path[0]
        closing = len(path) + 1 == k
        row = eid[last]
        for nxt in range(start + 1, count):
            e = row[nxt]
            if e < 0 or used >> nxt & 1 or forbid >> e & 1:
                continue
            if closing:
                c = eid[nxt][start]
                if nxt < path[1] or c < 0 or (forbid | hits[e]) >> c & 1:
                    continue
                cand = evaluate(path + [nxt])
                if cand is not None:
                    yield cand
            else:
                path.append(nxt)
                yield from extend(path, used | 1 << nxt, forbid | hits[e], k)
                path.pop()

    for k in range(3, limit + 1):
        for start in range(count):
            yield from extend([start], 1 << start, 0, k)


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    for cuts in itertools.combinations(range(1, total), parts - 1):
        bounds = (0, *cuts, total)
        yield tuple(bounds[i + 1] - bounds[i] for i in range(parts))


def _side_options(sa: Side, sb: Side) -> tuple[Side, ...]:
    strict = {s for s in (sa, sb) if s is not Side.BOUNDARY}
    if len(strict) == 2:
        return ()
    if strict:
        return (strict.pop(),)
    return (IN, OUT)


def enumerate_patterns(inst: GetsphInstance, sep: SeparatorCandidate) -> Iterator[IntersectionPattern]:
    """Yield every way a solution may meet the separator.

    Inner points on the cycle are split into ordered runs; each run replaces
    the path of one distinct pair (t, t') by the chain t, run..., t'.  Every
    chain edge and every untouched pair is then placed inside or outside,
    with the choice forced whenever an endpoint lies strictly on one side.
    """
    pairs = inst.pairs
    on_cycle = [v for v in sep.cycle if v >= 0 and sep.side(v) is Side.BOUNDARY]
    inner_set = set(inst.inner)
    hits = [v for v in on_cycle if v in inner_set]
    keep_opts = [_side_options(sep.side(a), sep.side(b)) for a, b in pairs]
    for r in range(0, min(len(hits), len(pairs)) + 1):
        if r == 0 and hits:
            continue
        for chosen in itertools.combinations(range(len(pairs)), r):
            kept = [j for j in range(len(pairs)) if j not in chosen]
            if any(not keep_opts[j] for j in kept):
                continue
            perms = itertools.permutations(hits) if r else [()]
            for perm in perms:
                for comp in (_compositions(len(hits), r) if r else [()]):
                    runs, pos = [], 0
                    for size in comp:
                        runs.append(perm[pos:pos + size])
                        pos += size
                    skeletons = []
                    edge_opts = []
                    ok = True
                    for j, run in zip(chosen, runs):
                        a, b = pairs[j]
                        if a == b:
                            ok = False
                            break
                        nodes = (a, *run, b)
                        opts = [_side_options(sep.side(x), sep.side(y)) for x, y in zip(nodes, nodes[1:])]
                        if any(not o for o in opts):
                            ok = False
                            break
                        skeletons.append((j, nodes))
                        edge_opts.append(opts)
                    if not ok:
                        continue
                    flat = [o for opts in edge_opts for o in opts] + [keep_opts[j] for j in kept]
                    for choice in itertools.product(*flat):
                        pos = 0
                        chains = []
                        for (j, nodes), opts in zip(skeletons, edge_opts):
                            chains.append(Chain(j, nodes, tuple(choice[pos:pos + len(opts)])))
                            pos += len(opts)
                        kept_sides = {j: choice[pos + t] for t, j in enumerate(kept)}
                        yield IntersectionPattern(tuple(chains), kept_sides)


def _inner_sides(inst: GetsphInstance, sep: SeparatorCandidate) -> tuple[list[int], list[int]]:
    on = set(sep.cycle)
    inside, outside = [], []
    for v in inst.inner:
        if v in on:
            continue
        s = sep.side(v)
        if s is IN:
            inside.append(v)
        elif s is OUT:
            outside.append(v)
        else:
            raise ValueError(f"inner point {v} lies on the separator but is not a node")
    return inside, outside


def _distribute(inst: GetsphInstance, pat: IntersectionPattern):
    """Terminal and hull pairs of each side (interior at index 0) plus fragment slots."""
    terminal: tuple[list, list] = ([], [])
    hull: tuple[list, list] = ([], [])
    slots: dict[int, list] = {}
    m = inst.m
    for j, side in pat.kept_sides.items():
        k = side is OUT
        pr = inst.pairs[j]
        if j < m:
            slots[j] = [(k, len(terminal[k]))]
            terminal[k].append(pr)
        else:
            slots[j] = [(k, None)]
            hull[k].append(pr)
    for ch in pat.chains:
        pieces = slots[ch.pair] = []
        for edge, side in zip(zip(ch.nodes, ch.nodes[1:]), ch.edge_sides):
            k = side is OUT
            pieces.append((k, len(terminal[k])))
            terminal[k].append(edge)
    hull[0].sort()
    hull[1].sort()
    return terminal, hull, slots


def _assemble(inst, inner, terminal, hull, slots):
    subs = [GetsphInstance(inst.points, tuple(inner[k]), tuple(terminal[k]), tuple(hull[k]))
            for k in (0, 1)]
    hull_pos = [{pr: len(terminal[k]) + i for i, pr in enumerate(hull[k])} for k in (0, 1)]
    sides = (IN, OUT)
    fragments = []
    for j, pr in enumerate(inst.pairs):
        fragments.append(tuple((sides[k], hull_pos[k][pr] if idx is None else idx)
                               for k, idx in slots[j]))
    plan = CombinePlan(inst, subs[0], subs[1], tuple(fragments))
    return subs[0], subs[1], plan


def split(inst: GetsphInstance, sep: SeparatorCandidate,
          pat: IntersectionPattern) -> tuple[GetsphInstance, GetsphInstance, CombinePlan]:
    """Form the interior and exterior instances for one pattern.

    Chain edges and kept terminal pairs become terminal pairs of their side;
    kept hull pairs stay hull pairs, listed in lexicographic order.
    """
    terminal, hull, slots = _distribute(inst, pat)
    return _assemble(inst, _inner_sides(inst, sep), terminal, hull, slots)


def combine(plan: CombinePlan, interior_sol: PathSolution,
            exterior_sol: PathSolution) -> PathSolution | None:
    """Glue the two sides back into one path per original pair, or None."""
    if not interior_sol.feasible or not exterior_sol.feasible:
        return None
    sols = {IN: interior_sol.paths, OUT: exterior_sol.paths}
    if len(sols[IN]) != len(plan.interior.pairs) or len(sols[OUT]) != len(plan.exterior.pairs):
        return None
    paths = []
    for frags in plan.fragments:
        path: list[int] = []
        for s, idx in frags:
            piece = sols[s][idx]
            if path:
                if path[-1] != piece[0]:
                    return None
                path.extend(piece[1:])
            else:
                path.extend(piece)
        paths.append(tuple(path))
    merged = solution_from_paths(plan.original.points, paths)
    if not validate_solution(plan.original, merged).ok:
        return None
    return merged


def distance_table(points, ids) -> dict[int, dict[int, float]]:
    """Nested lookup ``table[a][b]`` of distances among the given point ids."""
    xy = np.array([(points[i].fx, points[i].fy) for i in ids], dtype=float).reshape(-1, 2)
    rows = np.hypot(xy[:, None, 0] - xy[None, :, 0], xy[:, None, 1] - xy[None, :, 1]).tolist()
    return {a: dict(zip(ids, row)) for a, row in zip(ids, rows)}


def _bound(inner, pairs, dist) -> float:
    direct = math.fsum(dist[a][b] for a, b in pairs)
    if not inner:
        return direct
    if not pairs:
        return math.inf
    total = 0.0
    for a, b in pairs:
        ra, rb = dist[a], dist[b]
        total += min(ra[b], min(ra[v] for v in inner)) + min(ra[b], min(rb[v] for v in inner))
    ends = {x for pr in pairs for x in pr}
    for v in inner:
        row = dist[v]
        first = second = math.inf
        for u in itertools.chain(inner, ends):
            if u != v:
                d = row[u]
                if d < first:
                    first, second = d, first
                elif d < second:
                    second = d
        total += first + (second if second < math.inf else first)
    detour = max(min(dist[a][v] + dist[v][b] - dist[a][b] for a, b in pairs) for v in inner)
    return max(direct + detour, total / 2)


def lower_bound(inst: GetsphInstance) -> float:
    """Cheap lower bound on the optimum.

    Either the direct edges plus the largest unavoidable single-point detour
    (the path through v is at least its pair's edge plus v's detour), or half
    the cheapest incident edges: every inner point has two distinct
    neighbours on its path and every pair endpoint one.
    """
    return _bound(inst.inner, inst.pairs, distance_table(inst.points, inst.used_ids()))


def greedy_solution(inst: GetsphInstance) -> PathSolution:
    """Cheapest insertion followed by single-point relocation until stable."""
    if not inst.inner:
        return direct_solution(inst)
    if not inst.pairs:
        return INFEASIBLE
    pts = inst.points

    def d(a, b):
        return distance(pts[a], pts[b])

    paths = [list(pr) for pr in inst.pairs]

    def best_slot(v):
        best = (math.inf, 0, 0)
        for j, path in enumerate(paths):
            for i in range(len(path) - 1):
                a, b = path[i], path[i + 1]
                delta = d(a, v) + d(v, b) - d(a, b)
                if delta < best[0]:
                    best = (delta, j, i + 1)
        return best

    todo = set(inst.inner)
    while todo:
        (_, j, i), v = min((best_slot(v), v) for v in sorted(todo))
        paths[j].insert(i, v)
        todo.discard(v)
    improved = True
    rounds = 0
    while improved and rounds < 4 * inst.n:
        improved = False
        rounds += 1
        for v in inst.inner:
            j, i = next((j, p.index(v)) for j, p in enumerate(paths) if v in p)
            path = paths[j]
            gain = d(path[i - 1], v) + d(v, path[i + 1]) - d(path[i - 1], path[i + 1])
            del path[i]
            delta, j2, i2 = best_slot(v)
            if delta < gain - 1e-12 * max(1.0, gain):
                improved = True
            else:
                j2, i2 = j, i
            paths[j2].insert(i2, v)
    return solution_from_paths(pts, paths)


class _Search:
    def __init__(self, points, cfg: SolverConfig, stats: SearchStats):
        self.points = points
        self.cfg = cfg
        self.stats = stats
        self.hulls: list[Pair] = []
        self.dist: dict[int, dict[int, float]] = {}

    def solve(self, inner, terminal, lo, hi, cutoff, depth) -> PathSolution | None:
        cfg, stats = self.cfg, self.stats
        stats.calls += 1
        stats.max_depth = max(stats.max_depth, depth)
        frag = self.hulls[lo:hi]
        assert frag == sorted(frag), "hull fragment not sorted on entry"
        inst = GetsphInstance(self.points, tuple(inner), tuple(terminal), tuple(frag))
        if not inst.inner:
            sol = direct_solution(inst)
            return sol if sol.total_length < cutoff else None
        if not inst.pairs:
            return None
        if inst.n <= cfg.dp_threshold or inst.size <= cfg.size_threshold:
            stats.dp_base_cases += 1
            sol = dp_solve(inst, cfg.dp_limit)
            return sol if sol.total_length < cutoff else None
        dist = self.dist
        if _bound(inst.inner, inst.pairs, dist) >= cutoff:
            stats.pruned += 1
            return None
        kernel = None
        work = inst
        n = inst.n
        if inst.m + inst.l > n * n:
            kernel = reduce_instance(inst)
            work = kernel.reduced
            stats.kernel_reductions += 1
            stats.pairs_fixed += len(kernel.fixed_pairs)
            fixed_hull = sorted(f.pair for f in kernel.fixed_pairs if f.kind == "hull")
            self.hulls[lo:hi] = list(work.hull) + fixed_hull
        assert work.m + work.l <= n * n
        fixed_len = kernel.fixed_length if kernel else 0.0
        s_hi = lo + work.l
        # The greedy incumbent only bounds the search: the slack lets an equally
        # long separator combination replace it.
        incumbent = greedy_solution(work)
        best, best_sep = None, 0
        best_len = min(cutoff - fixed_len, incumbent.total_length * (1 + 1e-9))
        if incumbent.total_length < cutoff - fixed_len:
            best = incumbent
        if depth == 0 and cfg.workers > 1:
            found, accepted = self._scan_parallel(work, lo, s_hi, best_len)
        else:
            found, accepted = self._scan(work, lo, s_hi, best_len, depth)
        if found is not None:
            best, best_sep = found
        self.hulls[lo:hi] = sorted(self.hulls[lo:hi])
        if not accepted:
            if not cfg.exhaustive_fallback or work.n > cfg.dp_limit:
                raise SearchExhaustedError(
                    f"no separator decomposes the instance with n={work.n}, m={work.m}, "
                    f"l={work.l}, inner={work.inner}, terminal={work.terminal}, hull={work.hull}")
            stats.fallbacks += 1
            best = dp_solve(work, cfg.dp_limit)
            if best.total_length >= cutoff - fixed_len:
                return None
        elif best_sep:
            stats.winning_separators.append((best_sep, separator_bound(work, 4.0)))
        elif best is not None:
            stats.incumbent_kept += 1
        if best is None:
            return None
        if kernel is not None:
            best = kernel.lift(best, inst)
        return best if best.total_length < cutoff else None

    def _scan(self, work, lo, s_hi, best_len, depth, share=None):
        """Best separator combination shorter than ``best_len`` and whether any was admissible.

        With ``share = (i, count)`` only every count-th distinct point
        classification, starting at the i-th, is expanded.
        """
        cfg, stats, dist = self.cfg, self.stats, self.dist
        accepted = False
        best, best_sep = None, 0
        limit = cfg.balance_rho * (work.n + 2 * work.m)
        used = work.used_ids()
        frame = enclosing_points([self.points[i] for i in used])
        seen = set()
        for sep in enumerate_separators(work, frame, cfg):
            stats.separators_tried += 1
            # patterns and subproblems depend only on how the points are classified
            signature = tuple(sep.side(v) for v in used)
            if signature in seen:
                stats.separators_repeated += 1
                continue
            seen.add(signature)
            if share is not None and (len(seen) - 1) % share[1] != share[0]:
                continue
            inner = _inner_sides(work, sep)
            for pat in enumerate_patterns(work, sep):
                stats.patterns_tried += 1
                terminal, hull, slots = _distribute(work, pat)
                sizes_ok = True
                for k in (0, 1):
                    if inner[k] and (not (terminal[k] or hull[k])
                                     or len(inner[k]) + 2 * len(terminal[k]) > limit):
                        sizes_ok = False
                if not sizes_ok:
                    continue
                accepted = True
                lb_in = _bound(inner[0], terminal[0] + hull[0], dist)
                lb_out = _bound(inner[1], terminal[1] + hull[1], dist)
                if lb_in + lb_out >= best_len:
                    stats.pruned += 1
                    continue
                interior, exterior, plan = _assemble(work, inner, terminal, hull, slots)
                assert all(sub.n == 0 or sub.n + 2 * sub.m < work.n + 2 * work.m
                           for sub in (interior, exterior)), "recursion does not shrink"
                consumed = sorted(set(work.hull) - set(interior.hull) - set(exterior.hull))
                self.hulls[lo:s_hi] = list(interior.hull) + list(exterior.hull) + consumed
                a = lo + interior.l
                b = a + exterior.l
                stats.subproblems_solved += 1
                sol_in = self.solve(interior.inner, interior.terminal, lo, a,
                                    best_len - lb_out, depth + 1)
                sol_out = None
                if sol_in is not None:
                    sol_out = self.solve(exterior.inner, exterior.terminal, a, b,
                                         best_len - sol_in.total_length, depth + 1)
                self.hulls[lo:s_hi] = sorted(self.hulls[lo:s_hi])
                if sol_out is None:
                    continue
                merged = combine(plan, sol_in, sol_out)
                if merged is not None and merged.total_length < best_len:
                    best, best_len, best_sep = merged, merged.total_length, len(sep.cycle)
        return (None if best is None else (best, best_sep)), accepted

    def _scan_parallel(self, work, lo, s_hi, best_len):
        count = self.cfg.workers
        jobs = [(self.points, self.cfg, list(self.hulls), self.dist, work, lo, s_hi, best_len, (i, count))
                for i in range(count)]
        with ProcessPoolExecutor(max_workers=count) as pool:
            results = list(pool.map(_scan_share, jobs))
        found, accepted = None, False
        for share_found, share_accepted, share_stats in results:
            accepted |= share_accepted
            self.stats.merge(share_stats)
            if share_found is not None and (found is None
                                            or share_found[0].total_length < found[0].total_length):
                found = share_found
        return found, accepted


def _scan_share(job):
    points, cfg, hulls, dist, work, lo, s_hi, best_len, share = job
    search = _Search(points, cfg, SearchStats())
    search.hulls, search.dist = hulls, dist
    found, accepted = search._scan(work, lo, s_hi, best_len, 0, share)
    return found, accepted, search.stats


def solve_getsph(inst: GetsphInstance, cfg: SolverConfig | None = None,
                 stats: SearchStats | None = None) -> PathSolution:
    """Optimal paths for ``inst`` (or the infeasible sentinel)."""
    cfg = cfg or SolverConfig()
    stats = stats if stats is not None else SearchStats()
    if not inst.inner:
        return direct_solution(inst)
    if not inst.pairs:
        return INFEASIBLE
    order = sorted(range(inst.l), key=lambda i: inst.hull[i])
    search = _Search(inst.points, cfg, stats)
    search.hulls = [inst.hull[i] for i in order]
    search.dist = distance_table(inst.points, inst.used_ids())
    sol = search.solve(inst.inner, inst.terminal, 0, inst.l, math.inf, 0)
    if sol is None:
        return INFEASIBLE
    hull_paths = [None] * inst.l
    for pos, i in enumerate(order):
        hull_paths[i] = sol.paths[inst.m + pos]
    return PathSolution(sol.paths[:inst.m] + tuple(hull_paths), sol.total_length)
