"""Exact planar predicates on integer-scaled points.

Every point carries integer coordinates on a uniform grid (input decimals
multiplied by ``scale``).  Orientation, crossing and containment decisions
are made with exact integer arithmetic; only lengths are computed in binary64
on the unscaled coordinates.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from enum import Enum, IntEnum
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DistinctnessError, EmptyInstanceError

DEFAULT_SCALE = int(os.environ.get("KETSP_SCALE", 10**6))


@dataclass(frozen=True, slots=True)
class Point:
    x: int
    y: int
    id: int = -1
    scale: int = 1

    @property
    def fx(self) -> float:
        return self.x / self.scale

    @property
    def fy(self) -> float:
        return self.y / self.scale

    @property
    def xy(self) -> tuple[int, int]:
        return (self.x, self.y)


class Orientation(IntEnum):
    RIGHT = -1
    COLLINEAR = 0
    LEFT = 1


class Side(Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EXTERIOR = "exterior"

    __hash__ = object.__hash__  # members are singletons; skips Enum's name hashing


def to_grid(value, scale: int) -> int:
    """Scale a decimal (str, int, float or Fraction) onto the integer grid.

    Values that do not land exactly on the grid are rounded to the nearest
    grid line.
    """
    if isinstance(value, float):
        value = repr(value)
    return round(Fraction(value) * scale)


def make_points(coords: Iterable[Sequence], scale: int = DEFAULT_SCALE) -> list[Point]:
    """Build points with ids 0..n-1 from decimal coordinate pairs."""
    return [Point(to_grid(x, scale), to_grid(y, scale), i, scale)
            for i, (x, y) in enumerate(coords)]


def check_distinct(points: Sequence[Point]) -> None:
    seen = {}
    for p in points:
        if p.xy in seen:
            raise DistinctnessError(
                f"points {seen[p.xy]} and {p.id} coincide at ({p.fx}, {p.fy})")
        seen[p.xy] = p.id


def perturb_duplicates(points: Sequence[Point]) -> list[Point]:
    """Move repeated locations off each other by a few grid units.

    The j-th repeat of a location (in id order) is shifted by (j, j*j) grid
    units, which is deterministic and keeps all coordinates exact.
    """
    out = []
    taken = set()
    for p in sorted(points, key=lambda q: q.id):
        x, y, j = p.x, p.y, 0
        while (x, y) in taken:
            j += 1
            x, y = p.x + j, p.y + j * j
        taken.add((x, y))
        out.append(Point(x, y, p.id, p.scale))
    out.sort(key=lambda q: q.id)
    return out


# -- raw integer kernels (hot paths use these directly) ----------------------

def cross(ax: int, ay: int, bx: int, by: int, cx: int, cy: int) -> int:
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


def _within(ax, ay, bx, by, px, py) -> bool:
    return min(ax, bx) <= px <= max(ax, bx) and min(ay, by) <= py <= max(ay, by)


def on_segment_xy(a, b, p) -> bool:
    return (cross(a[0], a[1], b[0], b[1], p[0], p[1]) == 0
            and _within(a[0], a[1], b[0], b[1], p[0], p[1]))


def seg_cross_xy(a, b, c, d) -> bool:
    """Closed segments ab and cd meet somewhere other than a common endpoint."""
    o1 = _sign(cross(a[0], a[1], b[0], b[1], c[0], c[1]))
    o2 = _sign(cross(a[0], a[1], b[0], b[1], d[0], d[1]))
    o3 = _sign(cross(c[0], c[1], d[0], d[1], a[0], a[1]))
    o4 = _sign(cross(c[0], c[1], d[0], d[1], b[0], b[1]))
    if o1 == 0 and o2 == 0:
        # collinear: compare the overlap of the projections
        k = 0 if a[0] != b[0] or c[0] != d[0] else 1
        lo = max(min(a[k], b[k]), min(c[k], d[k]))
        hi = min(max(a[k], b[k]), max(c[k], d[k]))
        if lo > hi:
            return False
        if lo < hi:
            return True
        x = next(p for p in (a, b, c, d) if p[k] == lo)
        return not ((x == a or x == b) and (x == c or x == d))
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    for p, q0, q1, o in ((c, a, b, o1), (d, a, b, o2), (a, c, d, o3), (b, c, d, o4)):
        if o == 0 and _within(q0[0], q0[1], q1[0], q1[1], p[0], p[1]):
            shared = (p == a or p == b) and (p == c or p == d)
            if not shared:
                return True
    return False


def seg_touch_xy(a, b, c, d) -> bool:
    """Closed segments ab and cd have at least one common point."""
    o1 = _sign(cross(a[0], a[1], b[0], b[1], c[0], c[1]))
    o2 = _sign(cross(a[0], a[1], b[0], b[1], d[0], d[1]))
    o3 = _sign(cross(c[0], c[1], d[0], d[1], a[0], a[1]))
    o4 = _sign(cross(c[0], c[1], d[0], d[1], b[0], b[1]))
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    return ((o1 == 0 and on_segment_xy(a, b, c)) or (o2 == 0 and on_segment_xy(a, b, d))
            or (o3 == 0 and on_segment_xy(c, d, a)) or (o4 == 0 and on_segment_xy(c, d, b)))


def orientation_table(coords: Sequence[tuple[int, int]],
                      segments: Sequence[tuple[int, int]]) -> np.ndarray:
    """Sign of cross(a, b, p) for every segment (a, b) (row) and point p (column).

    Falls back to Python integers when coordinates are too large for the
    products to fit in int64, so the table stays exact.
    """
    wide = max((abs(v) for xy in coords for v in xy), default=0) >= 1 << 30
    pts = np.array(coords, dtype=object if wide else np.int64).reshape(-1, 2)
    seg = np.array(segments, dtype=np.intp).reshape(-1, 2)
    a, b = pts[seg[:, 0]], pts[seg[:, 1]]
    cr = ((b[:, 0] - a[:, 0])[:, None] * (pts[None, :, 1] - a[:, 1][:, None])
          - (b[:, 1] - a[:, 1])[:, None] * (pts[None, :, 0] - a[:, 0][:, None]))
    return (cr > 0).astype(np.int8) - (cr < 0).astype(np.int8)


def side_xy(p, cycle: Sequence) -> Side:
    px, py = p
    k = len(cycle)
    inside = False
    for i in range(k):
        a = cycle[i]
        b = cycle[i + 1 - k]
        c = cross(a[0], a[1], b[0], b[1], px, py)
        if c == 0 and _within(a[0], a[1], b[0], b[1], px, py):
            return Side.BOUNDARY
        if (a[1] > py) != (b[1] > py):
            if (b[1] > a[1]) == (c > 0):
                inside = not inside
    return Side.INTERIOR if inside else Side.EXTERIOR


def simple_polygon_xy(cycle: Sequence) -> bool:
    k = len(cycle)
    if k < 3 or len(set(cycle)) != k:
        return False
    area2 = 0
    for i in range(k):
        a, b = cycle[i], cycle[i + 1 - k]
        area2 += a[0] * b[1] - a[1] * b[0]
    if area2 == 0:
        return False
    edges = [(cycle[i], cycle[i + 1 - k]) for i in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            if seg_cross_xy(edges[i][0], edges[i][1], edges[j][0], edges[j][1]):
                return False
    return True


# -- public point-level operations -------------------------------------------

def orient(p: Point, q: Point, r: Point) -> Orientation:
    return Orientation(_sign(cross(p.x, p.y, q.x, q.y, r.x, r.y)))


def distance(p: Point, q: Point) -> float:
    return math.hypot(p.fx - q.fx, p.fy - q.fy)


def segments_properly_cross(a: tuple[Point, Point], b: tuple[Point, Point]) -> bool:
    """True iff the two segments share a point other than a common endpoint.

    Touching (an endpoint of one resting on the other) and collinear overlap
    both count.
    """
    return seg_cross_xy(a[0].xy, a[1].xy, b[0].xy, b[1].xy)


def is_simple_polygon(cycle: Sequence[Point]) -> bool:
    return simple_polygon_xy([p.xy for p in cycle])


def point_side(p: Point, cycle: Sequence[Point]) -> Side:
    return side_xy(p.xy, [q.xy for q in cycle])


@dataclass(frozen=True)
class HullDecomposition:
    hull: tuple[int, ...]
    inner: frozenset[int]


def hull_order_xy(coords: Sequence[tuple[int, int]]) -> tuple[list[int], list[int]]:
    """Indices of the boundary (ccw, collinear points included) and of the
    strict vertices, both starting at the lexicographically smallest point.

    For collinear input the boundary is the points sorted along the line.
    """
    order = sorted(range(len(coords)), key=lambda i: coords[i])
    if len(order) <= 2:
        return list(order), list(order)

    def chain(seq):
        out = []
        for i in seq:
            while len(out) >= 2 and cross(*coords[out[-2]], *coords[out[-1]], *coords[i]) <= 0:
                out.pop()
            out.append(i)
        return out

    lower = chain(order)
    upper = chain(reversed(order))
    strict = lower[:-1] + upper[:-1]
    if len(strict) < 3:
        return order, [order[0], order[-1]]
    vertex_set = set(strict)
    rest = [i for i in range(len(coords)) if i not in vertex_set]
    boundary = []
    h = len(strict)
    for e in range(h):
        a, b = coords[strict[e]], coords[strict[(e + 1) % h]]
        boundary.append(strict[e])
        on_edge = [i for i in rest if on_segment_xy(a, b, coords[i])]
        on_edge.sort(key=lambda i: abs(coords[i][0] - a[0]) + abs(coords[i][1] - a[1]))
        boundary.extend(on_edge)
    return boundary, strict


def convex_hull(points: Sequence[Point]) -> HullDecomposition:
    """Split points into the ccw hull boundary sequence and the strict interior."""
    if not points:
        raise EmptyInstanceError("convex hull of an empty point set")
    check_distinct(points)
    boundary, _ = hull_order_xy([p.xy for p in points])
    on = set(boundary)
    return HullDecomposition(
        hull=tuple(points[i].id for i in boundary),
        inner=frozenset(points[i].id for i in range(len(points)) if i not in on))


# -- enclosing points ----------------------------------------------------------

@dataclass(frozen=True)
class EnclosingFrame:
    """Two artificial points outside the hull plus the two hull vertices they
    are anchored to.  ``i1`` serves the boundary arc running ccw from
    ``v_up`` to ``v_down``; ``i2`` serves the opposite arc."""
    i1: Point
    i2: Point
    v_up: int
    v_down: int


def _unique(points: Sequence[Point]) -> list[Point]:
    seen = {}
    for p in points:
        seen.setdefault(p.xy, p)
    return list(seen.values())


def enclosing_points(points: Sequence[Point], max_retries: int = 64) -> EnclosingFrame:
    if not points:
        raise EmptyInstanceError("enclosing points of an empty set")
    scale = points[0].scale
    pts = _unique(points)
    if len(pts) < 2:
        p = pts[0]
        return EnclosingFrame(Point(p.x - scale, p.y - scale, -1, scale),
                              Point(p.x + scale, p.y + scale, -2, scale), p.id, p.id)
    coords = [p.xy for p in pts]
    boundary, strict = hull_order_xy(coords)
    vu, vd = strict[0], max(strict, key=lambda i: coords[i])
    a, b = coords[vu], coords[vd]
    if len(strict) == 2:
        nx, ny = (b[1] - a[1]), -(b[0] - a[0])
        n_len = math.hypot(nx, ny)
        d1 = (nx / n_len, ny / n_len)
        d2 = (-d1[0], -d1[1])
    else:
        h = len(strict)
        k = strict.index(vd)

        def normal(i, j):
            p, q = coords[strict[i % h]], coords[strict[j % h]]
            nx, ny = q[1] - p[1], -(q[0] - p[0])
            ln = math.hypot(nx, ny)
            return nx / ln, ny / ln

        def bisect(u, v):
            x, y = u[0] + v[0], u[1] + v[1]
            ln = math.hypot(x, y)
            return x / ln, y / ln

        d1 = bisect(normal(0, 1), normal(k - 1, k))
        d2 = bisect(normal(k, k + 1), normal(h - 1, h))
    xs = [c[0] for c in coords]
    ys = [c[1] for c in coords]
    dist = 4.0 * max(1.0, math.hypot(max(xs) - min(xs), max(ys) - min(ys)))
    mx, my = (a[0] + b[0]) / 2, (a[1] + b[1]) / 2
    for _ in range(max_retries):
        i1 = Point(round(mx + dist * d1[0]), round(my + dist * d1[1]), -1, scale)
        i2 = Point(round(mx + dist * d2[0]), round(my + dist * d2[1]), -2, scale)
        frame = EnclosingFrame(i1, i2, pts[vu].id, pts[vd].id)
        if verify_enclosing(frame, points):
            return frame
        dist *= 2
    raise RuntimeError("could not place enclosing points")  # pragma: no cover


def _in_closed_triangle(p, a, b, c) -> bool:
    s1 = _sign(cross(*a, *b, *p))
    s2 = _sign(cross(*b, *c, *p))
    s3 = _sign(cross(*c, *a, *p))
    return not ((s1 < 0 or s2 < 0 or s3 < 0) and (s1 > 0 or s2 > 0 or s3 > 0))


def _meets_only_at(p0, w, a, b) -> bool:
    """The closed segments p0-w and a-b share no point other than w."""
    if not seg_touch_xy(p0, w, a, b):
        return True
    if cross(*p0, *w, *a) != 0 or cross(*p0, *w, *b) != 0:
        return on_segment_xy(a, b, w)
    k = 0 if p0[0] != w[0] else 1
    lo = max(min(p0[k], w[k]), min(a[k], b[k]))
    hi = min(max(p0[k], w[k]), max(a[k], b[k]))
    return lo == hi == w[k]


def verify_enclosing(frame: EnclosingFrame, points: Sequence[Point]) -> bool:
    """Check both enclosing-point properties exhaustively."""
    pts = _unique(points)
    i1, i2 = frame.i1.xy, frame.i2.xy
    if len(pts) < 2:
        return i1 != i2 and all(p.xy not in (i1, i2) for p in pts)
    coords = [p.xy for p in pts]
    by_id = {p.id: k for k, p in enumerate(pts)}
    if frame.v_up not in by_id or frame.v_down not in by_id or frame.v_up == frame.v_down:
        return False
    boundary, strict = hull_order_xy(coords)
    vu, vd = by_id[frame.v_up], by_id[frame.v_down]
    if vu not in strict or vd not in strict:
        return False
    a, b = coords[vu], coords[vd]
    h = len(boundary)
    edges = [(coords[boundary[e]], coords[boundary[(e + 1) % h]]) for e in range(h)]
    flat = len(strict) == 2
    for ix in (i1, i2):
        if flat:
            if cross(*a, *b, *ix) == 0:
                return False
        elif all(cross(*coords[strict[e]], *coords[strict[(e + 1) % len(strict)]], *ix) >= 0
                 for e in range(len(strict))):
            return False
    s1 = _sign(cross(*a, *b, *i1))
    s2 = _sign(cross(*a, *b, *i2))
    if s1 == 0 or s2 == 0 or s1 == s2:
        return False
    pu, pd = boundary.index(vu), boundary.index(vd)
    arc1 = [boundary[(pu + t) % h] for t in range((pd - pu) % h + 1)]
    arc2 = [boundary[(pd + t) % h] for t in range((pu - pd) % h + 1)]
    for arc, s in ((arc1, s1), (arc2, s2)):
        for i in arc:
            si = _sign(cross(*a, *b, *coords[i]))
            if si != 0 and si != s:
                return False
    for p in coords:
        s = _sign(cross(*a, *b, *p))
        if s == 0:
            if not on_segment_xy(a, b, p):
                return False
        elif not _in_closed_triangle(p, i1 if s == s1 else i2, a, b):
            return False
    for arc, ix in ((arc1, i1), (arc2, i2)):
        for i in arc:
            w = coords[i]
            if not all(_meets_only_at(ix, w, e0, e1) for e0, e1 in edges):
                return False
    return True
