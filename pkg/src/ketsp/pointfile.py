"""Plain-text point files.

::

    ketsp 1
    # optional comments
    0 0
    2.5 -1

Coordinates are decimals snapped to the grid of the chosen scale; rendering
writes enough digits that parsing at the same scale restores every point.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ParseError
from .geometry import DEFAULT_SCALE, Point, to_grid

HEADER = "ketsp 1"


def parse_points(text: str, scale: int = DEFAULT_SCALE) -> list[Point]:
    lines = text.splitlines()
    body = [(i, ln.strip()) for i, ln in enumerate(lines, 1)]
    body = [(i, ln) for i, ln in body if ln and not ln.startswith("#")]
    if not body or body[0][1] != HEADER:
        found = body[0][1] if body else "nothing"
        raise ParseError(f"expected header {HEADER!r}, found {found!r}")
    points = []
    for lineno, line in body[1:]:
        fields = line.split()
        if len(fields) != 2:
            raise ParseError(f"line {lineno}: expected 'x y', got {line!r}")
        try:
            x, y = (to_grid(Fraction(f), scale) for f in fields)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"line {lineno}: bad number in {line!r}") from exc
        points.append(Point(x, y, len(points), scale))
    return points


def read_points(path: str | Path, scale: int = DEFAULT_SCALE) -> list[Point]:
    return parse_points(Path(path).read_text(), scale)


def format_coordinate(value: int, scale: int) -> str:
    """Shortest exact decimal for value/scale, or one fine enough to round back."""
    q = Fraction(value, scale)
    den = q.denominator
    digits = 0
    while den % 10 == 0:
        den //= 10
        digits += 1
    while den % 2 == 0 or den % 5 == 0:
        den //= 2 if den % 2 == 0 else 5
        digits += 1
    if den != 1:
        digits = len(str(scale)) + 1
    scaled = round(q * 10**digits)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10**digits)
    if not digits:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{digits}d}".rstrip("0").rstrip(".")


def render_points(points: Sequence[Point], comments: Iterable[str] = ()) -> str:
    out = [HEADER]
    out += [f"# {c}" for c in comments]
    out += [f"{format_coordinate(p.x, p.scale)} {format_coordinate(p.y, p.scale)}" for p in points]
    return "\n".join(out) + "\n"


def write_points(path: str | Path, points: Sequence[Point], comments: Iterable[str] = ()) -> None:
    Path(path).write_text(render_points(points, comments))
