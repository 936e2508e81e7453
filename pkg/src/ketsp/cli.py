"""``ketsp`` command line: solve, kernel, gen, bench."""

from __future__ import annotations

import argparse
import json
import statistics
import sys
import time
import tracemalloc
from pathlib import Path
from typing import Sequence

from . import __version__
from .errors import CapacityError, KetspError, ParseError, SearchExhaustedError
from .generate import kernel_instance, ketsp_points
from .geometry import DEFAULT_SCALE, Point, convex_hull, perturb_duplicates
from .instance import brute_force_tsp, dp_solve, held_karp_tsp, tour_length
from .kernel import reduce_instance
from .pointfile import read_points, render_points
from .separator import SearchStats, SolverConfig
from .solver import hull_instance, lower_bound_hull, solve_ketsp, stitch_tour

EXIT_OK, EXIT_FAILURE, EXIT_PARSE, EXIT_CAPACITY, EXIT_EXHAUSTED, EXIT_USAGE = 0, 1, 2, 3, 4, 5
SCHEMA = "ketsp-run-report/1"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def sig15(x: float) -> float:
    """Round to 15 significant digits for reports."""
    return float(f"{x:.15g}")


def _config(args) -> SolverConfig:
    return SolverConfig(c=args.c, dp_threshold=args.dp_threshold, size_threshold=args.size_threshold,
                        exhaustive_fallback=not args.no_fallback, workers=args.workers)


def _write_json(path: str | None, report: dict) -> None:
    if path:
        Path(path).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")


def render_svg(points: Sequence[Point], order: Sequence[int], size: int = 480) -> str:
    """Static picture: hull outline, tour polyline, interior points highlighted."""
    by_id = {p.id: p for p in points}
    xs = [p.fx for p in points]
    ys = [p.fy for p in points]
    span = max(max(xs) - min(xs), max(ys) - min(ys)) or 1.0
    pad = 20
    k = (size - 2 * pad) / span

    def at(p: Point) -> str:
        return f"{pad + (p.fx - min(xs)) * k:.2f},{size - pad - (p.fy - min(ys)) * k:.2f}"

    dec = convex_hull(points)
    hull = " ".join(at(by_id[h]) for h in dec.hull)
    tour = " ".join(at(by_id[i]) for i in list(order) + list(order[:1]))
    dots = []
    for p in points:
        inner = p.id in dec.inner
        dots.append(f'<circle cx="{at(p).split(",")[0]}" cy="{at(p).split(",")[1]}" r="{4 if inner else 3}" '
                    f'fill="{"#d62728" if inner else "#1f77b4"}"/>')
    return "\n".join([
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<polygon points="{hull}" fill="none" stroke="#bbbbbb" stroke-dasharray="4 3"/>',
        f'<polyline points="{tour}" fill="none" stroke="#333333" stroke-width="1.5"/>',
        *dots,
        "</svg>",
    ]) + "\n"


def _solve_tour(points, args):
    """(order, length, k, kernel_stats, search_stats) for the chosen algorithm."""
    algorithm = args.algorithm
    if algorithm == "separator":
        res = solve_ketsp(points, _config(args), perturb=args.perturb)
        return list(res.tour.order), res.tour.length, res.k, res.kernel_stats, res.search_stats
    pts = perturb_duplicates(points) if args.perturb else list(points)
    inst = hull_instance(pts)
    if algorithm == "dp":
        order = stitch_tour(dp_solve(inst).paths)
    elif algorithm == "held-karp":
        order = list(held_karp_tsp(pts).order)
    else:
        order = list(brute_force_tsp(pts).order)
    return order, tour_length(pts, order), inst.n, {}, SearchStats()


def cmd_solve(args) -> int:
    points = read_points(args.file, args.scale)
    start = time.perf_counter()
    order, length, k, kernel_stats, search_stats = _solve_tour(points, args)
    elapsed = time.perf_counter() - start
    report = {
        "schema": SCHEMA,
        "command": "solve",
        "instance": {"file": str(args.file), "n": len(points), "k": k},
        "algorithm": args.algorithm,
        "tour": {"order": order, "length": sig15(length)},
        "hull_perimeter": sig15(lower_bound_hull(points)),
        "kernel_stats": {key: sig15(v) if isinstance(v, float) else v for key, v in kernel_stats.items()},
        "search_stats": search_stats.as_dict(),
        "k0_shortcut": args.algorithm == "separator" and k == 0,
        "timing": {"wall_time_s": elapsed},
        "config": {"c": args.c, "dp_threshold": args.dp_threshold, "size_threshold": args.size_threshold,
                   "scale": args.scale, "perturb": args.perturb, "workers": args.workers,
                   "exhaustive_fallback": not args.no_fallback},
    }
    print(f"algorithm  {args.algorithm}")
    print(f"points     {len(points)} (k={k} inside the hull)")
    print(f"length     {length:.15g}")
    print(f"tour       {' '.join(map(str, order))}")
    if report["k0_shortcut"]:
        print("search     skipped: every point lies on the hull")
    elif args.algorithm == "separator":
        st = search_stats
        print(f"search     {st.separators_tried} separators, {st.patterns_tried} patterns, "
              f"depth {st.max_depth}, {st.fallbacks} fallbacks")
    print(f"time       {elapsed:.3f}s")
    _write_json(args.json_out, report)
    if args.svg_out:
        Path(args.svg_out).write_text(render_svg(points, order))
    return EXIT_OK


def cmd_kernel(args) -> int:
    points = read_points(args.file, args.scale)
    inst = hull_instance(points)
    start = time.perf_counter()
    kr = reduce_instance(inst)
    elapsed = time.perf_counter() - start
    kept_ids = kr.reduced.used_ids()
    renumber = {old: new for new, old in enumerate(kept_ids)}
    reduced_points = [points[i] for i in kept_ids]
    report = {
        "schema": SCHEMA,
        "command": "kernel",
        "instance": {"file": str(args.file), "n": len(points), "k": inst.n, "pairs": inst.l},
        "surviving_pairs": [list(p) for p in kr.reduced.hull],
        "fixed_pairs": [list(f.pair) for f in kr.fixed_pairs],
        "fixed_length": sig15(kr.fixed_length),
        "reduced": {
            "inner": [renumber[v] for v in kr.reduced.inner],
            "hull_pairs": [[renumber[a], renumber[b]] for a, b in kr.reduced.hull],
            "points": render_points(reduced_points),
        },
        "timing": {"wall_time_s": elapsed},
    }
    print(f"pairs      {inst.l} ({inst.n} inner points)")
    print(f"surviving  {' '.join(f'{a}-{b}' for a, b in kr.reduced.hull) or '-'}")
    print(f"fixed      {len(kr.fixed_pairs)} pairs, length {kr.fixed_length:.15g}")
    print("reduced instance (pairs index the points below):")
    print(f"# inner {' '.join(str(renumber[v]) for v in kr.reduced.inner) or '-'}")
    print(f"# pairs {' '.join(f'{renumber[a]}-{renumber[b]}' for a, b in kr.reduced.hull) or '-'}")
    sys.stdout.write(render_points(reduced_points))
    if args.points_out:
        Path(args.points_out).write_text(render_points(
            reduced_points,
            [f"inner {' '.join(str(renumber[v]) for v in kr.reduced.inner)}",
             f"pairs {' '.join(f'{renumber[a]}-{renumber[b]}' for a, b in kr.reduced.hull)}"]))
    _write_json(args.json_out, report)
    return EXIT_OK


def cmd_gen(args) -> int:
    points = ketsp_points(args.n, args.k, args.seed, args.radius, args.scale)
    text = render_points(points, [f"n={args.n} k={args.k} seed={args.seed} radius={args.radius}"])
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _measure(fn, repetitions: int):
    times, peaks, value = [], [], None
    for _ in range(repetitions):
        tracemalloc.start()
        start = time.perf_counter()
        value = fn()
        times.append(time.perf_counter() - start)
        peaks.append(tracemalloc.get_traced_memory()[1])
        tracemalloc.stop()
    return value, statistics.median(times), max(peaks)


def _kernel_suite(sizes=(2500, 5000, 10000, 20000, 40000)):
    for q in sizes:
        inst = kernel_instance(4, q, seed=q)
        yield f"n=4 pairs={q}", "kernel", (lambda inst=inst: reduce_instance(inst).fixed_length)


def _oracle_suite():
    for n, k in ((8, 2), (10, 3), (12, 4), (14, 5)):
        pts = ketsp_points(n, k, seed=n * 10 + k)
        yield f"n={n} k={k}", "separator", (lambda pts=pts: solve_ketsp(pts).tour.length)
        yield f"n={n} k={k}", "held-karp", (lambda pts=pts: held_karp_tsp(pts).length)


SUITES = {"kernel": _kernel_suite, "oracle": _oracle_suite}


def cmd_bench(args) -> int:
    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    rows = []
    for name, algorithm, fn in SUITES[args.suite]():
        value, median, peak = _measure(fn, args.repetitions)
        rows.append({"instance": name, "algorithm": algorithm, "length": sig15(value),
                     "time_s": median, "memory_peak_bytes": peak})
    width = max(len(r["instance"]) for r in rows)
    print(f"{'instance':<{width}}  {'algorithm':<10} {'length':>18} {'time_s':>10} {'peak_kib':>10}")
    for r in rows:
        print(f"{r['instance']:<{width}}  {r['algorithm']:<10} {r['length']:>18.15g} "
              f"{r['time_s']:>10.4f} {r['memory_peak_bytes'] / 1024:>10.1f}")
    _write_json(args.json_out, {"schema": "ketsp-bench/1", "suite": args.suite,
                                "repetitions": args.repetitions, "rows": rows})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ketsp", description="Exact Euclidean TSP with few interior points.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def scaled(p):
        p.add_argument("--scale", type=int, default=DEFAULT_SCALE,
                       help="grid units per coordinate unit (default from KETSP_SCALE)")

    p = sub.add_parser("solve", help="optimal tour of a point file")
    p.add_argument("file")
    p.add_argument("--algorithm", choices=["separator", "dp", "held-karp", "brute"], default="separator")
    p.add_argument("--c", type=float, default=4.0, help="separator length constant")
    p.add_argument("--dp-threshold", type=int, default=12)
    p.add_argument("--size-threshold", type=int, default=40,
                   help="subproblems at most this size go to the dp")
    p.add_argument("--workers", type=int, default=1, help="processes for the top-level search")
    p.add_argument("--perturb", action="store_true", help="nudge duplicate points apart")
    p.add_argument("--no-fallback", action="store_true",
                   help="fail instead of solving by dp when no separator decomposes a subproblem")
    p.add_argument("--json-out")
    p.add_argument("--svg-out")
    scaled(p)
    p.set_defaults(run=cmd_solve)

    p = sub.add_parser("kernel", help="reduce the hull pairs of a point file")
    p.add_argument("file")
    p.add_argument("--json-out")
    p.add_argument("--points-out", help="write the reduced point file here")
    scaled(p)
    p.set_defaults(run=cmd_kernel)

    p = sub.add_parser("gen", help="random points, n - k of them in convex position")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--radius", type=int, default=100)
    p.add_argument("-o", "--output")
    scaled(p)
    p.set_defaults(run=cmd_gen)

    p = sub.add_parser("bench", help="timing tables")
    p.add_argument("--suite", required=True)
    p.add_argument("--repetitions", type=int, default=3)
    p.add_argument("--json-out")
    p.set_defaults(run=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except ParseError as exc:
        print(f"ketsp: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapacityError as exc:
        print(f"ketsp: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except SearchExhaustedError as exc:
        print(f"ketsp: separator search exhausted: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    except UsageError as exc:
        print(f"ketsp: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (KetspError, ValueError, OSError) as exc:
        print(f"ketsp: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
