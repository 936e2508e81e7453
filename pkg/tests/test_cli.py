import json
import math

import pytest

from ketsp.cli import (EXIT_CAPACITY, EXIT_EXHAUSTED, EXIT_PARSE, EXIT_USAGE, main, render_svg)
from ketsp.geometry import convex_hull
from ketsp.instance import tour_length
from ketsp.pointfile import parse_points, read_points

SQUARE = "ketsp 1\n0 0\n2 0\n2 2\n0 2\n"
SQUARE_WITH_POINT = "ketsp 1\n0 0\n2 0\n2 2\n0 2\n1 0.1\n"


@pytest.fixture
def square(tmp_path):
    path = tmp_path / "square.txt"
    path.write_text(SQUARE)
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr()


def test_solve_held_karp_and_separator_agree(square, tmp_path, capsys):
    code, out = run(capsys, "solve", square, "--algorithm", "held-karp")
    assert code == 0 and "length     8" in out.out
    report_path = tmp_path / "r.json"
    code, out = run(capsys, "solve", square, "--json-out", report_path)
    assert code == 0 and "length     8" in out.out and "skipped" in out.out
    report = json.loads(report_path.read_text())
    assert report["k0_shortcut"] is True
    assert report["tour"]["length"] == 8
    assert report["instance"] == {"file": str(square), "n": 4, "k": 0}
    assert report["search_stats"]["separators_tried"] == 0


@pytest.mark.parametrize("algorithm", ["separator", "dp", "held-karp", "brute"])
def test_report_length_matches_tour(tmp_path, capsys, algorithm):
    path = tmp_path / "p.txt"
    assert main(["gen", "--n", "9", "--k", "3", "--seed", "2", "-o", str(path)]) == 0
    report_path = tmp_path / "r.json"
    code, _ = run(capsys, "solve", path, "--algorithm", algorithm, "--json-out", report_path,
                  "--dp-threshold", "0", "--size-threshold", "0", "--c", "1")
    assert code == 0
    report = json.loads(report_path.read_text())
    points = read_points(path)
    recomputed = tour_length(points, report["tour"]["order"])
    assert math.isclose(report["tour"]["length"], recomputed, rel_tol=1e-12)
    assert set(report) >= {"schema", "instance", "tour", "kernel_stats", "search_stats", "timing", "config"}


def test_lengths_use_fifteen_significant_digits(tmp_path, capsys):
    path = tmp_path / "p.txt"
    path.write_text(SQUARE_WITH_POINT)
    report_path = tmp_path / "r.json"
    run(capsys, "solve", path, "--json-out", report_path)
    length = json.loads(report_path.read_text())["tour"]["length"]
    assert length == float(f"{length:.15g}")


def test_svg_output(tmp_path, capsys):
    path = tmp_path / "p.txt"
    path.write_text(SQUARE_WITH_POINT)
    svg = tmp_path / "t.svg"
    assert run(capsys, "solve", path, "--svg-out", svg)[0] == 0
    text = svg.read_text()
    assert text.startswith("<svg") and "<polyline" in text and "<polygon" in text
    assert text.count("<circle") == 5
    assert render_svg(parse_points(SQUARE_WITH_POINT), [0, 4, 1, 2, 3]) .count('fill="#d62728"') == 1


def test_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("points 1\n0 0\n")
    assert run(capsys, "solve", bad)[0] == EXIT_PARSE
    many = tmp_path / "many.txt"
    many.write_text("ketsp 1\n" + "".join(f"{i} {i * i}\n" for i in range(20)))
    assert run(capsys, "solve", many, "--algorithm", "held-karp")[0] == EXIT_CAPACITY
    tri = tmp_path / "tri.txt"
    tri.write_text("ketsp 1\n0 0\n2 0\n1 1\n1 0.5\n")
    code, out = run(capsys, "solve", tri, "--c", "1", "--dp-threshold", "0", "--size-threshold", "0",
                    "--no-fallback")
    assert code == EXIT_EXHAUSTED and "exhausted" in out.err
    with pytest.raises(SystemExit) as exc:
        main(["solve"])
    assert exc.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["bench"])
    assert exc.value.code == EXIT_USAGE
    assert run(capsys, "bench", "--suite", "")[0] == EXIT_USAGE
    assert run(capsys, "bench", "--suite", "nope")[0] == EXIT_USAGE


def test_kernel_command(tmp_path, capsys):
    path = tmp_path / "p.txt"
    path.write_text(SQUARE_WITH_POINT)
    report_path = tmp_path / "k.json"
    reduced_path = tmp_path / "reduced.txt"
    code, out = run(capsys, "kernel", path, "--json-out", report_path, "--points-out", reduced_path)
    assert code == 0
    report = json.loads(report_path.read_text())
    assert report["surviving_pairs"] == [[0, 1]]
    assert len(report["fixed_pairs"]) == 3 and report["fixed_length"] == 6
    reduced = read_points(reduced_path)
    assert [(p.fx, p.fy) for p in reduced] == [(0, 0), (2, 0), (1, 0.1)]
    assert report["reduced"]["hull_pairs"] == [[0, 1]] and report["reduced"]["inner"] == [2]


def test_kernel_command_edge_cases(square, tmp_path, capsys):
    report_path = tmp_path / "k.json"
    assert run(capsys, "kernel", square, "--json-out", report_path)[0] == 0
    report = json.loads(report_path.read_text())
    assert report["surviving_pairs"] == [] and len(report["fixed_pairs"]) == 4
    assert report["reduced"]["points"] == "ketsp 1\n"
    small = tmp_path / "s.txt"
    small.write_text("ketsp 1\n0 0\n4 0\n4 4\n0 4\n1 1\n3 2\n")
    run(capsys, "kernel", small, "--json-out", report_path)
    report = json.loads(report_path.read_text())
    assert len(report["surviving_pairs"]) == 4 and report["fixed_pairs"] == []


def test_gen_is_deterministic_and_valid(tmp_path, capsys):
    code, first = run(capsys, "gen", "--n", "10", "--k", "3", "--seed", "7")
    _, second = run(capsys, "gen", "--n", "10", "--k", "3", "--seed", "7")
    assert code == 0 and first.out == second.out
    assert len(convex_hull(parse_points(first.out)).inner) == 3
    _, convex = run(capsys, "gen", "--n", "10", "--k", "0", "--seed", "1")
    dec = convex_hull(parse_points(convex.out))
    assert len(dec.hull) == 10 and not dec.inner
    assert run(capsys, "gen", "--n", "4", "--k", "3")[0] != 0


def test_bench_oracle_suite(tmp_path, capsys):
    report_path = tmp_path / "b.json"
    code, out = run(capsys, "bench", "--suite", "oracle", "--repetitions", "1", "--json-out", report_path)
    assert code == 0 and "held-karp" in out.out
    rows = json.loads(report_path.read_text())["rows"]
    by_instance = {}
    for row in rows:
        by_instance.setdefault(row["instance"], set()).add(row["length"])
        assert row["memory_peak_bytes"] > 0 and row["time_s"] >= 0
    assert all(len(lengths) == 1 for lengths in by_instance.values())
