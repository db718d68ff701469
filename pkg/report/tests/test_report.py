"""Report package: CSV schema handling, profile/scatter semantics, golden
SVG comparison."""

import re
from pathlib import Path

import pytest

from nlreport import ResultTable, SchemaMismatch, performance_profile, scatter

GOLDEN = Path(__file__).parent / "golden"

HEADER = ("instance,variant,result,wall_ms,scc_calls,apx_cells,"
          "fallbacks,max_resultant_degree,learned_clauses")


def write_csv(path, rows):
    lines = [HEADER] + [",".join(str(v) for v in r) for r in rows]
    path.write_text("\n".join(lines) + "\n")
    return path


def row(instance, variant, result, wall_ms, scc=5, apx=0, fb=0, deg=2, lc=1):
    return (instance, variant, result, wall_ms, scc, apx, fb, deg, lc)


@pytest.fixture
def profile_csv(tmp_path):
    # variant "a": solved at 1/2/4 s; variant "b": 2 solved, 1 timeout
    rows = [row("i1", "a", "sat", 1000), row("i2", "a", "unsat", 2000),
            row("i3", "a", "sat", 4000),
            row("i1", "b", "sat", 3000), row("i2", "b", "unsat", 8000),
            row("i3", "b", "timeout", 60000)]
    return write_csv(tmp_path / "p.csv", rows)


class TestResultTable:
    def test_duplicate_key_rejected(self, tmp_path):
        p = write_csv(tmp_path / "d.csv",
                      [row("i1", "a", "sat", 10), row("i1", "a", "sat", 20)])
        with pytest.raises(SchemaMismatch):
            ResultTable.from_csv(p)

    def test_wrong_header_rejected(self, tmp_path):
        p = tmp_path / "h.csv"
        p.write_text("foo,bar\n1,2\n")
        with pytest.raises(SchemaMismatch):
            ResultTable.from_csv(p)

    def test_non_numeric_metric_rejected(self, tmp_path):
        p = tmp_path / "n.csv"
        p.write_text(HEADER + "\ni1,a,sat,fast,1,0,0,2,1\n")
        with pytest.raises(SchemaMismatch):
            ResultTable.from_csv(p)

    def test_solved_count(self, profile_csv):
        t = ResultTable.from_csv(profile_csv)
        assert t.solved_count("a") == 3
        assert t.solved_count("b") == 2
        assert t.variants() == ["a", "b"]


def polyline_points(svg_text):
    out = []
    for m in re.finditer(r'<polyline points="([^"]+)"', svg_text):
        pts = [tuple(map(float, xy.split(",")))
               for xy in m.group(1).split()]
        out.append(pts)
    return out


class TestPerformanceProfile:
    def test_terminal_counts_match_solved(self, profile_csv, tmp_path):
        out = tmp_path / "o.svg"
        counts = performance_profile([profile_csv], out, timeout_ms=60000)
        assert counts == {"a": 3, "b": 2}

    def test_curves_are_monotone_steps(self, profile_csv, tmp_path):
        out = tmp_path / "o.svg"
        performance_profile([profile_csv], out, timeout_ms=60000)
        for pts in polyline_points(out.read_text()):
            xs = [x for x, _ in pts]
            ys = [y for _, y in pts]
            assert xs == sorted(xs)
            assert ys == sorted(ys, reverse=True)  # solved never decreases

    def test_zero_solved_gives_flat_curve(self, tmp_path):
        p = write_csv(tmp_path / "z.csv",
                      [row("i1", "a", "timeout", 60000),
                       row("i2", "a", "unknown", 100)])
        out = tmp_path / "o.svg"
        counts = performance_profile([p], out, timeout_ms=60000)
        assert counts == {"a": 0}
        (pts,) = polyline_points(out.read_text())
        assert len({y for _, y in pts}) == 1

    def test_dominating_variant_never_crossed(self, tmp_path):
        # "fast" solves everything strictly sooner than "slow"
        rows = []
        for i in range(6):
            rows.append(row(f"i{i}", "fast", "sat", 100 * (i + 1)))
            rows.append(row(f"i{i}", "slow", "sat", 1000 * (i + 1)))
        p = write_csv(tmp_path / "d.csv", rows)
        out = tmp_path / "o.svg"
        performance_profile([p], out, timeout_ms=10000)
        fast, slow = polyline_points(out.read_text())

        def count_at(pts, x):
            best = pts[0][1]
            for px, py in pts:
                if px <= x:
                    best = py
            return best

        xs = sorted({x for x, _ in fast + slow})
        for x in xs:
            assert count_at(fast, x) <= count_at(slow, x)  # lower y = more solved

    def test_schema_mismatch_raised(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("nope\n")
        with pytest.raises(SchemaMismatch):
            performance_profile([p], tmp_path / "o.svg")


def circle_centers(svg_text):
    return [(float(m.group(1)), float(m.group(2)))
            for m in re.finditer(r'<circle cx="([0-9.]+)" cy="([0-9.]+)"',
                                 svg_text)]


class TestScatter:
    def test_identical_input_on_diagonal(self, profile_csv, tmp_path):
        out = tmp_path / "o.svg"
        scatter(profile_csv, profile_csv, "scc_calls", out,
                variant_a="a", variant_b="a")
        text = out.read_text()
        # the diagonal runs from (x_lo, y_lo) to (x_hi, y_hi); every point of
        # an identical comparison must sit on it
        for cx, cy in circle_centers(text):
            sx = (cx - 70.0) / (620.0 - 70.0)
            sy = (430.0 - cy) / (430.0 - 20.0)
            assert abs(sx - sy) < 0.01

    def test_double_times_on_double_line(self, tmp_path):
        a = write_csv(tmp_path / "a.csv",
                      [row(f"i{k}", "a", "sat", 100 * 2 ** k) for k in range(5)])
        b = write_csv(tmp_path / "b.csv",
                      [row(f"i{k}", "b", "sat", 200 * 2 ** k) for k in range(5)])
        pairs = scatter(a, b, "wall_ms", tmp_path / "o.svg")
        assert all(pb == 2 * pa for pa, pb in pairs)

    def test_timeout_clamped_to_budget(self, tmp_path):
        a = write_csv(tmp_path / "a.csv",
                      [row("i1", "a", "timeout", 123456), row("i2", "a", "sat", 10)])
        b = write_csv(tmp_path / "b.csv",
                      [row("i1", "b", "sat", 50), row("i2", "b", "sat", 10)])
        pairs = scatter(a, b, "wall_ms", tmp_path / "o.svg", timeout_ms=60000)
        assert (60000.0, 50.0) in pairs

    def test_differing_instance_sets_rejected(self, tmp_path):
        a = write_csv(tmp_path / "a.csv", [row("i1", "a", "sat", 10)])
        b = write_csv(tmp_path / "b.csv", [row("i2", "b", "sat", 10)])
        with pytest.raises(SchemaMismatch):
            scatter(a, b, "wall_ms", tmp_path / "o.svg")

    def test_unknown_metric_rejected(self, tmp_path):
        a = write_csv(tmp_path / "a.csv", [row("i1", "a", "sat", 10)])
        with pytest.raises(ValueError):
            scatter(a, a, "fallbacks", tmp_path / "o.svg")


class TestGolden:
    def test_profile_matches_golden(self, profile_csv, tmp_path):
        out = tmp_path / "profile.svg"
        performance_profile([profile_csv], out, timeout_ms=60000)
        assert out.read_text() == (GOLDEN / "profile.svg").read_text()

    def test_scatter_matches_golden(self, profile_csv, tmp_path):
        out = tmp_path / "scatter.svg"
        scatter(profile_csv, profile_csv, "wall_ms", out,
                variant_a="a", variant_b="b", timeout_ms=60000)
        assert out.read_text() == (GOLDEN / "scatter.svg").read_text()
