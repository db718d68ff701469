"""Performance profiles and per-metric scatter plots from harness CSVs.

Consumes only the fixed benchmark CSV schema; the solver package is not a
dependency."""

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .svg import Canvas

SCHEMA = ["instance", "variant", "result", "wall_ms", "scc_calls",
          "apx_cells", "fallbacks", "max_resultant_degree", "learned_clauses"]

SOLVED = ("sat", "unsat")

SCATTER_METRICS = ("wall_ms", "scc_calls", "max_resultant_degree")

# fixed colors per variant name; unknown names get a stable fallback
VARIANT_COLORS = {
    "baseline": "#1f77b4",
    "simple-3": "#ff7f0e",
    "dynamic": "#2ca02c",
    "taylor": "#d62728",
    "pwl-2": "#9467bd",
    "outside": "#8c564b",
}

_FALLBACK_COLORS = ["#e377c2", "#7f7f7f", "#bcbd22", "#17becf"]


def variant_color(name: str) -> str:
    if name in VARIANT_COLORS:
        return VARIANT_COLORS[name]
    return _FALLBACK_COLORS[sum(name.encode()) % len(_FALLBACK_COLORS)]


class SchemaMismatch(ValueError):
    """The CSV does not carry the benchmark schema, or tables disagree."""


@dataclass(frozen=True)
class RunRecord:
    instance: str
    variant: str
    result: str
    wall_ms: float
    scc_calls: int
    apx_cells: int
    fallbacks: int
    max_resultant_degree: int
    learned_clauses: int


class ResultTable:
    """Benchmark rows keyed by (instance, variant); duplicate keys rejected."""

    def __init__(self):
        self.rows: Dict[Tuple[str, str], RunRecord] = {}

    @classmethod
    def from_csv(cls, path) -> "ResultTable":
        table = cls()
        table.update_from_csv(path)
        return table

    def update_from_csv(self, path) -> None:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise SchemaMismatch(f"{path}: empty file")
            if header != SCHEMA:
                raise SchemaMismatch(f"{path}: header {header!r}")
            for lineno, row in enumerate(reader, start=2):
                if len(row) != len(SCHEMA):
                    raise SchemaMismatch(f"{path}:{lineno}: {len(row)} fields")
                try:
                    rec = RunRecord(row[0], row[1], row[2], float(row[3]),
                                    *(int(v) for v in row[4:]))
                except ValueError:
                    raise SchemaMismatch(f"{path}:{lineno}: non-numeric metric")
                key = (rec.instance, rec.variant)
                if key in self.rows:
                    raise SchemaMismatch(f"{path}:{lineno}: duplicate {key}")
                self.rows[key] = rec

    def variants(self) -> List[str]:
        return sorted({v for _, v in self.rows})

    def instances(self) -> List[str]:
        return sorted({i for i, _ in self.rows})

    def of_variant(self, variant: str) -> List[RunRecord]:
        return [r for (_, v), r in sorted(self.rows.items()) if v == variant]

    def solved_count(self, variant: str) -> int:
        return sum(1 for r in self.of_variant(variant) if r.result in SOLVED)


# ---------------------------------------------------------------------------
# plot geometry
# ---------------------------------------------------------------------------

_W, _H = 640, 480
_ML, _MR, _MT, _MB = 70, 20, 20, 50  # margins


def _log_x(t: float, t_min: float, t_max: float) -> float:
    if t_max <= t_min:
        return _ML
    u = (math.log10(t) - math.log10(t_min)) / (math.log10(t_max) - math.log10(t_min))
    return _ML + u * (_W - _ML - _MR)


def _log_y(t: float, t_min: float, t_max: float) -> float:
    if t_max <= t_min:
        return _H - _MB
    u = (math.log10(t) - math.log10(t_min)) / (math.log10(t_max) - math.log10(t_min))
    return _H - _MB - u * (_H - _MT - _MB)


def _lin_y(v: float, v_max: float) -> float:
    if v_max <= 0:
        return _H - _MB
    return _H - _MB - (v / v_max) * (_H - _MT - _MB)


def _decades(lo: float, hi: float) -> List[float]:
    out = []
    d = 10 ** math.floor(math.log10(lo))
    while d <= hi:
        if d >= lo:
            out.append(d)
        d *= 10
    return out


def _axes(cv: Canvas, xlabel: str, ylabel: str) -> None:
    cv.line(_ML, _H - _MB, _W - _MR, _H - _MB)
    cv.line(_ML, _MT, _ML, _H - _MB)
    cv.text((_ML + _W - _MR) / 2, _H - 12, xlabel, anchor="middle")
    cv.text(16, (_MT + _H - _MB) / 2, ylabel, anchor="middle")


# ---------------------------------------------------------------------------
# figures
# ---------------------------------------------------------------------------

def performance_profile(csv_paths: Sequence, out_path,
                        timeout_ms: Optional[int] = None) -> Dict[str, int]:
    """Cumulative instances solved within time t, one step curve per variant,
    logarithmic time axis.  Returns the terminal count per variant."""
    table = ResultTable()
    for p in csv_paths:
        table.update_from_csv(p)
    variants = table.variants()
    solve_times: Dict[str, List[int]] = {}
    for v in variants:
        solve_times[v] = sorted(max(r.wall_ms, 1)
                                for r in table.of_variant(v)
                                if r.result in SOLVED)
    all_times = [t for ts in solve_times.values() for t in ts]
    t_min = 1.0
    t_max = float(max(all_times + ([timeout_ms] if timeout_ms else [10])))
    n_max = max([len(table.of_variant(v)) for v in variants] or [1])

    cv = Canvas(_W, _H)
    _axes(cv, "time [ms]", "solved")
    for d in _decades(t_min, t_max):
        x = _log_x(d, t_min, t_max)
        cv.line(x, _H - _MB, x, _MT, color="#dddddd", width=0.5)
        cv.text(x, _H - _MB + 16, f"{int(d)}", size=10, anchor="middle")
    for k in range(0, n_max + 1, max(1, n_max // 5)):
        y = _lin_y(k, n_max)
        cv.line(_ML, y, _W - _MR, y, color="#dddddd", width=0.5)
        cv.text(_ML - 6, y + 4, str(k), size=10, anchor="end")

    counts: Dict[str, int] = {}
    for idx, v in enumerate(variants):
        ts = solve_times[v]
        counts[v] = len(ts)
        pts = [(_log_x(t_min, t_min, t_max), _lin_y(0, n_max))]
        solved = 0
        for t in ts:
            x = _log_x(min(t, t_max), t_min, t_max)
            pts.append((x, _lin_y(solved, n_max)))
            solved += 1
            pts.append((x, _lin_y(solved, n_max)))
        pts.append((_log_x(t_max, t_min, t_max), _lin_y(solved, n_max)))
        color = variant_color(v)
        cv.polyline(pts, color=color)
        cv.text(_W - _MR - 6, _MT + 16 * (idx + 1), v, size=11,
                color=color, anchor="end")

    Path(out_path).write_text(cv.to_svg())
    return counts


def scatter(csv_a, csv_b, metric: str, out_path,
            variant_a: Optional[str] = None,
            variant_b: Optional[str] = None,
            timeout_ms: Optional[int] = None) -> List[Tuple[float, float]]:
    """Log-log per-instance comparison of one metric between two runs;
    timed-out runs are clamped to the budget line; the diagonal is drawn.
    Returns the plotted (a, b) value pairs sorted by instance name."""
    if metric not in SCATTER_METRICS:
        raise ValueError(f"metric must be one of {SCATTER_METRICS}")
    ta = ResultTable.from_csv(csv_a)
    tb = ResultTable.from_csv(csv_b)

    def select(table: ResultTable, variant: Optional[str]) -> Dict[str, RunRecord]:
        vs = table.variants()
        if variant is None:
            if len(vs) != 1:
                raise SchemaMismatch(
                    f"multiple variants {vs}: pass an explicit variant")
            variant = vs[0]
        return {r.instance: r for r in table.of_variant(variant)}

    rows_a = select(ta, variant_a)
    rows_b = select(tb, variant_b)
    if set(rows_a) != set(rows_b):
        raise SchemaMismatch("instance sets differ between the two tables")

    budget = float(timeout_ms) if timeout_ms else None

    def value(rec: RunRecord) -> float:
        v = float(getattr(rec, metric))
        if rec.result == "timeout" and budget is not None and metric == "wall_ms":
            v = budget
        return max(v, 1.0)

    pairs = [(value(rows_a[i]), value(rows_b[i])) for i in sorted(rows_a)]
    hi = max([budget or 0.0] + [max(a, b) for a, b in pairs] + [10.0])
    lo = 1.0

    cv = Canvas(_W, _H)
    _axes(cv, f"{metric} (A)", f"{metric} (B)")
    for d in _decades(lo, hi):
        x = _log_x(d, lo, hi)
        cv.line(x, _H - _MB, x, _MT, color="#dddddd", width=0.5)
        cv.text(x, _H - _MB + 16, f"{int(d)}", size=10, anchor="middle")
        y = _log_y(d, lo, hi)
        cv.line(_ML, y, _W - _MR, y, color="#dddddd", width=0.5)
        cv.text(_ML - 6, y + 4, f"{int(d)}", size=10, anchor="end")

    # diagonal
    cv.line(_log_x(lo, lo, hi), _log_y(lo, lo, hi),
            _log_x(hi, lo, hi), _log_y(hi, lo, hi),
            color="#888888", dash="4,3")
    if budget is not None and metric == "wall_ms":
        cv.line(_log_x(budget, lo, hi), _H - _MB,
                _log_x(budget, lo, hi), _MT,
                color="#d62728", width=0.8, dash="2,2")
        cv.line(_ML, _log_y(budget, lo, hi),
                _W - _MR, _log_y(budget, lo, hi),
                color="#d62728", width=0.8, dash="2,2")

    for a, b in pairs:
        cv.circle(_log_x(a, lo, hi), _log_y(b, lo, hi), color="#1f77b4")

    Path(out_path).write_text(cv.to_svg())
    return pairs
