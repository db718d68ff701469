"""Command line interface: `run` solves one instance, `bench` runs an
instance directory across variants into a statistics CSV.

Exit codes for `run`: 10 sat, 20 unsat, 0 unknown, 64 usage error, 65 parse
error.  `bench` isolates every (instance, variant) pair in a subprocess and
enforces the timeout externally, so a stuck exact-arithmetic computation
cannot wedge the harness.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import subprocess
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from .apx import ApproxConfig
from .nlsat import SolverLimits, solve
from . import smtlib

EXIT_SAT = 10
EXIT_UNSAT = 20
EXIT_UNKNOWN = 0
EXIT_USAGE = 64
EXIT_PARSE = 65

CSV_HEADER = [
    "instance", "variant", "result", "wall_ms", "scc_calls", "apx_cells",
    "fallbacks", "max_resultant_degree", "learned_clauses",
]

VARIANT_HELP = "baseline | simple-<j> | dynamic | taylor | pwl-<k> | outside"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 64 instead of argparse's 2
        raise _UsageError(message)


def _build_parser() -> _Parser:
    ap = _Parser(prog="nlcell", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    rp = sub.add_parser("run", help="solve a single SMT-LIB instance")
    rp.add_argument("instance")
    rp.add_argument("--variant", default="baseline", help=VARIANT_HELP)
    rp.add_argument("--max-apx-cells", type=int, default=None)
    rp.add_argument("--dynamic-c", type=Fraction, default=None)
    rp.add_argument("--dynamic-d", type=Fraction, default=None)
    rp.add_argument("--timeout-ms", type=int, default=None)
    rp.add_argument("--seed", type=int, default=0)
    rp.add_argument("--stats", default=None, help="write a JSON statistics record")

    bp = sub.add_parser("bench", help="run a directory of instances into a CSV")
    bp.add_argument("directory")
    bp.add_argument("--variants", default="baseline",
                    help=f"comma-separated list: {VARIANT_HELP}")
    bp.add_argument("--timeout-ms", type=int, default=60000)
    bp.add_argument("--out", default="bench.csv")
    bp.add_argument("--jobs", type=int, default=1)
    bp.add_argument("--seed", type=int, default=0)
    return ap


def make_config(variant: str, max_apx_cells: Optional[int],
                dynamic_c: Optional[Fraction], dynamic_d: Optional[Fraction]) -> ApproxConfig:
    cfg = ApproxConfig.parse(variant)
    overrides = {}
    if max_apx_cells is not None:
        overrides["max_apx_cells"] = max_apx_cells
    if dynamic_c is not None or dynamic_d is not None:
        if cfg.dynamic is None:
            raise _UsageError(f"variant {variant} has no dynamic criterion")
        c, d = cfg.dynamic
        overrides["dynamic"] = (dynamic_c if dynamic_c is not None else c,
                                dynamic_d if dynamic_d is not None else d)
    if overrides:
        cfg = ApproxConfig(
            variant=cfg.variant,
            fixed_degree_threshold=cfg.fixed_degree_threshold,
            max_apx_cells=overrides.get("max_apx_cells", cfg.max_apx_cells),
            dynamic=overrides.get("dynamic", cfg.dynamic),
            pwl_pieces=cfg.pwl_pieces,
            taylor_precision=cfg.taylor_precision,
        )
    return cfg


def cmd_run(args) -> int:
    random.seed(args.seed)
    try:
        text = Path(args.instance).read_text()
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        script = smtlib.parse(text)
        formula = script.to_formula()
    except smtlib.ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    try:
        cfg = make_config(args.variant, args.max_apx_cells, args.dynamic_c, args.dynamic_d)
    except ValueError as e:
        raise _UsageError(str(e))
    limits = SolverLimits(timeout_ms=args.timeout_ms)
    result = solve(formula, cfg, limits)
    print(smtlib.print_result(result, formula.var_names))
    if args.stats:
        record = {
            "result": result.status,
            "reason": result.reason,
            "wall_ms": result.stats.wall_ms,
            "scc_calls": result.stats.scc_calls,
            "apx_cells": result.stats.apx_cells,
            "fallbacks": result.stats.fallbacks,
            "max_resultant_degree": result.stats.max_resultant_degree,
            "mult_proxy": result.stats.mult_proxy,
            "learned_clauses": result.stats.learned_clauses,
        }
        Path(args.stats).write_text(json.dumps(record, indent=2) + "\n")
    return {"sat": EXIT_SAT, "unsat": EXIT_UNSAT}.get(result.status, EXIT_UNKNOWN)


# ---------------------------------------------------------------------------
# bench harness
# ---------------------------------------------------------------------------

def _bench_one(instance: Path, variant: str, timeout_ms: int, seed: int) -> List[str]:
    """One (instance, variant) run in a subprocess; returns a CSV row."""
    stats_path = Path(f"{instance}.{variant}.{seed}.stats.tmp")
    cmd = [
        sys.executable, "-m", "nlcell.cli", "run", str(instance),
        "--variant", variant, "--seed", str(seed),
        "--timeout-ms", str(timeout_ms), "--stats", str(stats_path),
    ]
    t0 = time.monotonic()
    row = {k: "0" for k in CSV_HEADER}
    row["instance"] = instance.name
    row["variant"] = variant
    try:
        proc = subprocess.run(
            cmd, capture_output=True, text=True, timeout=timeout_ms / 1000 * 2 + 10
        )
        wall_ms = (time.monotonic() - t0) * 1000
        reason = ""
        if stats_path.exists():
            rec = json.loads(stats_path.read_text())
            for k in CSV_HEADER[3:]:
                row[k] = str(rec.get(k, 0))
            row["wall_ms"] = str(round(rec["wall_ms"], 1))
            reason = rec.get("reason") or ""
        if proc.returncode == EXIT_SAT:
            row["result"] = "sat"
        elif proc.returncode == EXIT_UNSAT:
            row["result"] = "unsat"
        elif proc.returncode == EXIT_UNKNOWN:
            row["result"] = "timeout" if "timeout" in reason else "unknown"
            if row["result"] == "timeout":
                row["wall_ms"] = str(max(float(row["wall_ms"]), float(timeout_ms)))
        else:
            row["result"] = "error"
            row["wall_ms"] = str(round(wall_ms, 1))
    except subprocess.TimeoutExpired:
        row["result"] = "timeout"
        row["wall_ms"] = str(float(timeout_ms))
    except Exception:
        row["result"] = "error"
    finally:
        if stats_path.exists():
            stats_path.unlink()
    return [row[k] for k in CSV_HEADER]


def cmd_bench(args) -> int:
    directory = Path(args.directory)
    if not directory.is_dir():
        raise _UsageError(f"not a directory: {directory}")
    instances = sorted(p for p in directory.iterdir() if p.suffix == ".smt2")
    variants = [v.strip() for v in args.variants.split(",") if v.strip()]
    for v in variants:
        try:
            ApproxConfig.parse(v)  # validate names early
        except ValueError as e:
            raise _UsageError(str(e))
    pairs = [(i, v) for i in instances for v in variants]
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(
                lambda p: _bench_one(p[0], p[1], args.timeout_ms, args.seed), pairs
            ))
    else:
        rows = [_bench_one(i, v, args.timeout_ms, args.seed) for i, v in pairs]
    rows.sort(key=lambda r: (r[0], r[1]))
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        w.writerows(rows)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        if args.command == "run":
            return cmd_run(args)
        return cmd_bench(args)
    except _UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
