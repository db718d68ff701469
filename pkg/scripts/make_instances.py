#!/usr/bin/env python3
"""Generate the benchmark instance corpus.

Writes two directories under the output root:

  curated/   hand-written QF_NRA instances with the expected status encoded
             in the file name prefix (``sat_`` / ``unsat_``)
  random/    seeded random CNF instances over 1-2 variables (status not
             encoded; validated externally)

The generator is deterministic: identical seeds produce byte-identical
files.
"""

import argparse
import random
from fractions import Fraction
from pathlib import Path

CURATED = {
    "unsat_square_negative": "(assert (< (* x x) 0))",
    "sat_sqrt2_positive": "(assert (and (= (* x x) 2) (> x 0)))",
    "sat_circle_or_halfplane":
        "(assert (or (< (+ (* x x) (* y y) (- 1)) 0) (> y 0)))",
    "unsat_circle_in_and_out":
        "(assert (and (< (+ (* x x) (* y y)) 1) (> (+ (* x x) (* y y)) 1)))",
    "sat_parabola_strip":
        "(assert (and (> y (* x x)) (< y (+ (* x x) 1))))",
    "unsat_parabola_gap":
        "(assert (and (> y (* x x)) (< y (- (- (* x x)) 1))))",
    "sat_cube_root_2": "(assert (= (* x x x) 2))",
    "unsat_square_minus_one": "(assert (= (+ (* x x) 1) 0))",
    "sat_hyperbola_first_quadrant":
        "(assert (and (= (* x y) 1) (> x 0) (> y 0)))",
    "unsat_hyperbola_mixed_signs":
        "(assert (and (= (* x y) 1) (> x 0) (< y 0)))",
    "sat_circle_meets_axis":
        "(assert (and (= (+ (* x x) (* y y)) 1) (= y 0)))",
    "unsat_circle_far_halfplane":
        "(assert (and (= (+ (* x x) (* y y)) 1) (> (+ x y) 2)))",
    "sat_unit_interval_large_square":
        "(assert (and (> x 0) (< x 1) (> (* x x) (/ 1 4))))",
    "unsat_unit_interval_excluded":
        "(assert (and (or (< x 0) (> x 1)) (< (* x x) 1) (> x 0)))",
    "sat_distinct_opposite":
        "(assert (and (distinct x y) (= (* x x) (* y y))))",
    "unsat_square_nonpositive_far":
        "(assert (and (<= (* x x) 0) (>= x 1)))",
    "sat_square_nonpositive": "(assert (<= (* x x) 0))",
    "sat_cubic_meets_line":
        "(assert (and (= y (* x x x)) (= y x) (> x 0)))",
    "unsat_quartic_sum_negative":
        "(assert (< (+ (* x x x x) (* y y y y)) 0))",
    "sat_quartic_ball_corner":
        "(assert (and (< (+ (* x x x x) (* y y y y)) 1) (> x 0) (> y 0)))",
    "unsat_cyclic_order":
        "(assert (and (> x y) (> y z) (> z x)))",
    "sat_sphere_upper":
        "(assert (and (= (+ (* x x) (* y y) (* z z)) 1) (> z 0)))",
    "unsat_sphere_negative_radius":
        "(assert (< (+ (* x x) (* y y) (* z z)) 0))",
    "sat_product_fixed":
        "(assert (and (= (* x y z) 1) (= x 1) (= y 2)))",
    "unsat_two_squares": "(assert (and (= (* x x) 2) (= (* x x) 3)))",
    "sat_radical_box":
        "(assert (and (= (* x x) 2) (> x 0) (> y x) (< y 2)))",
    "unsat_shifted_parabola": "(assert (< (* x x) (- (* 2 x) 2)))",
    "sat_parabola_below_line": "(assert (< (* x x) (* 2 x)))",
    "unsat_chained_interval":
        "(assert (and (< 0 x 1) (> (* x x) 1)))",
    "sat_implication_chain":
        "(assert (and (=> (> x 0) (> y 0)) (> x 1)))",
    "unsat_distinct_self": "(assert (distinct x x))",
    "sat_upper_semicircle":
        "(assert (and (= (+ (* x x) (* y y)) 1) (> y 0)))",
}


def _vars_used(body: str):
    return [v for v in ("x", "y", "z") if f"{v} " in body or f"{v})" in body]


def curated_text(name: str) -> str:
    body = CURATED[name]
    lines = ["(set-logic QF_NRA)"]
    for v in _vars_used(body):
        lines.append(f"(declare-fun {v} () Real)")
    lines.append(body)
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# random CNF instances
# ---------------------------------------------------------------------------

def _rand_fraction(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-4, 4), rng.randint(1, 3))


def _rand_poly_sexpr(rng: random.Random, names) -> str:
    """Random polynomial as an SMT-LIB term: sum of up to 4 monomials of
    total degree <= 3."""
    terms = []
    for _ in range(rng.randint(1, 4)):
        c = _rand_fraction(rng)
        if c == 0:
            c = Fraction(1)
        factors = [rng.choice(names) for _ in range(rng.randint(0, 3))]
        if c.denominator == 1:
            coeff = str(c.numerator) if c >= 0 else f"(- {-c.numerator})"
        else:
            mag = f"(/ {abs(c.numerator)} {c.denominator})"
            coeff = mag if c > 0 else f"(- {mag})"
        if factors:
            terms.append(f"(* {coeff} {' '.join(factors)})")
        else:
            terms.append(coeff)
    return terms[0] if len(terms) == 1 else f"(+ {' '.join(terms)})"


def random_text(seed: int, n_vars: int) -> str:
    rng = random.Random(seed)
    names = ["x", "y", "z"][:n_vars]
    lines = ["(set-logic QF_NRA)"]
    for v in names:
        lines.append(f"(declare-fun {v} () Real)")
    for _ in range(rng.randint(1, 3)):
        lits = []
        for _ in range(rng.randint(1, 2)):
            rel = rng.choice(["<", ">", "<=", ">=", "="])
            lits.append(f"({rel} {_rand_poly_sexpr(rng, names)} 0)")
        body = lits[0] if len(lits) == 1 else f"(or {' '.join(lits)})"
        lines.append(f"(assert {body})")
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"


def write_corpus(root: Path, n_random: int = 12, seed: int = 2024) -> None:
    curated_dir = root / "curated"
    random_dir = root / "random"
    curated_dir.mkdir(parents=True, exist_ok=True)
    random_dir.mkdir(parents=True, exist_ok=True)
    for name in sorted(CURATED):
        (curated_dir / f"{name}.smt2").write_text(curated_text(name))
    for i in range(n_random):
        n_vars = 1 + (i % 2)
        (random_dir / f"rnd_{seed + i:05d}.smt2").write_text(
            random_text(seed + i, n_vars))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("out", type=Path, help="output corpus root directory")
    ap.add_argument("--n-random", type=int, default=12)
    ap.add_argument("--seed", type=int, default=2024)
    args = ap.parse_args()
    write_corpus(args.out, args.n_random, args.seed)
    print(f"wrote corpus under {args.out}")


if __name__ == "__main__":
    main()
