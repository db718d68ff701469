"""End-to-end acceptance suite.

Each test prints one PASS line on success; together they cover the full set
of headline guarantees:

1. lemma reproduction on the unit-circle example
2. baseline construction identical to the unapproximated construction
3. sign invariance of constructed cells under every variant
4. resultant specialization identity
5. minimality of rational_between
6. degree reduction on high-degree bounded sectors
7. non-termination without / termination with the dynamic criterion
8. solver verdicts on a curated + randomized corpus
9. approximated-cell budget is never exceeded
"""

import random
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "scripts"))
import make_instances  # noqa: E402

from nlcell.apx import ApproxConfig, ApxState, apx_scc
from nlcell.nlsat import (
    Formula,
    Literal,
    SolverLimits,
    make_clause,
    poly_atom,
    solve,
)
from nlcell.numeric import PrecisionExhausted, bit_size, compare, rational_between
from nlcell.poly import Polynomial, resultant
from nlcell.roots import eval_indexed_root, sign_at_prefix
from nlcell.scc import ConstructionFailed, Sector, explanation_clause, levelwise_scc
from nlcell.smtlib import parse
from oracles import brute_min_rational, cad_oracle, rand_instance, sample_cell_point

x1, x2 = Polynomial.var(1), Polynomial.var(2)


def C(v):
    return Polynomial.const(Fraction(v))


VARIANT_NAMES = ["baseline", "simple-3", "dynamic", "taylor", "pwl-2", "outside"]


def report(name: str):
    print(f"[ACCEPTANCE] {name}: PASS")


# ---------------------------------------------------------------------------
# shared random instance suite (criteria 2 and 3)
# ---------------------------------------------------------------------------

@pytest.fixture(scope="session")
def suite_500():
    rng = random.Random(90210)
    return [rand_instance(rng, max_vars=3, max_polys=4, max_deg=4)
            for _ in range(500)]


def test_criterion_1_lemma_reproduction():
    """The unit-circle constraint at sample (2, 0) explains to the interval
    x1 > root(x1^2 - 1, 2) and a two-literal clause equivalent to
    not(x1^2 + x2^2 - 1 < 0) or x1 <= 1."""
    t0 = time.time()
    circle = x1 ** 2 + x2 ** 2 - C(1)
    cell = levelwise_scc([circle], (Fraction(2), Fraction(0)))
    assert cell.intervals[0].to_text(1) == "x1 > root(x1^2 - 1, 2)"
    assert cell.intervals[1] == Sector(None, None)

    core = [Literal(poly_atom(circle, "<"))]
    clause = explanation_clause(core, cell)
    lits = [l for l in clause.lits]
    assert len(lits) == 2
    assert core[0].neg() in lits
    assert "not(x1 > root(x1^2 - 1, 2))" in {l.to_text() for l in lits}
    # semantic equivalence with "x1 <= 1": the bound root is exactly 1
    (ext,) = [l for l in lits if l.to_text().startswith("not(x1 >")]
    assert eval_indexed_root(ext.atom.xi, ()) == Fraction(1)
    assert time.time() - t0 < 1.0
    report("lemma reproduction (unit circle, sample (2,0))")


def test_criterion_2_baseline_equivalence(suite_500):
    """On 500 random instances the baseline-approximation construction is
    text-identical to the unapproximated construction."""
    t0 = time.time()
    cfg = ApproxConfig.parse("baseline")
    built = 0
    for P, s in suite_500:
        try:
            want = levelwise_scc(P, s).to_text()
        except (ConstructionFailed, PrecisionExhausted) as e:
            with pytest.raises(type(e)):
                apx_scc(P, s, cfg)
            continue
        assert apx_scc(P, s, cfg).to_text() == want
        built += 1
    elapsed = time.time() - t0
    assert elapsed < 300, f"took {elapsed:.0f}s"
    assert built >= 300  # the vast majority must actually construct
    report(f"baseline equivalence on 500 random instances "
           f"({built} constructed, {elapsed:.0f}s)")


@pytest.mark.parametrize("name", VARIANT_NAMES)
def test_criterion_3_sign_invariance_fuzz(name, suite_500):
    """100 interior points per constructed cell: the input polynomials never
    change sign inside the cell, under every variant."""
    rng = random.Random(sum(name.encode()))
    violations = 0
    cells = 0
    points = 0
    for P, s in suite_500:
        cfg = ApproxConfig.parse(name)
        st = ApxState()
        try:
            cell = apx_scc(P, s, cfg, st)
        except (ConstructionFailed, PrecisionExhausted):
            continue
        cells += 1
        ref = [sign_at_prefix(p, s) for p in P]
        for _ in range(100):
            r = sample_cell_point(cell, rng)
            if r is None:
                continue
            points += 1
            for p, want in zip(P, ref):
                if sign_at_prefix(p, r) != want:
                    violations += 1
    assert violations == 0
    assert cells >= 300 and points >= 10000
    report(f"sign invariance under {name} "
           f"({cells} cells, {points} points, 0 violations)")


def test_criterion_4_resultant_specialization():
    """1000 random (p, q, a): specializing the symbolic resultant at x1 = a
    equals the resultant of the specialized polynomials whenever both leading
    coefficients survive the specialization."""
    rng = random.Random(424242)
    checked = 0
    while checked < 1000:
        from oracles import rand_poly

        p = rand_poly(rng, 2, 3)
        q = rand_poly(rng, 2, 3)
        if p.degree(2) < 1 or q.degree(2) < 1:
            continue
        a = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        pu = p.specialize((a,))
        qu = q.specialize((a,))
        if len(pu) - 1 != p.degree(2) or len(qu) - 1 != q.degree(2):
            continue  # leading coefficient vanished
        p1 = Polynomial({(k,): c for k, c in enumerate(pu)})
        q1 = Polynomial({(k,): c for k, c in enumerate(qu)})
        want = resultant(p1, q1, 1).evaluate(())
        sym = resultant(p, q, 2)
        got = sym.evaluate((a,)) if sym.level >= 1 else sym.evaluate(())
        assert got == want
        checked += 1
    report("resultant specialization on 1000 random triples")


def test_criterion_5_rational_between_minimality():
    """200 random rational intervals: the returned rational attains the
    brute-force minimal bit size."""
    rng = random.Random(555)
    for _ in range(200):
        a = Fraction(rng.randint(-60, 60), rng.randint(1, 40))
        b = a + Fraction(rng.randint(1, 30), rng.randint(1, 40))
        n_excl = rng.randint(0, 3)
        excl = [a + (b - a) * Fraction(k + 1, n_excl + 2)
                for k in range(n_excl)]
        got = rational_between(a, b, exclude=excl)
        want = brute_min_rational(a, b, exclude=excl)
        assert bit_size(got) == bit_size(want) and got == want
    report("rational_between minimal bit size on 200 intervals")


DEGREE_REDUCTION_PARAMS = [
    (a, b, a + b)
    for a in (1, 2, Fraction(3, 2), 3)
    for b in (1, 3, Fraction(5, 2), 5, 2)
]


def test_criterion_6_degree_reduction():
    """20 bounded sectors between curves of degree >= 6: the fixed-threshold
    variant strictly lowers the maximum resultant degree on every instance
    while inserting in at least one cell."""
    assert len(DEGREE_REDUCTION_PARAMS) == 20
    s = (Fraction(0), Fraction(0))
    for a, b, c in DEGREE_REDUCTION_PARAMS:
        P = [x2 ** 7 - x1 ** 6 - C(a),
             x2 ** 7 + x1 ** 2 + C(b),
             x2 ** 6 - x1 ** 4 - C(c)]
        for p in P:
            assert max(p.degree(1), p.degree(2)) >= 6
        base = apx_scc(P, s, ApproxConfig.parse("baseline"))
        st = ApxState()
        apx = apx_scc(P, s, ApproxConfig.parse("simple-3"), st)
        assert st.n_cells >= 1
        assert apx.stats.max_resultant_degree < base.stats.max_resultant_degree, \
            (a, b, c, apx.stats.max_resultant_degree,
             base.stats.max_resultant_degree)
    report("degree reduction on 20 high-degree sector instances")


def _cubic_pair_formula() -> Formula:
    p = x1 ** 3 - C(1)
    return Formula(1, [make_clause([Literal(poly_atom(p, ">"))]),
                       make_clause([Literal(poly_atom(p, "<"))])], ["x1"])


def test_criterion_7a_forced_nontermination():
    """With the insertion criteria forced always-true and no cell budget the
    refutation never closes: more than 1000 approximated cells accumulate
    before the step budget trips."""
    cfg = ApproxConfig("simple", fixed_degree_threshold=0, max_apx_cells=None)
    r = solve(_cubic_pair_formula(), cfg, SolverLimits(max_steps=1200))
    assert r.status == "unknown"
    assert "step budget" in (r.reason or "")
    assert r.stats.apx_cells > 1000
    report(f"forced non-termination ({r.stats.apx_cells} approximated cells)")


def test_criterion_7b_dynamic_terminates():
    """The dynamic criterion (c=1/5, d=3) terminates on the same formula with
    the predicted cell bound and the correct verdict."""
    cfg = ApproxConfig("simple", dynamic=(Fraction(1, 5), Fraction(3)))
    r = solve(_cubic_pair_formula(), cfg, SolverLimits(max_steps=100000))
    assert r.status == "unsat"
    d_max = 3  # the only bound polynomial degree in this formula
    assert r.stats.apx_cells <= 5 * (d_max - 3) + 1
    report(f"dynamic criterion terminates (apx_cells={r.stats.apx_cells})")


# ---------------------------------------------------------------------------
# corpus correctness
# ---------------------------------------------------------------------------

@pytest.fixture(scope="session")
def corpus(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus")
    make_instances.write_corpus(root)
    return root


def test_criterion_8_solver_correctness(corpus):
    """Curated instances match their encoded status and randomized instances
    match the decomposition oracle, under every variant, each under 10 s."""
    curated = sorted((corpus / "curated").glob("*.smt2"))
    randoms = sorted((corpus / "random").glob("*.smt2"))
    assert len(curated) >= 30
    n_checked = 0
    for path in curated + randoms:
        script = parse(path.read_text())
        f = script.to_formula()
        if path in curated:
            want = "sat" if path.name.startswith("sat") else "unsat"
        else:
            if f.n_vars > 2:
                continue
            o = cad_oracle(f)
            if o is None:
                continue
            want = "sat" if o else "unsat"
        for name in VARIANT_NAMES:
            t0 = time.time()
            r = solve(f, ApproxConfig.parse(name),
                      SolverLimits(timeout_ms=10000))
            elapsed = time.time() - t0
            assert elapsed < 10, (path.name, name, elapsed)
            assert r.status == want, (path.name, name, r.status, want, r.reason)
        n_checked += 1
    assert n_checked >= 30 + 8
    report(f"solver correctness on {n_checked} instances x 6 variants")


def test_criterion_9_budget_invariant(corpus, tmp_path):
    """--max-apx-cells 50 caps the reported apx_cells on every run."""
    import json

    targets = [corpus / "curated" / "unsat_circle_in_and_out.smt2",
               corpus / "curated" / "sat_parabola_strip.smt2",
               corpus / "curated" / "unsat_unit_interval_excluded.smt2"]
    for path in targets:
        for name in VARIANT_NAMES:
            out = tmp_path / "stats.json"
            subprocess.run(
                [sys.executable, "-m", "nlcell.cli", "run", str(path),
                 "--variant", name, "--max-apx-cells", "50",
                 "--stats", str(out)],
                capture_output=True, text=True)
            rec = json.loads(out.read_text())
            assert rec["apx_cells"] <= 50, (path.name, name, rec["apx_cells"])
    # and directly on the forced-loop configuration
    cfg = ApproxConfig("simple", fixed_degree_threshold=0, max_apx_cells=50)
    r = solve(_cubic_pair_formula(), cfg, SolverLimits(max_steps=100000))
    assert r.stats.apx_cells <= 50
    report("approximated-cell budget never exceeded")
