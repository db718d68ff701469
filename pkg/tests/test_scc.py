"""Levelwise single-cell construction: produced cells contain the sample and
keep the input polynomials sign-invariant."""

import random
from fractions import Fraction

import pytest

from nlcell.numeric import PrecisionExhausted
from nlcell.poly import Polynomial
from nlcell.roots import sign_at_prefix
from nlcell.scc import (
    CellDescription,
    ConstructionFailed,
    Section,
    Sector,
    cell_contains,
    levelwise_scc,
)
from oracles import rand_instance, sample_cell_point

x1, x2, x3 = Polynomial.var(1), Polynomial.var(2), Polynomial.var(3)


def C(v):
    return Polynomial.const(Fraction(v))


def build(P, s):
    return levelwise_scc(P, tuple(Fraction(v) for v in s))


class TestCircleCell:
    """The unit-circle polynomial around the sample (2, 0)."""

    def test_cell_text(self):
        cell = build([x1 ** 2 + x2 ** 2 - C(1)], (2, 0))
        assert cell.to_text() == (
            "I2: true\n"
            "I1: x1 > root(x1^2 - 1, 2)")

    def test_inside_sample_gets_bounded_interval(self):
        cell = build([x1 ** 2 + x2 ** 2 - C(1)], (0, 0))
        top = cell.intervals[1]
        assert isinstance(top, Sector)
        assert top.lower is not None and top.upper is not None

    def test_sample_on_curve_gives_section(self):
        cell = build([x1 ** 2 + x2 ** 2 - C(1)], (0, 1))
        assert isinstance(cell.intervals[1], Section)


class TestFailureModes:
    def test_nullification_fails(self):
        # x1*x2 vanishes identically over x1 = 0
        with pytest.raises(ConstructionFailed):
            build([x1 * x2], (0, 0))

    def test_dimension_guard(self):
        with pytest.raises(ValueError):
            cell_contains(build([x1 - C(1)], (0,)), (Fraction(0), Fraction(0)))


class TestCellProperties:
    def test_contains_own_sample(self):
        rng = random.Random(41)
        checked = 0
        while checked < 30:
            P, s = rand_instance(rng, max_vars=2)
            try:
                cell = levelwise_scc(P, s)
            except (ConstructionFailed, PrecisionExhausted):
                continue
            assert cell_contains(cell, s) is True
            checked += 1

    def test_sign_invariance_at_interior_points(self):
        rng = random.Random(43)
        checked = 0
        while checked < 25:
            P, s = rand_instance(rng, max_vars=2)
            try:
                cell = levelwise_scc(P, s)
            except (ConstructionFailed, PrecisionExhausted):
                continue
            ref = [sign_at_prefix(p, s) for p in P]
            pts = 0
            for _ in range(10):
                r = sample_cell_point(cell, rng)
                if r is None:
                    continue
                assert cell_contains(cell, r) is not False
                for p, want in zip(P, ref):
                    assert sign_at_prefix(p, r) == want, (
                        p.to_text(), cell.to_text(), r)
                pts += 1
            if pts:
                checked += 1

    def test_interval_count_matches_dimension(self):
        cell = build([x1 * x2 * x3 - C(1)], (1, 1, 2))
        assert len(cell.intervals) == 3


class TestOrderingResultants:
    def test_two_circles_chain(self):
        # concentric circles: the cell between them orders both roots
        P = [x1 ** 2 + x2 ** 2 - C(1), x1 ** 2 + x2 ** 2 - C(4)]
        cell = build(P, (0, Fraction(3, 2)))
        top = cell.intervals[1]
        assert isinstance(top, Sector)
        assert top.lower.poly != top.upper.poly
