"""Exact number backend: rationals-in-intervals, real algebraic numbers."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from nlcell.numeric import (
    NEG_INF,
    POS_INF,
    RealAlgebraic,
    algebraic_or_rational,
    bit_size,
    compare,
    rational_approx,
    rational_between,
    sign_at,
    simplest_between,
    upoly,
)
from oracles import brute_min_rational

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=40)


def sqrt_of(n: int) -> RealAlgebraic:
    v = algebraic_or_rational(upoly([-n, 0, 1]), Fraction(0), Fraction(n))
    assert isinstance(v, RealAlgebraic)
    return v


class TestBitSize:
    def test_zero_has_two_bits(self):
        assert bit_size(Fraction(0)) == 2

    def test_sign_does_not_matter(self):
        assert bit_size(Fraction(-7, 3)) == bit_size(Fraction(7, 3))

    @given(rationals)
    def test_matches_definition(self, q):
        num = abs(q.numerator)
        expected = (num.bit_length() if num else 1) + q.denominator.bit_length()
        assert bit_size(q) == expected


class TestRationalBetween:
    def test_simple_interval(self):
        assert rational_between(Fraction(0), Fraction(1)) == Fraction(1, 2)

    def test_excludes_are_avoided(self):
        got = rational_between(Fraction(1), Fraction(2),
                               exclude=[Fraction(3, 2)])
        assert Fraction(1) < got < Fraction(2) and got != Fraction(3, 2)

    def test_empty_interval_rejected(self):
        with pytest.raises(ValueError):
            rational_between(Fraction(1), Fraction(1))

    def test_algebraic_endpoints(self):
        assert rational_between(sqrt_of(2), sqrt_of(3)) == Fraction(3, 2)

    def test_unbounded_sides(self):
        assert rational_between(NEG_INF, POS_INF) == Fraction(0)
        assert rational_between(Fraction(5), POS_INF) == Fraction(6)
        assert rational_between(NEG_INF, Fraction(-5)) == Fraction(-6)

    @given(rationals, rationals,
           st.lists(rationals, max_size=3))
    @settings(max_examples=150, deadline=None)
    def test_minimal_bit_size(self, a, b, excl):
        if a == b:
            return
        lo, hi = min(a, b), max(a, b)
        got = rational_between(lo, hi, exclude=excl)
        want = brute_min_rational(lo, hi, exclude=excl)
        assert got == want

    def test_seeded_sweep_against_brute_force(self):
        rng = random.Random(7)
        for _ in range(100):
            a = Fraction(rng.randint(-40, 40), rng.randint(1, 30))
            b = a + Fraction(rng.randint(1, 20), rng.randint(1, 30))
            excl = [a + (b - a) * Fraction(k, 4) for k in (1, 2, 3)][: rng.randint(0, 3)]
            assert rational_between(a, b, excl) == brute_min_rational(a, b, excl)


class TestSimplestBetween:
    def test_closed_interval_picks_endpoints(self):
        assert simplest_between(Fraction(1, 3), Fraction(1, 3)) == Fraction(1, 3)
        assert simplest_between(Fraction(1, 2), Fraction(2)) == Fraction(1)

    @given(rationals, rationals)
    def test_result_is_inside(self, a, b):
        lo, hi = min(a, b), max(a, b)
        q = simplest_between(lo, hi)
        assert lo <= q <= hi


class TestRealAlgebraic:
    def test_refinement_preserves_value(self):
        r = sqrt_of(2)
        before = (r.lo, r.hi)
        r.refine_to(Fraction(1, 10**6))
        assert r.hi - r.lo <= Fraction(1, 10**6)
        assert before[0] <= r.lo <= r.hi <= before[1]
        assert r.lo ** 2 < 2 < r.hi ** 2

    def test_compare_algebraic_vs_rational(self):
        r = sqrt_of(2)
        assert compare(r, Fraction(1)) == 1
        assert compare(r, Fraction(3, 2)) == -1
        assert compare(r, r) == 0

    def test_compare_two_algebraics(self):
        assert compare(sqrt_of(2), sqrt_of(3)) == -1
        assert compare(sqrt_of(5), sqrt_of(2)) == 1

    def test_rational_root_is_simplified(self):
        # x^2 - 4 on (1, 3) holds the rational root 2
        v = algebraic_or_rational(upoly([-4, 0, 1]), Fraction(1), Fraction(3))
        assert v == Fraction(2)

    def test_rational_approx_width(self):
        r = sqrt_of(7)
        q = rational_approx(r, Fraction(1, 1000))
        assert abs(q * q - 7) < Fraction(1, 100)

    def test_sign_at(self):
        r = sqrt_of(2)
        assert sign_at(upoly([-2, 0, 1]), r) == 0  # its defining polynomial
        assert sign_at(upoly([-1, 1]), r) == 1  # x - 1
        assert sign_at(upoly([-2, 1]), r) == -1  # x - 2
