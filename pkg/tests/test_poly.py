"""Sparse multivariate polynomials, resultants and discriminants, checked
against sympy."""

import random
from fractions import Fraction

import pytest
import sympy

from nlcell.poly import (
    poly_gcd,
    square_free_basis,
    square_free_part,
    Polynomial,
    discriminant,
    max_var_degree,
    normalize,
    resultant,
)
from oracles import rand_poly, sympy_resultant, to_sympy

x1, x2, x3 = Polynomial.var(1), Polynomial.var(2), Polynomial.var(3)


def C(v):
    return Polynomial.const(Fraction(v))


class TestArithmetic:
    def test_ring_identities(self):
        p = x1 ** 2 - C(2) * x1 * x2 + x2 ** 2
        q = (x1 - x2) ** 2
        assert p == q
        assert (p - q).is_zero()

    def test_seeded_sweep_against_sympy(self):
        rng = random.Random(11)
        for _ in range(60):
            p = rand_poly(rng, 3, 3)
            q = rand_poly(rng, 3, 3)
            assert to_sympy(p * q) == sympy.expand(to_sympy(p) * to_sympy(q))
            assert to_sympy(p + q) == sympy.expand(to_sympy(p) + to_sympy(q))

    def test_level_and_degree(self):
        p = x1 * x3 ** 2 + x2
        assert p.level == 3
        assert p.degree(3) == 2
        assert p.degree(1) == 1
        assert max_var_degree(p) == 2

    def test_specialize_and_evaluate(self):
        p = x1 ** 2 + x2 ** 2 - C(1)
        u = p.specialize((Fraction(2),))  # x2^2 + 3 as a univariate
        assert u == (Fraction(3), Fraction(0), Fraction(1))
        assert p.evaluate((Fraction(3, 5), Fraction(4, 5))) == 0


class TestNormalize:
    def test_primitive_positive_leading(self):
        p = C(-4) * x1 ** 2 + C(6)
        n = normalize(p)
        assert n == C(2) * x1 ** 2 - C(3)

    def test_zero_stays_zero(self):
        assert normalize(C(0)).is_zero()

    def test_idempotent(self):
        rng = random.Random(13)
        for _ in range(40):
            p = rand_poly(rng, 2, 4)
            assert normalize(normalize(p)) == normalize(p)


class TestResultant:
    def test_textbook_pair(self):
        # res_x(x^2 - 2, x - y) = y^2 - 2
        p = x1 ** 2 - C(2)
        q = x1 - x2
        assert resultant(p, q, 1) == x2 ** 2 - C(2)

    def test_seeded_sweep_against_sylvester_determinant(self):
        rng = random.Random(17)
        checked = 0
        while checked < 60:
            p = rand_poly(rng, 2, 3)
            q = rand_poly(rng, 2, 3)
            if p.degree(2) < 1 or q.degree(2) < 1:
                continue
            assert to_sympy(resultant(p, q, 2)) == sympy_resultant(p, q, 2)
            checked += 1

    def test_common_root_gives_zero_resultant(self):
        p = (x1 - x2) * (x1 + C(1))
        q = (x1 - x2) * (x1 - C(3))
        assert resultant(p, q, 1).is_zero()

    def test_three_variables(self):
        rng = random.Random(19)
        checked = 0
        while checked < 20:
            p = rand_poly(rng, 3, 2)
            q = rand_poly(rng, 3, 2)
            if p.degree(3) < 1 or q.degree(3) < 1:
                continue
            assert to_sympy(resultant(p, q, 3)) == sympy_resultant(p, q, 3)
            checked += 1


class TestDiscriminant:
    def test_matches_resultant_with_derivative(self):
        rng = random.Random(29)
        checked = 0
        while checked < 30:
            p = rand_poly(rng, 2, 4)
            if p.degree(2) < 2:
                continue
            d = discriminant(p, 2)
            assert to_sympy(d) == sympy_resultant(p, p.derivative(2), 2)
            checked += 1

    def test_repeated_root_vanishes(self):
        p = (x1 - x2) ** 2
        assert discriminant(p, 1).is_zero()


class TestSpecializationCommutes:
    def test_resultant_specializes_exactly(self):
        """Specializing the symbolic resultant at a rational equals the
        univariate resultant of the specializations (non-vanishing leading
        coefficients)."""
        rng = random.Random(23)
        checked = 0
        while checked < 40:
            p = rand_poly(rng, 2, 3)
            q = rand_poly(rng, 2, 3)
            if p.degree(2) < 1 or q.degree(2) < 1:
                continue
            a = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
            lc_p = p.coefficients(2)[-1].evaluate((a,) * lc_level(p))
            lc_q = q.coefficients(2)[-1].evaluate((a,) * lc_level(q))
            if lc_p == 0 or lc_q == 0:
                continue
            r = resultant(p, q, 2)
            sy = sympy_resultant(p, q, 2).subs(sympy.Symbol("x1"), sympy.Rational(a))
            got = to_sympy(r).subs(sympy.Symbol("x1"), sympy.Rational(a))
            assert got == sy
            checked += 1


def lc_level(p):
    return 1 if p.coefficients(2)[-1].level >= 1 else 0


class TestGcdAndSquareFree:
    def test_gcd_textbook(self):
        a = (x1 - x2) * (x1 + x2)
        b = (x1 - x2) * (x1 ** 2 + C(1))
        g = poly_gcd(a, b)
        assert g == normalize(x1 - x2)

    def test_gcd_coprime_is_constant(self):
        assert poly_gcd(x1 ** 2 + C(1), x2 - x1).is_constant()

    def test_gcd_seeded_sweep_against_sympy(self):
        rng = random.Random(77)
        checked = 0
        while checked < 40:
            f = rand_poly(rng, 2, 2)
            a = rand_poly(rng, 2, 2)
            b = rand_poly(rng, 2, 2)
            if f.is_zero() or a.is_zero() or b.is_zero():
                continue
            g = poly_gcd(f * a, f * b)
            want = sympy.gcd(to_sympy(f * a), to_sympy(f * b))
            # both are normalized only up to a rational unit
            q = sympy.simplify(to_sympy(g) / want)
            assert q.is_constant(), (g, want)
            checked += 1

    def test_square_free_part_strips_multiplicities(self):
        p = (x1 - C(1)) ** 3 * (x2 + x1) ** 2 * (x2 ** 2 + C(1))
        sf = square_free_part(p)
        want = normalize((x1 - C(1)) * (x2 + x1) * (x2 ** 2 + C(1)))
        assert sf == want

    def test_square_free_part_of_square_free_is_identity(self):
        p = x1 ** 2 + x2 ** 2 - C(1)
        assert square_free_part(p) == normalize(p)

    def test_basis_splits_common_factor(self):
        # the pair that motivated the basis: both sharing the factor x2
        p2 = -C(3) * x2 ** 3 + C(2) * x1 ** 2 * x2 ** 2 - C(2) * x2 ** 2
        p3 = C(3) * x1 * x2 ** 2 - x1 * x2
        basis = square_free_basis([p2, p3])
        texts = sorted(b.to_text() for b in basis)
        assert "x2" in texts
        for i in range(len(basis)):
            for k in range(i + 1, len(basis)):
                assert poly_gcd(basis[i], basis[k]).is_constant()

    def test_basis_seeded_sweep_pairwise_coprime(self):
        rng = random.Random(78)
        for _ in range(25):
            polys = [rand_poly(rng, 2, 3) for _ in range(3)]
            polys = [p for p in polys if not p.is_zero()]
            basis = square_free_basis(polys)
            prod_in = sympy.prod([to_sympy(p) for p in polys])
            for i, b in enumerate(basis):
                sb = to_sympy(b)
                # square-free and dividing the input product
                deriv_gcd = sympy.gcd(sympy.gcd(sb, sb.diff(sympy.Symbol("x1"))),
                                      sb.diff(sympy.Symbol("x2")))
                assert deriv_gcd.is_constant()
                assert sympy.rem(sympy.Poly(prod_in, *sympy.symbols("x1 x2")),
                                 sympy.Poly(sb, *sympy.symbols("x1 x2"))) is not None
                for k in range(i + 1, len(basis)):
                    assert poly_gcd(b, basis[k]).is_constant()
            # every input's square-free part divides the basis product
            prod_basis = sympy.prod([to_sympy(b) for b in basis])
            for p in polys:
                sp = to_sympy(square_free_part(p))
                _, r = sympy.div(prod_basis, sp, *sympy.symbols("x1 x2"))
                assert r == 0, (p, basis)
