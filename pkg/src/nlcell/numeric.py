"""Exact real number arithmetic: rationals, real algebraic numbers and
minimal-bit-size rational selection.

Real values are either `fractions.Fraction` or `RealAlgebraic` (a square-free
defining polynomial together with an open isolating interval).  Univariate
polynomials are represented as tuples of Fraction coefficients, low degree
first, with no trailing zeros.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Iterable, Sequence, Union


class PrecisionExhausted(Exception):
    """Raised when refinement cannot certify a sign within the step budget."""


# ---------------------------------------------------------------------------
# univariate polynomial helpers (coefficient tuples, low degree first)
# ---------------------------------------------------------------------------

UPoly = tuple  # tuple[Fraction, ...]


def upoly(coeffs: Iterable) -> UPoly:
    cs = [Fraction(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def upoly_degree(p: UPoly) -> int:
    return len(p) - 1 if p else -1


def upoly_eval(p: UPoly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def upoly_derivative(p: UPoly) -> UPoly:
    return upoly(i * c for i, c in enumerate(p) if i > 0) if len(p) > 1 else ()


def upoly_neg(p: UPoly) -> UPoly:
    return tuple(-c for c in p)


def upoly_sub(p: UPoly, q: UPoly) -> UPoly:
    n = max(len(p), len(q))
    cs = [(p[i] if i < len(p) else 0) - (q[i] if i < len(q) else 0) for i in range(n)]
    return upoly(cs)


def upoly_scale(p: UPoly, c: Fraction) -> UPoly:
    return upoly(ci * c for ci in p)


def upoly_divmod(p: UPoly, q: UPoly):
    if not q:
        raise ZeroDivisionError("division by zero polynomial")
    rem = list(p)
    quo = [Fraction(0)] * max(len(p) - len(q) + 1, 0)
    dq = len(q) - 1
    lc = q[-1]
    while len(rem) - 1 >= dq and any(c != 0 for c in rem):
        while rem and rem[-1] == 0:
            rem.pop()
        if len(rem) - 1 < dq:
            break
        k = len(rem) - 1 - dq
        f = rem[-1] / lc
        quo[k] = f
        for i in range(len(q)):
            rem[k + i] -= f * q[i]
        rem.pop()
    return upoly(quo), upoly(rem)


def upoly_gcd(p: UPoly, q: UPoly) -> UPoly:
    a, b = p, q
    while b:
        a, b = b, upoly_divmod(a, b)[1]
    if a and a[-1] != 1:
        a = upoly_scale(a, 1 / a[-1])
    return a


def upoly_squarefree(p: UPoly) -> UPoly:
    if upoly_degree(p) < 1:
        return p
    g = upoly_gcd(p, upoly_derivative(p))
    if upoly_degree(g) < 1:
        return p
    return upoly_divmod(p, g)[0]


def upoly_eval_interval(p: UPoly, lo: Fraction, hi: Fraction):
    """Exact interval evaluation of p over [lo, hi] via Horner."""
    alo, ahi = Fraction(0), Fraction(0)
    for c in reversed(p):
        cands = (alo * lo, alo * hi, ahi * lo, ahi * hi)
        alo, ahi = min(cands) + c, max(cands) + c
    return alo, ahi


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def bitlength(n: int) -> int:
    n = abs(int(n))
    return 1 if n == 0 else n.bit_length()


def bit_size(q: Fraction) -> int:
    """bitlength(|numerator|) + bitlength(denominator), bitlength(0) = 1."""
    return bitlength(q.numerator) + bitlength(q.denominator)


# ---------------------------------------------------------------------------
# real algebraic numbers
# ---------------------------------------------------------------------------

_REFINE_BUDGET = 4000


class RealAlgebraic:
    """A real algebraic number: square-free defining polynomial with an open
    rational isolating interval containing exactly one of its real roots.

    The interval is narrowed in place as a cache; narrowing never changes the
    represented number.  Use `algebraic_or_rational` to construct: it strips
    rational roots so a RealAlgebraic is always irrational.
    """

    __slots__ = ("defining", "_lo", "_hi")

    def __init__(self, defining: UPoly, lo: Fraction, hi: Fraction):
        self.defining = defining
        self._lo = Fraction(lo)
        self._hi = Fraction(hi)

    @property
    def lo(self) -> Fraction:
        return self._lo

    @property
    def hi(self) -> Fraction:
        return self._hi

    def _bisect(self) -> None:
        mid = (self._lo + self._hi) / 2
        # no rational root lies in the interval, so the sign at mid is nonzero
        if _sgn(upoly_eval(self.defining, self._lo)) != _sgn(upoly_eval(self.defining, mid)):
            self._hi = mid
        else:
            self._lo = mid

    def refine_to(self, width: Fraction) -> None:
        while self._hi - self._lo > width:
            self._bisect()

    def __repr__(self):
        return f"RealAlgebraic({list(self.defining)}, ({self._lo}, {self._hi}))"


RealValue = Union[Fraction, RealAlgebraic]


def simplest_between(x: Fraction, y: Fraction) -> Fraction:
    """The unique rational of minimal denominator in the closed interval
    [x, y] (ties by minimal numerator magnitude), via Stern-Brocot descent."""
    if x > y:
        raise ValueError("empty interval")
    if x <= 0 <= y:
        return Fraction(0)
    if y < 0:
        return -simplest_between(-y, -x)
    # 0 < x <= y
    n = -((-x.numerator) // x.denominator)  # ceil(x)
    if n <= y:
        return Fraction(n)
    fx = x.numerator // x.denominator
    return fx + 1 / simplest_between(1 / (y - fx), 1 / (x - fx))


def _rational_root_in(p: UPoly, lo: Fraction, hi: Fraction):
    """The rational root of p in the isolating interval (lo, hi), or None.

    Any rational root written in lowest terms has a denominator dividing the
    leading coefficient of the primitive integer form of p.  Once the interval
    is narrower than 1/(2*D^2), it contains at most one rational with
    denominator <= D, and that one is found by Stern-Brocot descent.
    """
    from math import gcd

    den_lcm = 1
    for c in p:
        den_lcm = den_lcm * c.denominator // gcd(den_lcm, c.denominator)
    ip = [int(c * den_lcm) for c in p]
    g = 0
    for c in ip:
        g = gcd(g, abs(c))
    cap = abs(ip[-1]) // g
    target = Fraction(1, 2 * cap * cap)
    while hi - lo > target:
        mid = (lo + hi) / 2
        s = _sgn(upoly_eval(p, mid))
        if s == 0:
            return mid
        if s != _sgn(upoly_eval(p, lo)):
            hi = mid
        else:
            lo = mid
    cand = simplest_between(lo, hi)
    if cand.denominator <= cap and upoly_eval(p, cand) == 0:
        return cand
    return None


def algebraic_or_rational(defining: Sequence, lo, hi) -> RealValue:
    """Build the real value isolated by (lo, hi) for the given polynomial.

    The interval must contain exactly one real root of the polynomial, with
    nonzero values at both endpoints.  Returns a Fraction when that root is
    rational, else a RealAlgebraic over the square-free part.
    """
    p = upoly_squarefree(upoly(defining))
    lo, hi = Fraction(lo), Fraction(hi)
    if _sgn(upoly_eval(p, lo)) * _sgn(upoly_eval(p, hi)) >= 0:
        raise ValueError("no sign change: interval does not isolate a root")
    r = _rational_root_in(p, lo, hi)
    if r is not None:
        return r
    # re-narrowed bounds from the rational-root scan are not kept; the
    # original interval is still isolating
    return RealAlgebraic(p, lo, hi)


def refine(a: RealValue, width) -> RealValue:
    """Return a value equal to `a` whose isolating interval is <= width."""
    if isinstance(a, Fraction):
        return a
    width = Fraction(width)
    if a.hi - a.lo <= width:
        return a
    b = RealAlgebraic(a.defining, a.lo, a.hi)
    b.refine_to(width)
    return b


def sign_at(p, a: RealValue) -> int:
    """Exact sign of the univariate polynomial p at the real value a."""
    p = upoly(p)
    if isinstance(a, Fraction):
        return _sgn(upoly_eval(p, a))
    if not p:
        return 0
    g = upoly_gcd(p, a.defining)
    if upoly_degree(g) >= 1:
        if _sgn(upoly_eval(g, a.lo)) != _sgn(upoly_eval(g, a.hi)):
            return 0
    for _ in range(_REFINE_BUDGET):
        vlo, vhi = upoly_eval_interval(p, a.lo, a.hi)
        if vlo > 0:
            return 1
        if vhi < 0:
            return -1
        a._bisect()
    raise PrecisionExhausted("sign_at did not converge")


def compare(a: RealValue, b: RealValue) -> int:
    """Total order on real values: -1, 0 or 1."""
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return _sgn(a - b)
    if isinstance(a, Fraction):
        return -compare(b, a)
    if isinstance(b, Fraction):
        # a algebraic (irrational), b rational: a == b impossible
        while a.lo < b < a.hi:
            a._bisect()
        return -1 if a.hi <= b else 1
    if a is b:
        return 0
    g = upoly_gcd(a.defining, b.defining)
    if upoly_degree(g) >= 1:
        l, h = max(a.lo, b.lo), min(a.hi, b.hi)
        if l < h and _sgn(upoly_eval(g, l)) != _sgn(upoly_eval(g, h)):
            return 0
    while not (a.hi <= b.lo or b.hi <= a.lo):
        a._bisect()
        b._bisect()
    return -1 if a.hi <= b.lo else 1


def rv_equal(a: RealValue, b: RealValue) -> bool:
    return compare(a, b) == 0


def rational_approx(a: RealValue, width) -> Fraction:
    """Some rational within `width` of a (the interval midpoint)."""
    if isinstance(a, Fraction):
        return a
    a = refine(a, width)
    return (a.lo + a.hi) / 2


# ---------------------------------------------------------------------------
# extended reals
# ---------------------------------------------------------------------------

class _Inf:
    __slots__ = ("sign",)

    def __init__(self, sign):
        self.sign = sign

    def __repr__(self):
        return "+inf" if self.sign > 0 else "-inf"


NEG_INF = _Inf(-1)
POS_INF = _Inf(1)

ExtendedReal = Union[_Inf, Fraction, RealAlgebraic]


def ext_compare(a: ExtendedReal, b: ExtendedReal) -> int:
    if isinstance(a, _Inf) and isinstance(b, _Inf):
        return _sgn(a.sign - b.sign)
    if isinstance(a, _Inf):
        return a.sign
    if isinstance(b, _Inf):
        return -b.sign
    return compare(a, b)


# ---------------------------------------------------------------------------
# minimal-bit-size rational selection
# ---------------------------------------------------------------------------

def _simplest_open_rat(x, y) -> Fraction:
    """Simplest rational strictly between x and y (rationals or the infinity
    markers), minimizing denominator and |numerator| simultaneously, via
    Stern-Brocot descent."""
    if (x is NEG_INF or x < 0) and (y is POS_INF or y > 0):
        return Fraction(0)
    if y is not POS_INF and y <= 0:  # mirror the negative side
        return -_simplest_open_rat(-y, POS_INF if x is NEG_INF else -x)
    # 0 <= x < y, x rational
    n = x.numerator // x.denominator + 1  # floor(x) + 1 > x
    if y is POS_INF or n < y:
        return Fraction(n)
    f = n - 1
    sub_hi = POS_INF if x == f else 1 / (x - f)
    return f + 1 / _simplest_open_rat(1 / (y - f), sub_hi)


def _simplest_open(lo: ExtendedReal, hi: ExtendedReal) -> Fraction:
    """Simplest rational strictly inside (lo, hi); endpoints may be rational,
    algebraic, or infinite, and the interval must be nonempty."""
    if not isinstance(lo, RealAlgebraic) and not isinstance(hi, RealAlgebraic):
        return _simplest_open_rat(lo, hi)
    # replace algebraic endpoints by outer rational enclosures: the simplest
    # rational of the (superset) enclosure interval equals the answer as soon
    # as it lands strictly inside (lo, hi), which refinement forces because
    # the enclosure gaps shrink to irrational points
    width = Fraction(1, 16)
    while True:
        a, b = lo, hi
        if isinstance(lo, RealAlgebraic):
            lo.refine_to(width)
            a = lo.lo
        if isinstance(hi, RealAlgebraic):
            hi.refine_to(width)
            b = hi.hi
        q = _simplest_open_rat(a, b)
        if ext_compare(lo, q) < 0 and ext_compare(q, hi) < 0:
            return q
        width /= 256


def rational_between(lo: ExtendedReal, hi: ExtendedReal,
                     exclude: Sequence[RealValue] = ()) -> Fraction:
    """The rational of minimal bit size strictly inside (lo, hi), not equal to
    any excluded value.  Ties: smaller denominator, then smaller |numerator|,
    then the positive candidate.

    Best-first search: the simplest rational of an open interval is its
    unique key-minimal member, and an excluded hit splits the interval in two
    around the excluded point, so a heap ordered by key yields candidates in
    key order and pops at most len(exclude) rejected entries.
    """
    if ext_compare(lo, hi) >= 0:
        raise ValueError("empty interval")
    exclude = list(exclude)

    def key(q: Fraction):
        return (bit_size(q), q.denominator, abs(q.numerator), -_sgn(q.numerator))

    q0 = _simplest_open(lo, hi)
    heap = [(key(q0), q0, lo, hi)]
    while heap:
        _, q, a, b = heapq.heappop(heap)
        if all(compare(q, e) != 0 for e in exclude):
            return q
        for x, y in ((a, q), (q, b)):
            qq = _simplest_open(x, y)
            heapq.heappush(heap, (key(qq), qq, x, y))
    raise ValueError("no admissible rational found in interval")
