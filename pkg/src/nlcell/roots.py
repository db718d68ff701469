"""Real root isolation for the projection machinery.

Univariate isolation runs Sturm chains over exact rationals.  Roots of a
level-j polynomial over a sample prefix are supported for prefixes whose
coordinates are rational except for at most one real algebraic coordinate;
the algebraic coordinate is eliminated with a resultant and candidate roots
are confirmed by exact sign changes, falling back to interval-box refinement
(and PrecisionExhausted on even-multiplicity roots it cannot separate).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .numeric import (
    PrecisionExhausted,
    RealAlgebraic,
    RealValue,
    UPoly,
    algebraic_or_rational,
    compare,
    sign_at,
    upoly,
    upoly_degree,
    upoly_divmod,
    upoly_eval,
    upoly_neg,
    upoly_scale,
    upoly_squarefree,
)
from .poly import Polynomial, from_upoly, resultant


# ---------------------------------------------------------------------------
# univariate isolation (Sturm)
# ---------------------------------------------------------------------------

def _sturm_chain(p: UPoly) -> List[UPoly]:
    chain = [p]
    d = tuple(c * k for k, c in enumerate(p) if k)
    if d:
        chain.append(d)
    while upoly_degree(chain[-1]) > 0:
        _, r = upoly_divmod(chain[-2], chain[-1])
        if not r:
            break
        chain.append(upoly_neg(r))
    return chain

def _variations(chain: Sequence[UPoly], x: Fraction) -> int:
    signs = []
    for q in chain:
        v = upoly_eval(q, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

def _cauchy_bound(p: UPoly) -> Fraction:
    lead = abs(p[-1])
    return 1 + max(abs(c) for c in p) / lead

def _nonroot_between(p: UPoly, lo: Fraction, hi: Fraction) -> Fraction:
    # a rational in (lo, hi) that is not a root; p has finitely many roots
    den = 2
    while True:
        m = lo + (hi - lo) / den
        if upoly_eval(p, m) != 0:
            return m
        den += 1

def isolate_real_roots(p: UPoly) -> List[Tuple[Fraction, Fraction]]:
    """Disjoint open intervals, each containing exactly one real root of p,
    with non-root endpoints.  p need not be square-free."""
    if upoly_degree(p) <= 0:
        return []
    sf = upoly_squarefree(p)
    if upoly_degree(sf) == 0:
        return []
    chain = _sturm_chain(sf)
    b = _cauchy_bound(sf)
    out: List[Tuple[Fraction, Fraction]] = []

    def recurse(lo, hi, vlo, vhi):
        n = vlo - vhi
        if n == 0:
            return
        if n == 1:
            out.append((lo, hi))
            return
        m = _nonroot_between(sf, lo, hi)
        vm = _variations(chain, m)
        recurse(lo, m, vlo, vm)
        recurse(m, hi, vm, vhi)

    recurse(-b, b, _variations(chain, -b), _variations(chain, b))
    out.sort()
    return out

def real_roots_upoly(p: UPoly) -> List[RealValue]:
    """Sorted real roots of a univariate polynomial, exact."""
    sf = upoly_squarefree(p)
    return [algebraic_or_rational(sf, lo, hi) for lo, hi in isolate_real_roots(sf)]


# ---------------------------------------------------------------------------
# roots over a sample prefix
# ---------------------------------------------------------------------------

class Nullified:
    """Marker: every coefficient of the polynomial vanishes at the prefix."""

    def __repr__(self):
        return "Nullified"

NULLIFIED = Nullified()


def _split_prefix(prefix: Sequence[RealValue]):
    """(rational assignments dict, algebraic index or None, algebraic value)."""
    rat: Dict[int, Fraction] = {}
    alg_i: Optional[int] = None
    alg_v: Optional[RealAlgebraic] = None
    for i, v in enumerate(prefix):
        if isinstance(v, RealAlgebraic):
            if alg_i is not None:
                raise PrecisionExhausted(
                    "more than one algebraic prefix coordinate is unsupported"
                )
            alg_i, alg_v = i + 1, v
        else:
            rat[i + 1] = Fraction(v)
    return rat, alg_i, alg_v


def _upoly_in(p: Polynomial, j: int) -> UPoly:
    """p must involve only x_j; extract its coefficient tuple."""
    cs = [Fraction(0)] * (p.degree(j) + 1)
    for m, c in p.coeffs.items():
        k = m[j - 1] if len(m) >= j else 0
        if any(e for i, e in enumerate(m) if i != j - 1):
            raise ValueError("polynomial is not univariate in x%d" % j)
        cs[k] += c
    return upoly(cs)


def _box_eval(p: Polynomial, boxes: Dict[int, Tuple[Fraction, Fraction]]):
    """Exact interval evaluation; every variable of p must have a box."""
    lo_t, hi_t = Fraction(0), Fraction(0)
    for m, c in p.coeffs.items():
        tlo, thi = c, c
        for i, e in enumerate(m):
            if e == 0:
                continue
            blo, bhi = boxes[i + 1]
            plo, phi = Fraction(1), Fraction(1)
            for _ in range(e):
                cands = (plo * blo, plo * bhi, phi * blo, phi * bhi)
                plo, phi = min(cands), max(cands)
            cands = (tlo * plo, tlo * phi, thi * plo, thi * phi)
            tlo, thi = min(cands), max(cands)
        lo_t += tlo
        hi_t += thi
    return lo_t, hi_t


_BOX_BUDGET = 200

# keyed by (polynomial, prefix); algebraic prefix coordinates hash by
# identity, so equal-valued but distinct prefixes miss harmlessly
_ROOTS_CACHE: Dict = {}
_ROOTS_CACHE_MAX = 200000


def real_roots(p: Polynomial, prefix: Sequence[RealValue]):
    """Roots of p(prefix, x_j), j = len(prefix)+1, as a sorted list of
    RealValue, or NULLIFIED when p vanishes identically at the prefix.
    Results are memoized; returned lists must not be mutated."""
    key = (p, tuple(prefix))
    hit = _ROOTS_CACHE.get(key)
    if hit is not None:
        return hit
    res = _real_roots_impl(p, prefix)
    if len(_ROOTS_CACHE) < _ROOTS_CACHE_MAX:
        _ROOTS_CACHE[key] = res
    return res


def _real_roots_impl(p: Polynomial, prefix: Sequence[RealValue]):
    j = len(prefix) + 1
    if p.level > j:
        raise ValueError("polynomial level exceeds prefix length + 1")
    rat, alg_i, alg_v = _split_prefix(prefix)
    q = p.substitute(rat)
    if alg_i is None:
        u = _upoly_in(q, j)
        if not u:
            return NULLIFIED
        if upoly_degree(u) == 0:
            return []
        return real_roots_upoly(u)
    return _roots_over_algebraic(q, alg_i, alg_v, j)


def _roots_over_algebraic(q: Polynomial, k: int, alpha: RealAlgebraic, j: int):
    # q involves only x_k and x_j; alpha is assigned to x_k
    coeffs = q.coefficients(j)
    signs = [sign_at(_upoly_in(c, k), alpha) if not c.is_zero() else 0 for c in coeffs]
    if all(s == 0 for s in signs):
        return NULLIFIED
    deg = max(i for i, s in enumerate(signs) if s != 0)
    if deg == 0:
        return []
    d_poly = from_upoly(alpha.defining, k)
    r = resultant(q, d_poly, k)
    u = upoly_squarefree(_upoly_in(r, j))
    candidates = isolate_real_roots(u)
    if not candidates:
        return []
    # rational sample points separating the candidate intervals
    samples = [candidates[0][0] - 1]
    for (_, hi1), (lo2, _) in zip(candidates, candidates[1:]):
        samples.append(hi1 if hi1 <= lo2 else (hi1 + lo2) / 2)
    samples.append(candidates[-1][1] + 1)

    def sign_q_at(t: Fraction) -> int:
        return sign_at(_upoly_in(q.substitute({j: t}), k), alpha)

    sample_signs = [sign_q_at(t) for t in samples]
    roots: List[RealValue] = []
    for idx, (lo, hi) in enumerate(candidates):
        sl, sr = sample_signs[idx], sample_signs[idx + 1]
        if sl != 0 and sr != 0 and sl != sr:
            roots.append(algebraic_or_rational(u, lo, hi))
            continue
        # no sign change: either not a root of q(alpha, .) or even multiplicity
        cand = algebraic_or_rational(u, lo, hi)
        a = alpha
        for _ in range(_BOX_BUDGET):
            if isinstance(cand, Fraction):
                clo = chi = cand
            else:
                clo, chi = cand._lo, cand._hi
            blo, bhi = _box_eval(q, {k: (a._lo, a._hi), j: (clo, chi)})
            if blo > 0 or bhi < 0:
                break
            a.refine_to((a._hi - a._lo) / 2)
            if isinstance(cand, RealAlgebraic):
                cand.refine_to((chi - clo) / 2)
            elif blo <= 0 <= bhi and a._hi - a._lo < Fraction(1, 2 ** 200):
                raise PrecisionExhausted(
                    "cannot separate candidate root over algebraic coordinate"
                )
        else:
            raise PrecisionExhausted(
                "cannot separate candidate root over algebraic coordinate"
            )
    return roots


def sign_at_prefix(p: Polynomial, prefix: Sequence[RealValue]) -> int:
    """Sign of p at the prefix; requires level(p) <= len(prefix)."""
    if p.level > len(prefix):
        raise ValueError("polynomial level exceeds prefix length")
    rat, alg_i, alg_v = _split_prefix(prefix)
    q = p.substitute(rat)
    if alg_i is None or q.is_constant():
        v = q.constant_value()
        return (v > 0) - (v < 0)
    return sign_at(_upoly_in(q, alg_i), alg_v)


# ---------------------------------------------------------------------------
# indexed root expressions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IndexedRoot:
    """x_j = k-th real root (1-based, ascending) of poly over the prefix."""

    poly: Polynomial
    index: int

    def to_text(self) -> str:
        return f"root({self.poly.to_text()}, {self.index})"


def eval_indexed_root(ir: IndexedRoot, prefix: Sequence[RealValue]) -> RealValue:
    rs = real_roots(ir.poly, prefix)
    if rs is NULLIFIED:
        raise ValueError("indexed root over nullifying prefix")
    if not 1 <= ir.index <= len(rs):
        raise ValueError("indexed root out of range")
    return rs[ir.index - 1]


def root_table(
    polys: Sequence[Polynomial], prefix: Sequence[RealValue]
) -> List[Tuple[RealValue, List[IndexedRoot]]]:
    """All roots of all polys over the prefix, merged and sorted; equal values
    share an entry.  Polys must already be non-nullified at the prefix.
    Within an entry, indexed roots are sorted by (degree, canonical text)."""
    entries: List[Tuple[RealValue, List[IndexedRoot]]] = []
    j = len(prefix) + 1
    for p in polys:
        rs = real_roots(p, prefix)
        if rs is NULLIFIED:
            raise ValueError("nullified polynomial in root table")
        for idx, v in enumerate(rs, start=1):
            ir = IndexedRoot(p, idx)
            for ev, irs in entries:
                if compare(ev, v) == 0:
                    irs.append(ir)
                    break
            else:
                entries.append((v, [ir]))
    entries.sort(key=lambda e: _SortKey(e[0]))
    for _, irs in entries:
        irs.sort(key=lambda ir: (ir.poly.degree(j), ir.poly.to_text()))
    return entries


class _SortKey:
    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        return compare(self.v, other.v) < 0
