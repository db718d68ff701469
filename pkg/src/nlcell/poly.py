"""Sparse multivariate polynomials over exact rationals under a fixed
variable order x1 < x2 < ... < xn.

Monomials are exponent tuples (index 0 is x1) with trailing zeros trimmed;
the level of a polynomial is the highest variable index occurring in it
(0 for constants).  Resultants are computed as fraction-free (Bareiss)
determinants of the Sylvester matrix.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Sequence, Tuple

from .numeric import UPoly, upoly


class VariableOrder:
    """Ordered variable names; index 1..n."""

    def __init__(self, names: Sequence[str]):
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable name")
        self.names = list(names)
        self._index = {name: i + 1 for i, name in enumerate(names)}

    def index(self, name: str) -> int:
        return self._index[name]

    def __len__(self):
        return len(self.names)


Monomial = Tuple[int, ...]


def _trim(exps: Sequence[int]) -> Monomial:
    exps = list(exps)
    while exps and exps[-1] == 0:
        exps.pop()
    return tuple(exps)


def _mono_key(m: Monomial):
    # lex order, highest variable most significant; total order on monomials
    return (len(m), tuple(reversed(m)))


class Polynomial:
    __slots__ = ("coeffs", "level", "_hash", "_text")

    def __init__(self, coeffs: Dict[Monomial, Fraction]):
        cleaned = {}
        level = 0
        for m, c in coeffs.items():
            if c == 0:
                continue
            m = _trim(m)
            cleaned[m] = Fraction(c)
            level = max(level, len(m))
        self.coeffs = cleaned
        self.level = level
        self._hash = None
        self._text = None

    # -- constructors -------------------------------------------------------

    @staticmethod
    def const(c) -> "Polynomial":
        return Polynomial({(): Fraction(c)})

    @staticmethod
    def var(j: int) -> "Polynomial":
        return Polynomial({tuple([0] * (j - 1) + [1]): Fraction(1)})

    @staticmethod
    def zero() -> "Polynomial":
        return Polynomial({})

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return self.level == 0

    def constant_value(self) -> Fraction:
        return self.coeffs.get((), Fraction(0))

    # -- ring operations ----------------------------------------------------

    def __add__(self, other) -> "Polynomial":
        other = _as_poly(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, Fraction(0)) + c
        return Polynomial(out)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self) -> "Polynomial":
        return Polynomial({m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) + (-self)

    def __mul__(self, other) -> "Polynomial":
        other = _as_poly(other)
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                n = max(len(m1), len(m2))
                m = _trim(
                    tuple(
                        (m1[i] if i < len(m1) else 0) + (m2[i] if i < len(m2) else 0)
                        for i in range(n)
                    )
                )
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return Polynomial(out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k: int) -> "Polynomial":
        acc = Polynomial.const(1)
        for _ in range(k):
            acc = acc * self
        return acc

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.coeffs.items()))
        return self._hash

    # -- accessors ----------------------------------------------------------

    def degree(self, j: int) -> int:
        d = 0
        for m in self.coeffs:
            if len(m) >= j:
                d = max(d, m[j - 1])
        return d

    def coefficients(self, j: int) -> List["Polynomial"]:
        """c_0..c_d with p = sum c_k * x_j^k."""
        d = self.degree(j)
        out = [dict() for _ in range(d + 1)]
        for m, c in self.coeffs.items():
            k = m[j - 1] if len(m) >= j else 0
            rest = _trim(tuple(e if i != j - 1 else 0 for i, e in enumerate(m)))
            out[k][rest] = out[k].get(rest, Fraction(0)) + c
        return [Polynomial(d_) for d_ in out]

    def ldcf(self, j: int) -> "Polynomial":
        return self.coefficients(j)[-1]

    def derivative(self, j: int) -> "Polynomial":
        out: Dict[Monomial, Fraction] = {}
        for m, c in self.coeffs.items():
            e = m[j - 1] if len(m) >= j else 0
            if e == 0:
                continue
            nm = _trim(tuple(x if i != j - 1 else x - 1 for i, x in enumerate(m)))
            out[nm] = out.get(nm, Fraction(0)) + c * e
        return Polynomial(out)

    def substitute(self, values: Dict[int, Fraction]) -> "Polynomial":
        """Substitute rationals for a subset of variables (by 1-based index)."""
        out: Dict[Monomial, Fraction] = {}
        for m, c in self.coeffs.items():
            nm = list(m)
            for j, v in values.items():
                if len(m) >= j and m[j - 1] > 0:
                    c = c * v ** m[j - 1]
                    nm[j - 1] = 0
            nm = _trim(nm)
            out[nm] = out.get(nm, Fraction(0)) + c
        return Polynomial(out)

    def specialize(self, prefix: Sequence[Fraction]) -> UPoly:
        """Univariate polynomial in x_{len(prefix)+1} after substituting the
        rational prefix for x_1..x_{len(prefix)}.  Requires level <= j."""
        j = len(prefix) + 1
        if self.level > j:
            raise ValueError("polynomial level exceeds prefix length + 1")
        vals = {i + 1: Fraction(v) for i, v in enumerate(prefix)}
        collapsed = self.substitute(vals)
        cs = [Fraction(0)] * (collapsed.degree(j) + 1)
        for m, c in collapsed.coeffs.items():
            k = m[j - 1] if len(m) >= j else 0
            cs[k] += c
        return upoly(cs)

    def evaluate(self, point: Sequence[Fraction]) -> Fraction:
        vals = {i + 1: Fraction(v) for i, v in enumerate(point)}
        r = self.substitute(vals)
        if not r.is_constant():
            raise ValueError("point does not cover all variables")
        return r.constant_value()

    # -- printing -----------------------------------------------------------

    def to_text(self) -> str:
        if self._text is not None:
            return self._text
        if not self.coeffs:
            self._text = "0"
            return self._text
        parts = []
        for m in sorted(self.coeffs, key=_mono_key, reverse=True):
            c = self.coeffs[m]
            factors = []
            if not m or abs(c) != 1:
                factors.append(str(abs(c)))
            for i, e in enumerate(m):
                if e == 1:
                    factors.append(f"x{i + 1}")
                elif e > 1:
                    factors.append(f"x{i + 1}^{e}")
            term = "*".join(factors)
            if not parts:
                parts.append(term if c > 0 else "-" + term)
            else:
                parts.append(("+ " if c > 0 else "- ") + term)
        self._text = " ".join(parts)
        return self._text

    def __repr__(self):
        return f"Polynomial({self.to_text()})"


def _as_poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    return Polynomial.const(x)


def from_upoly(cs: UPoly, j: int) -> Polynomial:
    """Lift a univariate coefficient tuple into x_j."""
    out = {}
    for k, c in enumerate(cs):
        out[tuple([0] * (j - 1) + [k]) if k else ()] = Fraction(c)
    return Polynomial(out)


# ---------------------------------------------------------------------------
# exact division, content and normalization
# ---------------------------------------------------------------------------

def div_exact(a: Polynomial, b: Polynomial) -> Polynomial:
    """Exact multivariate division; raises ArithmeticError when not exact."""
    if b.is_zero():
        raise ZeroDivisionError
    if b.is_constant():
        inv = 1 / b.constant_value()
        return Polynomial({m: c * inv for m, c in a.coeffs.items()})
    rem = dict(a.coeffs)
    quo: Dict[Monomial, Fraction] = {}
    b_lead = max(b.coeffs, key=_mono_key)
    b_lc = b.coeffs[b_lead]
    while rem:
        lead = max(rem, key=_mono_key)
        n = max(len(lead), len(b_lead))
        diff = [
            (lead[i] if i < len(lead) else 0) - (b_lead[i] if i < len(b_lead) else 0)
            for i in range(n)
        ]
        if any(d < 0 for d in diff):
            raise ArithmeticError("division not exact")
        qm = _trim(diff)
        qc = rem[lead] / b_lc
        quo[qm] = quo.get(qm, Fraction(0)) + qc
        for m, c in b.coeffs.items():
            nn = max(len(qm), len(m))
            tm = _trim(
                tuple(
                    (qm[i] if i < len(qm) else 0) + (m[i] if i < len(m) else 0)
                    for i in range(nn)
                )
            )
            nv = rem.get(tm, Fraction(0)) - qc * c
            if nv == 0:
                rem.pop(tm, None)
            else:
                rem[tm] = nv
    return Polynomial(quo)


def normalize(p: Polynomial) -> Polynomial:
    """Primitive part with positive leading coefficient (canonical monomial
    order); the zero polynomial normalizes to itself."""
    if p.is_zero():
        return p
    num_gcd = 0
    den_lcm = 1
    for c in p.coeffs.values():
        num_gcd = gcd(num_gcd, abs(c.numerator))
        den_lcm = den_lcm * c.denominator // gcd(den_lcm, c.denominator)
    scale = Fraction(den_lcm, num_gcd)
    lead = max(p.coeffs, key=_mono_key)
    if p.coeffs[lead] < 0:
        scale = -scale
    return Polynomial({m: c * scale for m, c in p.coeffs.items()})


# ---------------------------------------------------------------------------
# gcd and square-free bases
# ---------------------------------------------------------------------------

def _pseudo_rem(u: Polynomial, v: Polynomial, j: int) -> Polynomial:
    """Remainder of u by v in x_j up to powers of v's leading coefficient."""
    dv = v.degree(j)
    lv = v.ldcf(j)
    r = u
    while not r.is_zero() and r.degree(j) >= dv:
        lr = r.ldcf(j)
        shift = Polynomial.var(j) ** (r.degree(j) - dv)
        r = lv * r - lr * shift * v
    return r


def _content_pp(p: Polynomial, j: int) -> Tuple[Polynomial, Polynomial]:
    """Content (gcd of x_j-coefficients) and primitive part with respect to
    x_j; both normalized."""
    cont = Polynomial.zero()
    for c in p.coefficients(j):
        if c.is_zero():
            continue
        cont = poly_gcd(cont, c)
        if cont.is_constant():
            return Polynomial.const(1), normalize(p)
    return cont, normalize(div_exact(p, cont))


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Greatest common divisor, normalized; computed by a primitive
    pseudo-remainder sequence with recursion over the variable levels."""
    if a.is_zero():
        return normalize(b)
    if b.is_zero():
        return normalize(a)
    if a.is_constant() or b.is_constant():
        return Polynomial.const(1)
    j = max(a.level, b.level)
    if a.level < j:
        return poly_gcd(a, _content_pp(b, j)[0])
    if b.level < j:
        return poly_gcd(b, _content_pp(a, j)[0])
    ca, pa = _content_pp(a, j)
    cb, pb = _content_pp(b, j)
    cg = poly_gcd(ca, cb)
    u, v = (pa, pb) if pa.degree(j) >= pb.degree(j) else (pb, pa)
    while not v.is_zero():
        r = _pseudo_rem(u, v, j)
        u, v = v, (r if r.is_zero() else _content_pp(r, j)[1])
    if u.degree(j) == 0:
        u = Polynomial.const(1)
    else:
        u = _content_pp(u, j)[1]
    return normalize(cg * u)


def square_free_part(p: Polynomial) -> Polynomial:
    """Product of the distinct irreducible factors of p, normalized."""
    if p.level == 0:
        return normalize(p)
    g = p
    for j in range(1, p.level + 1):
        d = p.derivative(j)
        if d.is_zero():
            continue
        g = poly_gcd(g, d)
        if g.is_constant():
            break
    if g.is_constant():
        return normalize(p)
    return normalize(div_exact(p, g))


def square_free_basis(polys: Iterable[Polynomial]) -> List[Polynomial]:
    """Pairwise-coprime square-free polynomials whose product has the same
    irreducible factors as the input set.  Constants are dropped."""
    basis: List[Polynomial] = []
    for p in polys:
        q = square_free_part(normalize(p)) if not p.is_zero() else p
        if q.level == 0:
            continue
        i = 0
        while i < len(basis) and q.level > 0:
            g = poly_gcd(q, basis[i])
            if g.is_constant():
                i += 1
                continue
            # basis[i] and q are square-free, so g, basis[i]/g and q/g are
            # pairwise coprime; the split keeps the whole basis coprime
            repl = [g]
            b_rem = normalize(div_exact(basis[i], g))
            if b_rem.level > 0:
                repl.append(b_rem)
            basis[i:i + 1] = repl
            i += len(repl)
            q = normalize(div_exact(q, g))
        if q.level > 0:
            basis.append(q)
    return basis


# ---------------------------------------------------------------------------
# resultants
# ---------------------------------------------------------------------------

def _bareiss_det(mat: List[List[Polynomial]]) -> Polynomial:
    """Fraction-free determinant; entries are polynomials."""
    n = len(mat)
    if n == 0:
        return Polynomial.const(1)
    m = [row[:] for row in mat]
    sign = 1
    prev = Polynomial.const(1)
    for k in range(n - 1):
        if m[k][k].is_zero():
            for r in range(k + 1, n):
                if not m[r][k].is_zero():
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return Polynomial.zero()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = div_exact(num, prev)
            m[i][k] = Polynomial.zero()
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return -det if sign < 0 else det


def sylvester_matrix(p: Polynomial, q: Polynomial, j: int) -> List[List[Polynomial]]:
    dp, dq = p.degree(j), q.degree(j)
    pc = p.coefficients(j)
    qc = q.coefficients(j)
    size = dp + dq
    mat = [[Polynomial.zero() for _ in range(size)] for _ in range(size)]
    for r in range(dq):
        for k in range(dp + 1):
            mat[r][r + k] = pc[dp - k]
    for r in range(dp):
        for k in range(dq + 1):
            mat[dq + r][r + k] = qc[dq - k]
    return mat


def resultant(p: Polynomial, q: Polynomial, j: int) -> Polynomial:
    """Raw resultant of p and q with respect to x_j (not normalized)."""
    dp, dq = p.degree(j), q.degree(j)
    if dp == 0 and dq == 0:
        return Polynomial.const(1)
    if dp == 0:
        return p ** dq
    if dq == 0:
        return q ** dp
    return _bareiss_det(sylvester_matrix(p, q, j))


def discriminant(p: Polynomial, j: int) -> Polynomial:
    """Raw resultant of p and its x_j-derivative (not normalized)."""
    if p.degree(j) == 0:
        raise ValueError("discriminant of constant in x_j")
    return resultant(p, p.derivative(j), j)


def mult_proxy(p: Polynomial, q: Polynomial, j: int) -> int:
    """Multiplication-count proxy for a resultant task: deg(p)*deg(q)."""
    return p.degree(j) * q.degree(j)


def max_var_degree(p: Polynomial) -> int:
    d = 0
    for m in p.coeffs:
        for e in m:
            d = max(d, e)
    return d
