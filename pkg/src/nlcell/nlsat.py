"""Minimal MCSAT-style solver for quantifier-free nonlinear real arithmetic.

The trail interleaves Boolean decisions/propagations with theory assignments
x_1, x_2, ... in variable order.  Before assigning x_j, the feasible set of
the asserted level-j constraints is computed exactly; if it is empty, a
greedily minimized core is explained by a single cell construction around the
conflicting prefix extended with a witness value, and the learned clause
(not C or not phi_S) drives standard resolution-based conflict analysis.
When the cell construction FAILs (nullification, precision), a point
exclusion clause is learned instead, up to a fallback budget.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union

from .numeric import (
    NEG_INF,
    POS_INF,
    PrecisionExhausted,
    RealAlgebraic,
    RealValue,
    bit_size,
    compare,
    ext_compare,
    rational_approx,
    rational_between,
)
from .poly import Polynomial, normalize
from .roots import (
    NULLIFIED,
    IndexedRoot,
    eval_indexed_root,
    isolate_real_roots,
    real_roots,
    sign_at_prefix,
)
from .apx import ApproxConfig, ApxState, apx_scc
from .scc import CellDescription, ConstructionFailed, explanation_clause

RELS = ("<", "<=", "=", "!=", ">=", ">")
_ALLOWED = {
    "<": {-1},
    "<=": {-1, 0},
    "=": {0},
    "!=": {-1, 1},
    ">=": {0, 1},
    ">": {1},
}
_MIRROR = {"<": ">=", "<=": ">", "=": "!=", "!=": "=", ">=": "<", ">": "<="}


# ---------------------------------------------------------------------------
# atoms, literals, clauses
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PolyAtom:
    """p rel 0."""

    poly: Polynomial
    rel: str

    @property
    def level(self) -> int:
        return self.poly.level

    def to_text(self) -> str:
        return f"{self.poly.to_text()} {self.rel} 0"


@dataclass(frozen=True)
class ExtAtom:
    """x_level rel root expression."""

    level: int
    rel: str
    xi: IndexedRoot

    def to_text(self) -> str:
        return f"x{self.level} {self.rel} {self.xi.to_text()}"


@dataclass(frozen=True)
class BoolAtom:
    """Fresh selector introduced by CNF conversion."""

    name: str
    level = 0

    def to_text(self) -> str:
        return self.name


Atom = Union[PolyAtom, ExtAtom, BoolAtom]


@dataclass(frozen=True)
class Literal:
    atom: Atom
    positive: bool = True

    def neg(self) -> "Literal":
        return Literal(self.atom, not self.positive)

    def to_text(self) -> str:
        return self.atom.to_text() if self.positive else f"not({self.atom.to_text()})"


def negate(x) -> Literal:
    if isinstance(x, Literal):
        return x.neg()
    return Literal(x, False)


def ext_literal(j: int, rel: str, xi: IndexedRoot) -> Literal:
    return Literal(ExtAtom(j, rel, xi), True)


def poly_atom(p: Polynomial, rel: str) -> PolyAtom:
    """Canonical form: normalized polynomial, relation mirrored if the
    normalization flipped the sign."""
    q = normalize(p)
    if not q.is_zero():
        lead = max(p.coeffs, key=lambda m: (len(m), tuple(reversed(m))))
        if p.coeffs[lead] < 0:
            rel = {"<": ">", "<=": ">=", ">": "<", ">=": "<=", "=": "=", "!=": "!="}[rel]
    return PolyAtom(q, rel)


@dataclass(frozen=True)
class Clause:
    lits: Tuple[Literal, ...]

    def to_text(self) -> str:
        return " | ".join(l.to_text() for l in self.lits) if self.lits else "[]"

    def is_tautology(self) -> bool:
        s = set(self.lits)
        return any(l.neg() in s for l in self.lits)


def make_clause(lits) -> Clause:
    seen, out = set(), []
    for l in lits:
        if l not in seen:
            seen.add(l)
            out.append(l)
    return Clause(tuple(out))


@dataclass
class Formula:
    n_vars: int
    clauses: List[Clause]
    var_names: Optional[List[str]] = None


# ---------------------------------------------------------------------------
# CNF conversion (terms: ("and", ...), ("or", ...), ("not", t), Literal)
# ---------------------------------------------------------------------------

def _nnf(t, positive=True):
    if isinstance(t, Literal):
        return t if positive else t.neg()
    if isinstance(t, bool):
        return t if positive else not t
    op = t[0]
    if op == "not":
        return _nnf(t[1], not positive)
    if op == "and":
        return (("and" if positive else "or"),) + tuple(_nnf(a, positive) for a in t[1:])
    if op == "or":
        return (("or" if positive else "and"),) + tuple(_nnf(a, positive) for a in t[1:])
    raise ValueError(f"unknown connective {op!r}")


_REL_TEST = {
    "<": lambda v: v < 0,
    "<=": lambda v: v <= 0,
    ">": lambda v: v > 0,
    ">=": lambda v: v >= 0,
    "=": lambda v: v == 0,
    "!=": lambda v: v != 0,
}


def _const_truth(lit: Literal) -> Optional[bool]:
    """Fixed truth value of a literal over a constant polynomial, else None."""
    a = lit.atom
    if not isinstance(a, PolyAtom) or a.level != 0:
        return None
    v = a.poly.coeffs.get((), Fraction(0))
    t = _REL_TEST[a.rel](v)
    return t if lit.positive else not t


def to_cnf(term, fresh_prefix: str = "_s") -> List[Clause]:
    """Equisatisfiable CNF; selectors introduced only when an or-branch would
    otherwise duplicate clauses."""
    counter = [0]

    def cnf(t) -> Optional[List[List[Literal]]]:
        # None means "true" (no clauses); [[]] is the false clause
        if t is True:
            return []
        if t is False:
            return [[]]
        if isinstance(t, Literal):
            v = _const_truth(t)
            if v is None:
                return [[t]]
            return [] if v else [[]]
        op = t[0]
        if op == "and":
            out = []
            for a in t[1:]:
                out.extend(cnf(a))
            return out
        # or
        acc: List[List[Literal]] = [[]]
        for a in t[1:]:
            part = cnf(a)
            if not part:
                return []  # true disjunct
            if len(acc) > 1 and len(part) > 1:
                counter[0] += 1
                b = Literal(BoolAtom(f"{fresh_prefix}{counter[0]}"))
                out = [[b.neg()] + c for c in part]
                part = [[b]]
                acc = [c1 + c2 for c1 in acc for c2 in part] + out
            else:
                acc = [c1 + c2 for c1 in acc for c2 in part]
        return acc

    clauses = cnf(_nnf(term))
    return [make_clause(c) for c in clauses]


# ---------------------------------------------------------------------------
# theory evaluation
# ---------------------------------------------------------------------------

def atom_level(a: Atom) -> Optional[int]:
    if isinstance(a, BoolAtom):
        return None
    return a.level


def eval_atom(a: Atom, s: Sequence[RealValue]) -> bool:
    """Truth of a theory atom under the (sufficiently long) assignment."""
    if isinstance(a, PolyAtom):
        return sign_at_prefix(a.poly, s[: a.level] if a.level else []) in _ALLOWED[a.rel]
    if isinstance(a, ExtAtom):
        try:
            v = eval_indexed_root(a.xi, s[: a.level - 1])
        except ValueError:
            return False  # undefined root expression: constraint is false
        return compare(s[a.level - 1], v) in _ALLOWED[a.rel]
    raise ValueError("boolean atom has no theory value")


# ---------------------------------------------------------------------------
# feasible sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    lo: object  # RealValue or NEG_INF
    lo_strict: bool
    hi: object  # RealValue or POS_INF
    hi_strict: bool

    def is_point(self) -> bool:
        return (
            self.lo is not NEG_INF
            and self.hi is not POS_INF
            and ext_compare(self.lo, self.hi) == 0
        )


class FeasibleSet:
    """Sorted disjoint intervals; exact endpoints."""

    def __init__(self, intervals: List[Interval]):
        self.intervals = intervals

    @staticmethod
    def full() -> "FeasibleSet":
        return FeasibleSet([Interval(NEG_INF, True, POS_INF, True)])

    @staticmethod
    def empty() -> "FeasibleSet":
        return FeasibleSet([])

    def is_empty(self) -> bool:
        return not self.intervals

    def contains(self, v: RealValue) -> bool:
        for iv in self.intervals:
            if iv.lo is not NEG_INF:
                c = compare(v, iv.lo)
                if c < 0 or (c == 0 and iv.lo_strict):
                    continue
            if iv.hi is not POS_INF:
                c = compare(v, iv.hi)
                if c > 0 or (c == 0 and iv.hi_strict):
                    continue
            return True
        return False

    def intersect(self, other: "FeasibleSet") -> "FeasibleSet":
        out = []
        for a in self.intervals:
            for b in other.intervals:
                lo, los = _max_lo(a, b)
                hi, his = _min_hi(a, b)
                c = ext_compare(lo, hi)
                if c > 0 or (c == 0 and (los or his)):
                    continue
                out.append(Interval(lo, los, hi, his))
        return FeasibleSet(out)


def _max_lo(a: Interval, b: Interval):
    c = ext_compare(a.lo, b.lo)
    if c > 0:
        return a.lo, a.lo_strict
    if c < 0:
        return b.lo, b.lo_strict
    return a.lo, a.lo_strict or b.lo_strict


def _min_hi(a: Interval, b: Interval):
    c = ext_compare(a.hi, b.hi)
    if c < 0:
        return a.hi, a.hi_strict
    if c > 0:
        return b.hi, b.hi_strict
    return a.hi, a.hi_strict or b.hi_strict


def _set_from_roots(roots: List[RealValue], signs_between: List[int], allowed) -> FeasibleSet:
    """Roots r_1..r_m split the line into m+1 regions; signs_between holds the
    sign in each region.  Consecutive allowed pieces (regions and roots, where
    a root's sign is 0) merge into maximal intervals."""
    m = len(roots)
    root_ok = 0 in allowed
    # alternating pieces: region 0, root 0, region 1, ..., root m-1, region m
    flags: List[bool] = []
    for i in range(m):
        flags.append(signs_between[i] in allowed)
        flags.append(root_ok)
    flags.append(signs_between[m] in allowed)

    def piece_lo(k: int):
        if k % 2 == 1:  # root piece
            return roots[k // 2], False
        i = k // 2
        return (NEG_INF, True) if i == 0 else (roots[i - 1], True)

    def piece_hi(k: int):
        if k % 2 == 1:
            return roots[k // 2], False
        i = k // 2
        return (POS_INF, True) if i == m else (roots[i], True)

    ivs: List[Interval] = []
    k = 0
    while k < len(flags):
        if not flags[k]:
            k += 1
            continue
        start = k
        while k < len(flags) and flags[k]:
            k += 1
        lo, los = piece_lo(start)
        hi, his = piece_hi(k - 1)
        ivs.append(Interval(lo, los, hi, his))
    return FeasibleSet(ivs)


def poly_solution_set(
    p: Polynomial, rel: str, prefix: Sequence[RealValue]
) -> FeasibleSet:
    """Exact solution set over x_{len(prefix)+1} of 'p rel 0'."""
    allowed = _ALLOWED[rel]
    rs = real_roots(p, prefix)
    if rs is NULLIFIED:
        return FeasibleSet.full() if 0 in allowed else FeasibleSet.empty()
    if isinstance(rs, list) and not rs:
        t = Fraction(0)
        s = sign_at_prefix(p, tuple(prefix) + (t,))
        return FeasibleSet.full() if s in allowed else FeasibleSet.empty()
    samples = []
    bounds = [NEG_INF] + list(rs) + [POS_INF]
    for a, b in zip(bounds, bounds[1:]):
        samples.append(rational_between(a, b))
    signs = [sign_at_prefix(p, tuple(prefix) + (t,)) for t in samples]
    return _set_from_roots(list(rs), signs, allowed)


def _rel_interval(rel: str, v: RealValue) -> FeasibleSet:
    if rel == "<":
        return FeasibleSet([Interval(NEG_INF, True, v, True)])
    if rel == "<=":
        return FeasibleSet([Interval(NEG_INF, True, v, False)])
    if rel == "=":
        return FeasibleSet([Interval(v, False, v, False)])
    if rel == "!=":
        return FeasibleSet(
            [Interval(NEG_INF, True, v, True), Interval(v, True, POS_INF, True)]
        )
    if rel == ">=":
        return FeasibleSet([Interval(v, False, POS_INF, True)])
    return FeasibleSet([Interval(v, True, POS_INF, True)])


_SOL_CACHE: Dict = {}
_SOL_CACHE_MAX = 200000


def literal_solution_set(lit: Literal, prefix: Sequence[RealValue]) -> FeasibleSet:
    """Solution set over x_j of a level-j theory literal (memoized).

    Algebraic prefix coordinates hash by identity, which is exact here: the
    solver only ever revisits a prefix with the same value objects.
    """
    key = (lit, tuple(prefix))
    hit = _SOL_CACHE.get(key)
    if hit is not None:
        return hit
    res = _literal_solution_set_impl(lit, prefix)
    if len(_SOL_CACHE) < _SOL_CACHE_MAX:
        _SOL_CACHE[key] = res
    return res


def _literal_solution_set_impl(lit: Literal, prefix: Sequence[RealValue]) -> FeasibleSet:
    a = lit.atom
    if isinstance(a, PolyAtom):
        rel = a.rel if lit.positive else _MIRROR[a.rel]
        return poly_solution_set(a.poly, rel, prefix)
    if isinstance(a, ExtAtom):
        try:
            v = eval_indexed_root(a.xi, prefix)
        except ValueError:
            return FeasibleSet.empty() if lit.positive else FeasibleSet.full()
        rel = a.rel if lit.positive else _MIRROR[a.rel]
        return _rel_interval(rel, v)
    raise ValueError("boolean literal has no solution set")


def feasible_set(lits: Sequence[Literal], prefix: Sequence[RealValue]) -> FeasibleSet:
    out = FeasibleSet.full()
    for l in lits:
        out = out.intersect(literal_solution_set(l, prefix))
        if out.is_empty():
            return out
    return out


def _width_key(iv: Interval):
    if iv.lo is NEG_INF or iv.hi is POS_INF:
        return Fraction(10) ** 30  # effectively infinite
    lo = rational_approx(iv.lo, Fraction(1, 64))
    hi = rational_approx(iv.hi, Fraction(1, 64))
    return hi - lo


def decide_value(fs: FeasibleSet) -> RealValue:
    """0 if feasible; else the minimal-bit-size rational in the widest
    interval; else a forced algebraic endpoint."""
    if fs.is_empty():
        raise ValueError("empty feasible set")
    if fs.contains(Fraction(0)):
        return Fraction(0)
    best = max(fs.intervals, key=_width_key)
    if best.is_point():
        v = best.lo
        return Fraction(v) if not isinstance(v, RealAlgebraic) else v
    cands: List[Fraction] = []
    if best.lo is not NEG_INF and not best.lo_strict and not isinstance(best.lo, RealAlgebraic):
        cands.append(Fraction(best.lo))
    if best.hi is not POS_INF and not best.hi_strict and not isinstance(best.hi, RealAlgebraic):
        cands.append(Fraction(best.hi))
    try:
        cands.append(rational_between(best.lo, best.hi))
    except ValueError:
        pass
    if not cands:
        v = best.lo if best.lo is not NEG_INF else best.hi
        return v
    return min(cands, key=lambda q: (bit_size(q), q))


# ---------------------------------------------------------------------------
# solver
# ---------------------------------------------------------------------------

@dataclass
class SolverLimits:
    max_steps: int = 100000
    fallback_budget: int = 100
    timeout_ms: Optional[int] = None


@dataclass
class SolveStats:
    result: str = "unknown"
    wall_ms: float = 0.0
    scc_calls: int = 0
    apx_cells: int = 0
    fallbacks: int = 0
    max_resultant_degree: int = 0
    mult_proxy: int = 0
    learned_clauses: int = 0
    steps: int = 0


@dataclass
class Result:
    status: str  # sat | unsat | unknown
    model: Optional[List[RealValue]] = None
    reason: Optional[str] = None
    stats: SolveStats = field(default_factory=SolveStats)


class _Unknown(Exception):
    pass


@dataclass
class _Entry:
    kind: str  # decide | propagate | semantic | theory
    lit: Optional[Literal] = None
    reason: Optional[Clause] = None
    value: Optional[RealValue] = None


class Solver:
    def __init__(
        self,
        formula: Formula,
        config: Optional[ApproxConfig] = None,
        limits: Optional[SolverLimits] = None,
    ):
        self.formula = formula
        self.config = config or ApproxConfig()
        self.limits = limits or SolverLimits()
        self.clauses: List[Clause] = list(formula.clauses)
        self.assign: Dict[Atom, bool] = {}
        self.trail: List[_Entry] = []
        self.s: List[RealValue] = []
        self.apx_state = ApxState()
        self.stats = SolveStats()
        self._seen_clauses: Set[str] = {c.to_text() for c in self.clauses}
        self._start = time.monotonic()

    # -- assignment helpers --------------------------------------------------

    def _lit_value(self, lit: Literal) -> Optional[bool]:
        v = self.assign.get(lit.atom)
        if v is None:
            return None
        return v if lit.positive else not v

    def _set(self, lit: Literal, kind: str, reason: Optional[Clause] = None):
        self.assign[lit.atom] = lit.positive
        self.trail.append(_Entry(kind, lit=lit, reason=reason))

    def _atoms_in_clauses(self):
        for c in self.clauses:
            for l in c.lits:
                yield l.atom

    def _check_budget(self):
        self.stats.steps += 1
        if self.stats.steps > self.limits.max_steps:
            raise _Unknown("step budget exhausted")
        if (
            self.limits.timeout_ms is not None
            and (time.monotonic() - self._start) * 1000 > self.limits.timeout_ms
        ):
            raise _Unknown("timeout")

    # -- propagation ----------------------------------------------------------

    def _semantic_pass(self):
        t = len(self.s)
        for a in set(self._atoms_in_clauses()):
            if a in self.assign or isinstance(a, BoolAtom):
                continue
            lv = atom_level(a)
            if lv is not None and lv <= t:
                val = eval_atom(a, self.s)
                self._set(Literal(a, val), "semantic")

    def _unit_propagate(self) -> Optional[Clause]:
        """Returns a falsified clause or None at fixpoint."""
        changed = True
        while changed:
            changed = False
            self._semantic_pass()
            for c in self.clauses:
                unassigned = None
                n_un = 0
                satisfied = False
                for l in c.lits:
                    v = self._lit_value(l)
                    if v is True:
                        satisfied = True
                        break
                    if v is None:
                        n_un += 1
                        unassigned = l
                if satisfied:
                    continue
                if n_un == 0:
                    return c
                if n_un == 1:
                    self._set(unassigned, "propagate", reason=c)
                    changed = True
        return None

    # -- conflict analysis ----------------------------------------------------

    def _analyze(self, conflict: Clause) -> Clause:
        cur: Set[Literal] = set(conflict.lits)
        for entry in reversed(self.trail):
            if entry.kind != "propagate":
                continue
            nl = entry.lit.neg()
            if nl in cur:
                cur.discard(nl)
                for l in entry.reason.lits:
                    if l != entry.lit:
                        cur.add(l)
        return make_clause(sorted(cur, key=lambda l: l.to_text()))

    def _lit_truth(self, lit: Literal) -> Optional[bool]:
        """Boolean value if assigned, else theory evaluation if possible."""
        v = self._lit_value(lit)
        if v is not None:
            return v
        lv = atom_level(lit.atom)
        if lv is not None and lv <= len(self.s):
            val = eval_atom(lit.atom, self.s)
            return val if lit.positive else not val
        return None

    def _falsified(self, c: Clause) -> bool:
        return all(self._lit_truth(l) is False for l in c.lits)

    def _backjump(self, learned: Clause):
        while self.trail and self._falsified(learned):
            entry = self.trail.pop()
            if entry.kind == "theory":
                self.s.pop()
            else:
                del self.assign[entry.lit.atom]

    def _learn(self, c: Clause):
        key = c.to_text()
        if key not in self._seen_clauses:
            self._seen_clauses.add(key)
            self.clauses.append(c)
            self.stats.learned_clauses += 1

    # -- theory steps -----------------------------------------------------------

    def _asserted_theory_lits(self, j: int) -> List[Literal]:
        out = []
        for a, v in self.assign.items():
            if isinstance(a, BoolAtom):
                continue
            if atom_level(a) == j:
                out.append(Literal(a, v))
        out.sort(key=lambda l: l.to_text())
        return out

    def _minimize_core(self, lits: List[Literal], prefix) -> List[Literal]:
        # Insertion-based minimal core extraction: each round scans the
        # remaining candidates, intersecting onto the already-found necessary
        # literals; the first literal that empties the set is necessary
        # relative to the scanned prefix, and the candidates shrink to that
        # prefix.  O(|core| * n) intersections total.  Extended literals are
        # scanned first so cores prefer them over polynomial literals:
        # extended literals were unit-propagated from learned clauses and
        # resolve away during conflict analysis, which keeps the solver
        # making progress.
        order = sorted(
            lits, key=lambda l: (not isinstance(l.atom, ExtAtom), l.to_text())
        )
        sets = {l: literal_solution_set(l, prefix) for l in order}
        necessary: List[Literal] = []
        candidates = order
        while True:
            acc = FeasibleSet.full()
            for l in necessary:
                acc = acc.intersect(sets[l])
            if acc.is_empty():
                return necessary
            scanned: List[Literal] = []
            found = None
            for l in candidates:
                nxt = acc.intersect(sets[l])
                if nxt.is_empty():
                    found = l
                    break
                scanned.append(l)
                acc = nxt
            if found is None:  # jointly feasible: caller never passes this
                return list(lits)
            necessary.append(found)
            candidates = scanned

    def _point_section_literal(self, k: int, v: RealValue) -> Literal:
        if isinstance(v, RealAlgebraic):
            from .numeric import algebraic_or_rational, upoly_squarefree
            from .poly import from_upoly

            sf = upoly_squarefree(v.defining)
            idx = 1
            for lo, hi in isolate_real_roots(sf):
                r = algebraic_or_rational(sf, lo, hi)
                if compare(r, v) < 0:
                    idx += 1
            return ext_literal(k, "=", IndexedRoot(normalize(from_upoly(sf, k)), idx))
        p = Polynomial.var(k) - Polynomial.const(Fraction(v))
        return ext_literal(k, "=", IndexedRoot(normalize(p), 1))

    def _point_exclusion(self, core: List[Literal], j: int) -> Clause:
        lits = [l.neg() for l in core]
        for k in range(1, j):
            lits.append(self._point_section_literal(k, self.s[k - 1]).neg())
        return make_clause(lits)

    def explain(self, core: List[Literal], witness: RealValue, j: int) -> Clause:
        """Cell-based explanation at (s_prefix, witness); point exclusion on
        construction failure.  The witness is already the top coordinate of
        the trail's theory assignment."""
        polys = []
        for l in core:
            a = l.atom
            if isinstance(a, PolyAtom):
                polys.append(a.poly)
            elif isinstance(a, ExtAtom):
                polys.append(a.xi.poly)
        sample = list(self.s)
        assert len(sample) == j and compare(sample[-1], witness) == 0
        self.stats.scc_calls += 1
        try:
            cell = apx_scc(polys, sample, self.config, self.apx_state)
            self.stats.max_resultant_degree = max(
                self.stats.max_resultant_degree, cell.stats.max_resultant_degree
            )
            self.stats.mult_proxy += cell.stats.mult_proxy
            self.stats.apx_cells = self.apx_state.n_cells
            clause = make_clause(explanation_clause(core, cell).lits)
            if not self._falsified(clause):
                # a top-level cell bound reproduced a core atom or an atom
                # already assigned the other way (the conflict sits among
                # extended literals over the same polynomials): re-run with
                # the top level kept open, which yields only lower-level cell
                # literals and cannot restate the clashing bound
                self.stats.scc_calls += 1
                cell = apx_scc(polys, sample, self.config, self.apx_state,
                               top_open=True)
                self.stats.max_resultant_degree = max(
                    self.stats.max_resultant_degree, cell.stats.max_resultant_degree
                )
                self.stats.mult_proxy += cell.stats.mult_proxy
                self.stats.apx_cells = self.apx_state.n_cells
                clause = make_clause(explanation_clause(core, cell).lits)
            if not self._falsified(clause):
                return self._fallback(core, j)
            return clause
        except ConstructionFailed:
            return self._fallback(core, j)

    def _fallback(self, core: List[Literal], j: int) -> Clause:
        self.stats.fallbacks += 1
        if self.stats.fallbacks > self.limits.fallback_budget:
            raise _Unknown("fallback budget exhausted")
        return self._point_exclusion(core, j)

    def _theory_advance(self) -> Optional[Clause]:
        """Assign the next theory variable or return a learned conflict."""
        j = len(self.s) + 1
        lits = self._asserted_theory_lits(j)
        fs = feasible_set(lits, self.s)
        if not fs.is_empty():
            w = decide_value(fs)
            self.s.append(w)
            self.trail.append(_Entry("theory", value=w))
            return None
        core = self._minimize_core(lits, self.s)
        # witness satisfying every asserted extended literal: then no cell
        # bound produced around it can clash with a core literal's atom, so
        # the learned clause is neither tautological nor already satisfied
        # (if they are jointly infeasible the minimized core is extended-only
        # and any witness serves)
        ext_lits = [l for l in lits if isinstance(l.atom, ExtAtom)]
        fse = feasible_set(ext_lits, self.s) if ext_lits else FeasibleSet.full()
        if fse.is_empty():
            outside = [l for l in ext_lits if l not in core]
            fse = feasible_set(outside, self.s) if outside else FeasibleSet.empty()
        w = decide_value(fse) if not fse.is_empty() else Fraction(0)
        # place the witness on the trail so the explanation is fully falsified
        self.s.append(w)
        self.trail.append(_Entry("theory", value=w))
        clause = self.explain(core, w, j)
        assert self._falsified(clause), "learned explanation must be falsified"
        return clause

    # -- main loop -----------------------------------------------------------

    def solve(self) -> Result:
        n = self.formula.n_vars
        try:
            while True:
                self._check_budget()
                conflict = self._unit_propagate()
                if conflict is not None:
                    learned = self._analyze(conflict)
                    if not learned.lits:
                        return self._finish("unsat")
                    self._learn(learned)
                    self._backjump(learned)
                    continue
                # decide an unassigned literal, clause order, phase as written
                decided = False
                for c in self.clauses:
                    if any(self._lit_value(l) is True for l in c.lits):
                        continue
                    for l in c.lits:
                        if self._lit_value(l) is None:
                            self._set(l, "decide")
                            decided = True
                            break
                    if decided:
                        break
                if decided:
                    continue
                if len(self.s) == n:
                    model = list(self.s)
                    self._verify_model(model)
                    return self._finish("sat", model)
                learned = self._theory_advance()
                if learned is not None:
                    self._learn(learned)
                    self._backjump(learned)
        except _Unknown as e:
            return self._finish("unknown", reason=str(e))
        except PrecisionExhausted as e:
            return self._finish("unknown", reason=f"precision exhausted: {e}")

    def _verify_model(self, model: List[RealValue]):
        for c in self.formula.clauses:
            ok = False
            for l in c.lits:
                if isinstance(l.atom, BoolAtom):
                    v = self.assign.get(l.atom)
                    if v is not None and (v if l.positive else not v):
                        ok = True
                        break
                    continue
                val = eval_atom(l.atom, model)
                if val if l.positive else not val:
                    ok = True
                    break
            assert ok, f"model check failed on clause: {c.to_text()}"

    def _finish(self, status: str, model=None, reason=None) -> Result:
        self.stats.result = status
        self.stats.apx_cells = self.apx_state.n_cells
        self.stats.wall_ms = (time.monotonic() - self._start) * 1000
        return Result(status, model=model, reason=reason, stats=self.stats)


def solve(
    formula: Formula,
    config: Optional[ApproxConfig] = None,
    limits: Optional[SolverLimits] = None,
) -> Result:
    return Solver(formula, config, limits).solve()
