"""Levelwise single cell construction.

Given a finite polynomial set P and a sample point s, build a description of
a cell around s over which every p in P is sign-invariant.  Levels are
processed top-down; each level contributes a symbolic interval (section,
sector, or the true interval) bounded by indexed root expressions, and folds
delineability polynomials (discriminant, leading and first non-vanishing
coefficient) plus partial-ordering resultants into the lower levels.

Construction FAILs when some polynomial nullifies over the prefix or exact
arithmetic runs out of precision; the caller is expected to fall back.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple, Union

from .numeric import PrecisionExhausted, RealValue, compare
from .poly import (
    Polynomial,
    discriminant,
    max_var_degree,
    mult_proxy,
    normalize,
    resultant,
    square_free_basis,
)
from .roots import (
    NULLIFIED,
    IndexedRoot,
    eval_indexed_root,
    real_roots,
    root_table,
    sign_at_prefix,
)


class ConstructionFailed(Exception):
    """FAIL: nullification or precision exhaustion; caller falls back."""


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Section:
    xi: IndexedRoot

    def to_text(self, j: int) -> str:
        return f"x{j} = {self.xi.to_text()}"


@dataclass(frozen=True)
class Sector:
    lower: Optional[IndexedRoot]  # None = -inf
    upper: Optional[IndexedRoot]  # None = +inf

    def to_text(self, j: int) -> str:
        if self.lower is None and self.upper is None:
            return "true"
        if self.lower is None:
            return f"x{j} < {self.upper.to_text()}"
        if self.upper is None:
            return f"x{j} > {self.lower.to_text()}"
        return f"{self.lower.to_text()} < x{j} < {self.upper.to_text()}"


SymbolicInterval = Union[Section, Sector]

TRUE_INTERVAL = Sector(None, None)


@dataclass
class CellStats:
    resultants: int = 0
    max_resultant_degree: int = 0
    discriminants: int = 0
    mult_proxy: int = 0
    aux_polys: int = 0

    def merge(self, other: "CellStats"):
        self.resultants += other.resultants
        self.max_resultant_degree = max(self.max_resultant_degree, other.max_resultant_degree)
        self.discriminants += other.discriminants
        self.mult_proxy += other.mult_proxy
        self.aux_polys += other.aux_polys


@dataclass(frozen=True)
class AuxRecord:
    """Provenance of an inserted auxiliary polynomial; pwl pieces carry their
    x_{j-1} domain."""

    level: int
    variant: str
    poly: Polynomial
    replaced: Optional[Polynomial]
    domain: Optional[Tuple[Fraction, Fraction]] = None


@dataclass
class CellDescription:
    intervals: List[SymbolicInterval]  # index 0 is level 1
    sample: Tuple[RealValue, ...]
    stats: CellStats
    aux_records: List[AuxRecord] = field(default_factory=list)

    def to_text(self) -> str:
        lines = []
        for j in range(len(self.intervals), 0, -1):
            lines.append(f"I{j}: {self.intervals[j - 1].to_text(j)}")
        return "\n".join(lines)


class ProjectionState:
    """Working set partitioned by level; normalized, deduplicated by text."""

    def __init__(self, n_levels: int):
        self.levels: List[Dict[str, Polynomial]] = [dict() for _ in range(n_levels + 1)]

    def add(self, p: Polynomial):
        q = normalize(p)
        if q.level == 0:
            return
        self.levels[q.level][q.to_text()] = q

    def level_polys(self, j: int) -> List[Polynomial]:
        return [self.levels[j][k] for k in sorted(self.levels[j])]

    def rebase_level(self, j: int) -> List[Polynomial]:
        """Replace level j by a square-free, pairwise-coprime basis.  The
        discriminants and pairwise resultants of the result never vanish
        identically, so no delineability constraint is silently dropped.
        Factors of lower level migrate to their own level."""
        basis = square_free_basis(self.level_polys(j))
        self.levels[j] = dict()
        for q in basis:
            self.add(q)
        return self.level_polys(j)


# ---------------------------------------------------------------------------
# per-level pieces
# ---------------------------------------------------------------------------

RootTable = List[Tuple[RealValue, List[IndexedRoot]]]


def pick_interval(table: RootTable, s_j: RealValue) -> SymbolicInterval:
    """Case analysis over the sorted root values around s_j.  Ties between
    equal roots resolve to the lowest-degree polynomial (first in entry)."""
    if not table:
        return TRUE_INTERVAL
    below = None
    for idx, (v, irs) in enumerate(table):
        c = compare(s_j, v)
        if c == 0:
            return Section(irs[0])
        if c > 0:
            below = idx
        else:
            break
    lower = table[below][1][0] if below is not None else None
    upper = table[below + 1][1][0] if below is not None and below + 1 < len(table) else (
        table[0][1][0] if below is None else None
    )
    return Sector(lower, upper)


def delineability_polys(p: Polynomial, prefix: Sequence[RealValue], j: int) -> List[Polynomial]:
    """Discriminant, leading coefficient, and the first coefficient (from the
    leading one downward) not vanishing at the prefix; constants dropped."""
    out: List[Polynomial] = []
    if p.degree(j) >= 2:
        out.append(discriminant(p, j))
    coeffs = p.coefficients(j)
    out.append(coeffs[-1])
    for c in reversed(coeffs):
        if c.is_zero():
            continue
        if c.is_constant() or sign_at_prefix(c, prefix) != 0:
            out.append(c)
            break
    return [q for q in out if q.level > 0]


def ordering_resultants(
    table: RootTable,
    interval: SymbolicInterval,
    relays: Optional[Set[Polynomial]] = None,
) -> List[Tuple[Polynomial, Polynomial]]:
    """Resultant tasks maintaining the partial root ordering: every root value
    chains to the nearest cell bound, plus the bound pair itself.  Root
    entries holding a relay polynomial re-anchor the chain (roots beyond a
    relay pair with the relay instead of the bound)."""
    relays = relays or set()
    pairs: List[Tuple[Polynomial, Polynomial]] = []
    seen: Set[frozenset] = set()

    def add(a: Polynomial, b: Polynomial):
        if a == b:
            return
        key = frozenset((a, b))
        if key in seen:
            return
        seen.add(key)
        pairs.append((a, b))

    def entry_index(ir: IndexedRoot) -> int:
        for idx, (_, irs) in enumerate(table):
            if ir in irs:
                return idx
        raise ValueError("bound not in root table")

    def chain(start: int, step: int, anchor: IndexedRoot):
        target = anchor
        idx = start
        while 0 <= idx < len(table):
            _, irs = table[idx]
            for ir in irs:
                add(ir.poly, target.poly)
            relay = next((ir for ir in irs if ir.poly in relays), None)
            if relay is not None:
                target = relay
            idx += step

    if isinstance(interval, Section):
        at = entry_index(interval.xi)
        for ir in table[at][1]:
            add(ir.poly, interval.xi.poly)
        chain(at - 1, -1, interval.xi)
        chain(at + 1, 1, interval.xi)
        return pairs

    lo_i = entry_index(interval.lower) if interval.lower is not None else None
    hi_i = entry_index(interval.upper) if interval.upper is not None else None
    if lo_i is not None and hi_i is not None:
        add(interval.lower.poly, interval.upper.poly)  # bound pair, connectedness
        for ir in table[lo_i][1]:
            add(ir.poly, interval.lower.poly)
        for ir in table[hi_i][1]:
            add(ir.poly, interval.upper.poly)
        chain(lo_i - 1, -1, interval.lower)
        chain(hi_i + 1, 1, interval.upper)
    elif lo_i is not None:
        for ir in table[lo_i][1]:
            add(ir.poly, interval.lower.poly)
        chain(lo_i - 1, -1, interval.lower)
        chain(lo_i + 1, 1, interval.lower)
    elif hi_i is not None:
        for ir in table[hi_i][1]:
            add(ir.poly, interval.upper.poly)
        chain(hi_i - 1, -1, interval.upper)
        chain(hi_i + 1, 1, interval.upper)
    return pairs


# ---------------------------------------------------------------------------
# the levelwise loop
# ---------------------------------------------------------------------------

# callback: (level j, prefix, table, s_j, interval) -> (new polys, relay polys,
# aux records); a non-empty first component triggers re-tabling of the level
Inserter = Callable[..., Tuple[List[Polynomial], Set[Polynomial], List[AuxRecord]]]


def _run_loop(
    P: Sequence[Polynomial],
    s: Sequence[RealValue],
    inserter: Optional[Inserter] = None,
    top_open: bool = False,
) -> CellDescription:
    n = len(s)
    state = ProjectionState(n)
    for p in P:
        if normalize(p).level > n:
            raise ValueError("polynomial level exceeds sample dimension")
        state.add(p)
    stats = CellStats()
    intervals: List[SymbolicInterval] = [TRUE_INTERVAL] * n
    aux_records: List[AuxRecord] = []
    try:
        for j in range(n, 0, -1):
            prefix = tuple(s[:j - 1])
            polys = state.rebase_level(j)
            for p in polys:
                if real_roots(p, prefix) is NULLIFIED:
                    raise ConstructionFailed(f"nullification at level {j}: {p.to_text()}")
            if top_open and j == n:
                # keep the whole level open: no interval literal is produced,
                # so the cell must keep the complete root structure of the
                # level invariant — delineability for every polynomial plus
                # resultants of all pairs (instead of the partial ordering)
                for p in polys:
                    for q in delineability_polys(p, prefix, j):
                        state.add(q)
                    if p.degree(j) >= 2:
                        stats.discriminants += 1
                for ai in range(len(polys)):
                    for bi in range(ai + 1, len(polys)):
                        a, b = polys[ai], polys[bi]
                        r = resultant(a, b, j)
                        stats.resultants += 1
                        stats.max_resultant_degree = max(
                            stats.max_resultant_degree, max_var_degree(r)
                        )
                        stats.mult_proxy += mult_proxy(a, b, j)
                        state.add(r)
                continue
            table = root_table(polys, prefix)
            interval = pick_interval(table, s[j - 1])
            relays: Set[Polynomial] = set()
            if inserter is not None:
                new_polys, relays, recs = inserter(j, prefix, table, s[j - 1], interval)
                if new_polys:
                    for q in new_polys:
                        state.add(q)
                    stats.aux_polys += len(new_polys)
                    aux_records.extend(recs)
                    polys = state.rebase_level(j)
                    table = root_table(polys, prefix)
                    interval = pick_interval(table, s[j - 1])
            intervals[j - 1] = interval
            for p in polys:
                for q in delineability_polys(p, prefix, j):
                    state.add(q)
                if p.degree(j) >= 2:
                    stats.discriminants += 1
            for a, b in ordering_resultants(table, interval, relays):
                r = resultant(a, b, j)
                stats.resultants += 1
                stats.max_resultant_degree = max(stats.max_resultant_degree, max_var_degree(r))
                stats.mult_proxy += mult_proxy(a, b, j)
                state.add(r)
    except PrecisionExhausted as e:
        raise ConstructionFailed(f"precision exhausted: {e}") from e
    return CellDescription(intervals, tuple(s), stats, aux_records)


def levelwise_scc(P: Sequence[Polynomial], s: Sequence[RealValue]) -> CellDescription:
    """Algorithm: intervals produced top-down, projection folded downward.
    Raises ConstructionFailed on nullification or precision exhaustion."""
    return _run_loop(P, s, None)


# ---------------------------------------------------------------------------
# containment and explanation
# ---------------------------------------------------------------------------

def cell_contains(cell: CellDescription, r: Sequence[RealValue]) -> Optional[bool]:
    """True/False membership; None when a bounding root expression has no
    value over r's prefix (possible only outside the cell)."""
    if len(r) != len(cell.intervals):
        raise ValueError("dimension mismatch")
    for j, iv in enumerate(cell.intervals, start=1):
        prefix = tuple(r[:j - 1])

        def val(ir: IndexedRoot):
            try:
                return eval_indexed_root(ir, prefix)
            except (ValueError, PrecisionExhausted):
                return None

        if isinstance(iv, Section):
            v = val(iv.xi)
            if v is None:
                return None
            if compare(r[j - 1], v) != 0:
                return False
        else:
            if iv.lower is not None:
                v = val(iv.lower)
                if v is None:
                    return None
                if compare(r[j - 1], v) <= 0:
                    return False
            if iv.upper is not None:
                v = val(iv.upper)
                if v is None:
                    return None
                if compare(r[j - 1], v) >= 0:
                    return False
    return True


def explanation_clause(core, cell: CellDescription):
    """Clause (not C) or (not phi_S): negated core constraints plus negated
    extended-constraint conjuncts of the cell's symbolic intervals."""
    from .nlsat import Clause, ext_literal, negate

    lits = [negate(c) for c in core]
    for j, iv in enumerate(cell.intervals, start=1):
        if isinstance(iv, Section):
            lits.append(negate(ext_literal(j, "=", iv.xi)))
        else:
            if iv.lower is not None:
                lits.append(negate(ext_literal(j, ">", iv.lower)))
            if iv.upper is not None:
                lits.append(negate(ext_literal(j, "<", iv.upper)))
    return Clause(tuple(lits))
