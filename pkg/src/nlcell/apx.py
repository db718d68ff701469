"""Approximation layer for the levelwise construction.

When a would-be sector bound is defined by a high-degree polynomial, a linear
auxiliary polynomial with a root strictly between the sample and the bound is
inserted into the working set before interval selection; the auxiliary root
then becomes the (under-approximated) cell bound and the expensive resultants
against the original bound are replaced by resultants with a linear operand.

Construction variants: simple (x_j - c), taylor (first-order expansion with
the constant term dropped), pwl (piecewise linear in x_{j-1}, x_j), outside
(extra root between the bound and a neighboring root, leaving the cell bound
unchanged).  Criteria: a fixed degree threshold with a cell budget, or a
dynamic threshold growing with the number of approximated cells.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Set, Tuple

from .numeric import (
    NEG_INF,
    POS_INF,
    PrecisionExhausted,
    RealAlgebraic,
    RealValue,
    compare,
    rational_between,
    simplest_between,
)
from .poly import Polynomial, normalize
from .roots import IndexedRoot, eval_indexed_root, real_roots, NULLIFIED
from .scc import (
    AuxRecord,
    CellDescription,
    Section,
    Sector,
    SymbolicInterval,
    _run_loop,
    delineability_polys,
)


class ZeroGradient(Exception):
    """Taylor gradient in x_j could not be certified nonzero."""


class PwlFallback(Exception):
    """PWL preconditions failed; caller degrades to the simple variant."""


# ---------------------------------------------------------------------------
# configuration and per-run state
# ---------------------------------------------------------------------------

@dataclass
class ApproxConfig:
    variant: str = "baseline"  # baseline | simple | taylor | pwl | outside
    fixed_degree_threshold: Optional[int] = None
    max_apx_cells: Optional[int] = None  # None = unlimited
    dynamic: Optional[Tuple[Fraction, Fraction]] = None  # (c, d)
    pwl_pieces: int = 2
    taylor_precision: Fraction = Fraction(1, 2 ** 20)

    def __post_init__(self):
        if self.variant not in ("baseline", "simple", "taylor", "pwl", "outside"):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.fixed_degree_threshold is not None and self.dynamic is not None:
            raise ValueError("fixed and dynamic criteria are mutually exclusive")
        if self.variant == "baseline" and (
            self.fixed_degree_threshold is not None or self.dynamic is not None
        ):
            raise ValueError("baseline admits no criteria")
        if self.pwl_pieces < 2:
            raise ValueError("pwl needs at least 2 pieces")

    @staticmethod
    def parse(name: str) -> "ApproxConfig":
        """Named variants: baseline, simple-<j>, dynamic, taylor, pwl-<k>,
        outside (dynamic criterion c=1/5, d=3 where applicable)."""
        dyn = (Fraction(1, 5), Fraction(3))
        if name == "baseline":
            return ApproxConfig()
        if name.startswith("simple-"):
            j = int(name.split("-", 1)[1])
            return ApproxConfig("simple", fixed_degree_threshold=j, max_apx_cells=50)
        if name == "dynamic":
            return ApproxConfig("simple", dynamic=dyn)
        if name == "taylor":
            return ApproxConfig("taylor", dynamic=dyn)
        if name.startswith("pwl-"):
            k = int(name.split("-", 1)[1])
            return ApproxConfig("pwl", dynamic=dyn, pwl_pieces=k)
        if name == "outside":
            return ApproxConfig("outside", dynamic=dyn)
        raise ValueError(f"unknown variant name {name!r}")


@dataclass
class ApxState:
    n_cells: int = 0  # cells in which at least one auxiliary poly was inserted
    d_max: int = 0  # highest degree ever tested by the criteria
    cell_flagged: bool = False  # current cell already counted


def apx_criteria(bound_poly: Polynomial, j: int, config: ApproxConfig, state: ApxState) -> bool:
    deg = bound_poly.degree(j)
    state.d_max = max(state.d_max, deg)
    if config.max_apx_cells is not None and state.n_cells >= config.max_apx_cells:
        return False
    if config.fixed_degree_threshold is not None:
        return deg >= config.fixed_degree_threshold
    if config.dynamic is not None:
        c, d = config.dynamic
        return deg >= c * state.n_cells + d
    return False


def _check_termination_bound(config: ApproxConfig, state: ApxState):
    if config.dynamic is not None:
        c, d = config.dynamic
        if c > 0:
            limit = math.ceil(max(Fraction(0), (Fraction(state.d_max) - d)) / c) + 1
            assert state.n_cells <= limit, (
                f"dynamic termination bound violated: {state.n_cells} > {limit}"
            )
    if config.max_apx_cells is not None:
        assert state.n_cells <= config.max_apx_cells


# ---------------------------------------------------------------------------
# variant constructions
# ---------------------------------------------------------------------------

def apx_simple(
    b: RealValue, s_j: RealValue, excludes: Sequence[RealValue], j: int
) -> Polynomial:
    """x_j - c with c of minimal bit size strictly between s_j and b and
    distinct from every excluded root value."""
    if compare(s_j, b) < 0:
        lo, hi = s_j, b
    else:
        lo, hi = b, s_j
    c = rational_between(lo, hi, excludes)
    return Polynomial.var(j) - Polynomial.const(c)


def _boxes(coords: Sequence[RealValue]) -> dict:
    out = {}
    for i, v in enumerate(coords):
        if isinstance(v, RealAlgebraic):
            out[i + 1] = (v._lo, v._hi)
        else:
            out[i + 1] = (Fraction(v), Fraction(v))
    return out


def _approx_eval(p: Polynomial, coords: Sequence[RealValue], width: Fraction):
    """Exact rational enclosure of p(coords), refined to the given width."""
    from .roots import _box_eval

    algs = [v for v in coords if isinstance(v, RealAlgebraic)]
    if not algs:
        v = p.evaluate([Fraction(c) for c in coords])
        return v, v
    for _ in range(4000):
        lo, hi = _box_eval(p, _boxes(coords))
        if hi - lo <= width:
            return lo, hi
        for a in algs:
            a.refine_to((a._hi - a._lo) / 2)
    raise PrecisionExhausted("gradient enclosure did not converge")


def apx_taylor(
    p: Polynomial,
    prefix: Sequence[RealValue],
    b: RealValue,
    c: Fraction,
    j: int,
    precision: Fraction,
) -> Polynomial:
    """First-order expansion of p at r = (prefix, b) with the constant term
    dropped: g_j (x_j - c) + sum over rational prefix coordinates of
    g_k (x_k - s_k).  Raises ZeroGradient when g_j cannot be certified."""
    r = list(prefix) + [b]
    dj = p.derivative(j)
    lo, hi = _approx_eval(dj, r, precision)
    if lo <= 0 <= hi:
        # try to separate from zero before giving up
        try:
            lo, hi = _approx_eval(dj, r, precision * precision)
        except PrecisionExhausted:
            raise ZeroGradient("gradient in x_j not separated from zero")
        if lo <= 0 <= hi:
            raise ZeroGradient("gradient in x_j vanishes at the expansion point")
    g_j = simplest_between(lo, hi)
    out = Polynomial.const(g_j) * (Polynomial.var(j) - Polynomial.const(c))
    for k in range(1, j):
        if isinstance(prefix[k - 1], RealAlgebraic):
            continue  # irrational coordinate: summand omitted
        dk = p.derivative(k)
        if dk.is_zero():
            continue
        lo, hi = _approx_eval(dk, r, precision)
        g_k = simplest_between(lo, hi)
        if g_k == 0:
            continue
        out = out + Polynomial.const(g_k) * (
            Polynomial.var(k) - Polynomial.const(Fraction(prefix[k - 1]))
        )
    return out


def apx_pwl(
    p: Polynomial,
    bound: IndexedRoot,
    b: RealValue,
    prefix: Sequence[RealValue],
    s_j: RealValue,
    j: int,
    pieces: int,
) -> List[Tuple[Polynomial, Tuple[Fraction, Fraction]]]:
    """Piece polynomials (with their x_{j-1} domains) interpolating rational
    under-approximations of the bound root function at pieces+1 support
    points around s_{j-1}.  Raises PwlFallback when preconditions fail."""
    if j < 2:
        raise PwlFallback("no lower level to interpolate over")
    s_prev = prefix[j - 2]
    if isinstance(s_prev, RealAlgebraic):
        raise PwlFallback("s_{j-1} is irrational")
    s_prev = Fraction(s_prev)
    base = tuple(prefix[: j - 2])

    # delineable region D around s_{j-1}: between neighboring roots of the
    # level-(j-1) delineability polynomials of p
    d_lo, d_hi = NEG_INF, POS_INF
    for g in delineability_polys(p, prefix, j):
        if g.level != j - 1:
            continue
        rs = real_roots(g, base)
        if rs is NULLIFIED:
            raise PwlFallback("delineability polynomial nullifies")
        for v in rs:
            cv = compare(s_prev, v)
            if cv == 0:
                raise PwlFallback("delineable region degenerates to a point")
            if cv > 0 and (d_lo is NEG_INF or compare(v, d_lo) > 0):
                d_lo = v
            if cv < 0 and (d_hi is POS_INF or compare(v, d_hi) < 0):
                d_hi = v

    # rational sub-interval of D containing s_{j-1}
    a = rational_between(d_lo, s_prev) if d_lo is not NEG_INF else s_prev - 1
    z = rational_between(s_prev, d_hi) if d_hi is not POS_INF else s_prev + 1
    k = pieces + 1
    n_below = (k - 1) // 2
    n_above = k - 1 - n_below
    supports = sorted(
        {a + (s_prev - a) * Fraction(i, n_below) for i in range(n_below)}
        | {s_prev}
        | {s_prev + (z - s_prev) * Fraction(i, n_above) for i in range(1, n_above + 1)}
    )
    if len(supports) != k:
        raise PwlFallback("support points collapsed")

    # under-approximated root values at each support, pulled toward the sample
    values: List[Fraction] = []
    for d in supports:
        try:
            v = eval_indexed_root(bound, base + (d,))
        except (ValueError, PrecisionExhausted):
            raise PwlFallback("root function not defined at a support point")
        lo, hi = (s_j, v) if compare(s_j, v) < 0 else (v, s_j)
        mid = rational_between(lo, hi, [v])
        inner_lo, inner_hi = (mid, v) if compare(mid, v) < 0 else (v, mid)
        values.append(rational_between(inner_lo, inner_hi, [v]))

    out = []
    xj, xp = Polynomial.var(j), Polynomial.var(j - 1)
    for i in range(k - 1):
        d0, d1 = supports[i], supports[i + 1]
        v0, v1 = values[i], values[i + 1]
        piece = Polynomial.const(d1 - d0) * (xj - Polynomial.const(v0)) - Polynomial.const(
            v1 - v0
        ) * (xp - Polynomial.const(d0))
        out.append((piece, (d0, d1)))
    return out


def apx_outside(
    b: RealValue, neighbor: RealValue, excludes: Sequence[RealValue], j: int
) -> Polynomial:
    """x_j - c with c strictly between the bound value and a neighboring root
    value beyond it; the cell bound itself is left unchanged."""
    cv = compare(b, neighbor)
    if cv == 0:
        raise ValueError("degenerate: neighbor equals bound")
    lo, hi = (b, neighbor) if cv < 0 else (neighbor, b)
    c = rational_between(lo, hi, excludes)
    return Polynomial.var(j) - Polynomial.const(c)


# ---------------------------------------------------------------------------
# apx-scc
# ---------------------------------------------------------------------------

def _flag_cell(state: ApxState, config: ApproxConfig):
    if not state.cell_flagged:
        state.cell_flagged = True
        state.n_cells += 1
        _check_termination_bound(config, state)


def _nearest_outside_neighbor(table, bound_ir, side: str):
    """Nearest root entry beyond the bound, away from the cell."""
    idx = next(i for i, (_, irs) in enumerate(table) if bound_ir in irs)
    i = idx + (1 if side == "upper" else -1)
    if 0 <= i < len(table):
        v, irs = table[i]
        return v, irs[0]
    return None


def _make_inserter(config: ApproxConfig, state: ApxState):
    def inserter(j, prefix, table, s_j, interval):
        new: List[Polynomial] = []
        relays: Set[Polynomial] = set()
        recs: List[AuxRecord] = []
        if config.variant == "baseline" or isinstance(interval, Section):
            return new, relays, recs
        root_values = [v for v, _ in table]
        sides = []
        if interval.lower is not None:
            sides.append(("lower", interval.lower))
        if interval.upper is not None:
            sides.append(("upper", interval.upper))
        for side, ir in sides:
            b = next(v for v, irs in table if ir in irs)
            if config.variant == "outside":
                if ir.poly.degree(j) < 2:
                    continue
                found = _nearest_outside_neighbor(table, ir, side)
                if found is None:
                    continue
                nv, nir = found
                if nir.poly.degree(j) < 2:
                    continue
                if not (
                    apx_criteria(ir.poly, j, config, state)
                    or apx_criteria(nir.poly, j, config, state)
                ):
                    continue
                aux = apx_outside(b, nv, root_values, j)
                _flag_cell(state, config)
                new.append(aux)
                relays.add(normalize(aux))
                recs.append(AuxRecord(j, "outside", aux, ir.poly))
                continue
            if not apx_criteria(ir.poly, j, config, state):
                continue
            _flag_cell(state, config)
            if config.variant == "pwl":
                try:
                    pcs = apx_pwl(ir.poly, ir, b, prefix, s_j, j, config.pwl_pieces)
                    for piece, dom in pcs:
                        new.append(piece)
                        recs.append(AuxRecord(j, "pwl", piece, ir.poly, dom))
                    continue
                except (PwlFallback, PrecisionExhausted):
                    pass
            if config.variant == "taylor":
                lo, hi = (s_j, b) if compare(s_j, b) < 0 else (b, s_j)
                c = rational_between(lo, hi, root_values)
                try:
                    aux = apx_taylor(ir.poly, prefix, b, c, j, config.taylor_precision)
                    new.append(aux)
                    recs.append(AuxRecord(j, "taylor", aux, ir.poly))
                    continue
                except (ZeroGradient, PrecisionExhausted):
                    pass
            aux = apx_simple(b, s_j, root_values, j)
            new.append(aux)
            recs.append(AuxRecord(j, "simple", aux, ir.poly))
        return new, relays, recs

    return inserter


def apx_scc(
    P: Sequence[Polynomial],
    s: Sequence[RealValue],
    config: ApproxConfig,
    state: Optional[ApxState] = None,
    top_open: bool = False,
) -> CellDescription:
    """The levelwise loop with the insertion step; Baseline is text-identical
    to levelwise_scc.  Raises ConstructionFailed as levelwise_scc does."""
    if state is None:
        state = ApxState()
    state.cell_flagged = False
    return _run_loop(P, s, _make_inserter(config, state), top_open=top_open)
