"""SMT-LIB2 front end for the QF_NRA subset the solver handles.

Parses scripts into a Formula plus declaration-ordered variables, and prints
verdicts and models back in SMT-LIB syntax.  Unsupported constructs (let,
ite, quantifiers, Int sort, non-literal division, ...) raise an
UnsupportedFeature naming the construct; malformed input raises a ParseError
carrying line and column.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from .numeric import RealAlgebraic, RealValue
from .poly import Polynomial
from .nlsat import (
    BoolAtom,
    Clause,
    Formula,
    Literal,
    Result,
    poly_atom,
    to_cnf,
)


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class UnsupportedFeature(ParseError):
    def __init__(self, construct: str, line: int, col: int):
        super().__init__(f"unsupported construct: {construct}", line, col)
        self.construct = construct


# ---------------------------------------------------------------------------
# s-expression reader with positions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Tok:
    text: str
    line: int
    col: int


def _tokenize(text: str) -> List[_Tok]:
    toks: List[_Tok] = []
    line, col, i = 1, 1, 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line, col, i = line + 1, 1, i + 1
        elif c in " \t\r":
            col, i = col + 1, i + 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif c in "()":
            toks.append(_Tok(c, line, col))
            col, i = col + 1, i + 1
        elif c == "|":
            j = text.find("|", i + 1)
            if j < 0:
                raise ParseError("unterminated quoted symbol", line, col)
            toks.append(_Tok(text[i + 1:j], line, col))
            col += j + 1 - i
            i = j + 1
        else:
            j = i
            while j < n and text[j] not in " \t\r\n();":
                j += 1
            toks.append(_Tok(text[i:j], line, col))
            col += j - i
            i = j
    return toks


SExpr = Union[_Tok, list]


def _read_all(toks: List[_Tok]) -> List[SExpr]:
    out: List[SExpr] = []
    stack: List[list] = []
    opens: List[_Tok] = []
    for t in toks:
        if t.text == "(":
            stack.append([])
            opens.append(t)
        elif t.text == ")":
            if not stack:
                raise ParseError("unbalanced ')'", t.line, t.col)
            done = stack.pop()
            opens.pop()
            (stack[-1] if stack else out).append(done)
        else:
            (stack[-1] if stack else out).append(t)
    if stack:
        o = opens[-1]
        raise ParseError("unbalanced '('", o.line, o.col)
    return out


def _pos(e: SExpr) -> Tuple[int, int]:
    while isinstance(e, list):
        if not e:
            return (0, 0)
        e = e[0]
    return (e.line, e.col)


# ---------------------------------------------------------------------------
# script
# ---------------------------------------------------------------------------

@dataclass
class Script:
    logic: Optional[str] = None
    var_names: List[str] = field(default_factory=list)
    bool_names: List[str] = field(default_factory=list)
    assertions: list = field(default_factory=list)  # CNF-ready terms
    commands: List[str] = field(default_factory=list)

    def to_formula(self) -> Formula:
        clauses: List[Clause] = []
        for t in self.assertions:
            clauses.extend(to_cnf(t))
        return Formula(len(self.var_names), clauses, list(self.var_names))


_NUMERIC = "0123456789"


def _literal_value(tok: _Tok) -> Optional[Fraction]:
    s = tok.text
    body = s[1:] if s[:1] == "-" and len(s) > 1 else s
    if not body or not all(c in _NUMERIC + "." for c in body) or body.count(".") > 1:
        return None
    if body.startswith(".") or body.endswith("."):
        return None
    if "." in body:
        whole, frac = body.split(".")
        v = Fraction(int(whole + frac), 10 ** len(frac))
    else:
        v = Fraction(int(body))
    return -v if s[:1] == "-" else v


_REL_MIRROR = {"<": ">", "<=": ">=", ">": "<", ">=": "<="}
_UNSUPPORTED_TERMS = {
    "let", "ite", "forall", "exists", "match", "!", "div", "mod", "abs",
    "to_real", "to_int", "is_int",
}


class _Parser:
    def __init__(self):
        self.script = Script()
        self.vars: dict = {}   # name -> 1-based level
        self.bools: dict = {}  # name -> BoolAtom

    # -- terms ---------------------------------------------------------------

    def poly_term(self, e: SExpr) -> Polynomial:
        line, col = _pos(e)
        if isinstance(e, _Tok):
            v = _literal_value(e)
            if v is not None:
                return Polynomial.const(v)
            if e.text in self.vars:
                return Polynomial.var(self.vars[e.text])
            if e.text in self.bools:
                raise ParseError(f"Bool symbol '{e.text}' in arithmetic term", line, col)
            raise ParseError(f"undeclared symbol '{e.text}'", line, col)
        if not e or not isinstance(e[0], _Tok):
            raise ParseError("expected an operator", line, col)
        op = e[0].text
        args = e[1:]
        if op in _UNSUPPORTED_TERMS:
            raise UnsupportedFeature(op, line, col)
        if op == "+":
            if not args:
                raise ParseError("'+' needs arguments", line, col)
            acc = Polynomial.const(Fraction(0))
            for a in args:
                acc = acc + self.poly_term(a)
            return acc
        if op == "-":
            if not args:
                raise ParseError("'-' needs arguments", line, col)
            if len(args) == 1:
                return -self.poly_term(args[0])
            acc = self.poly_term(args[0])
            for a in args[1:]:
                acc = acc - self.poly_term(a)
            return acc
        if op == "*":
            if not args:
                raise ParseError("'*' needs arguments", line, col)
            acc = Polynomial.const(Fraction(1))
            for a in args:
                acc = acc * self.poly_term(a)
            return acc
        if op == "/":
            if len(args) != 2:
                raise ParseError("'/' needs two arguments", line, col)
            den = self.numeric_literal(args[1])
            if den is None:
                raise UnsupportedFeature("non-literal division", *_pos(args[1]))
            if den == 0:
                raise ParseError("division by zero", *_pos(args[1]))
            return self.poly_term(args[0]) * Polynomial.const(Fraction(1) / den)
        raise ParseError(f"unknown arithmetic operator '{op}'", line, col)

    def numeric_literal(self, e: SExpr) -> Optional[Fraction]:
        if isinstance(e, _Tok):
            return _literal_value(e)
        if (
            len(e) == 2
            and isinstance(e[0], _Tok)
            and e[0].text == "-"
        ):
            v = self.numeric_literal(e[1])
            return None if v is None else -v
        if (
            len(e) == 3
            and isinstance(e[0], _Tok)
            and e[0].text == "/"
        ):
            a, b = self.numeric_literal(e[1]), self.numeric_literal(e[2])
            if a is None or b is None or b == 0:
                return None
            return a / b
        return None

    def bool_term(self, e: SExpr):
        line, col = _pos(e)
        if isinstance(e, _Tok):
            if e.text == "true":
                return True
            if e.text == "false":
                return False
            if e.text in self.bools:
                return Literal(self.bools[e.text])
            if e.text in self.vars:
                raise ParseError(f"Real symbol '{e.text}' used as Bool", line, col)
            raise ParseError(f"undeclared symbol '{e.text}'", line, col)
        if not e or not isinstance(e[0], _Tok):
            raise ParseError("expected an operator", line, col)
        op = e[0].text
        args = e[1:]
        if op in _UNSUPPORTED_TERMS:
            raise UnsupportedFeature(op, line, col)
        if op == "and":
            return ("and",) + tuple(self.bool_term(a) for a in args)
        if op == "or":
            return ("or",) + tuple(self.bool_term(a) for a in args)
        if op == "not":
            if len(args) != 1:
                raise ParseError("'not' needs one argument", line, col)
            return ("not", self.bool_term(args[0]))
        if op == "=>":
            if len(args) != 2:
                raise ParseError("'=>' needs two arguments", line, col)
            return ("or", ("not", self.bool_term(args[0])), self.bool_term(args[1]))
        if op in ("<", "<=", "=", ">=", ">"):
            if len(args) < 2:
                raise ParseError(f"'{op}' needs at least two arguments", line, col)
            parts = []
            for a, b in zip(args, args[1:]):
                parts.append(self.atom(op, a, b))
            return parts[0] if len(parts) == 1 else ("and",) + tuple(parts)
        if op == "distinct":
            if len(args) != 2:
                raise UnsupportedFeature("n-ary distinct", line, col)
            return self.atom("!=", args[0], args[1])
        raise ParseError(f"unknown operator '{op}'", line, col)

    def atom(self, rel: str, a: SExpr, b: SExpr) -> Literal:
        p = self.poly_term(a) - self.poly_term(b)
        return Literal(poly_atom(p, rel))

    # -- commands ------------------------------------------------------------

    def command(self, e: SExpr):
        line, col = _pos(e)
        if not isinstance(e, list) or not e or not isinstance(e[0], _Tok):
            raise ParseError("expected a command", line, col)
        name = e[0].text
        sc = self.script
        if name == "set-logic":
            if len(e) != 2 or not isinstance(e[1], _Tok):
                raise ParseError("set-logic needs one symbol", line, col)
            if e[1].text != "QF_NRA":
                raise UnsupportedFeature(f"logic {e[1].text}", *_pos(e[1]))
            sc.logic = e[1].text
        elif name in ("set-info", "set-option"):
            pass
        elif name in ("declare-fun", "declare-const"):
            self.declare(e, name)
        elif name == "assert":
            if len(e) != 2:
                raise ParseError("assert needs one term", line, col)
            sc.assertions.append(self.bool_term(e[1]))
        elif name in ("check-sat", "get-model", "exit"):
            sc.commands.append(name)
        else:
            raise UnsupportedFeature(name, line, col)

    def declare(self, e: SExpr, kind: str):
        line, col = _pos(e)
        if kind == "declare-fun":
            if len(e) != 4 or not isinstance(e[1], _Tok) or not isinstance(e[3], _Tok):
                raise ParseError("declare-fun needs (declare-fun name () sort)", line, col)
            if not isinstance(e[2], list) or e[2]:
                raise UnsupportedFeature("function arguments", *_pos(e[2]))
            name, sort = e[1].text, e[3].text
        else:
            if len(e) != 3 or not isinstance(e[1], _Tok) or not isinstance(e[2], _Tok):
                raise ParseError("declare-const needs (declare-const name sort)", line, col)
            name, sort = e[1].text, e[2].text
        if name in self.vars or name in self.bools:
            raise ParseError(f"redeclared symbol '{name}'", line, col)
        if sort == "Real":
            self.vars[name] = len(self.vars) + 1
            self.script.var_names.append(name)
        elif sort == "Bool":
            self.bools[name] = BoolAtom(name)
            self.script.bool_names.append(name)
        else:
            raise UnsupportedFeature(f"sort {sort}", line, col)


def parse(text: str) -> Script:
    p = _Parser()
    for e in _read_all(_tokenize(text)):
        p.command(e)
    return p.script


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------

def format_rational(v: Fraction) -> str:
    if v < 0:
        return f"(- {format_rational(-v)})"
    if v.denominator == 1:
        return str(v.numerator)
    return f"(/ {v.numerator} {v.denominator})"


def _format_upoly(cs, var: str) -> str:
    terms = []
    for k, c in enumerate(cs):
        c = Fraction(c)
        if c == 0:
            continue
        factors = [var] * k
        if abs(c) != 1 or k == 0:
            factors = [format_rational(abs(c))] + factors
        t = factors[0] if len(factors) == 1 else "(* " + " ".join(factors) + ")"
        terms.append(f"(- {t})" if c < 0 else t)
    if not terms:
        return "0"
    return terms[0] if len(terms) == 1 else "(+ " + " ".join(terms) + ")"


def format_value(v: RealValue, var: str = "x") -> str:
    if isinstance(v, RealAlgebraic):
        # count which real root of the defining polynomial this is
        from .numeric import algebraic_or_rational, compare
        from .roots import isolate_real_roots

        idx = 1
        for lo, hi in isolate_real_roots(v.defining):
            r = algebraic_or_rational(v.defining, lo, hi)
            if compare(r, v) < 0:
                idx += 1
        poly = _format_upoly(v.defining, var)
        return f"(root {poly} {idx} ({format_rational(v.lo)} {format_rational(v.hi)}))"
    return format_rational(v)


def parse_value(text: str, var: str = "x") -> RealValue:
    """Inverse of format_value: reads a rational term or a
    (root <poly> <index> (<lo> <hi>)) entry back into a real value."""
    exprs = _read_all(_tokenize(text))
    if len(exprs) != 1:
        raise ParseError("expected a single value", 1, 1)
    e = exprs[0]
    p = _Parser()
    v = p.numeric_literal(e)
    if v is not None:
        return v
    if (
        isinstance(e, list)
        and len(e) == 4
        and isinstance(e[0], _Tok)
        and e[0].text == "root"
        and isinstance(e[2], _Tok)
        and isinstance(e[3], list)
        and len(e[3]) == 2
    ):
        from .numeric import algebraic_or_rational

        p.vars[var] = 1
        poly = p.poly_term(e[1])
        cs = poly.specialize(())
        lo = p.numeric_literal(e[3][0])
        hi = p.numeric_literal(e[3][1])
        if lo is None or hi is None:
            raise ParseError("root interval must be numeric", *_pos(e[3]))
        return algebraic_or_rational(cs, lo, hi)
    raise ParseError("unrecognized value", *_pos(e))


def print_result(result: Result, var_names: Optional[List[str]] = None) -> str:
    lines = [result.status]
    if result.status == "sat" and result.model is not None:
        names = var_names or [f"x{i + 1}" for i in range(len(result.model))]
        lines.append("(")
        for name, v in zip(names, result.model):
            lines.append(f"  (define-fun {name} () Real {format_value(v, name)})")
        lines.append(")")
    return "\n".join(lines)


def _format_poly(p: Polynomial, names: List[str]) -> str:
    terms = []
    ms = sorted(p.coeffs, key=lambda m: (len(m), tuple(reversed(m))), reverse=True)
    for m in ms:
        c = p.coeffs[m]
        factors = []
        if abs(c) != 1 or not m:
            factors.append(format_rational(abs(c)))
        for i, e in enumerate(m):
            factors += [names[i]] * e
        t = factors[0] if len(factors) == 1 else "(* " + " ".join(factors) + ")"
        terms.append(f"(- {t})" if c < 0 else t)
    if not terms:
        return "0"
    return terms[0] if len(terms) == 1 else "(+ " + " ".join(terms) + ")"


def format_script(formula: Formula) -> str:
    """Render a parsed formula back to a script (declarations, one assert per
    clause); re-parsing yields a structurally identical formula."""
    names = formula.var_names or [f"x{i + 1}" for i in range(formula.n_vars)]
    out = ["(set-logic QF_NRA)"]
    out += [f"(declare-fun {n} () Real)" for n in names]
    bools = []
    for c in formula.clauses:
        for l in c.lits:
            if isinstance(l.atom, BoolAtom) and l.atom.name not in bools:
                bools.append(l.atom.name)
    out += [f"(declare-fun {n} () Bool)" for n in bools]

    def lit_text(l: Literal) -> str:
        a = l.atom
        if isinstance(a, BoolAtom):
            body = a.name
        else:
            op = "distinct" if a.rel == "!=" else a.rel
            body = f"({op} {_format_poly(a.poly, names)} 0)"
        return body if l.positive else f"(not {body})"

    for c in formula.clauses:
        if not c.lits:
            out.append("(assert false)")
        elif len(c.lits) == 1:
            out.append(f"(assert {lit_text(c.lits[0])})")
        else:
            out.append("(assert (or " + " ".join(lit_text(l) for l in c.lits) + "))")
    out.append("(check-sat)")
    return "\n".join(out) + "\n"
