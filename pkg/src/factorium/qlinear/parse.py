"""Text grammar for symbolic reals, positive values and subgroups.

Additive expressions::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := primary ('^' primary)?
    primary:= NUMBER | 'pi' | NAME | 'log(' expr ')' | 'ts(' expr ')'
            | 'sqrt(' expr ')' | 'kappa(' expr (',' expr)* ')' | '(' expr ')'

Positive values (used for q, lambda and spectral points) additionally allow
``exp(expr)`` and ``base^(expr)`` with an arbitrary real exponent; a leading
minus sign is kept separately as the sign of q.

Subgroups are sums of ``Z(expr)``, ``Q(expr)``, ``R`` and ``0``.
"""

from __future__ import annotations

from fractions import Fraction
import re

from .symbolic import (
    ALG, CONST, KAPPA, LOGOF, TS, Atom, Monomial, PosReal, SymbolicReal,
    log_rational,
)


class ParseError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(.))")
_RESERVED = {"pi", "log", "ts", "sqrt", "kappa", "exp", "Z", "Q", "R"}


def _tokenize(text: str):
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        pos = m.end()
        num, name, sym = m.groups()
        if num is not None:
            out.append(("num", num))
        elif name is not None:
            out.append(("name", name))
        elif sym is not None and not sym.isspace():
            if sym not in "+-*/^(),":
                raise ParseError(f"unexpected character {sym!r} in {text!r}")
            out.append(("sym", sym))
    out.append(("end", None))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, k=0):
        return self.toks[self.i + k]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def accept(self, sym) -> bool:
        if self.peek() == ("sym", sym):
            self.i += 1
            return True
        return False

    def expect(self, sym):
        if not self.accept(sym):
            raise ParseError(f"expected {sym!r} in {self.text!r}")

    def done(self):
        if self.peek()[0] != "end":
            raise ParseError(f"trailing input in {self.text!r}")

    # -- additive domain --------------------------------------------------
    def expr(self) -> SymbolicReal:
        v = self.term()
        while True:
            if self.accept("+"):
                v = v + self.term()
            elif self.accept("-"):
                v = v - self.term()
            else:
                return v

    def term(self) -> SymbolicReal:
        v = self.unary()
        while True:
            if self.accept("*"):
                v = v * self.unary()
            elif self.accept("/"):
                d = self.unary()
                try:
                    v = v / d
                except (ValueError, ZeroDivisionError) as exc:
                    raise ParseError(str(exc)) from None
            else:
                return v

    def unary(self) -> SymbolicReal:
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self) -> SymbolicReal:
        base = self.primary()
        if self.accept("^"):
            if self.accept("-"):
                e = -self.primary()
            else:
                e = self.primary()
            if not e.is_rational():
                raise ParseError(f"exponent must be rational in {self.text!r}")
            try:
                return base ** e.rational_value()
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(str(exc)) from None
        return base

    def args(self):
        self.expect("(")
        out = [self.expr()]
        while self.accept(","):
            out.append(self.expr())
        self.expect(")")
        return out

    def primary(self) -> SymbolicReal:
        kind, val = self.take()
        if kind == "num":
            return SymbolicReal.rational(Fraction(val))
        if kind == "sym" and val == "(":
            v = self.expr()
            self.expect(")")
            return v
        if kind != "name":
            raise ParseError(f"unexpected token {val!r} in {self.text!r}")
        if val == "pi":
            return SymbolicReal.atom(Atom("pi"))
        if val == "log":
            (arg,) = self.args()
            return log_of(arg)
        if val == "ts":
            (arg,) = self.args()
            if not arg.is_rational() or not (0 < arg.rational_value() < 1):
                raise ParseError("ts(s) needs a rational 0 < s < 1")
            return SymbolicReal.atom(Atom(TS, arg.rational_value()))
        if val == "sqrt":
            (arg,) = self.args()
            try:
                return arg ** Fraction(1, 2)
            except ValueError as exc:
                raise ParseError(str(exc)) from None
        if val == "kappa":
            return SymbolicReal.atom(kappa_atom(self.args()))
        if val in _RESERVED:
            raise ParseError(f"{val!r} is not allowed here in {self.text!r}")
        return SymbolicReal.atom(Atom(CONST, val))

    # -- multiplicative domain --------------------------------------------
    def pexpr(self) -> PosReal:
        v = self.pfactor()
        while True:
            if self.accept("*"):
                v = v * self.pfactor()
            elif self.accept("/"):
                v = v / self.pfactor()
            else:
                return v

    def pfactor(self) -> PosReal:
        base = self.pprimary()
        if self.accept("^"):
            neg = self.accept("-")
            if self.peek() == ("sym", "("):
                self.take()
                e = self.expr()
                self.expect(")")
            else:
                e = self.primary()
            if neg:
                e = -e
            if e.is_rational():
                return base ** e.rational_value()
            return PosReal(base.log * e)
        return base

    def pprimary(self) -> PosReal:
        kind, val = self.peek()
        if kind == "num":
            self.take()
            r = Fraction(val)
            if r <= 0:
                raise ParseError("positive value expected")
            return PosReal.rational(r)
        if kind == "sym" and val == "(":
            self.take()
            v = self.pexpr()
            self.expect(")")
            return v
        if kind == "name" and val == "exp":
            self.take()
            (arg,) = self.args()
            return PosReal(arg)
        if kind == "name" and val == "sqrt":
            self.take()
            self.expect("(")
            v = self.pexpr()
            self.expect(")")
            return v ** Fraction(1, 2)
        # any other additive primary, read as a positive number
        v = self.primary()
        return PosReal(log_of(v))


def log_of(x: SymbolicReal) -> SymbolicReal:
    """log of a positive single-term value c*M."""
    if x.is_rational():
        r = x.rational_value()
        if r <= 0:
            raise ParseError("log of a nonpositive rational")
        return log_rational(r)
    if not x.is_single_term():
        raise ParseError(f"log is only supported for single-term values, not {x}")
    m, c = x.terms[0]
    if c <= 0:
        raise ParseError(f"log of a value with negative coefficient: {x}")
    out = log_rational(c)
    for atom, e in m.items:
        if atom.kind == "invlog":
            raise ParseError("log of 1/log(b) is not supported")
        if atom.kind == ALG:
            base, ae = atom.key
            out = out + log_rational(base) * ae * e
            continue
        out = out + SymbolicReal.atom(Atom(LOGOF, atom)) * e
    return out


def kappa_atom(squares) -> Atom:
    """Normalising constant sqrt(Tr F^-2 / Tr F^2) of a free unitary block, keyed by F^2."""
    return Atom(KAPPA, tuple(squares))


def parse_expr(text) -> SymbolicReal:
    if isinstance(text, SymbolicReal):
        return text
    if isinstance(text, (int, Fraction)):
        return SymbolicReal.rational(text)
    if not isinstance(text, str):
        raise ParseError(f"expression must be a string, got {type(text).__name__}")
    p = _Parser(text)
    v = p.expr()
    p.done()
    return v


def parse_positive(text) -> tuple[int, PosReal]:
    """Parse a nonzero real given as sign times a positive value."""
    if isinstance(text, (int, Fraction)):
        r = Fraction(text)
        if r == 0:
            raise ParseError("zero is not allowed")
        return (1 if r > 0 else -1), PosReal.rational(abs(r))
    if not isinstance(text, str):
        raise ParseError(f"value must be a string, got {type(text).__name__}")
    p = _Parser(text)
    sign = -1 if p.accept("-") else 1
    v = p.pexpr()
    p.done()
    return sign, v


def parse_subgroup_parts(text: str):
    """Return (z_generators, q_generators, full) for a subgroup expression."""
    if not isinstance(text, str):
        raise ParseError("subgroup must be a string")
    p = _Parser(text)
    z, q, full = [], [], False
    while True:
        kind, val = p.take()
        if kind == "name" and val in ("Z", "Q"):
            p.expect("(")
            e = p.expr()
            p.expect(")")
            (z if val == "Z" else q).append(e)
        elif kind == "name" and val == "R":
            full = True
        elif kind == "num" and Fraction(val) == 0:
            pass
        elif kind == "sym" and val == "(":
            raise ParseError(f"unexpected '(' in subgroup {text!r}")
        else:
            raise ParseError(f"bad subgroup term in {text!r}")
        if not p.accept("+"):
            break
    p.done()
    return z, q, full
