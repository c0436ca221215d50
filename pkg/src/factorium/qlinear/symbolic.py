"""Symbolic reals: finite Q-linear combinations of monomials in named constants."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
import math

from ..exactnum import iroot

# atom kinds, in display/sort order
PI = "pi"
LOG = "log"          # log of a prime
INVLOG = "invlog"    # 1/log(b), b > 1 rational with at least two prime factors
TS = "ts"            # t_s factorial series constant
CONST = "const"      # user-declared constant
ALG = "alg"          # c^e for rational c > 0 and 0 < e < 1
LOGOF = "logof"      # log of another atom
KAPPA = "kappa"      # normalising constant of a free unitary block

_KIND_ORDER = {k: i for i, k in enumerate((PI, LOG, INVLOG, TS, CONST, ALG, LOGOF, KAPPA))}


def fmt_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@total_ordering
@dataclass(frozen=True)
class Atom:
    kind: str
    key: object = None

    def sort_key(self):
        return (_KIND_ORDER[self.kind], _key_str(self.key))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        k = self.kind
        if k == PI:
            return "pi"
        if k == LOG:
            return f"log({self.key})"
        if k == INVLOG:
            return f"(1/log({fmt_rational(self.key)}))"
        if k == TS:
            return f"ts({fmt_rational(self.key)})"
        if k == CONST:
            return str(self.key)
        if k == ALG:
            base, e = self.key
            if e == Fraction(1, 2):
                return f"sqrt({fmt_rational(base)})"
            return f"({fmt_rational(base)})^({fmt_rational(e)})"
        if k == LOGOF:
            return f"log({self.key})"
        if k == KAPPA:
            return "kappa(" + ",".join(str(v) for v in self.key) + ")"
        raise ValueError(k)


def _key_str(key) -> str:
    if isinstance(key, Fraction):
        return f"{float(key):030.15f}/{fmt_rational(key)}"
    if isinstance(key, int):
        return f"{key:020d}"
    if isinstance(key, tuple):
        return "|".join(_key_str(k) for k in key)
    return str(key)


@total_ordering
class Monomial:
    """Product of atoms with nonzero rational exponents."""

    __slots__ = ("items", "_hash")

    def __init__(self, items=()):
        merged: dict[Atom, Fraction] = {}
        for atom, e in items:
            merged[atom] = merged.get(atom, Fraction(0)) + Fraction(e)
        self.items = tuple(sorted((a, e) for a, e in merged.items() if e != 0))
        self._hash = hash(self.items)

    @classmethod
    def of(cls, atom: Atom, e=1) -> "Monomial":
        return cls([(atom, e)])

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return isinstance(other, Monomial) and self.items == other.items

    def sort_key(self):
        return (len(self.items), tuple((a.sort_key(), -e) for a, e in self.items))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(self.items + other.items)

    def __truediv__(self, other: "Monomial") -> "Monomial":
        return Monomial(self.items + tuple((a, -e) for a, e in other.items))

    def __pow__(self, e) -> "Monomial":
        return Monomial((a, x * Fraction(e)) for a, x in self.items)

    def is_one(self) -> bool:
        return not self.items

    def exponent(self, atom: Atom) -> Fraction:
        for a, e in self.items:
            if a == atom:
                return e
        return Fraction(0)

    def atoms(self):
        return [a for a, _ in self.items]

    def __str__(self):
        if not self.items:
            return "1"
        num, den = [], []
        for a, e in self.items:
            target = num if e > 0 else den
            e = abs(e)
            s = str(a)
            if a.kind == INVLOG:
                # 1/log(b) raised to e
                s = f"log({fmt_rational(a.key)})"
                target = den if target is num else num
            if e != 1:
                s = f"{s}^{fmt_rational(e)}" if e.denominator == 1 else f"{s}^({fmt_rational(e)})"
            target.append(s)
        out = "*".join(num) if num else "1"
        for d in den:
            out += "/" + d
        return out

    __repr__ = __str__


ONE = Monomial()


class SymbolicReal:
    """Finite map monomial -> nonzero rational coefficient."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        acc: dict[Monomial, Fraction] = {}
        if terms:
            it = terms.items() if isinstance(terms, dict) else terms
            for m, c in it:
                c = Fraction(c)
                if c:
                    acc[m] = acc.get(m, Fraction(0)) + c
        self.terms = tuple(sorted(((m, c) for m, c in acc.items() if c != 0), key=lambda mc: mc[0].sort_key()))
        self._hash = hash(self.terms)

    # constructors
    @classmethod
    def rational(cls, x) -> "SymbolicReal":
        return cls({ONE: Fraction(x)})

    @classmethod
    def monomial(cls, m: Monomial, c=1) -> "SymbolicReal":
        return cls({m: Fraction(c)})

    @classmethod
    def atom(cls, a: Atom, e=1) -> "SymbolicReal":
        return cls({Monomial.of(a, e): Fraction(1)})

    # inspection
    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SymbolicReal.rational(other)
        return isinstance(other, SymbolicReal) and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def is_rational(self) -> bool:
        return all(m.is_one() for m, _ in self.terms)

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not a rational")
        return self.terms[0][1] if self.terms else Fraction(0)

    def monomials(self):
        return [m for m, _ in self.terms]

    def coefficient(self, m: Monomial) -> Fraction:
        for mm, c in self.terms:
            if mm == m:
                return c
        return Fraction(0)

    def is_single_term(self) -> bool:
        return len(self.terms) == 1

    def atoms(self):
        out = set()
        for m, _ in self.terms:
            out.update(m.atoms())
        return sorted(out)

    # arithmetic
    def _coerce(self, other) -> "SymbolicReal":
        if isinstance(other, SymbolicReal):
            return other
        if isinstance(other, (int, Fraction)):
            return SymbolicReal.rational(other)
        raise TypeError(f"cannot combine SymbolicReal with {type(other).__name__}")

    def __add__(self, other):
        o = self._coerce(other)
        return SymbolicReal(list(self.terms) + list(o.terms))

    __radd__ = __add__

    def __neg__(self):
        return SymbolicReal([(m, -c) for m, c in self.terms])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return SymbolicReal([(m, c * other) for m, c in self.terms])
        o = self._coerce(other)
        return SymbolicReal([(m1 * m2, c1 * c2) for m1, c1 in self.terms for m2, c2 in o.terms])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        return self * self._coerce(other).reciprocal()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.reciprocal()

    def reciprocal(self) -> "SymbolicReal":
        if self.is_zero():
            raise ZeroDivisionError("division by zero")
        if self.is_single_term():
            m, c = self.terms[0]
            return SymbolicReal({ONE / m: 1 / c})
        # factor out a common monomial, then try a log-of-rational form
        g = common_monomial(self.monomials())
        rest = SymbolicReal([(m / g, c) for m, c in self.terms])
        inv = _log_form_reciprocal(rest)
        if inv is None:
            raise ValueError(f"cannot divide by {self}: only single terms and logarithms of rationals are invertible")
        return inv * SymbolicReal.monomial(ONE / g)

    def __pow__(self, e):
        e = Fraction(e)
        if e.denominator == 1 and e >= 0:
            out = SymbolicReal.rational(1)
            for _ in range(e.numerator):
                out = out * self
            return out
        if not self.is_single_term():
            if e.denominator == 1:
                return self.reciprocal() ** (-e)
            raise ValueError(f"fractional power of the multi-term value {self}")
        m, c = self.terms[0]
        return rational_power(c, e) * SymbolicReal.monomial(m ** e)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.terms:
            if m.is_one():
                body = fmt_rational(abs(c))
            else:
                ms = str(m)
                a = abs(c)
                if a == 1:
                    body = ms
                elif ms.startswith("1/"):
                    body = f"{fmt_rational(a)}{ms[1:]}"
                elif a.denominator == 1:
                    body = f"{a.numerator}*{ms}"
                elif a.numerator == 1 and not ms.startswith("1/"):
                    body = f"{ms}/{a.denominator}"
                else:
                    body = f"{fmt_rational(a)}*{ms}" if a.numerator != 1 else f"{ms}/{a.denominator}"
            parts.append(("-" if c < 0 else "+", body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"SymbolicReal({self})"


def common_monomial(monos) -> Monomial:
    """Componentwise minimum of exponents (absent atoms count as exponent 0)."""
    monos = list(monos)
    if not monos:
        return ONE
    atoms = set()
    for m in monos:
        atoms.update(m.atoms())
    return Monomial([(a, min(m.exponent(a) for m in monos)) for a in atoms])


# -- rationals and their logarithms -------------------------------------------

def factorize(n: int) -> dict[int, int]:
    """Prime factorisation by trial division (inputs here are small)."""
    n = abs(n)
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_exponents(r: Fraction) -> dict[int, int]:
    r = Fraction(r)
    if r <= 0:
        raise ValueError("prime_exponents needs a positive rational")
    out = dict(factorize(r.numerator))
    for p, e in factorize(r.denominator).items():
        out[p] = out.get(p, 0) - e
    return {p: e for p, e in out.items() if e}


def log_rational(r) -> SymbolicReal:
    """log r for a positive rational, as a combination of prime logarithms."""
    return SymbolicReal([(Monomial.of(Atom(LOG, p)), e) for p, e in prime_exponents(Fraction(r)).items()])


def primitive_base(exps: dict[int, Fraction]) -> tuple[Fraction, Fraction]:
    """Write sum e_p log p as d*log(B) with B > 1 and coprime integer exponents."""
    nums = [e.numerator for e in exps.values()]
    dens = [e.denominator for e in exps.values()]
    g = math.gcd(*nums) if len(nums) > 1 else abs(nums[0])
    lcm = 1
    for d in dens:
        lcm = lcm * d // math.gcd(lcm, d)
    d = Fraction(g, lcm)
    B = Fraction(1)
    for p, e in exps.items():
        B *= Fraction(p) ** int(e / d)
    if B < 1:
        B, d = 1 / B, -d
    return B, d


def _log_form_reciprocal(x: SymbolicReal) -> SymbolicReal | None:
    exps: dict[int, Fraction] = {}
    for m, c in x.terms:
        if len(m.items) != 1:
            return None
        a, e = m.items[0]
        if a.kind != LOG or e != 1:
            return None
        exps[a.key] = c
    return inverse_log(exps)


def inverse_log(exps: dict[int, Fraction]) -> SymbolicReal:
    """1 / (sum e_p log p)."""
    B, d = primitive_base(exps)
    fac = prime_exponents(B)
    if len(fac) == 1:
        (p, _), = fac.items()
        return SymbolicReal({Monomial.of(Atom(LOG, p), -1): 1 / d})
    return SymbolicReal({Monomial.of(Atom(INVLOG, B)): 1 / d})


def log_of_invlog_base(b: Fraction) -> SymbolicReal:
    return log_rational(b)


def rational_power(c: Fraction, e: Fraction) -> SymbolicReal:
    """c^e for rational c > 0 as a symbolic value (an algebraic atom when irrational)."""
    c, e = Fraction(c), Fraction(e)
    if c <= 0:
        raise ValueError("rational_power needs a positive base")
    if e.denominator == 1:
        return SymbolicReal.rational(c ** e.numerator)
    whole = math.floor(e)
    frac = e - whole
    k = frac.denominator
    num_root = iroot(c.numerator, k)
    den_root = iroot(c.denominator, k)
    base_mult = SymbolicReal.rational(c ** whole)
    if num_root ** k == c.numerator and den_root ** k == c.denominator:
        root = Fraction(num_root, den_root)
        return base_mult * (root ** frac.numerator)
    return base_mult * SymbolicReal.atom(Atom(ALG, (c, frac)))


class PosReal:
    """A positive real number stored through its logarithm."""

    __slots__ = ("log",)

    def __init__(self, log: SymbolicReal):
        self.log = log

    @classmethod
    def rational(cls, r) -> "PosReal":
        return cls(log_rational(Fraction(r)))

    def __eq__(self, other):
        return isinstance(other, PosReal) and self.log == other.log

    def __hash__(self):
        return hash(("pos", self.log))

    def __mul__(self, other: "PosReal") -> "PosReal":
        return PosReal(self.log + other.log)

    def __truediv__(self, other: "PosReal") -> "PosReal":
        return PosReal(self.log - other.log)

    def __pow__(self, e) -> "PosReal":
        return PosReal(self.log * Fraction(e))

    def inverse(self) -> "PosReal":
        return PosReal(-self.log)

    def is_one(self) -> bool:
        return self.log.is_zero()

    def as_rational(self) -> Fraction | None:
        out = Fraction(1)
        for m, c in self.log.terms:
            if len(m.items) != 1 or m.items[0][0].kind != LOG or m.items[0][1] != 1 or c.denominator != 1:
                return None
            out *= Fraction(m.items[0][0].key) ** c.numerator
        return out

    def __str__(self):
        r = self.as_rational()
        if r is not None:
            return fmt_rational(r)
        prime_part: dict[int, Fraction] = {}
        factors = []
        rest = []
        for m, c in self.log.terms:
            if len(m.items) == 1 and m.items[0][1] == 1 and m.items[0][0].kind == LOG:
                prime_part[m.items[0][0].key] = c
            elif len(m.items) == 1 and m.items[0][1] == 1 and m.items[0][0].kind == LOGOF:
                base = str(m.items[0][0].key)
                factors.append(base if c == 1 else f"{base}^{_exp_str(c)}")
            else:
                rest.append((m, c))
        if prime_part:
            B, d = primitive_base(prime_part)
            if d.denominator == 1 and d > 0:
                factors.insert(0, fmt_rational(B ** d.numerator))
            elif d.denominator == 1:
                factors.insert(0, fmt_rational(1 / B ** (-d.numerator)))
            else:
                factors.insert(0, f"({fmt_rational(B)})^({fmt_rational(d)})")
        if rest:
            factors.append(f"exp({SymbolicReal(rest)})")
        return "*".join(factors) if factors else "1"

    __repr__ = __str__


def _exp_str(c: Fraction) -> str:
    return fmt_rational(c) if c.denominator == 1 and c > 0 else f"({fmt_rational(c)})"
