"""Named constants, their enclosures, and Q-linear independence facts."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import json
import os

from ..exactnum import (
    DEFAULT_PRECISION, RealInterval, eval_exp, eval_log, eval_rpow, pi_interval,
)
from .parse import parse_expr
from .symbolic import (
    ALG, CONST, INVLOG, KAPPA, LOG, LOGOF, PI, TS, Atom, Monomial, SymbolicReal,
    common_monomial, fmt_rational, log_rational,
)

# builtin decision rules and the classical results behind them
BUILTIN_FACTS = {
    "builtin:nonzero": "a product of nonzero constants is nonzero",
    "builtin:unique-factorization": "logarithms of distinct primes are Q-independent",
    "builtin:pi-irrational": "1 and pi are Q-independent",
    "builtin:pi-transcendental": "distinct rational powers of pi are Q-independent (Lindemann)",
    "builtin:baker": "1, pi and logarithms of distinct primes are Q-independent (Baker, via log(-1) = i*pi)",
    "builtin:lindemann-log": "1 and log r are Q-independent for rational r > 0, r != 1 (Hermite-Lindemann)",
    "builtin:factorial-base-irrational": "ts(s) is irrational: its factorial-base digits are bounded by p-1 and never eventually maximal",
    "builtin:countability": "a finitely generated subgroup of R is countable, hence not R",
    "builtin:kappa-pi": "log kappa and log pi are Q-independent when kappa^2 is a rational function of pi "
                        "that is not a power of pi (pi is transcendental)",
}


class RegistryError(LookupError):
    """An expression refers to a symbol the registry does not know."""


@dataclass(frozen=True)
class ConstantDecl:
    name: str
    description: str
    lo: Fraction
    hi: Fraction


@dataclass(frozen=True)
class Fact:
    fact_id: str
    monomials: frozenset
    description: str = ""


@dataclass(frozen=True)
class Independence:
    """Outcome of an independence query: fact ids on success, a missing fact otherwise."""

    ok: bool
    facts: tuple = ()
    missing: str = ""


class ConstantRegistry:
    """Immutable registry of constants and independence facts."""

    def __init__(self, constants=(), facts=(), enabled=None):
        self._constants = {c.name: c for c in constants}
        self._facts = tuple(facts)
        for c in self._constants.values():
            if c.lo <= 0 <= c.hi:
                raise ValueError(f"constant {c.name!r}: enclosure must exclude 0")
        for f in self._facts:
            for m in f.monomials:
                self.check_monomial(m)
        # None means every builtin and every declared fact is usable
        self._enabled = None if enabled is None else frozenset(enabled)
        self._enc_cache: dict = {}

    # -- construction -----------------------------------------------------
    @classmethod
    def default(cls) -> "ConstantRegistry":
        return cls()

    @classmethod
    def from_dict(cls, data: dict) -> "ConstantRegistry":
        consts = []
        for c in data.get("constants", []):
            lo, hi = c["enclosure"]
            consts.append(ConstantDecl(c["name"], c.get("description", ""), Fraction(lo), Fraction(hi)))
        facts = []
        for i, f in enumerate(data.get("facts", [])):
            monos = []
            for text in f["independent"]:
                v = parse_expr(text)
                if not v.is_single_term():
                    raise ValueError(f"fact entries must be single terms, got {text!r}")
                monos.append(v.terms[0][0])
            facts.append(Fact(f.get("id", f"user:{i}"), frozenset(monos), f.get("description", "")))
        return cls(consts, facts)

    @classmethod
    def from_file(cls, path) -> "ConstantRegistry":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    @classmethod
    def from_env(cls) -> "ConstantRegistry":
        path = os.environ.get("FACTORIUM_FACTS")
        return cls.from_file(path) if path else cls()

    def merged(self, other: "ConstantRegistry") -> "ConstantRegistry":
        consts = list(self._constants.values()) + list(other._constants.values())
        return ConstantRegistry(consts, self._facts + other._facts)

    def restricted(self, fact_ids) -> "ConstantRegistry":
        """Same constants, but only the named facts and builtin rules are usable."""
        return ConstantRegistry(self._constants.values(), self._facts, enabled=fact_ids)

    def _usable(self, fact_id: str) -> bool:
        return self._enabled is None or fact_id in self._enabled

    @property
    def facts(self):
        return self._facts

    @property
    def constants(self):
        return dict(self._constants)

    # -- symbol checks ------------------------------------------------------
    def check_atom(self, a: Atom):
        if a.kind == CONST and a.key not in self._constants:
            raise RegistryError(f"unregistered symbol {a.key!r}")
        if a.kind == LOGOF:
            self.check_atom(a.key)
        if a.kind == KAPPA:
            for v in a.key:
                self.check(v)

    def check_monomial(self, m: Monomial):
        for a in m.atoms():
            self.check_atom(a)

    def check(self, x: SymbolicReal):
        for m in x.monomials():
            self.check_monomial(m)

    # -- enclosures -----------------------------------------------------------
    def enclose_atom(self, a: Atom, precision: int) -> RealInterval:
        key = (a, precision)
        hit = self._enc_cache.get(key)
        if hit is not None:
            return hit
        k = a.kind
        if k == PI:
            out = pi_interval(precision)
        elif k == LOG:
            out = eval_log(Fraction(a.key), precision)
        elif k == INVLOG:
            out = 1 / eval_log(Fraction(a.key), precision + 4)
        elif k == TS:
            from ..type3zero import ts_interval
            out = ts_interval(a.key, precision)
        elif k == CONST:
            c = self._constants.get(a.key)
            if c is None:
                raise RegistryError(f"unregistered symbol {a.key!r}")
            out = RealInterval.enclose(c.lo, c.hi, precision)
        elif k == ALG:
            base, e = a.key
            out = eval_rpow(base, e, precision)
        elif k == LOGOF:
            inner = self.enclose_atom(a.key, precision + 8)
            out = eval_log(inner, precision)
        elif k == KAPPA:
            sq = [self.enclose(v, precision + 8) for v in a.key]
            num = sum((1 / s for s in sq[1:]), 1 / sq[0])
            den = sum(sq[1:], sq[0])
            out = (num / den).sqrt()
        else:
            raise ValueError(k)
        self._enc_cache[key] = out
        return out

    def enclose(self, x: SymbolicReal, precision: int = DEFAULT_PRECISION) -> RealInterval:
        p = precision + 8
        total = RealInterval(0, 0, p)
        for m, c in x.terms:
            acc = RealInterval(c, c, p)
            for a, e in m.items:
                base = self.enclose_atom(a, p)
                if e.denominator == 1:
                    acc = acc * (base ** int(e))
                else:
                    if base.lo <= 0:
                        raise ValueError(f"fractional power of a non-positive constant {a}")
                    acc = acc * eval_exp(eval_log(base, p) * e, p)
            total = total + acc
        return total.with_precision(precision)

    def sign(self, x: SymbolicReal, max_precision: int = 2048) -> int | None:
        """Certified sign of x, or None if it cannot be separated from 0."""
        if x.is_zero():
            return 0
        if x.is_rational():
            v = x.rational_value()
            return (v > 0) - (v < 0)
        p = 64
        while p <= max_precision:
            s = self.enclose(x, p).sign()
            if s is not None and s != 0:
                return s
            p *= 2
        return None

    def nonzero(self, x: SymbolicReal) -> Independence:
        """Certify x != 0 (numerically or through independence)."""
        if x.is_zero():
            return Independence(False, missing="value is formally zero")
        if x.is_rational():
            return Independence(True, ("builtin:nonzero",))
        for p in (64, 256, 1024):
            s = self.enclose(x, p).sign()
            if s:
                return Independence(True, ("numeric-enclosure",))
        return self.independent_values([x])

    # -- independence -----------------------------------------------------
    def _atom_nonzero(self, a: Atom) -> bool:
        if a.kind == LOGOF:
            inner = self.enclose_atom(a.key, 128)
            return not inner.contains(1)
        return True

    def independent_monomials(self, monos) -> Independence:
        """Try to certify that the given distinct monomials are Q-linearly independent."""
        monos = sorted(set(monos), key=lambda m: m.sort_key())
        for m in monos:
            self.check_monomial(m)
        if not monos:
            return Independence(True)
        if any(a.kind == INVLOG for m in monos for a in m.atoms()):
            raise ValueError("independence queries must be free of 1/log(b) atoms")
        if len(monos) == 1:
            if all(self._atom_nonzero(a) for a in monos[0].atoms()) and self._usable("builtin:nonzero"):
                return Independence(True, ("builtin:nonzero",))
            return Independence(False, missing=f"{monos[0]} != 0")
        g = common_monomial(monos)
        norm = sorted({m / g for m in monos}, key=lambda m: m.sort_key())
        rule = self._builtin_rule(norm)
        if rule is not None and self._usable(rule):
            return Independence(True, (rule,))
        for f in self._facts:
            if self._usable(f.fact_id) and _scaled_subset(norm, f.monomials):
                return Independence(True, (f.fact_id,))
        return Independence(False, missing="Q-independence of {" + ", ".join(str(m) for m in norm) + "}")

    def _builtin_rule(self, norm) -> str | None:
        atoms = set()
        for m in norm:
            atoms.update(m.atoms())
        kinds = {a.kind for a in atoms}
        if kinds <= {PI}:
            exps = [m.exponent(Atom(PI)) for m in norm]
            if set(exps) <= {0, 1}:
                return "builtin:pi-irrational"
            return "builtin:pi-transcendental"
        if kinds <= {PI, LOG}:
            # every normalised monomial must be 1, pi or log p
            if all(len(m.items) <= 1 and all(e == 1 for _, e in m.items) for m in norm):
                if PI not in kinds:
                    if any(m.is_one() for m in norm):
                        return "builtin:lindemann-log" if len(norm) == 2 else "builtin:baker"
                    return "builtin:unique-factorization"
                return "builtin:baker"
            return None
        if kinds == {LOGOF} and len(norm) == 2 and _kappa_pi_pair(norm):
            return "builtin:kappa-pi"
        if kinds == {TS} and len(norm) == 2:
            if any(m.is_one() for m in norm):
                other = next(m for m in norm if not m.is_one())
                if len(other.items) == 1 and other.items[0][1] == 1:
                    return "builtin:factorial-base-irrational"
        return None

    def independent_values(self, values) -> Independence:
        """Certify Q-independence of arbitrary IL-free symbolic values."""
        values = list(values)
        monos = sorted({m for v in values for m in v.monomials()}, key=lambda m: m.sort_key())
        from .lattice import rank
        rows = [[v.coefficient(m) for m in monos] for v in values]
        if rank(rows) < len(values):
            return Independence(False, missing="values are formally Q-dependent")
        return self.independent_monomials(monos)

    def fact_description(self, fact_id: str) -> str:
        if fact_id in BUILTIN_FACTS:
            return BUILTIN_FACTS[fact_id]
        for f in self._facts:
            if f.fact_id == fact_id:
                return f.description or ("Q-independence of {" + ", ".join(sorted(str(m) for m in f.monomials)) + "}")
        return fact_id


def _pi_power(x: SymbolicReal):
    """(c, e) when x = c * pi^e with rational c > 0 and integer e, else None."""
    if x.is_rational():
        c = x.rational_value()
        return (c, 0) if c > 0 else None
    if not x.is_single_term():
        return None
    m, c = x.terms[0]
    if c <= 0 or len(m.items) != 1:
        return None
    a, e = m.items[0]
    if a.kind != PI or e.denominator != 1:
        return None
    return c, int(e)


def _kappa_pi_pair(norm) -> bool:
    """Is norm = {log pi, log kappa(F^2)} with kappa^2 not a power of pi in Q(pi)?"""
    single = [m.items[0] for m in norm if len(m.items) == 1 and m.items[0][1] == 1]
    if len(single) != 2:
        return False
    inner = {a.key.kind: a.key for a, _ in single}
    if set(inner) != {PI, KAPPA}:
        return False
    terms = [_pi_power(v) for v in inner[KAPPA].key]
    if any(t is None for t in terms):
        return False
    # kappa^2 = N(x)/D(x) with N = sum 1/(c x^e), D = sum c x^e as Laurent polynomials
    num, den = {}, {}
    for c, e in terms:
        num[-e] = num.get(-e, 0) + 1 / c
        den[e] = den.get(e, 0) + c
    shift = min(num) - min(den)
    return {k - shift: v for k, v in num.items()} != den


def _scaled_subset(norm, fact_monos) -> bool:
    """Is some monomial multiple of `norm` contained in `fact_monos`?"""
    first = norm[0]
    for f in fact_monos:
        y = f / first
        if all((m * y) in fact_monos for m in norm):
            return True
    return False


@dataclass(frozen=True)
class Certificate:
    """A replayable justification of a yes/no answer."""

    claim: str
    answer: str
    rule: str
    facts: tuple = ()
    witness: tuple = ()
    query: tuple = ()

    def to_json(self) -> dict:
        out = {"claim": self.claim, "answer": self.answer, "rule": self.rule, "facts": list(self.facts)}
        if self.witness:
            out["witness"] = {k: v for k, v in self.witness}
        return out


@dataclass(frozen=True)
class Answer:
    """Three-valued answer with certificates (yes/no) or missing facts (unknown)."""

    value: str
    certificates: tuple = ()
    missing: tuple = ()
    note: str = ""

    @property
    def yes(self) -> bool:
        return self.value == "yes"

    @property
    def no(self) -> bool:
        return self.value == "no"

    @property
    def unknown(self) -> bool:
        return self.value == "unknown"

    def to_json(self) -> dict:
        out = {"answer": self.value, "certificates": [c.to_json() for c in self.certificates]}
        if self.missing:
            out["missing_facts"] = list(self.missing)
        if self.note:
            out["note"] = self.note
        return out


def negate_answer(a: Answer, claim: str) -> Answer:
    if a.unknown:
        return a
    flipped = "no" if a.yes else "yes"
    certs = tuple(Certificate(claim, flipped, c.rule, c.facts, c.witness, c.query) for c in a.certificates)
    return Answer(flipped, certs, a.missing, a.note)


def log_of_rational_str(r: Fraction) -> str:
    return str(log_rational(r))


__all__ = [
    "Answer", "BUILTIN_FACTS", "Certificate", "ConstantDecl", "ConstantRegistry", "Fact",
    "Independence", "RegistryError", "fmt_rational", "negate_answer",
]
