"""Catalogue of building blocks and their spectral and scaling data."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import MissingFactError, SpecError, UndecidedError
from .exactnum import DEFAULT_PRECISION, RealInterval, term_modulus
from .qlinear import (
    AdditiveSubgroup, Answer, Atom, Certificate, ConstantRegistry, Decided, MultClosure,
    ParseError, PosReal, SymbolicReal, intersect_all, member, parse_expr, parse_positive,
)
from .qlinear.parse import kappa_atom, log_of
from .sets import ClosedMultSet, Undetermined

PI = SymbolicReal.atom(Atom("pi"))


@dataclass(frozen=True)
class QParam:
    """A deformation parameter q = sign * |q| with 0 < |q| < 1."""

    sign: int
    modulus: PosReal

    @property
    def log_abs(self) -> SymbolicReal:
        return self.modulus.log

    def rational(self) -> Fraction | None:
        r = self.modulus.as_rational()
        return None if r is None else self.sign * r

    def __str__(self):
        return ("-" if self.sign < 0 else "") + str(self.modulus)


def parse_q(text, registry: ConstantRegistry, pointer: str = "") -> QParam:
    try:
        sign, mod = parse_positive(text)
    except (ParseError, ValueError) as exc:
        raise SpecError(f"bad q value {text!r}: {exc}", pointer) from None
    registry.check(mod.log)
    if registry.sign(mod.log) != -1:
        raise SpecError(f"q = {text!r} is not certified to satisfy 0 < |q| < 1", pointer)
    return QParam(sign, mod)


def _half_integer(s, what="spin") -> Fraction:
    s = Fraction(s)
    if s < 0 or (2 * s).denominator != 1:
        raise ValueError(f"{what} must lie in (1/2)Z_+, got {s}")
    return s


@dataclass(frozen=True)
class RhoSpectrum:
    eigenvalues: tuple  # of PosReal, as a multiset

    def __post_init__(self):
        if not self.eigenvalues:
            raise ValueError("a rho spectrum is nonempty")

    def inverse(self) -> "RhoSpectrum":
        return RhoSpectrum(tuple(x.inverse() for x in self.eigenvalues))

    def __mul__(self, other: "RhoSpectrum") -> "RhoSpectrum":
        return RhoSpectrum(tuple(a * b for a in self.eigenvalues for b in other.eigenvalues))

    def to_json(self):
        return [str(x) for x in self.eigenvalues]


def _ladder(log_abs_q: SymbolicReal, s: Fraction) -> RhoSpectrum:
    """diag(|q|^(-2s), |q|^(-2s+2), ..., |q|^(2s))"""
    n = int(2 * s) + 1
    return RhoSpectrum(tuple(PosReal(log_abs_q * (2 * (i - s - 1))) for i in range(1, n + 1)))


def spectrum_symmetric(r: RhoSpectrum, registry: ConstantRegistry | None = None) -> bool:
    """Is the multiset of eigenvalues equal to the multiset of their inverses?

    Formally distinct logs are checked to be numerically distinct, so the
    formal multiset comparison is the real one.
    """
    registry = registry or ConstantRegistry()
    logs = [x.log for x in r.eigenvalues]
    inv = [-x for x in logs]
    classes = sorted(set(logs) | set(inv), key=str)
    for a, b in combinations(classes, 2):
        if not registry.nonzero(a - b).ok:
            raise UndecidedError(f"cannot separate spectral values exp({a}) and exp({b})")
    return Counter(logs) == Counter(inv)


class Block:
    kind = ""
    kac = False
    injective = False
    factor = False
    class_commutant_in_class = False
    semifinite_type = "other"

    def flags(self) -> dict:
        return {"kac": self.kac, "injective": self.injective, "factor": self.factor,
                "class_commutant_in_class": self.class_commutant_in_class,
                "semifinite_type": self.semifinite_type}

    def key(self):
        raise NotImplementedError


@dataclass(frozen=True)
class SUq2(Block):
    q: QParam
    kind = "SUq2"
    injective = True

    def key(self):
        return ("SUq2", self.q.log_abs)

    def to_json(self):
        return {"kind": self.kind, "q": str(self.q)}

    def period(self) -> SymbolicReal:
        return PI / self.q.log_abs


@dataclass(frozen=True)
class Hnuq(Block):
    nu: SymbolicReal
    q: QParam
    hypothesis: Answer | None = None
    kind = "Hnuq"
    injective = True
    factor = True
    class_commutant_in_class = True
    semifinite_type = "II_inf"

    def key(self):
        # only |q| enters the spectral data; nu enters T^tau_Inn
        return ("Hnuq", self.nu, self.q.log_abs)

    def to_json(self):
        return {"kind": self.kind, "nu": str(self.nu), "q": str(self.q)}

    def period(self) -> SymbolicReal:
        return PI / self.q.log_abs


@dataclass(frozen=True)
class FreeUnitary(Block):
    F: tuple  # diagonal entries, SymbolicReal
    kind = "FreeUnitary"
    factor = True

    @property
    def squares(self):
        return tuple(f * f for f in self.F)

    @property
    def kappa(self) -> SymbolicReal:
        sq = self.squares
        if all(x.is_rational() for x in sq):
            vals = [x.rational_value() for x in sq]
            ratio = sum(1 / v for v in vals) / sum(vals)
            return SymbolicReal.rational(ratio) ** Fraction(1, 2)
        return SymbolicReal.atom(kappa_atom(sq))

    @property
    def kac(self) -> bool:
        return len(set(self.squares)) == 1

    def key(self):
        return ("FreeUnitary", self.F)

    def to_json(self):
        return {"kind": self.kind, "F": [str(f) for f in self.F]}


@dataclass(frozen=True)
class DualFreeGroup(Block):
    rank: int
    kind = "DualFreeGroup"
    kac = True
    factor = True
    semifinite_type = "II_1"

    def key(self):
        return ("DualFreeGroup", self.rank)

    def to_json(self):
        return {"kind": self.kind, "rank": self.rank}


def hnuq_hypothesis(nu: SymbolicReal, q: QParam, registry: ConstantRegistry) -> Answer:
    """Certify nu*log|q| is not in pi*Q (the standing hypothesis on H_{nu,q})."""
    return member(nu * q.log_abs, AdditiveSubgroup.rational_line(PI), registry)


def make_block(data: dict, registry: ConstantRegistry, pointer: str = "") -> Block:
    kind = data.get("kind")
    try:
        if kind == "SUq2":
            return SUq2(parse_q(data["q"], registry, pointer + "/q"))
        if kind == "Hnuq":
            q = parse_q(data["q"], registry, pointer + "/q")
            nu = parse_expr(data["nu"])
            registry.check(nu)
            if nu.is_zero():
                raise SpecError("nu must be nonzero", pointer + "/nu")
            hyp = hnuq_hypothesis(nu, q, registry)
            if hyp.yes:
                raise SpecError(f"nu*log|q| = {nu * q.log_abs} lies in pi*Q", pointer + "/nu")
            if hyp.unknown:
                raise MissingFactError(f"cannot certify nu*log|q| not in pi*Q for nu = {nu}, q = {q}",
                                       hyp.missing[0] if hyp.missing else "")
            return Hnuq(nu, q, hyp)
        if kind == "FreeUnitary":
            F = []
            for i, text in enumerate(data["F"]):
                f = parse_expr(text)
                registry.check(f)
                if registry.sign(f) != 1:
                    raise SpecError(f"F entry {text!r} is not certified positive", f"{pointer}/F/{i}")
                F.append(f)
            if len(F) < 2:
                raise SpecError("FreeUnitary needs at least two diagonal entries", pointer + "/F")
            return FreeUnitary(tuple(F))
        if kind == "DualFreeGroup":
            rank = data["rank"]
            if not isinstance(rank, int) or rank < 2:
                raise SpecError("rank must be an integer >= 2", pointer + "/rank")
            return DualFreeGroup(rank)
    except ParseError as exc:
        raise SpecError(str(exc), pointer) from None
    except KeyError as exc:
        raise SpecError(f"missing field {exc.args[0]!r}", pointer) from None
    raise SpecError(f"unknown block kind {kind!r}", pointer + "/kind")


# -- spectral data ----------------------------------------------------------------

def rho_spectrum(block: Block, label=None) -> RhoSpectrum:
    if isinstance(block, SUq2):
        return _ladder(block.q.log_abs, _half_integer(Fraction(0) if label is None else label))
    if isinstance(block, Hnuq):
        if label is None:
            gamma, s = Fraction(0), Fraction(0)
        else:
            gamma, s = label
        Fraction(gamma)  # any rational gamma; rho does not depend on it
        return _ladder(block.q.log_abs, _half_integer(s))
    if isinstance(block, FreeUnitary):
        if label not in (None, "fundamental"):
            raise ValueError("FreeUnitary blocks expose only the fundamental representation")
        k = log_of(block.kappa)
        return RhoSpectrum(tuple(PosReal(k + log_of(sq)) for sq in block.squares))
    if isinstance(block, DualFreeGroup):
        return RhoSpectrum((PosReal.rational(1),))
    raise TypeError(block)


def modular_spectrum(block: Block) -> ClosedMultSet:
    if isinstance(block, (SUq2, Hnuq)):
        g = PosReal(block.q.log_abs * 2)
        cert = Certificate(f"Sp(modular operator) = {{0}} ∪ ({g})^Z", "yes", "ladder-spectrum")
        return ClosedMultSet(True, MultClosure("cyclic", g, (cert,)))
    if isinstance(block, DualFreeGroup):
        return ClosedMultSet(False, MultClosure("trivial", certificates=(
            Certificate("Haar state is tracial", "yes", "kac-type"),)))
    raise ValueError(f"modular spectrum is not modelled for {block.kind} blocks")


@dataclass(frozen=True)
class TermValue:
    exact_zero: bool
    interval: RealInterval
    certificate: Answer | None = None

    def to_json(self):
        return {"exact_zero": self.exact_zero, "lo": float(self.interval.lo), "hi": float(self.interval.hi)}


def t_character(block: Block, t, registry: ConstantRegistry | None = None,
                precision: int = DEFAULT_PRECISION) -> TermValue:
    """Term 1 - |tau(k^(1+it))| of the T-criterion for one factor."""
    if not isinstance(block, (Hnuq, SUq2)):
        raise TypeError("t_character needs an Hnuq or SUq2 block")
    registry = registry or ConstantRegistry()
    if isinstance(t, RealInterval):
        t_iv, ans = t, None
    else:
        t = parse_expr(t)
        ans = member(t, AdditiveSubgroup.cyclic(block.period()), registry)
        if ans.yes:
            return TermValue(True, RealInterval(0, 0, precision), ans)
        t_iv = registry.enclose(t, precision)
    log_q = registry.enclose(block.q.log_abs, precision + 16)
    return TermValue(False, term_modulus(None, t_iv, precision, log_abs_q=log_q), ans)


# -- scaling groups ------------------------------------------------------------------

def ratio_periods(block: FreeUnitary):
    """2 pi / log(rho_i/rho_j) for the distinct eigenvalue ratios != 1."""
    eig = rho_spectrum(block).eigenvalues
    out = []
    for a, b in combinations(eig, 2):
        d = a.log - b.log
        if not d.is_zero():
            out.append(PI * 2 / d)
    return out


def ttau_block(block: Block, registry: ConstantRegistry | None = None) -> Decided:
    registry = registry or ConstantRegistry()
    if isinstance(block, (SUq2, Hnuq)):
        return Decided(AdditiveSubgroup.cyclic(block.period()), True)
    if isinstance(block, DualFreeGroup):
        return Decided(AdditiveSubgroup.real_line(), True)
    if isinstance(block, FreeUnitary):
        return intersect_all([AdditiveSubgroup.cyclic(c) for c in ratio_periods(block)], registry)
    raise TypeError(block)


def ttau_inn_block(block: Block):
    if isinstance(block, SUq2):
        return AdditiveSubgroup.cyclic(block.period())
    if isinstance(block, Hnuq):
        return AdditiveSubgroup(z=[block.period()], q=[block.nu])
    if isinstance(block, DualFreeGroup):
        return AdditiveSubgroup.real_line()
    return Undetermined("inner scaling automorphisms of free unitary blocks are not modelled")


def ttau_ainn_block(block: Block):
    if isinstance(block, SUq2):
        return AdditiveSubgroup.cyclic(block.period())
    if isinstance(block, (Hnuq, DualFreeGroup)):
        return AdditiveSubgroup.real_line()
    return Undetermined("approximately inner scaling automorphisms of free unitary blocks are not modelled")


__all__ = [
    "Block", "DualFreeGroup", "FreeUnitary", "Hnuq", "QParam", "RhoSpectrum", "SUq2", "TermValue",
    "hnuq_hypothesis", "make_block", "modular_spectrum", "parse_q", "ratio_periods", "rho_spectrum",
    "spectrum_symmetric", "t_character", "ttau_ainn_block", "ttau_block", "ttau_inn_block",
]
