"""Factorial-series machinery behind the type III_0 family.

The family uses q values exp(-pi*(k+shift)!) repeated l_k = floor(exp(2*pi*k!) * k^(2s-1))
times, and probes its T invariant with the constants ts(s) = sum_p floor(p^(1-s))/p!.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import math

from .exactnum import (
    DEFAULT_PRECISION, DomainError, RealInterval, certified_floor, eval_exp, eval_rpow,
    eval_sin, floor_rpow, pi_interval,
)
from .qlinear import AdditiveSubgroup, Atom, PosReal, SymbolicReal

LK_CAP = 6


def _check_s(s) -> Fraction:
    s = Fraction(s)
    if not (0 < s < 1):
        raise DomainError(f"s must lie in (0, 1), got {s}")
    return s


def _tail_bound(P: int) -> Fraction:
    """Upper bound for sum_{p > P} p^(1-s)/p!, valid for every s in (0, 1).

    p^(1-s)/p! <= 1/(p-1)!, and sum_{m >= P} 1/m! <= (1/P!) * (P+1)/P.
    """
    return Fraction(P + 1, P * math.factorial(P))


@dataclass(frozen=True)
class TsValue:
    s_prime: Fraction
    terms: int
    partial_sum: Fraction
    tail: Fraction
    enclosure: RealInterval

    def to_json(self):
        return {"s": str(self.s_prime), "terms": self.terms, "partial_sum": str(self.partial_sum),
                "lo": str(self.enclosure.lo), "hi": str(self.enclosure.hi),
                "lo_float": float(self.enclosure.lo), "hi_float": float(self.enclosure.hi)}


def ts(s, P: int) -> TsValue:
    """Exact partial sum of ts(s) up to p = P with a certified tail.

    The enclosure is intersected with those of all shorter truncations, so
    enclosures nest as P grows.
    """
    s = _check_s(s)
    if P < 1:
        raise ValueError("P must be >= 1")
    one_minus = 1 - s
    partial = Fraction(0)
    lo, hi = Fraction(0), None
    fact = 1
    for p in range(1, P + 1):
        fact *= p
        partial += Fraction(floor_rpow(p, one_minus), fact)
        lo = max(lo, partial)
        h = partial + _tail_bound(p)
        hi = h if hi is None else min(hi, h)
    return TsValue(s, P, partial, _tail_bound(P), RealInterval(lo, hi, max(64, 4 * P)))


def ts_terms_for(precision: int) -> int:
    P = 2
    target = Fraction(1, 2 ** (precision + 2))
    while _tail_bound(P) > target:
        P += 1
    return P


def ts_interval(s, precision: int = DEFAULT_PRECISION) -> RealInterval:
    """Enclosure of ts(s) of width at most 2^-precision."""
    v = ts(s, ts_terms_for(precision))
    return RealInterval.enclose(v.enclosure.lo, v.enclosure.hi, precision + 4)


def ts_symbol(s) -> SymbolicReal:
    return SymbolicReal.atom(Atom("ts", _check_s(s)))


# -- l_k ------------------------------------------------------------------------

def lk_interval(s, k: int, precision: int) -> RealInterval:
    """Enclosure of exp(2*pi*k!) * k^(2s-1)."""
    s = _check_s(s)
    kf = math.factorial(k)
    mag = int(2 * 3.15 * kf / math.log(2)) + 8
    arg = pi_interval(precision + mag + 16) * (2 * kf)
    val = eval_exp(arg, precision + 16)
    if k > 1:
        val = val * eval_rpow(k, 2 * s - 1, precision + 16)
    return val.with_precision(precision)


def lk(s, k: int, cap: int = LK_CAP, precision: int = DEFAULT_PRECISION) -> int:
    """l_k = floor(exp(2*pi*k!) * k^(2s-1)), certified."""
    s = _check_s(s)
    if not (1 <= k <= cap):
        raise ValueError(f"k must lie in [1, {cap}]")
    return certified_floor(lambda p: lk_interval(s, k, p), precision)


# -- fractional parts {ts(s) * k!} ----------------------------------------------

@dataclass(frozen=True)
class FracValue:
    s: Fraction
    k: int
    integer_part: int
    head: Fraction          # exact sum over p = k+1..P of floor(p^(1-s)) * k!/p!
    terms: int
    tail: Fraction
    interval: RealInterval

    @property
    def first_term(self) -> Fraction:
        """floor((k+1)^(1-s))/(k+1), the leading term of the fractional part."""
        return Fraction(floor_rpow(self.k + 1, 1 - self.s), self.k + 1)


def frac_ts_kfact(s, k: int, P: int | None = None, width: Fraction = Fraction(1, 10 ** 9)) -> FracValue:
    """Certified enclosure of the fractional part of ts(s) * k!.

    For p <= k the terms floor(p^(1-s)) * k!/p! are integers.  The head over
    p = k+1..P is summed exactly and the rest is bounded by k! * tail(P).
    """
    s = _check_s(s)
    if k < 1:
        raise ValueError("k must be >= 1")
    kf = math.factorial(k)
    if P is None:
        P = k + 1
        while kf * _tail_bound(P) >= width:
            P += 1
    P = max(P, k + 1)
    integer = 0
    ratio = 1  # k!/p! for p <= k is an integer
    for p in range(k, 0, -1):
        integer += floor_rpow(p, 1 - s) * ratio
        ratio *= p
    head = Fraction(0)
    denom = 1
    for p in range(k + 1, P + 1):
        denom *= p  # p!/k!
        head += Fraction(floor_rpow(p, 1 - s), denom)
    tail = kf * _tail_bound(P)
    n = math.floor(head)
    if math.floor(head + tail) != n:
        return frac_ts_kfact(s, k, P + 4, width)
    bits = max(64, 4 * (P - k) + 40)
    iv = RealInterval(head - n, head + tail - n, bits)
    return FracValue(s, k, integer + n, head, P, tail, iv)


# -- effective form of {ts k!} - k^-s = O(1/k) -----------------------------------

@dataclass(frozen=True)
class LemmaRow:
    k: int
    frac: RealInterval
    scaled_diff: RealInterval   # k * |{ts k!} - k^-s|
    bound: Fraction             # s + 1 + (k+1)^-s + 1/k, rounded up
    first_term_negative: bool   # floor((k+1)^(1-s))/(k+1) - k^-s < 0, certified

    def to_json(self):
        return {"k": self.k, "frac_lo": float(self.frac.lo), "frac_hi": float(self.frac.hi),
                "frac_width": float(self.frac.width), "k_abs_diff_hi": float(self.scaled_diff.hi),
                "bound": float(self.bound), "first_term_negative": self.first_term_negative}


@dataclass(frozen=True)
class LemmaReport:
    s: Fraction
    rows: tuple
    constant: int = 3

    @property
    def max_scaled_diff(self) -> Fraction:
        return max((r.scaled_diff.hi for r in self.rows), default=Fraction(0))

    @property
    def verdict(self) -> bool:
        return all(r.scaled_diff.hi <= min(r.bound, self.constant) and r.first_term_negative
                   for r in self.rows)

    def to_json(self):
        return {"s": str(self.s), "constant": self.constant, "verdict": "PASS" if self.verdict else "FAIL",
                "max_k_abs_diff": float(self.max_scaled_diff), "rows": [r.to_json() for r in self.rows]}


def lemma_asymptotic_check(s, k_range, precision: int = 256) -> LemmaReport:
    s = _check_s(s)
    rows = []
    for k in k_range:
        fv = frac_ts_kfact(s, k)
        k_pow = eval_rpow(k, -s, precision)
        diff = abs(fv.interval - k_pow) * k
        k1_pow = eval_rpow(k + 1, -s, precision)
        bound = s + 1 + k1_pow.hi + Fraction(1, k)
        first = RealInterval.exact(fv.first_term, precision) - k_pow
        rows.append(LemmaRow(k, fv.interval, diff, bound, first.hi < 0))
    return LemmaReport(s, tuple(rows))


# -- convergence criterion for t = ts(s') -------------------------------------

@dataclass(frozen=True)
class CriterionReport:
    s: Fraction
    s_prime: Fraction
    exponent: Fraction
    converges: bool
    ratios: tuple  # (k, RealInterval) of l_k * term_k / (2 pi^2 k^exponent)

    @property
    def verdict(self) -> str:
        return "converges" if self.converges else "diverges"

    def to_json(self):
        return {"s": str(self.s), "s_prime": str(self.s_prime), "exponent": str(self.exponent),
                "verdict": self.verdict,
                "ratios": [{"k": k, "lo": float(iv.lo), "hi": float(iv.hi)} for k, iv in self.ratios]}


def _grouped_term_ratio(s: Fraction, s_prime: Fraction, k: int, shift: int, precision: int) -> RealInterval:
    """l_k * term(q = exp(-pi (k+shift)!), t = ts(s')) divided by 2 pi^2 k^(2(s-s')-1).

    With r = |q|^2 and theta = 2 pi (k+shift)! ts(s') the term equals
    4 r sin^2(theta/2) / (M (M + 1 - r)) where M^2 = (1-r)^2 + 4 r sin^2(theta/2),
    which avoids cancellation for tiny r.
    """
    m = k + shift
    mf = math.factorial(m)
    if 2 * 3.15 * mf / math.log(2) > 200000:
        # exp(-2 pi m!) is far below 2^-200000; only an upper bound is needed
        r = RealInterval(0, Fraction(1, 2 ** 200000), precision)
    else:
        r = eval_exp(pi_interval(precision + int(10 * mf) + 16) * (-2 * mf), precision)
    f = frac_ts_kfact(s_prime, m).interval
    sin2 = eval_sin(pi_interval(precision) * f, precision).square()
    M = ((1 - r).square() + 4 * r * sin2).sqrt()
    term_over_r = 4 * sin2 / (M * (M + 1 - r))
    base = eval_rpow(k, 2 * s - 1, precision)
    lr = RealInterval(base.lo - r.hi, base.hi, precision)  # l_k * r lies in (k^(2s-1) - r, k^(2s-1)]
    pi2 = pi_interval(precision).square()
    scale = 2 * pi2 * eval_rpow(k, 2 * (s - s_prime) - 1, precision)
    return lr * term_over_r / scale


def criterion_s_prime(s, s_prime, terms: int = 10, shift: int = 0, precision: int = 128) -> CriterionReport:
    """Does the grouped series for t = ts(s') converge?  It behaves like sum k^(2(s-s')-1)."""
    s, s_prime = _check_s(s), _check_s(s_prime)
    exponent = 2 * (s - s_prime) - 1
    ratios = tuple((k, _grouped_term_ratio(s, s_prime, k, shift, precision)) for k in range(1, terms + 1))
    return CriterionReport(s, s_prime, exponent, exponent < -1, ratios)


# -- the family itself ------------------------------------------------------------

@dataclass(frozen=True)
class III0Family:
    s: Fraction
    shift: int = 0
    nu_rule: str = "nu_n chosen with nu_n log|q_n| not in pi*Q"

    def __post_init__(self):
        object.__setattr__(self, "s", _check_s(self.s))
        if self.shift < 0:
            raise ValueError("shift must be nonnegative")

    def q_log(self, k: int) -> SymbolicReal:
        """log q for the k-th group: -pi * (k+shift)!"""
        return SymbolicReal.atom(Atom("pi")) * (-math.factorial(k + self.shift))

    def q(self, k: int) -> PosReal:
        return PosReal(self.q_log(k))

    def multiplicity(self, k: int) -> int:
        return lk(self.s, k)

    def groups(self, kmax: int):
        """(k, q_k, l_k) for k = 1..kmax."""
        return [(k, self.q(k), self.multiplicity(k)) for k in range(1, kmax + 1)]

    def k_of_n(self, n: int, kmax: int = LK_CAP) -> int:
        """Group index k(n) of the n-th term (n >= 1), within the k-cap."""
        if n < 1:
            raise ValueError("n must be >= 1")
        total = 0
        for k in range(1, kmax + 1):
            total += self.multiplicity(k)
            if n <= total:
                return k
        raise ValueError(f"term {n} lies beyond the enumerable prefix (k <= {kmax})")

    def to_json(self):
        return {"kind": "iii0", "s": str(self.s), "shift": self.shift}


def family_invariants(f: III0Family):
    """(T^tau, T^tau_Inn, T^tau_AInn) of the family.

    T^tau is the intersection of (1/m!)Z over the m = k + shift that occur,
    i.e. (1/(1+shift)!)Z; T^tau_Inn coincides with it because nu_1 is irrational.
    """
    lattice = AdditiveSubgroup.cyclic(SymbolicReal.rational(Fraction(1, math.factorial(1 + f.shift))))
    return lattice, lattice, AdditiveSubgroup.real_line()


__all__ = [
    "CriterionReport", "FracValue", "III0Family", "LK_CAP", "LemmaReport", "LemmaRow", "TsValue",
    "criterion_s_prime", "family_invariants", "frac_ts_kfact", "lemma_asymptotic_check", "lk",
    "lk_interval", "ts", "ts_interval", "ts_symbol", "ts_terms_for",
]
