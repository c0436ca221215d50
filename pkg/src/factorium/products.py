"""Classification engine for infinite products of building blocks.

A construction is a list of blocks with multiplicities (an integer or INF),
optionally a type III_0 factorial family, a declared two-accumulation-point
sequence, Kac cross factors and a bicrossed layer.  `classify` produces the
type, injectivity and the S and T invariants together with the scaling
invariants, each conclusion tagged with the rule that produced it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import math

from .blocks import (
    PI, Block, DualFreeGroup, FreeUnitary, Hnuq, QParam, SUq2, rho_spectrum,
)
from .errors import HypothesisError, MissingFactError, SpecError
from .exactnum import DEFAULT_PRECISION, RealInterval, term_modulus
from .qlinear import (
    AdditiveSubgroup, Answer, Certificate, ConstantRegistry, Decided, MultClosure, PosReal,
    SymbolicReal, intersect, intersect_all, member, mult_closure, parse_expr,
)
from .qlinear.symbolic import TS
from .scaling import (
    INF, GammaLayer, InvariantTriple, bicrossed_invariants, product_invariants,
)
from .sets import ClosedMultSet, Undetermined
from .type3zero import LK_CAP, III0Family, family_invariants

RULES = {
    "classify:non-factor-block": "L∞(SU_q(2)) has a nontrivial center, so no tensor product containing it is a factor",
    "classify:repeated-non-tracial-state": "a non-tracial factor state repeated infinitely often forces type III",
    "classify:product-of-injectives": "a tensor product of injective algebras is injective",
    "classify:kac-cross-factor": "tensoring with a non-injective II_1 factor keeps the type and T but destroys injectivity",
    "classify:semifinite-tensor-peel": "tensoring with a semifinite factor does not change S",
    "classify:centralizer-factor": "when every block repeats infinitely the Haar-state centralizer is a factor, so S = Sp(modular operator)",
    "classify:semifinite": "finite products of semifinite factors are semifinite; S = {1} and T = R",
    "classify:iii0-family": "the factorial family gives T containing Q but not R: type III_0",
    "classify:two-accumulation-points": "two accumulation points with trivially intersecting period lattices give T = {0} and S = R≥0",
    "classify:bicrossed": "bicrossed product by a subgroup of the scaling group, under the verified hypotheses",
    "classify:full-factor": "L∞(U_F⁺) is a full non-injective factor whose S is the closure of the group generated by the eigenvalues of rho ⊗ rho",
    "t:vanishing-terms": "the T-series over infinitely repeated blocks converges iff every repeated term vanishes",
    "t:type-lattice": "T of a type III_lambda factor is (2 pi / log lambda)Z and T of a type III_1 factor is {0}",
    "t:iii0-rationals": "Q lies in T for the factorial family",
    "t:iii0-ts": "ts(s') lies in T iff s' > s",
    "t:group": "T is a group containing Q",
}


@dataclass(frozen=True)
class Entry:
    block: Block
    repeat: int | None  # None = infinitely many times

    @property
    def infinite(self) -> bool:
        return self.repeat is INF

    def to_json(self):
        return {"block": self.block.to_json(), "repeat": "inf" if self.infinite else self.repeat}


@dataclass(frozen=True)
class Accumulation:
    """A sequence of Hnuq blocks declared to have two disjoint subsequences with |q| -> |r1|, |r2|."""

    r1: QParam
    r2: QParam

    def to_json(self):
        return {"r1": str(self.r1), "r2": str(self.r2)}


@dataclass(frozen=True)
class ProductSpec:
    entries: tuple = ()
    family: III0Family | None = None
    cross: tuple = ()
    bicrossed: GammaLayer | None = None
    accumulation: Accumulation | None = None
    registry: ConstantRegistry = field(default_factory=ConstantRegistry, compare=False)
    name: str = ""

    def __post_init__(self):
        if not (self.entries or self.family or self.accumulation):
            raise SpecError("a construction needs entries, a family or an accumulation declaration")
        if self.family is not None and any(e.infinite for e in self.entries):
            raise SpecError("a factorial family excludes infinitely repeated entries", "/entries")
        if self.family is not None and self.accumulation is not None:
            raise SpecError("a factorial family and an accumulation declaration exclude each other")
        if self.bicrossed is not None and (self.family is not None or self.accumulation is not None):
            raise SpecError("the bicrossed layer needs an explicit block sequence", "/bicrossed")
        for i, b in enumerate(self.cross):
            if not isinstance(b, DualFreeGroup):
                raise SpecError("cross factors must be DualFreeGroup blocks", f"/cross/{i}")

    def to_json(self):
        out = {"entries": [e.to_json() for e in self.entries]}
        if self.family is not None:
            out["family"] = self.family.to_json()
        if self.cross:
            out["cross"] = [b.to_json() for b in self.cross]
        if self.bicrossed is not None:
            out["bicrossed"] = self.bicrossed.to_json()
        if self.accumulation is not None:
            out["accumulation"] = self.accumulation.to_json()
        if self.name:
            out["name"] = self.name
        return out


@dataclass(frozen=True)
class TDescription:
    kind: str  # lattice | zero_only | full | iii0_family | undetermined
    lattice: AdditiveSubgroup | None = None
    s: Fraction | None = None
    note: str = ""

    def __str__(self):
        if self.kind == "lattice":
            return str(self.lattice)
        if self.kind == "zero_only":
            return "{0}"
        if self.kind == "full":
            return "R"
        if self.kind == "iii0_family":
            return f"{{t : series converges}} (factorial family, s = {self.s})"
        return "undetermined"

    def to_json(self):
        out = {"kind": self.kind, "value": str(self)}
        if self.s is not None:
            out["s"] = str(self.s)
        if self.note:
            out["note"] = self.note
        return out


def _cert(claim: str, rule: str, facts=()) -> Certificate:
    return Certificate(claim, "yes", rule, tuple(facts))


@dataclass(frozen=True)
class FactorReport:
    spec: ProductSpec
    factor_type: str
    injective: bool | None
    s_invariant: object          # ClosedMultSet or Undetermined
    t_invariant: TDescription
    invariants: InvariantTriple
    lam: PosReal | None = None
    certificates: tuple = ()
    notes: tuple = ()
    reason: str = ""
    symmetric_spectra: bool = True
    centralizer_factor: bool = False

    def t_member_value(self, t, registry: ConstantRegistry | None = None) -> Answer:
        return t_member(self.spec, t, report=self)

    def to_json(self):
        out = {"type": self.factor_type, "injective": self.injective,
               "s_invariant": self.s_invariant.to_json(),
               "t_invariant": self.t_invariant.to_json(),
               "invariants": self.invariants.to_json(),
               "certificates": [c.to_json() for c in self.certificates]}
        if self.lam is not None:
            out["lambda"] = str(self.lam)
        if self.notes:
            out["notes"] = list(self.notes)
        if self.reason:
            out["reason"] = self.reason
        return out


def _undetermined_triple(reason: str) -> InvariantTriple:
    u = Decided(Undetermined(reason), False)
    return InvariantTriple(u, u, u)


def _with_cross(inv: InvariantTriple, spec: ProductSpec) -> InvariantTriple:
    # Kac factors have trivial scaling group: intersecting with R changes nothing
    if not spec.cross:
        return inv
    return InvariantTriple(inv.ttau, inv.ttau_inn, inv.ttau_ainn,
                           inv.notes + ("Kac cross factors leave the scaling invariants unchanged",))


def lattice_from_s(s: ClosedMultSet) -> TDescription:
    if s.kind == "cyclic":
        return TDescription("lattice", AdditiveSubgroup.cyclic(PI * 2 / s.generator.log))
    if s.kind == "dense" and s.zero:
        return TDescription("zero_only")
    return TDescription("undetermined", note="S does not determine T here")


def _type_from_s(s: ClosedMultSet):
    if s.kind == "cyclic":
        return "III_lambda", s.generator
    if s.kind == "dense":
        return "III_one", None
    return "III", None


def classify(spec: ProductSpec) -> FactorReport:
    reg = spec.registry
    certs = []
    notes = []
    all_blocks = [e.block for e in spec.entries] + list(spec.cross)
    injective = all(b.injective for b in all_blocks)
    if spec.family is not None or spec.accumulation is not None:
        injective = injective  # the family and the declared sequences consist of Hnuq blocks
    inj_cert = _cert(f"injective = {str(injective).lower()}", "classify:product-of-injectives"
                     if injective else "classify:kac-cross-factor")
    if any(isinstance(b, SUq2) for b in all_blocks):
        inv = product_invariants([(e.block, e.repeat) for e in spec.entries], reg)
        return FactorReport(spec, "not_a_factor", None, Undetermined("not a factor"),
                            TDescription("undetermined", note="not a factor"), inv,
                            certificates=(_cert("an SUq2 block is present", "classify:non-factor-block"),),
                            reason=RULES["classify:non-factor-block"])
    if spec.cross:
        certs.append(_cert("Kac cross factors flip only injectivity", "classify:kac-cross-factor"))

    if spec.family is not None:
        return _classify_family(spec, injective, certs + [inj_cert])
    if spec.accumulation is not None:
        return _classify_accumulation(spec, injective, certs + [inj_cert])
    if spec.bicrossed is not None:
        return _classify_bicrossed(spec, certs)

    core = [e for e in spec.entries if not isinstance(e.block, DualFreeGroup)]
    kac_entries = [e for e in spec.entries if isinstance(e.block, DualFreeGroup)]
    inv = _with_cross(product_invariants([(e.block, e.repeat) for e in spec.entries], reg), spec)
    inf = [e for e in core if e.infinite]
    fin = [e for e in core if not e.infinite]

    if any(isinstance(e.block, FreeUnitary) for e in core):
        return _classify_free_unitary(spec, core, inf, injective, inv, certs + [inj_cert])

    if not inf:
        ftype = "II_inf" if core else "II_one"
        s = ClosedMultSet(False, MultClosure("trivial"))
        certs += [inj_cert, _cert(f"type {ftype}", "classify:semifinite")]
        return FactorReport(spec, ftype, injective, s, TDescription("full"), inv,
                            certificates=tuple(certs), centralizer_factor=False)

    # type III: some non-Kac Hnuq block repeats infinitely often
    certs.append(_cert("non-tracial Hnuq state repeated infinitely often: type III",
                       "classify:repeated-non-tracial-state"))
    certs.append(inj_cert)
    squares = []
    for e in inf:
        g = PosReal(e.block.q.log_abs * 2)
        if g not in squares:
            squares.append(g)
    closure = mult_closure(squares, reg)
    if closure.kind == "unknown":
        s_inv = Undetermined("closure of the generated subgroup is undecided: " + ", ".join(closure.missing))
        ftype, lam = "III", None
    else:
        s_inv = ClosedMultSet(True, closure)
        ftype, lam = _type_from_s(s_inv)
        certs.append(_cert(f"S = {s_inv}", "classify:centralizer-factor",
                           [f for c in closure.certificates for f in c.facts]))
        if fin or kac_entries or spec.cross:
            certs.append(_cert("finitely many semifinite factors do not change S", "classify:semifinite-tensor-peel"))
    periods = intersect_all([AdditiveSubgroup.cyclic(e.block.period()) for e in inf], reg)
    if periods.exact:
        t_desc = TDescription("lattice", periods.value)
        certs.append(_cert(f"T = {periods.value}", "t:vanishing-terms",
                           [f for c in periods.certificates for f in c.facts]))
    else:
        t_desc = TDescription("undetermined", note="period lattice intersection undecided")
    return FactorReport(spec, ftype, injective, s_inv, t_desc, inv, lam, tuple(certs), tuple(notes),
                        centralizer_factor=not fin)


def _classify_family(spec: ProductSpec, injective: bool, certs) -> FactorReport:
    f = spec.family
    tt, inn, ainn = family_invariants(f)
    inv = InvariantTriple(Decided(tt, True), Decided(inn, True), Decided(ainn, True))
    certs.append(_cert(f"type III_0 for s = {f.s}", "classify:iii0-family"))
    s_inv = ClosedMultSet(True, MultClosure("trivial"))
    notes = ("S = {0,1} follows from the type; the spectrum rule does not apply because no value repeats infinitely",)
    return FactorReport(spec, "III_zero", injective, s_inv, TDescription("iii0_family", s=f.s), inv,
                        certificates=tuple(certs), notes=notes)


def _classify_accumulation(spec: ProductSpec, injective: bool, certs) -> FactorReport:
    reg = spec.registry
    a = spec.accumulation
    g1 = AdditiveSubgroup.cyclic(PI / a.r1.log_abs)
    g2 = AdditiveSubgroup.cyclic(PI / a.r2.log_abs)
    meet = intersect(g1, g2, reg)
    if not meet.exact:
        raise MissingFactError(f"cannot decide {g1} ∩ {g2}", (meet.missing or ("",))[0])
    if not meet.value.is_zero():
        raise HypothesisError("trivial-intersection", f"{g1} ∩ {g2} = {meet.value} != {{0}}")
    facts = [f for c in meet.certificates for f in c.facts]
    certs.append(_cert(f"{g1} ∩ {g2} = {{0}}", "classify:two-accumulation-points", facts))
    s_inv = ClosedMultSet(True, MultClosure("dense", certificates=tuple(certs[-1:])))
    inv = _undetermined_triple("the sequence is declared only through its accumulation points")
    return FactorReport(spec, "III_one", injective, s_inv, TDescription("zero_only"), inv,
                        certificates=tuple(certs))


def _classify_bicrossed(spec: ProductSpec, certs) -> FactorReport:
    reg = spec.registry
    res = bicrossed_invariants([(e.block, e.repeat) for e in spec.entries], spec.bicrossed, reg)
    injective = res.injective and not spec.cross
    s_inv = res.s_invariant
    certs = list(certs) + list(res.checks)
    certs.append(_cert(f"S = {s_inv}", "classify:bicrossed"))
    if s_inv.kind == "unknown":
        ftype, lam = "III", None
        s_out = Undetermined("closure undecided: " + ", ".join(s_inv.closure.missing))
    elif s_inv.kind == "trivial":
        ftype, lam, s_out = "II_one", None, s_inv
    else:
        ftype, lam = _type_from_s(s_inv)
        s_out = s_inv
    t_desc = lattice_from_s(s_inv) if isinstance(s_out, ClosedMultSet) else TDescription("undetermined")
    if ftype == "II_one":
        t_desc = TDescription("full")
    certs.append(_cert(f"T = {t_desc}", "t:type-lattice"))
    return FactorReport(spec, ftype, injective, s_out, t_desc, _with_cross(res.invariants, spec), lam,
                        tuple(certs), centralizer_factor=True)


def _classify_free_unitary(spec, core, inf, injective, inv, certs) -> FactorReport:
    reg = spec.registry
    if inf:
        certs.append(_cert("non-tracial state repeated infinitely often: type III",
                           "classify:repeated-non-tracial-state"))
        return FactorReport(spec, "III", False, Undetermined("S is not modelled for repeated free unitary blocks"),
                            TDescription("undetermined"), inv, certificates=tuple(certs), symmetric_spectra=False)
    if len(core) != 1 or core[0].repeat != 1 or len(core[0].block.F) < 3:
        return FactorReport(spec, "undetermined", None, Undetermined("mixed free unitary products are not modelled"),
                            TDescription("undetermined"), inv, certificates=tuple(certs),
                            reason="only a single free unitary block with at least three diagonal entries is classified",
                            symmetric_spectra=False)
    b = core[0].block
    eig = rho_spectrum(b).eigenvalues
    gens = []
    for x in eig:
        for y in eig:
            z = x * y
            if z.is_one():
                continue
            sgn = reg.sign(z.log)
            if sgn is None:
                raise MissingFactError(f"cannot decide whether {z} differs from 1")
            g = z if sgn < 0 else z.inverse()
            if g not in gens:
                gens.append(g)
    closure = mult_closure(gens, reg)
    if closure.kind == "unknown":
        s_inv = Undetermined("closure undecided: " + ", ".join(closure.missing))
        ftype, lam = "III", None
        t_desc = TDescription("undetermined")
    elif closure.kind == "trivial":
        s_inv = ClosedMultSet(False, closure)
        ftype, lam, t_desc = "II_one", None, TDescription("full")
    else:
        s_inv = ClosedMultSet(True, closure)
        ftype, lam = _type_from_s(s_inv)
        t_desc = lattice_from_s(s_inv)
        certs.append(_cert(f"S = {s_inv}", "classify:full-factor", [f for c in closure.certificates for f in c.facts]))
        certs.append(_cert(f"T = {t_desc}", "t:type-lattice"))
    return FactorReport(spec, ftype, False, s_inv, t_desc, inv, lam, tuple(certs), symmetric_spectra=b.kac)


def s_invariant(spec: ProductSpec):
    """S via the spectrum rule; undetermined unless every block value repeats infinitely."""
    if spec.family is not None:
        return Undetermined("centralizer factoriality not guaranteed: no value of the sequence repeats infinitely")
    if spec.accumulation is not None:
        return Undetermined("centralizer factoriality not guaranteed for a declared accumulation sequence")
    if any(not e.infinite for e in spec.entries if not isinstance(e.block, DualFreeGroup)):
        return Undetermined("centralizer factoriality not guaranteed: some block has finite multiplicity")
    rep = classify(spec)
    return rep.s_invariant


# -- T membership -------------------------------------------------------------------

def _is_zero_answer(t: SymbolicReal, reg: ConstantRegistry, claim: str) -> Answer:
    if t.is_zero():
        return Answer("yes", (_cert(claim + ": t = 0", "t:type-lattice"),))
    nz = reg.nonzero(t)
    if nz.ok:
        return Answer("no", (Certificate(claim, "no", "t:type-lattice", nz.facts),))
    return Answer("unknown", missing=(nz.missing,))


def _ts_form(t: SymbolicReal):
    """(r, m, s') with t = r + m*ts(s'), or None."""
    r = Fraction(0)
    found = None
    for mono, c in t.terms:
        if mono.is_one():
            r = c
            continue
        if len(mono.items) == 1 and mono.items[0][0].kind == TS and mono.items[0][1] == 1 and found is None:
            found = (c, mono.items[0][0].key)
            continue
        return None
    if found is None:
        return None
    return r, found[0], found[1]


def t_member(spec: ProductSpec, t, report: FactorReport | None = None) -> Answer:
    reg = spec.registry
    t = parse_expr(t)
    reg.check(t)
    claim = f"{t} in T"
    rep = report or classify(spec)
    if rep.factor_type == "not_a_factor":
        return Answer("unknown", note="T is only defined here for factors")
    if spec.family is not None:
        f = spec.family
        if t.is_rational():
            return Answer("yes", (_cert(claim, "t:iii0-rationals"),))
        form = _ts_form(t)
        if form is not None:
            r, m, sp = form
            if sp > f.s:
                return Answer("yes", (_cert(f"{claim}: ts({sp}) in T since {sp} > {f.s}, and T is a group containing Q",
                                            "t:iii0-ts"),))
            if abs(m) == 1:
                return Answer("no", (Certificate(f"{claim}: ts({sp}) not in T since {sp} <= {f.s}", "no", "t:iii0-ts"),))
            return Answer("unknown", note=f"membership of {m}*ts({sp}) is not covered by the family criterion")
        return Answer("unknown", note="membership outside Q + Z*ts(s') is open for the factorial family")
    T = rep.t_invariant
    if T.kind == "full":
        return Answer("yes", (_cert(claim + ": T = R for semifinite factors", "classify:semifinite"),))
    if T.kind == "zero_only":
        return _is_zero_answer(t, reg, claim)
    if T.kind == "lattice":
        if spec.bicrossed is None and rep.factor_type != "III_one" and not any(
                isinstance(e.block, FreeUnitary) for e in spec.entries):
            return _member_by_blocks(spec, t, claim)
        return member(t, T.lattice, reg)
    return Answer("unknown", note=f"T is undetermined for this construction ({T.note or rep.reason})")


def _member_by_blocks(spec: ProductSpec, t: SymbolicReal, claim: str) -> Answer:
    """t is in T iff the term of every infinitely repeated block vanishes identically."""
    reg = spec.registry
    certs, missing = [], []
    seen = set()
    for e in spec.entries:
        if not e.infinite or not isinstance(e.block, Hnuq):
            continue
        key = e.block.q.log_abs
        if key in seen:
            continue
        seen.add(key)
        a = member(t, AdditiveSubgroup.cyclic(e.block.period()), reg)
        if a.no:
            return Answer("no", tuple(Certificate(claim, "no", "t:vanishing-terms", c.facts, c.witness, c.query)
                                      for c in a.certificates))
        if a.unknown:
            missing.extend(a.missing)
        certs.extend(a.certificates)
    if missing:
        return Answer("unknown", missing=tuple(dict.fromkeys(missing)))
    return Answer("yes", tuple(certs) + (_cert(claim, "t:vanishing-terms"),))


# -- partial sums of the T-series ------------------------------------------------------

@dataclass(frozen=True)
class SeriesRow:
    label: str
    count: int
    term: RealInterval
    exact_zero: bool

    def to_json(self):
        return {"label": self.label, "count": self.count, "exact_zero": self.exact_zero,
                "lo": float(self.term.lo), "hi": float(self.term.hi)}


@dataclass(frozen=True)
class SeriesReport:
    terms: int
    partial_sum: RealInterval
    rows: tuple
    threshold: Fraction | None = None

    @property
    def divergence_evidence(self) -> bool:
        return self.threshold is not None and self.partial_sum.lo > self.threshold

    def to_json(self):
        out = {"terms": self.terms, "partial_sum": {"lo": float(self.partial_sum.lo), "hi": float(self.partial_sum.hi),
                                                    "lo_exact": str(self.partial_sum.lo)},
               "rows": [r.to_json() for r in self.rows]}
        if self.threshold is not None:
            out["threshold"] = str(self.threshold)
            out["divergence_evidence"] = self.divergence_evidence
        return out


def sequence_prefix(spec: ProductSpec, N: int):
    """Runs (label, log|q| or None for a tracial factor, count) covering the first N terms.

    Order: finite entries first, then the infinitely repeated entries round-robin;
    the factorial family enumerates its groups k = 1, 2, ... with l_k copies each.
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    if spec.accumulation is not None or spec.bicrossed is not None:
        raise ValueError("the sequence of this construction is not enumerable")
    for e in spec.entries:
        if isinstance(e.block, (SUq2, FreeUnitary)):
            raise ValueError(f"the T-series is not defined for {e.block.kind} blocks")
    runs = []
    left = N
    for e in spec.entries:
        if e.infinite or left == 0:
            continue
        c = min(e.repeat, left)
        runs.append((_label(e.block), _log_q(e.block), c))
        left -= c
    if spec.family is not None:
        f = spec.family
        for k in range(1, LK_CAP + 1):
            if left == 0:
                break
            c = min(f.multiplicity(k), left)
            runs.append((f"exp(-pi*{k + f.shift}!)", f.q_log(k), c))
            left -= c
        if left:
            raise ValueError(f"N exceeds the enumerable prefix (k <= {LK_CAP})")
        return runs
    inf = [e for e in spec.entries if e.infinite]
    if left and not inf:
        raise ValueError(f"N = {N} exceeds the {N - left} terms of the finite sequence")
    if left:
        base, extra = divmod(left, len(inf))
        for i, e in enumerate(inf):
            c = base + (1 if i < extra else 0)
            if c:
                runs.append((_label(e.block), _log_q(e.block), c))
    return runs


def _label(b: Block) -> str:
    if isinstance(b, Hnuq):
        return f"Hnuq(nu={b.nu}, q={b.q})"
    return f"{b.kind}"


def _log_q(b: Block):
    return b.q.log_abs if isinstance(b, Hnuq) else None


def t_series_diagnose(spec: ProductSpec, t, N: int, precision: int = DEFAULT_PRECISION,
                      threshold=None) -> SeriesReport:
    reg = spec.registry
    runs = sequence_prefix(spec, N)
    sym = None if isinstance(t, RealInterval) else parse_expr(t)
    rows = []
    total_lo, total_hi = Fraction(0), Fraction(0)
    cache = {}
    for label, logq, count in runs:
        key = logq
        if key in cache:
            term, zero = cache[key]
        elif logq is None:
            term, zero = RealInterval(0, 0, precision), True
        else:
            zero = False
            if sym is not None:
                zero = member(sym, AdditiveSubgroup.cyclic(PI / logq), reg).yes
            if zero:
                term = RealInterval(0, 0, precision)
            else:
                lq = reg.enclose(logq, precision + 16)
                extra = max(0, math.ceil(math.log2(float(abs(lq.hi)) + 1))) + 16
                t_iv = t if sym is None else reg.enclose(sym, precision + extra)
                term = term_modulus(None, t_iv, precision, log_abs_q=lq)
        cache[key] = (term, zero)
        rows.append(SeriesRow(label, count, term, zero))
        total_lo += count * term.lo
        total_hi += count * term.hi
    thr = None if threshold is None else Fraction(threshold)
    return SeriesReport(N, RealInterval(total_lo, total_hi, precision), tuple(rows), thr)


__all__ = [
    "Accumulation", "Entry", "FactorReport", "ProductSpec", "RULES", "SeriesReport", "SeriesRow",
    "TDescription", "classify", "s_invariant", "sequence_prefix", "t_member", "t_series_diagnose",
]
