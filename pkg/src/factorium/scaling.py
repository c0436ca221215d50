"""Scaling-group invariants of products and of bicrossed products by subgroups of R."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .blocks import (
    PI, Block, DualFreeGroup, FreeUnitary, Hnuq, QParam, SUq2, hnuq_hypothesis, rho_spectrum,
    spectrum_symmetric, ttau_block, ttau_inn_block,
)
from .errors import HypothesisError, MissingFactError
from .qlinear import (
    AdditiveSubgroup, Answer, Certificate, ConstantRegistry, Decided, PosReal, SymbolicReal,
    equal, includes, intersect, intersect_all, log_rational, member, mult_closure,
)
from .sets import ClosedMultSet, Undetermined

INF = None  # multiplicity marker for infinitely repeated blocks


def _exact(value, *certs) -> Decided:
    return Decided(value, True, tuple(certs))


def _undetermined(reason: str) -> Decided:
    return Decided(Undetermined(reason), False)


@dataclass(frozen=True)
class InvariantTriple:
    """T^tau, T^tau_Inn and T^tau_AInn.  A non-exact entry is a certified subgroup of the invariant."""

    ttau: Decided
    ttau_inn: Decided
    ttau_ainn: Decided
    notes: tuple = ()

    def components(self):
        return (("ttau", self.ttau), ("ttau_inn", self.ttau_inn), ("ttau_ainn", self.ttau_ainn))

    def to_json(self):
        out = {name: _decided_json(d) for name, d in self.components()}
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _decided_json(d: Decided):
    if isinstance(d.value, Undetermined):
        return {"value": "undetermined", "reason": d.value.reason}
    out = {"value": str(d.value), "exact": d.exact}
    if not d.exact:
        out["bound"] = "lower"
    if d.missing:
        out["missing_facts"] = list(d.missing)
    return out


def product_invariants(entries, registry: ConstantRegistry | None = None) -> InvariantTriple:
    """Invariants of a product of blocks, each with multiplicity an integer or INF."""
    registry = registry or ConstantRegistry()
    entries = list(entries)
    blocks = [b for b, _ in entries]
    notes = []
    # T^tau of any product is the intersection over the factors
    tt = [ttau_block(b, registry) for b in blocks]
    ttau = intersect_all([d.value for d in tt], registry)
    ttau = Decided(ttau.value, ttau.exact and all(d.exact for d in tt),
                   tuple(c for d in tt for c in d.certificates) + ttau.certificates,
                   tuple(m for d in tt for m in d.missing) + ttau.missing)

    if any(isinstance(b, FreeUnitary) for b in blocks):
        inn = _undetermined("inner scaling automorphisms of free unitary blocks are not modelled")
        ainn = _undetermined("approximately inner scaling automorphisms of free unitary blocks are not modelled")
        return InvariantTriple(ttau, inn, ainn)

    inf_su = any(isinstance(b, SUq2) and m is INF for b, m in entries)
    pieces, cert_rules = [], []
    for b, m in entries:
        if isinstance(b, DualFreeGroup):
            continue  # tau is trivial on Kac factors
        if m is INF:
            # t must lie in the period lattice for all but finitely many factors
            pieces.append(AdditiveSubgroup.cyclic(b.period()))
        else:
            pieces.append(ttau_inn_block(b))
    if inf_su:
        inn = Decided(ttau.value, False, ttau.certificates, ttau.missing)
        notes.append("products with infinitely repeated SUq2 blocks: only T^tau is certified inside T^tau_Inn")
    elif pieces:
        inn = intersect_all(pieces, registry)
        cert = Certificate(f"T^tau_Inn = {inn.value}", "yes", "scaling:inner-product-rule", ())
        inn = Decided(inn.value, inn.exact, inn.certificates + (cert,), inn.missing)
    else:
        inn = _exact(AdditiveSubgroup.real_line(),
                     Certificate("T^tau_Inn = R", "yes", "scaling:kac-type", ()))

    has_inf_h = any(isinstance(b, Hnuq) and m is INF for b, m in entries)
    finite_su = [b for b, m in entries if isinstance(b, SUq2) and m is not INF]
    if any(isinstance(b, SUq2) for b in blocks):
        if len(entries) == 1 and entries[0][1] == 1:
            ainn = _exact(AdditiveSubgroup.cyclic(blocks[0].period()))
        else:
            # only the product inclusion is available
            lower = intersect_all([AdditiveSubgroup.cyclic(b.period()) for b in finite_su] or
                                  [ttau.value], registry)
            ainn = Decided(lower.value, False, lower.certificates, lower.missing)
            notes.append("T^tau_AInn: only the inclusion of the intersection of the factors' invariants is used")
    else:
        rule = "scaling:approximately-inner-product" if has_inf_h else "scaling:finite-product-inclusion"
        ainn = _exact(AdditiveSubgroup.real_line(), Certificate("T^tau_AInn = R", "yes", rule, ()))
    return InvariantTriple(ttau, inn, ainn, tuple(notes))


def glambda_entries(lam, k: int, registry: ConstantRegistry | None = None):
    """Blocks of the product H_{nu1,sqrt(lam)}^INF x H_{nu,lam^(pi/2)} (the extra factor only for k >= 1)."""
    registry = registry or ConstantRegistry()
    lam = Fraction(lam)
    if not (0 < lam < 1):
        raise ValueError("lambda must lie in (0, 1)")
    if k < 0:
        raise ValueError("k must be >= 0")
    L = log_rational(lam)
    q1 = QParam(1, PosReal(L * Fraction(1, 2)))
    nu1 = PI * PI * 2 / L
    entries = [(Hnuq(nu1, q1, hnuq_hypothesis(nu1, q1, registry)), INF)]
    if k >= 1:
        q = QParam(1, PosReal(L * PI * Fraction(1, 2)))
        nu = (PI * k - 1) * 2 / L
        hyp = hnuq_hypothesis(nu, q, registry)
        if not hyp.no:
            raise MissingFactError(f"cannot certify nu*log|q| not in pi*Q for k = {k}")
        entries.append((Hnuq(nu, q, hyp), 1))
    return entries


def glambda_k_invariants(lam, k: int, registry: ConstantRegistry | None = None) -> InvariantTriple:
    registry = registry or ConstantRegistry()
    return product_invariants(glambda_entries(lam, k, registry), registry)


# -- bicrossed products ------------------------------------------------------------

@dataclass(frozen=True)
class GammaLayer:
    gamma: AdditiveSubgroup

    def to_json(self):
        return {"gamma": str(self.gamma)}


def rho_pair_products(block: Block):
    """Distinct products rho_i rho_j generating the S-relevant group of one block."""
    if isinstance(block, (SUq2, Hnuq)):
        eig = rho_spectrum(block, Fraction(1, 2) if isinstance(block, SUq2) else (0, Fraction(1, 2))).eigenvalues
    else:
        eig = rho_spectrum(block).eigenvalues
    out = []
    for a in eig:
        for b in eig:
            x = a * b
            if x not in out:
                out.append(x)
    return out


@dataclass(frozen=True)
class BicrossedResult:
    invariants: InvariantTriple
    s_invariant: ClosedMultSet
    injective: bool
    checks: tuple  # certificates of the verified hypotheses


def _to_unit_interval(xs, registry):
    gens = []
    for x in xs:
        if x.is_one():
            continue
        s = registry.sign(x.log)
        if s is None:
            raise MissingFactError(f"cannot decide whether {x} differs from 1")
        gens.append(x if s < 0 else x.inverse())
    return gens


def bicrossed_invariants(entries, layer: GammaLayer, registry: ConstantRegistry | None = None) -> BicrossedResult:
    registry = registry or ConstantRegistry()
    entries = list(entries)
    checks = []
    for b, m in entries:
        if m is not INF:
            raise HypothesisError("infinite-repetition", f"block {b.to_json()} has finite multiplicity {m}")
    blocks = [b for b, _ in entries]
    # (i) every factor algebra is a factor
    for b in blocks:
        if not b.factor:
            raise HypothesisError("factor", f"the algebra of block {b.to_json()} is not a factor")
    checks.append(Certificate("every block algebra is a factor", "yes", "blocks:factor-flags"))
    # (iii) symmetric rho spectra for every representation
    for b in blocks:
        labels = [Fraction(n, 2) for n in range(7)] if isinstance(b, SUq2) else \
                 [(0, Fraction(n, 2)) for n in range(7)] if isinstance(b, Hnuq) else [None]
        for lab in labels:
            if not spectrum_symmetric(rho_spectrum(b, lab), registry):
                raise HypothesisError("spectral-symmetry",
                                      f"Sp(rho) != Sp(rho^-1) for block {b.to_json()}")
    checks.append(Certificate("Sp(rho) = Sp(rho^-1) for all blocks", "yes", "blocks:ladder-symmetry"))
    # (ii) Gamma meets the common period lattice trivially
    tt = intersect_all([ttau_block(b, registry).value for b in blocks], registry)
    meet = intersect(layer.gamma, tt.value, registry)
    if not (tt.exact and meet.exact):
        raise MissingFactError(f"cannot decide {layer.gamma} ∩ {tt.value}",
                               (tt.missing + meet.missing or ("",))[0])
    if not meet.value.is_zero():
        raise HypothesisError("trivial-intersection", f"{layer.gamma} ∩ {tt.value} = {meet.value} != {{0}}")
    checks.append(Certificate(f"{layer.gamma} ∩ {tt.value} = {{0}}", "yes",
                              "qlinear:intersection", tuple(f for c in meet.certificates for f in c.facts)))
    ttau = Decided(tt.value, True, tt.certificates)
    sum_group = layer.gamma + tt.value
    if all(b.class_commutant_in_class for b in blocks):
        inn = Decided(sum_group, True, (Certificate(f"T^tau_Inn = {sum_group}", "yes",
                                                    "scaling:bicrossed-inner-equality"),))
    else:
        inn = Decided(sum_group, False, (Certificate(f"{sum_group} subset of T^tau_Inn", "yes",
                                                     "scaling:bicrossed-inner-inclusion"),))
    if all(isinstance(b, (Hnuq, DualFreeGroup)) for b in blocks):
        ainn = Decided(AdditiveSubgroup.real_line(), True,
                       (Certificate("T^tau_AInn = R", "yes", "scaling:bicrossed-approximately-inner"),))
    else:
        ainn = _undetermined("approximately inner scaling automorphisms are only modelled for Hnuq blocks")
    gens = _to_unit_interval([x for b in blocks for x in rho_pair_products(b)], registry)
    closure = mult_closure(gens, registry)
    s_inv = ClosedMultSet(closure.kind in ("cyclic", "dense"), closure)
    injective = all(b.injective for b in blocks)
    return BicrossedResult(InvariantTriple(ttau, inn, ainn), s_inv, injective, tuple(checks))


# -- distinctness -------------------------------------------------------------------

@dataclass(frozen=True)
class PairVerdict:
    i: int
    j: int
    distinct: bool
    component: str = ""
    certificates: tuple = ()
    missing: tuple = ()

    def to_json(self):
        out = {"i": self.i, "j": self.j, "verdict": "distinct" if self.distinct else "indistinguishable"}
        if self.component:
            out["component"] = self.component
        if self.certificates:
            out["certificates"] = [c.to_json() for c in self.certificates]
        if self.missing:
            out["missing_facts"] = list(self.missing)
        return out


def _compare(a: Decided, b: Decided, registry) -> Answer:
    if isinstance(a.value, Undetermined) or isinstance(b.value, Undetermined):
        return Answer("unknown", note="undetermined component")
    if not (a.exact and b.exact):
        return Answer("unknown", note="only bounds are known")
    return equal(a.value, b.value, registry)


def distinctness_certificate(triples, registry: ConstantRegistry | None = None):
    """Pairwise verdicts: distinct when some component equality is certified false."""
    registry = registry or ConstantRegistry()
    triples = list(triples)
    out = []
    for i, j in combinations(range(len(triples)), 2):
        missing = []
        verdict = PairVerdict(i, j, False)
        for (name, a), (_, b) in zip(triples[i].components(), triples[j].components()):
            ans = _compare(a, b, registry)
            if ans.no:
                verdict = PairVerdict(i, j, True, name, ans.certificates)
                break
            missing.extend(ans.missing)
        if not verdict.distinct:
            verdict = PairVerdict(i, j, False, missing=tuple(dict.fromkeys(missing)))
        out.append(verdict)
    return out


# -- T^tau versus T -------------------------------------------------------------------

@dataclass(frozen=True)
class ConsistencyVerdict:
    verdict: str  # equal | inclusion-fails | not-applicable | inconsistent
    detail: str
    witness: SymbolicReal | None = None
    certificates: tuple = ()

    def to_json(self):
        out = {"verdict": self.verdict, "detail": self.detail,
               "certificates": [c.to_json() for c in self.certificates]}
        if self.witness is not None:
            out["witness"] = str(self.witness)
        return out


def symmetric_ttau_vs_T(report, registry: ConstantRegistry | None = None) -> ConsistencyVerdict:
    """Compare T^tau with Connes' T for a classified construction."""
    registry = registry or ConstantRegistry()
    ttau = report.invariants.ttau
    T = report.t_invariant
    if not report.symmetric_spectra:
        # look for a period of the scaling group that is not in T
        if isinstance(ttau.value, AdditiveSubgroup) and ttau.value.z and T.kind in ("zero_only", "lattice"):
            w = ttau.value.z[0]
            ans = report.t_member_value(w, registry)
            if ans.no:
                return ConsistencyVerdict("inclusion-fails", f"{w} lies in T^tau but not in T", w,
                                          ans.certificates)
        return ConsistencyVerdict("not-applicable", "rho spectra are not symmetric")
    if not report.centralizer_factor:
        return ConsistencyVerdict("not-applicable", "the centralizer of the Haar state is not known to be a factor")
    if T.kind == "lattice":
        ans = equal(ttau.value, T.lattice, registry)
    elif T.kind == "zero_only":
        ans = equal(ttau.value, AdditiveSubgroup.zero(), registry)
    elif T.kind == "full":
        ans = equal(ttau.value, AdditiveSubgroup.real_line(), registry)
    else:
        return ConsistencyVerdict("not-applicable", f"T is described as {T.kind}")
    if ans.yes:
        return ConsistencyVerdict("equal", f"T^tau = T = {ttau.value}", certificates=ans.certificates)
    if ans.no:
        return ConsistencyVerdict("inconsistent", f"T^tau = {ttau.value} but T = {T}", certificates=ans.certificates)
    return ConsistencyVerdict("not-applicable", "equality undecided: " + ", ".join(ans.missing))


__all__ = [
    "BicrossedResult", "ConsistencyVerdict", "GammaLayer", "INF", "InvariantTriple", "PairVerdict",
    "bicrossed_invariants", "distinctness_certificate", "glambda_entries", "glambda_k_invariants",
    "product_invariants", "rho_pair_products", "symmetric_ttau_vs_T",
]
