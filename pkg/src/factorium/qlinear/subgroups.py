"""Finitely generated subgroups of (R, +) and closed subgroups of R_+.

All linear algebra is formal: values are written in coordinates over the
monomials they involve.  Formal relations are true relations, so a "yes"
needs no facts.  A "no" is only claimed once the registry certifies that
the monomials involved are Q-linearly independent, because only then do
formal and real relations coincide.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .lattice import common_denominator, hnf, reduce_mod, rref, rref_full, solve_in_lattice
from .parse import parse_expr, parse_subgroup_parts
from .registry import Answer, Certificate, ConstantRegistry, Independence
from .symbolic import INVLOG, Monomial, PosReal, SymbolicReal, fmt_rational, log_rational


# -- clearing 1/log(b) atoms ----------------------------------------------------

def clear_denominators(values):
    """Multiply every value by one common nonzero factor so no 1/log(b) atom remains."""
    top: dict = {}
    for v in values:
        for m in v.monomials():
            for a, e in m.items:
                if a.kind == INVLOG:
                    if e.denominator != 1:
                        raise ValueError(f"fractional power of {a} is not supported")
                    top[a] = max(top.get(a, 0), int(e), 0)
    if not top:
        return list(values)
    out = []
    for v in values:
        acc = SymbolicReal()
        for m, c in v.terms:
            rest = Monomial([(a, e) for a, e in m.items if a.kind != INVLOG])
            term = SymbolicReal.monomial(rest, c)
            for a, E in top.items():
                k = E - int(m.exponent(a))
                term = term * (log_rational(a.key) ** k)
            acc = acc + term
        out.append(acc)
    return out


def coordinates(values):
    cleared = clear_denominators(values)
    monos = sorted({m for v in cleared for m in v.monomials()}, key=lambda m: m.sort_key())
    vecs = [[v.coefficient(m) for m in monos] for v in cleared]
    return monos, vecs


def _combo(coeffs, values) -> SymbolicReal:
    out = SymbolicReal()
    for c, v in zip(coeffs, values):
        if c:
            out = out + v * Fraction(c)
    return out


# -- subgroups --------------------------------------------------------------

class AdditiveSubgroup:
    """sum c_i Z + sum d_j Q, or all of R when `full` is set; kept in normal form."""

    __slots__ = ("z", "q", "full")

    def __init__(self, z=(), q=(), full: bool = False):
        z = [parse_expr(x) for x in z]
        q = [parse_expr(x) for x in q]
        self.full = bool(full)
        if self.full:
            self.z, self.q = (), ()
        else:
            self.z, self.q = _normalize(z, q)

    @classmethod
    def cyclic(cls, c) -> "AdditiveSubgroup":
        return cls(z=[c])

    @classmethod
    def rational_line(cls, d) -> "AdditiveSubgroup":
        return cls(q=[d])

    @classmethod
    def zero(cls) -> "AdditiveSubgroup":
        return cls()

    @classmethod
    def real_line(cls) -> "AdditiveSubgroup":
        return cls(full=True)

    @classmethod
    def parse(cls, text: str) -> "AdditiveSubgroup":
        t = text.strip()
        if t in ("{0}", "0"):
            return cls()
        z, q, full = parse_subgroup_parts(t)
        return cls(z, q, full)

    def is_zero(self) -> bool:
        return not self.full and not self.z and not self.q

    def generators(self):
        return list(self.z) + list(self.q)

    def __add__(self, other: "AdditiveSubgroup") -> "AdditiveSubgroup":
        return subgroup_sum(self, other)

    def __eq__(self, other):
        return (isinstance(other, AdditiveSubgroup) and self.full == other.full
                and self.z == other.z and self.q == other.q)

    def __hash__(self):
        return hash((self.full, self.z, self.q))

    def __str__(self):
        if self.full:
            return "R"
        if self.is_zero():
            return "{0}"
        return " + ".join([f"Z({g})" for g in self.z] + [f"Q({g})" for g in self.q])

    __repr__ = __str__


def _normalize(z, q):
    z = [v for v in z if not v.is_zero()]
    q = [v for v in q if not v.is_zero()]
    if not z and not q:
        return (), ()
    monos, vecs = coordinates(q + z)
    qv, zv = vecs[: len(q)], vecs[len(q):]
    qgens = []
    basis, pivots = [], []
    if q:
        basis, pivots, T = rref(qv)
        qgens = [_combo(T[i], q) for i in range(len(basis))]
    residuals, res_vals = [], []
    for v, val in zip(zv, z):
        r, coeffs = reduce_mod(v, basis, pivots)
        residuals.append(r)
        res_vals.append(val - _combo(coeffs, qgens))
    zgens = []
    if residuals:
        D = common_denominator(residuals)
        ints = [[int(x * D) for x in r] for r in residuals]
        H, U, rk = hnf(ints, track=True)
        zgens = [_combo(U[i], res_vals) for i in range(rk)]
    return tuple(zgens), tuple(qgens)


def subgroup_sum(G: AdditiveSubgroup, H: AdditiveSubgroup) -> AdditiveSubgroup:
    if G.full or H.full:
        return AdditiveSubgroup.real_line()
    return AdditiveSubgroup(list(G.z) + list(H.z), list(G.q) + list(H.q))


def _check(registry: ConstantRegistry, *values):
    for v in values:
        registry.check(v)


def _fmt_coeffs(cs) -> str:
    return "[" + ", ".join(fmt_rational(Fraction(c)) for c in cs) + "]"


def formal_member(t: SymbolicReal, G: AdditiveSubgroup):
    """Integer/rational witness (n, r) with t = sum n_i z_i + sum r_j q_j, or None."""
    values = [t] + list(G.q) + list(G.z)
    monos, vecs = coordinates(values)
    tv, qv, zv = vecs[0], vecs[1: 1 + len(G.q)], vecs[1 + len(G.q):]
    basis, pivots, T = rref(qv) if qv else ([], [], [])
    res_t, _ = reduce_mod(tv, basis, pivots)
    res_z = [reduce_mod(v, basis, pivots)[0] for v in zv]
    n = [0] * len(zv)
    if any(res_t):
        if not res_z:
            return None, monos
        D = common_denominator(res_z + [res_t])
        ints = [[int(x * D) for x in r] for r in res_z]
        H, U, rk = hnf(ints, track=True)
        sol = solve_in_lattice([int(x * D) for x in res_t], H, rk)
        if sol is None:
            return None, monos
        n = [sum(sol[k] * U[k][j] for k in range(rk)) for j in range(len(zv))]
    # remaining part lies in the rational span of the q-generators
    w = list(tv)
    for nj, v in zip(n, zv):
        if nj:
            w = [a - nj * b for a, b in zip(w, v)]
    res, coeffs = reduce_mod(w, basis, pivots)
    if any(res):
        return None, monos
    r = [sum(coeffs[i] * T[i][j] for i in range(len(basis))) for j in range(len(qv))]
    return (n, r), monos


def member(t, G: AdditiveSubgroup, registry: ConstantRegistry | None = None) -> Answer:
    registry = registry or ConstantRegistry()
    t = parse_expr(t)
    _check(registry, t, *G.generators())
    claim = f"{t} in {G}"
    query = (("op", "member"), ("t", str(t)), ("G", str(G)))
    if G.full:
        return Answer("yes", (Certificate(claim, "yes", "full-line", (), (), query),))
    wit, monos = formal_member(t, G)
    if wit is not None:
        n, r = wit
        witness = (("z_coefficients", _fmt_coeffs(n)), ("q_coefficients", _fmt_coeffs(r)),
                   ("z_generators", [str(g) for g in G.z]), ("q_generators", [str(g) for g in G.q]))
        return Answer("yes", (Certificate(claim, "yes", "explicit-combination", (), witness, query),))
    ind = registry.independent_monomials(monos)
    if ind.ok:
        return Answer("no", (Certificate(claim, "no", "formal-non-membership-under-independence",
                                         ind.facts, (("monomials", [str(m) for m in monos]),), query),))
    return Answer("unknown", missing=(ind.missing,), note=f"cannot decide {claim}")


def in_rational_span(d: SymbolicReal, G: AdditiveSubgroup) -> bool:
    _, vecs = coordinates([d] + list(G.q))
    basis, pivots, _ = rref(vecs[1:]) if len(vecs) > 1 else ([], [], [])
    res, _ = reduce_mod(vecs[0], basis, pivots)
    return not any(res)


def includes(G: AdditiveSubgroup, H: AdditiveSubgroup, registry: ConstantRegistry | None = None) -> Answer:
    """Is G a subset of H?"""
    registry = registry or ConstantRegistry()
    claim = f"{G} subset of {H}"
    query = (("op", "includes"), ("G", str(G)), ("H", str(H)))
    if H.full:
        return Answer("yes", (Certificate(claim, "yes", "full-line", (), (), query),))
    if G.full:
        return Answer("no", (Certificate(claim, "no", "countability", ("builtin:countability",), (), query),))
    certs, missing = [], []
    for z in G.z:
        a = member(z, H, registry)
        if a.no:
            return Answer("no", tuple(Certificate(claim, "no", c.rule, c.facts, c.witness, query) for c in a.certificates))
        if a.unknown:
            missing.extend(a.missing)
        certs.extend(a.certificates)
    for d in G.q:
        _check(registry, d, *H.generators())
        if in_rational_span(d, H):
            certs.append(Certificate(f"Q({d}) subset of {H}", "yes", "rational-span", (), (), query))
            continue
        monos, _ = coordinates([d] + H.generators())
        ind = registry.independent_monomials(monos)
        if ind.ok:
            return Answer("no", (Certificate(claim, "no", "rational-line-outside-divisible-part", ind.facts,
                                             (("monomials", [str(m) for m in monos]),), query),))
        missing.append(ind.missing)
    if missing:
        return Answer("unknown", missing=tuple(dict.fromkeys(missing)), note=f"cannot decide {claim}")
    return Answer("yes", (Certificate(claim, "yes", "generatorwise-inclusion",
                                      tuple(sorted({f for c in certs for f in c.facts})), (), query),))


def equal(G: AdditiveSubgroup, H: AdditiveSubgroup, registry: ConstantRegistry | None = None) -> Answer:
    registry = registry or ConstantRegistry()
    claim = f"{G} = {H}"
    query = (("op", "equal"), ("G", str(G)), ("H", str(H)))
    a = includes(G, H, registry)
    b = includes(H, G, registry)
    if a.no or b.no:
        src = a if a.no else b
        return Answer("no", tuple(Certificate(claim, "no", c.rule, c.facts, c.witness, query) for c in src.certificates))
    if a.yes and b.yes:
        facts = tuple(sorted({f for c in a.certificates + b.certificates for f in c.facts}))
        return Answer("yes", (Certificate(claim, "yes", "mutual-inclusion", facts, (), query),))
    return Answer("unknown", missing=tuple(dict.fromkeys(a.missing + b.missing)), note=f"cannot decide {claim}")


@dataclass(frozen=True)
class Decided:
    """A computed subgroup, marked exact or only a certified lower bound."""

    value: AdditiveSubgroup
    exact: bool
    certificates: tuple = ()
    missing: tuple = ()

    def to_json(self):
        out = {"value": str(self.value), "exact": self.exact,
               "certificates": [c.to_json() for c in self.certificates]}
        if self.missing:
            out["missing_facts"] = list(self.missing)
        return out


def formal_intersection(G: AdditiveSubgroup, H: AdditiveSubgroup):
    a, d, b, e = list(G.z), list(G.q), list(H.z), list(H.q)
    monos, vecs = coordinates(a + d + b + e)
    av = vecs[: len(a)]
    dv = vecs[len(a): len(a) + len(d)]
    bv = vecs[len(a) + len(d): len(a) + len(d) + len(b)]
    ev = vecs[len(a) + len(d) + len(b):]
    div_rows = dv + [[-x for x in v] for v in ev]
    if div_rows:
        A, pivots, T, rk = rref_full(div_rows)
        basis, Tb = A[:rk], T[:rk]
        kernel = T[rk:]
    else:
        basis, pivots, Tb, kernel = [], [], [], []
    # divisible part: V1 ∩ V2
    qgens = [_combo(k[: len(d)], d) for k in kernel]
    # lattice part from integer relations between projected z-generators
    proj = [reduce_mod(v, basis, pivots)[0] for v in av] + \
           [[-x for x in reduce_mod(v, basis, pivots)[0]] for v in bv]
    zgens = []
    if proj:
        D = common_denominator(proj)
        ints = [[int(x * D) for x in r] for r in proj]
        _, U, rk2 = hnf(ints, track=True)
        for rel in U[rk2:]:
            n, m = rel[: len(a)], rel[len(a):]
            # w = sum m_k b_k - sum n_i a_i lies in span(d) + span(e)
            w = [Fraction(0)] * len(monos)
            for mk, v in zip(m, bv):
                w = [x + mk * y for x, y in zip(w, v)]
            for ni, v in zip(n, av):
                w = [x - ni * y for x, y in zip(w, v)]
            _, coeffs = reduce_mod(w, basis, pivots)
            rs = [sum(coeffs[i] * Tb[i][j] for i in range(len(basis))) for j in range(len(div_rows))]
            x = _combo(n, a) + _combo(rs[: len(d)], d)
            zgens.append(x)
    return AdditiveSubgroup(zgens, qgens), monos


def intersect(G: AdditiveSubgroup, H: AdditiveSubgroup, registry: ConstantRegistry | None = None) -> Decided:
    registry = registry or ConstantRegistry()
    _check(registry, *G.generators(), *H.generators())
    claim = f"{G} ∩ {H}"
    query = (("op", "intersect"), ("G", str(G)), ("H", str(H)))
    if G.full:
        return Decided(H, True, (Certificate(claim, "yes", "full-line", (), (), query),))
    if H.full:
        return Decided(G, True, (Certificate(claim, "yes", "full-line", (), (), query),))
    value, monos = formal_intersection(G, H)
    ind = registry.independent_monomials(monos)
    if ind.ok:
        return Decided(value, True, (Certificate(f"{claim} = {value}", "yes", "formal-intersection-under-independence",
                                                 ind.facts, (("monomials", [str(m) for m in monos]),), query),))
    return Decided(value, False, missing=(ind.missing,))


def intersect_all(groups, registry: ConstantRegistry | None = None) -> Decided:
    groups = list(groups)
    if not groups:
        return Decided(AdditiveSubgroup.real_line(), True)
    acc = Decided(groups[0], True)
    for g in groups[1:]:
        step = intersect(acc.value, g, registry)
        acc = Decided(step.value, acc.exact and step.exact, acc.certificates + step.certificates,
                      acc.missing + step.missing)
    return acc


# -- closure classification ---------------------------------------------------

@dataclass(frozen=True)
class Closure:
    kind: str  # trivial | discrete | dense | unknown
    generator: SymbolicReal | None = None
    certificates: tuple = ()
    missing: tuple = ()


def closure_classify_additive(gens, registry: ConstantRegistry | None = None) -> Closure:
    registry = registry or ConstantRegistry()
    gens = [parse_expr(g) for g in gens]
    _check(registry, *gens)
    G = AdditiveSubgroup(z=gens)
    claim = "closure of the group generated by {" + ", ".join(str(g) for g in gens) + "}"
    if not G.z:
        return Closure("trivial", certificates=(Certificate(claim + " = {0}", "yes", "formally-zero"),))
    if len(G.z) == 1:
        a = G.z[0]
        nz = registry.nonzero(a)
        if not nz.ok:
            return Closure("unknown", missing=(nz.missing,))
        s = registry.sign(a)
        if s is not None and s < 0:
            a = -a
        return Closure("discrete", a, (Certificate(f"{claim} = Z({a})", "yes", "formal-rank-one", nz.facts),))
    cleared = clear_denominators(list(G.z))
    missing = []
    for i, j in combinations(range(len(cleared)), 2):
        ind = registry.independent_values([cleared[i], cleared[j]])
        if ind.ok:
            return Closure("dense", certificates=(Certificate(
                f"{claim} is dense: {G.z[i]} / {G.z[j]} is irrational", "yes", "rank-two-subgroup-is-dense", ind.facts),))
        missing.append(ind.missing)
    return Closure("unknown", missing=tuple(dict.fromkeys(missing)))


@dataclass(frozen=True)
class MultClosure:
    """Closed subgroup of R_+: trivial {1}, cyclic r^Z with 0 < r < 1, or all of R_+."""

    kind: str  # trivial | cyclic | dense | unknown
    generator: PosReal | None = None
    certificates: tuple = ()
    missing: tuple = ()

    def __str__(self):
        if self.kind == "trivial":
            return "{1}"
        if self.kind == "cyclic":
            return f"({self.generator})^Z"
        if self.kind == "dense":
            return "R>0"
        return "undetermined"


def mult_closure(gens, registry: ConstantRegistry | None = None) -> MultClosure:
    registry = registry or ConstantRegistry()
    logs = []
    for g in gens:
        if not isinstance(g, PosReal):
            raise TypeError("mult_closure expects PosReal generators")
        if registry.sign(g.log) != -1:
            raise ValueError(f"generator {g} is not certified to lie in (0, 1)")
        logs.append(g.log)
    c = closure_classify_additive(logs, registry)
    if c.kind == "trivial":
        return MultClosure("trivial", certificates=c.certificates)
    if c.kind == "discrete":
        return MultClosure("cyclic", PosReal(-c.generator), c.certificates)
    if c.kind == "dense":
        return MultClosure("dense", certificates=c.certificates)
    return MultClosure("unknown", missing=c.missing)


# -- certificate replay ------------------------------------------------------

def replay(cert: Certificate, registry: ConstantRegistry) -> bool:
    """Re-derive a certificate's answer using only the facts it names."""
    q = dict(cert.query)
    if not q:
        return False
    restricted = registry.restricted(cert.facts)
    op = q["op"]
    if op == "member":
        ans = member(parse_expr(q["t"]), AdditiveSubgroup.parse(q["G"]), restricted)
        return ans.value == cert.answer
    if op == "includes":
        ans = includes(AdditiveSubgroup.parse(q["G"]), AdditiveSubgroup.parse(q["H"]), restricted)
        return ans.value == cert.answer
    if op == "equal":
        ans = equal(AdditiveSubgroup.parse(q["G"]), AdditiveSubgroup.parse(q["H"]), restricted)
        return ans.value == cert.answer
    if op == "intersect":
        d = intersect(AdditiveSubgroup.parse(q["G"]), AdditiveSubgroup.parse(q["H"]), restricted)
        return d.exact
    return False
