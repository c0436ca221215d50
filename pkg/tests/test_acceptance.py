"""Acceptance run: one PASS/FAIL line per criterion.

Tolerances and time budgets are fixed by the acceptance criteria:
1 s, 5 s and 30 s budgets for criteria 1, 3 and 4, the constant 3 and
width 1e-6 for the fractional-part lemma, 100 random spectra and 10^4
property cases.
"""

import contextlib
import io
import math
import random
import time
from fractions import Fraction

import pytest

from factorium.blocks import make_block, rho_spectrum, spectrum_symmetric, ttau_block
from factorium.cli import main
from factorium.errors import HypothesisError
from factorium.products import Entry, ProductSpec, classify, t_member
from factorium.qlinear import ConstantRegistry, PosReal, parse_expr
from factorium.scaling import INF, distinctness_certificate, glambda_k_invariants, symmetric_ttau_vs_T
from factorium.specfile import load_registry, load_spec
from factorium.spectra import (
    CyclicFactor, DiscreteSpectrum, brute_force_product, limit_spectrum_classify, truncated_product_spectrum,
)
from factorium.type3zero import III0Family, criterion_s_prime, lemma_asymptotic_check

import props
from conftest import ALPHA_FACTS, CORPUS

REG = ConstantRegistry()


@contextlib.contextmanager
def criterion(capsys, number, title, budget=None):
    """Print a single PASS/FAIL line for the enclosed checks, then re-raise any failure."""
    start = time.perf_counter()
    failure = None
    try:
        yield
    except Exception as exc:  # noqa: BLE001 - reported, then re-raised
        failure = exc
    elapsed = time.perf_counter() - start
    if failure is None and budget is not None and elapsed >= budget:
        failure = AssertionError(f"took {elapsed:.2f} s, budget {budget} s")
    status = "PASS" if failure is None else "FAIL"
    detail = "" if failure is None else f" :: {type(failure).__name__}: {failure}"
    with capsys.disabled():
        print(f"\n[{status}] criterion {number:>2}: {title} ({elapsed:.2f} s){detail}")
    if failure is not None:
        raise failure


def hnuq(nu, q, reg=REG):
    return make_block({"kind": "Hnuq", "nu": nu, "q": q}, reg, "")


def test_criterion_01_period_lattice(capsys):
    with criterion(capsys, 1, "T membership on the period lattice of constant q", budget=1.0):
        for q in ("1/2", "1/3", "9/10", "-1/2"):
            spec = ProductSpec(entries=(Entry(hnuq("1", q), INF),), registry=REG)
            L = f"log({abs(Fraction(q))})"
            for k in range(-5, 6):
                assert t_member(spec, f"{k}*pi/{L}").yes, (q, k)
                assert t_member(spec, f"{k}*pi/{L} + 1/1000").no, (q, k)


def test_criterion_02_normal_forms(capsys):
    with criterion(capsys, 2, "III_{1/4} and III_1 classification with S normal forms"):
        quarter = classify(load_spec(CORPUS / "iii_lambda_quarter.json"))
        assert quarter.factor_type == "III_lambda" and str(quarter.lam) == "1/4"
        assert quarter.s_invariant.normal_form() == "{0} ∪ (1/4)^ℤ"
        pair = classify(load_spec(CORPUS / "iii1_pair.json"))
        assert pair.factor_type == "III_one"
        assert pair.s_invariant.normal_form() == "ℝ≥0"


def test_criterion_03_iii0_family(capsys):
    with criterion(capsys, 3, "III_0 family membership and the s' > s convergence rule", budget=5.0):
        fam = ProductSpec(family=III0Family(Fraction(2, 5)), registry=REG)
        assert t_member(fam, "ts(1/2)").yes
        assert t_member(fam, "ts(3/10)").no
        assert t_member(fam, "22/7").yes
        rng = random.Random(31337)
        for _ in range(20):
            s = Fraction(rng.randint(1, 19), 20)
            sp = Fraction(rng.randint(1, 19), 20)
            expected = "converges" if sp > s else "diverges"
            assert criterion_s_prime(s, sp, terms=10).verdict == expected, (s, sp)
            member = t_member(ProductSpec(family=III0Family(s), registry=REG), f"ts({sp})")
            assert member.yes == (sp > s) and not member.unknown, (s, sp)


def test_criterion_04_fractional_part_lemma(capsys):
    with criterion(capsys, 4, "k |{ts k!} - k^-s| <= 3 for k in [5, 30] at 256 bits", budget=30.0):
        for s in (Fraction(3, 10), Fraction(1, 2), Fraction(7, 10)):
            rep = lemma_asymptotic_check(s, range(5, 31), precision=256)
            assert [r.k for r in rep.rows] == list(range(5, 31))
            for r in rep.rows:
                assert r.scaled_diff.hi <= 3, (s, r.k, float(r.scaled_diff.hi))
                assert r.frac.width < Fraction(1, 10 ** 6), (s, r.k)
            assert rep.verdict


def test_criterion_05_many_iii_lambda(capsys):
    with criterion(capsys, 5, "G_lambda,k invariants for lambda = 1/2, k = 0..4, pairwise distinct"):
        triples = []
        for k in range(5):
            inv = glambda_k_invariants(Fraction(1, 2), k, REG)
            assert all(d.exact for _, d in inv.components())
            assert str(inv.ttau.value) == ("Z(2*pi/log(2))" if k == 0 else "{0}")
            # k = 0 is the constant sequence, where T^tau_Inn coincides with T^tau
            assert str(inv.ttau_inn.value) == ("Z(2*pi/log(2))" if k <= 1 else f"Z({2 * k}*pi/log(2))")
            assert inv.ttau_ainn.value.full
            triples.append(inv)
        pairs = distinctness_certificate(triples, REG)
        assert len(pairs) == 10 and all(p.distinct and p.certificates for p in pairs)


def test_criterion_06_bicrossed_instances(capsys):
    with criterion(capsys, 6, "bicrossed III_lambda / III_1 triples and the symmetry hypothesis"):
        facts = load_registry(ALPHA_FACTS)
        lam_invariants = []
        for name, alpha in (("sqrt2", "sqrt2"), ("sqrt3", "sqrt3"), ("e", "e")):
            rep = classify(load_spec(CORPUS / f"bicrossed_lambda_{name}.json", facts))
            inv = rep.invariants
            assert str(inv.ttau.value) == "Z(2*pi/log(2))"
            assert str(inv.ttau_inn.value) == f"Z(2*pi/log(2)) + Z(2*pi*{alpha}/log(2))"
            assert rep.s_invariant.normal_form() == "{0} ∪ (1/2)^ℤ"
            lam_invariants.append(inv)
        assert all(p.distinct for p in distinctness_certificate(lam_invariants, facts))
        for name, gamma in (("Z", "Z(1)"), ("halfZ", "Z(1/2)"), ("piZ", "Z(pi)")):
            rep = classify(load_spec(CORPUS / f"bicrossed_iii1_{name}.json"))
            assert rep.invariants.ttau.value.is_zero()
            assert str(rep.invariants.ttau_inn.value) == gamma
            assert rep.s_invariant.normal_form() == "ℝ≥0"
        with pytest.raises(HypothesisError) as exc:
            classify(load_spec(CORPUS / "free_unitary_bicrossed.json"))
        assert exc.value.hypothesis == "spectral-symmetry"


def test_criterion_07_free_unitary(capsys):
    with criterion(capsys, 7, "free unitary scaling period and inclusion-failure witness"):
        fu = make_block({"kind": "FreeUnitary", "F": ["pi^(1/2)", "1", "1"]}, REG, "")
        tt = ttau_block(fu, REG)
        assert tt.exact and str(tt.value) == "Z(2*pi/log(pi))"
        verdict = symmetric_ttau_vs_T(classify(load_spec(CORPUS / "free_unitary.json")), REG)
        assert verdict.verdict == "inclusion-fails" and verdict.certificates
        assert str(verdict.witness) == "2*pi/log(pi)"
        assert spectrum_symmetric(rho_spectrum(fu), REG) is False


def test_criterion_08_spectrum_oracle(capsys):
    with criterion(capsys, 8, "truncated spectra against brute force; gcd/dense limit analysis"):
        rng = random.Random(8)
        for _ in range(100):
            vs = props.random_vec_sets(rng, max_factors=4, max_points=5)
            spectra = [DiscreteSpectrum.of([props.to_pos(v) for v in s]) for s in vs]
            got = truncated_product_spectrum(spectra)
            assert got == brute_force_product(spectra)
            assert got.points == frozenset(props.oracle_product(vs))
        for _ in range(20):
            exps = [rng.randint(1, 30) for _ in range(rng.randint(1, 4))]
            lim = limit_spectrum_classify([CyclicFactor(PosReal.rational(Fraction(1, 2 ** e))) for e in exps], REG)
            assert lim.kind == "cyclic"
            assert lim.generator == PosReal.rational(Fraction(1, 2 ** math.gcd(*exps)))
        for a, b in ((1, 1), (2, 3), (5, 7)):
            pi_and_one = [CyclicFactor(PosReal(parse_expr(f"-{a}"))), CyclicFactor(PosReal(parse_expr(f"-{b}*pi")))]
            assert limit_spectrum_classify(pi_and_one, REG).kind == "dense"
        only_pi = [CyclicFactor(PosReal(parse_expr("-2*pi"))), CyclicFactor(PosReal(parse_expr("-3*pi")))]
        lim = limit_spectrum_classify(only_pi, REG)
        assert lim.kind == "cyclic" and lim.generator == PosReal(parse_expr("-pi"))


def _property_cases(rng, n):
    for _ in range(n):
        f = rng.randrange(len(props.FAMILIES))
        size = rng.randint(1, len(props.FAMILIES[f]))
        idx = rng.sample(range(len(props.FAMILIES[f])), size)
        yield f, idx


def test_criterion_09_property_suites(capsys):
    per_suite = 2000
    with criterion(capsys, 9, f"property suites, {5 * per_suite} randomized cases"):
        rng = random.Random(90210)
        scales = sorted({Fraction(n, d) for n in range(1, 26) for d in range(1, 6) if Fraction(n, d) <= 5} - {0})
        count = 0
        for f, idx in _property_cases(rng, per_suite):
            ca = [rng.randint(-9, 9) for _ in idx]
            cb = [rng.randint(-9, 9) for _ in idx]
            props.check_subgroup_axioms(f, idx, ca, cb, rng.choice(scales))
            count += 1
        shifts = [Fraction(0), Fraction(1), Fraction(1, 2), Fraction(1, 3), Fraction(2, 3)]
        for f, idx in _property_cases(rng, per_suite):
            props.check_certificate_replay(f, idx, [rng.randint(-9, 9) for _ in idx], rng.choice(shifts))
            count += 1
        ops = ["exp", "log", "sin", "cos", "arith"]
        for _ in range(per_suite):
            props.check_interval_soundness(rng.randint(-3000, 3000), rng.randint(1, 97), rng.choice(ops))
            count += 1
        ts = ["1", "pi", "1/3", "pi/log(2)", "2*pi/log(3)"]
        for _ in range(per_suite):
            props.check_monotone_partial_sums(Fraction(1, rng.randint(2, 9)), rng.choice(ts),
                                              rng.randint(0, 20), rng.randint(0, 20))
            count += 1
        for _ in range(per_suite):
            qs = [Fraction(1, rng.randint(2, 7)) for _ in range(rng.randint(1, 3))]
            props.check_invariant_chain(qs, [rng.randint(0, 2) for _ in range(3)])
            count += 1
        assert count == 10 ** 4


def _corpus_transcript() -> bytes:
    out = io.StringIO()
    for path in sorted(CORPUS.glob("*.json")):
        for command in ("classify", "invariants"):
            with contextlib.redirect_stdout(out), contextlib.redirect_stderr(io.StringIO()):
                code = main([command, str(path), "--facts", str(ALPHA_FACTS)])
            out.write(f"-- {path.name} {command} exit={code}\n")
    return out.getvalue().encode("utf-8")


def test_criterion_10_determinism(capsys):
    with criterion(capsys, 10, "byte-identical JSON over two corpus runs"):
        first, second = _corpus_transcript(), _corpus_transcript()
        assert len(first) > 1000
        assert first == second
