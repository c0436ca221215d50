from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from factorium.blocks import make_block, parse_q
from factorium.errors import HypothesisError, SpecError
from factorium.products import (
    Accumulation, Entry, ProductSpec, classify, s_invariant, sequence_prefix, t_member, t_series_diagnose,
)
from factorium.qlinear import AdditiveSubgroup, ConstantRegistry
from factorium.scaling import INF, GammaLayer
from factorium.sets import Undetermined
from factorium.type3zero import III0Family

from props import check_monotone_partial_sums

REG = ConstantRegistry()


def blk(**data):
    return make_block(data, REG, "")


def H(nu, q):
    return blk(kind="Hnuq", nu=nu, q=q)


def spec(*entries, **kw):
    return ProductSpec(entries=tuple(Entry(b, m) for b, m in entries), registry=REG, **kw)


def test_constant_q_is_iii_quarter():
    rep = classify(spec((H("1", "1/2"), INF)))
    assert rep.factor_type == "III_lambda" and str(rep.lam) == "1/4"
    assert rep.injective is True
    assert rep.s_invariant.normal_form() == "{0} ∪ (1/4)^ℤ"
    assert str(rep.t_invariant) == "Z(pi/log(2))"
    assert rep.centralizer_factor


def test_negative_q_gives_same_type():
    rep = classify(spec((H("1", "-1/2"), INF)))
    assert rep.factor_type == "III_lambda" and str(rep.lam) == "1/4"


def test_pair_is_iii_one():
    rep = classify(spec((H("-pi^2", "exp(-1)"), INF), (H("-pi", "exp(-pi)"), INF)))
    assert rep.factor_type == "III_one"
    assert rep.s_invariant.normal_form() == "ℝ≥0"
    assert rep.t_invariant.lattice.is_zero()


def test_commensurable_pair_is_iii_lambda():
    rep = classify(spec((H("1", "1/4"), INF), (H("1", "1/8"), INF)))
    # squares 1/16 and 1/64 generate (1/4)^Z
    assert rep.factor_type == "III_lambda" and str(rep.lam) == "1/4"


def test_finite_extras_are_peeled():
    rep = classify(spec((H("1", "1/2"), INF), (H("1", "1/3"), 2)))
    assert rep.factor_type == "III_lambda" and str(rep.lam) == "1/4"
    assert any(c.rule == "classify:semifinite-tensor-peel" for c in rep.certificates)
    assert not rep.centralizer_factor


def test_semifinite_cases():
    assert classify(spec((H("1", "1/2"), 3))).factor_type == "II_inf"
    rep = classify(spec((blk(kind="DualFreeGroup", rank=2), INF)))
    assert rep.factor_type == "II_one" and rep.injective is False


def test_suq2_is_not_a_factor():
    rep = classify(spec((blk(kind="SUq2", q="1/2"), INF)))
    assert rep.factor_type == "not_a_factor"
    assert t_member(rep.spec, "1").unknown


def test_cross_factor_flips_injectivity_only():
    base = classify(spec((H("1", "1/2"), INF)))
    crossed = classify(spec((H("1", "1/2"), INF), cross=(blk(kind="DualFreeGroup", rank=2),)))
    assert crossed.injective is False
    assert crossed.factor_type == base.factor_type and crossed.lam == base.lam
    assert str(crossed.t_invariant) == str(base.t_invariant)


def test_cross_must_be_kac():
    with pytest.raises(SpecError):
        spec((H("1", "1/2"), INF), cross=(H("1", "1/3"),))


def test_free_unitary_full_factor():
    rep = classify(spec((blk(kind="FreeUnitary", F=["pi^(1/2)", "1", "1"]), 1)))
    assert rep.factor_type == "III_one" and rep.injective is False
    assert rep.t_invariant.kind == "zero_only"
    assert not rep.symmetric_spectra


def test_iii0_family():
    fam = ProductSpec(family=III0Family(Fraction(2, 5)), registry=REG)
    rep = classify(fam)
    assert rep.factor_type == "III_zero" and rep.injective
    assert str(rep.s_invariant) == "{0,1}"
    assert isinstance(s_invariant(fam), Undetermined)
    assert t_member(fam, "ts(1/2)").yes
    assert t_member(fam, "ts(3/10)").no
    assert t_member(fam, "22/7").yes
    assert t_member(fam, "ts(1/2) + 3").yes
    assert t_member(fam, "2*ts(3/10)").unknown
    assert t_member(fam, "pi").unknown


def test_iii0_family_noninjective_variant():
    fam = ProductSpec(family=III0Family(Fraction(2, 5)), cross=(blk(kind="DualFreeGroup", rank=2),), registry=REG)
    rep = classify(fam)
    assert rep.factor_type == "III_zero" and rep.injective is False


def test_accumulation_declaration():
    a = Accumulation(parse_q("1/2", REG), parse_q("1/3", REG))
    acc = ProductSpec(accumulation=a, registry=REG)
    rep = classify(acc)
    assert rep.factor_type == "III_one"
    assert t_member(acc, "0").yes and t_member(acc, "1").no
    bad = ProductSpec(accumulation=Accumulation(parse_q("1/2", REG), parse_q("1/4", REG)), registry=REG)
    with pytest.raises(HypothesisError):
        classify(bad)


def test_bicrossed_classification():
    rep = classify(spec((H("2*pi^2/log(1/2)", "(1/2)^(1/2)"), INF), bicrossed=GammaLayer(AdditiveSubgroup.cyclic(1))))
    assert rep.factor_type == "III_lambda" and str(rep.lam) == "1/2"
    assert str(rep.t_invariant) == "Z(2*pi/log(2))"
    assert str(rep.invariants.ttau_inn.value) == "Z(1) + Z(2*pi/log(2))"


@pytest.mark.parametrize("q", ["1/2", "1/3", "9/10", "-1/2"])
def test_t_member_period_lattice(q):
    s = spec((H("1", q), INF))
    L = f"log({abs(Fraction(q))})"
    for k in range(-5, 6):
        assert t_member(s, f"{k}*pi/{L}").yes
        assert t_member(s, f"{k}*pi/{L} + 1/1000").no


def test_t_member_two_blocks():
    s = spec((H("1", "1/2"), INF), (H("1", "1/4"), INF))
    assert t_member(s, "pi/log(2)").yes
    # pi/log 2 lies in Z(pi/log 2) but pi/(2 log 2) only in Z(pi/log 4)
    assert t_member(s, "pi/(2*log(2))").no


def test_semifinite_t_member():
    assert t_member(spec((H("1", "1/2"), 2)), "pi").yes


def test_spec_validation():
    with pytest.raises(SpecError):
        ProductSpec(registry=REG)
    with pytest.raises(SpecError):
        ProductSpec(entries=(Entry(H("1", "1/2"), INF),), family=III0Family(Fraction(1, 2)), registry=REG)


def test_sequence_prefix_round_robin():
    s = spec((H("1", "1/5"), 2), (H("1", "1/2"), INF), (H("1", "1/3"), INF))
    runs = sequence_prefix(s, 7)
    assert [c for _, _, c in runs] == [2, 3, 2]
    with pytest.raises(ValueError):
        sequence_prefix(spec((H("1", "1/2"), 2)), 3)
    with pytest.raises(ValueError):
        sequence_prefix(spec((blk(kind="SUq2", q="1/2"), INF)), 3)


def test_series_zero_on_lattice_and_positive_off():
    s = spec((H("1", "1/2"), INF))
    on = t_series_diagnose(s, "pi/log(2)", 50)
    assert on.partial_sum.hi == 0 and on.rows[0].exact_zero
    off = t_series_diagnose(s, "pi/(2*log(2))", 50, threshold=10)
    # each term equals 2/5
    assert off.partial_sum.contains(20) and off.divergence_evidence


def test_series_family_grows_slowly_below_s():
    fam = ProductSpec(family=III0Family(Fraction(2, 5)), registry=REG)
    a = t_series_diagnose(fam, "ts(3/10)", 100)
    b = t_series_diagnose(fam, "ts(3/10)", 535)
    assert a.partial_sum.hi <= b.partial_sum.lo
    assert all(r.label.startswith("exp(-pi*") for r in b.rows)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 9), st.sampled_from(["1", "pi", "1/3", "pi/log(2)", "2*pi/log(3)"]),
       st.integers(0, 20), st.integers(0, 20))
def test_monotone_partial_sums_property(d, t, n1, n2):
    check_monotone_partial_sums(Fraction(1, d), t, n1, n2)
