from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from factorium.blocks import make_block
from factorium.errors import HypothesisError
from factorium.products import Entry, ProductSpec, classify
from factorium.qlinear import AdditiveSubgroup, ConstantRegistry, parse_expr
from factorium.scaling import (
    INF, GammaLayer, bicrossed_invariants, distinctness_certificate, glambda_entries, glambda_k_invariants,
    product_invariants, symmetric_ttau_vs_T,
)

from props import check_invariant_chain

REG = ConstantRegistry()


def alpha_registry():
    return ConstantRegistry.from_dict({
        "constants": [{"name": n, "enclosure": enc} for n, enc in
                      (("a1", ["1.4142", "1.4143"]), ("a2", ["1.7320", "1.7321"]), ("a3", ["2.7182", "2.7183"]))],
        "facts": [{"id": "alphas", "independent": ["1", "a1", "a2", "a3"]}],
    })


def hnuq(nu, q, reg=REG):
    return make_block({"kind": "Hnuq", "nu": nu, "q": q}, reg, "")


@pytest.mark.parametrize("k", range(5))
def test_glambda_invariants(k):
    inv = glambda_k_invariants(Fraction(1, 2), k, REG)
    assert all(d.exact for _, d in inv.components())
    expected_tt = "Z(2*pi/log(2))" if k == 0 else "{0}"
    expected_inn = "Z(2*pi/log(2))" if k <= 1 else f"Z({2 * k}*pi/log(2))"
    assert str(inv.ttau.value) == expected_tt
    assert str(inv.ttau_inn.value) == expected_inn
    assert inv.ttau_ainn.value.full


def test_glambda_pairwise_distinct():
    triples = [glambda_k_invariants(Fraction(1, 2), k, REG) for k in range(5)]
    pairs = distinctness_certificate(triples, REG)
    assert len(pairs) == 10
    assert all(p.distinct and p.certificates for p in pairs)


def test_product_invariants_constant_sequence():
    inv = product_invariants([(hnuq("1", "1/2"), INF)], REG)
    assert str(inv.ttau.value) == "Z(pi/log(2))"
    assert inv.ttau_inn.value == inv.ttau.value


def test_product_invariants_suq2_bounds():
    b = make_block({"kind": "SUq2", "q": "1/2"}, REG, "")
    inv = product_invariants([(b, 1)], REG)
    assert inv.ttau_ainn.exact and str(inv.ttau_ainn.value) == "Z(pi/log(2))"
    inv = product_invariants([(b, INF)], REG)
    assert not inv.ttau_inn.exact


def test_bicrossed_lambda_instances():
    reg = alpha_registry()
    entries = glambda_entries(Fraction(1, 2), 0, reg)
    results = []
    for a in ("a1", "a2", "a3"):
        res = bicrossed_invariants(entries, GammaLayer(AdditiveSubgroup.cyclic(parse_expr(f"{a}*2*pi/log(1/2)"))), reg)
        assert str(res.invariants.ttau.value) == "Z(2*pi/log(2))"
        assert res.invariants.ttau_inn.exact
        assert res.invariants.ttau_inn.value == AdditiveSubgroup(
            z=[parse_expr("2*pi/log(2)"), parse_expr(f"{a}*2*pi/log(2)")])
        assert res.s_invariant.normal_form() == "{0} ∪ (1/2)^ℤ"
        assert res.injective
        results.append(res.invariants)
    pairs = distinctness_certificate(results, reg)
    assert all(p.distinct for p in pairs)
    assert all(p.component == "ttau_inn" for p in pairs)


@pytest.mark.parametrize("gamma", ["1", "1/2", "pi"])
def test_bicrossed_iii1_instances(gamma):
    entries = [(hnuq("-pi^2", "exp(-1)"), INF), (hnuq("-pi", "exp(-pi)"), INF)]
    res = bicrossed_invariants(entries, GammaLayer(AdditiveSubgroup.cyclic(parse_expr(gamma))), REG)
    assert res.invariants.ttau.value.is_zero()
    assert str(res.invariants.ttau_inn.value) == f"Z({gamma})"
    assert res.invariants.ttau_ainn.value.full
    assert res.s_invariant.normal_form() == "ℝ≥0"


def test_bicrossed_hypotheses():
    fu = make_block({"kind": "FreeUnitary", "F": ["pi^(1/2)", "1", "1"]}, REG, "")
    with pytest.raises(HypothesisError) as exc:
        bicrossed_invariants([(fu, INF)], GammaLayer(AdditiveSubgroup.cyclic(1)), REG)
    assert exc.value.hypothesis == "spectral-symmetry"
    h = hnuq("1", "1/2")
    with pytest.raises(HypothesisError) as exc:
        bicrossed_invariants([(h, INF)], GammaLayer(AdditiveSubgroup.cyclic(parse_expr("pi/log(2)"))), REG)
    assert exc.value.hypothesis == "trivial-intersection"
    with pytest.raises(HypothesisError) as exc:
        bicrossed_invariants([(h, 3)], GammaLayer(AdditiveSubgroup.cyclic(1)), REG)
    assert exc.value.hypothesis == "infinite-repetition"
    s = make_block({"kind": "SUq2", "q": "1/2"}, REG, "")
    with pytest.raises(HypothesisError) as exc:
        bicrossed_invariants([(s, INF)], GammaLayer(AdditiveSubgroup.cyclic(1)), REG)
    assert exc.value.hypothesis == "factor"


def test_free_unitary_inclusion_failure_witness():
    fu = make_block({"kind": "FreeUnitary", "F": ["pi^(1/2)", "1", "1"]}, REG, "")
    rep = classify(ProductSpec(entries=(Entry(fu, 1),), registry=REG))
    v = symmetric_ttau_vs_T(rep, REG)
    assert v.verdict == "inclusion-fails"
    assert str(v.witness) == "2*pi/log(pi)"
    assert v.certificates


def test_symmetric_consistency_for_constant_sequence():
    rep = classify(ProductSpec(entries=(Entry(hnuq("1", "1/2"), INF),), registry=REG))
    assert symmetric_ttau_vs_T(rep, REG).verdict == "equal"


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(2, 7), min_size=1, max_size=3), st.lists(st.integers(0, 2), min_size=3, max_size=3))
def test_invariant_chain_property(dens, mults):
    check_invariant_chain([Fraction(1, d) for d in dens], mults)
