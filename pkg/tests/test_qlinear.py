from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from factorium.qlinear import (
    AdditiveSubgroup as G, ConstantRegistry, ParseError, PosReal, RegistryError, closure_classify_additive,
    equal, includes, intersect, intersect_all, member, mult_closure, parse_expr, parse_positive, replay,
)

from props import FAMILIES, check_certificate_replay, check_subgroup_axioms

REG = ConstantRegistry()


ALPHA_CONSTANTS = [{"name": "a1", "enclosure": ["1.4142", "1.4143"]},
                   {"name": "a2", "enclosure": ["1.7320", "1.7321"]}]


def alpha_registry(with_facts=True):
    facts = [{"id": "alphas", "independent": ["1", "a1", "a2"]}]
    return ConstantRegistry.from_dict({"constants": ALPHA_CONSTANTS, "facts": facts if with_facts else []})


@pytest.mark.parametrize("text,expected", [
    ("2*pi/log(1/2)", "-2*pi/log(2)"),
    ("log(12)", "2*log(2) + log(3)"),
    ("(1/4)^(1/2)", "1/2"),
    ("pi - pi", "0"),
    ("22/7", "22/7"),
])
def test_parse_canonical(text, expected):
    assert str(parse_expr(text)) == expected


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_expr("pi +")
    with pytest.raises(ParseError):
        parse_expr("foo(2)")


def test_parse_positive_sign_and_modulus():
    sign, mod = parse_positive("-1/2")
    assert sign == -1 and mod == PosReal.rational(Fraction(1, 2))


def test_membership_in_period_lattice():
    lat = G.cyclic(parse_expr("pi/log(2)"))
    for k in range(-5, 6):
        assert member(parse_expr(f"{k}*pi/log(2)"), lat, REG).yes
    off = member(parse_expr("pi/log(2) + 1/1000"), lat, REG)
    assert off.no and off.certificates
    assert member(parse_expr("pi/(2*log(2))"), lat, REG).no


def test_intersection_of_commensurable_lattices():
    a = G.cyclic(parse_expr("pi/log(2)"))
    b = G.cyclic(parse_expr("pi/log(4)"))
    d = intersect(a, b, REG)
    assert d.exact and str(d.value) == "Z(pi/log(2))"


def test_intersection_of_incommensurable_lattices():
    d = intersect(G.cyclic(parse_expr("pi/log(2)")), G.cyclic(parse_expr("pi/log(3)")), REG)
    assert d.exact and d.value.is_zero()
    d = intersect_all([G.cyclic(parse_expr("pi")), G.cyclic(parse_expr("1"))], REG)
    assert d.exact and d.value.is_zero()


def test_sum_and_equality_with_independent_alphas():
    reg = alpha_registry()
    base = G.cyclic(parse_expr("2*pi/log(2)"))
    g1 = G.cyclic(parse_expr("a1*2*pi/log(2)")) + base
    g2 = G.cyclic(parse_expr("a2*2*pi/log(2)")) + base
    ans = equal(g1, g2, reg)
    assert ans.no and ans.certificates
    # the common factor pi/log(2) is nonzero, so the unscaled fact suffices
    assert ans.certificates[0].facts == ("alphas",)


def test_missing_fact_gives_unknown():
    reg = ConstantRegistry.from_dict({"constants": [{"name": "c", "enclosure": ["1", "2"]}]})
    ans = member(parse_expr("c"), G.cyclic(parse_expr("1")), reg)
    assert ans.unknown and ans.missing


def test_unknown_symbol_rejected():
    with pytest.raises(RegistryError):
        REG.check(parse_expr("zeta3"))


def test_rational_line_and_real_line():
    assert member(parse_expr("22/7"), G.rational_line(1), REG).yes
    assert member(parse_expr("pi"), G.rational_line(1), REG).no
    assert member(parse_expr("pi"), G.real_line(), REG).yes
    assert includes(G.real_line(), G.rational_line(1), REG).no


def test_closure_classification():
    assert closure_classify_additive([parse_expr("2"), parse_expr("3")], REG).kind == "discrete"
    assert closure_classify_additive([parse_expr("1"), parse_expr("pi")], REG).kind == "dense"
    assert closure_classify_additive([], REG).kind == "trivial"


def test_mult_closure_forms():
    c = mult_closure([PosReal.rational(Fraction(1, 4)), PosReal.rational(Fraction(1, 16))], REG)
    assert c.kind == "cyclic" and str(c.generator) == "1/4"
    c = mult_closure([PosReal(parse_expr("-2")), PosReal(parse_expr("-2*pi"))], REG)
    assert c.kind == "dense"
    c = mult_closure([PosReal.rational(Fraction(1, 2)), PosReal.rational(Fraction(1, 3))], REG)
    assert c.kind == "dense"
    with pytest.raises(ValueError):
        mult_closure([PosReal.rational(2)], REG)


def test_kappa_pi_builtin():
    # kappa for F^2 = diag(pi, 1, 1): kappa^2 = (1/pi + 2)/(pi + 2), not a power of pi
    k = parse_expr("log(kappa(pi,1,1))")
    ans = REG.independent_values([k, parse_expr("log(pi)")])
    assert ans.ok and "builtin:kappa-pi" in ans.facts


def test_restricted_registry_drops_user_facts():
    reg = alpha_registry()
    lat = G.cyclic(parse_expr("1"))
    assert member(parse_expr("a1"), lat, reg).no
    assert member(parse_expr("a1"), lat, reg.restricted([])).unknown


def test_replay_rejects_without_facts():
    reg = alpha_registry()
    ans = member(parse_expr("a1"), G.cyclic(parse_expr("1")), reg)
    cert = ans.certificates[0]
    assert replay(cert, reg)
    assert not replay(cert, alpha_registry(with_facts=False))


def _family_args():
    return st.integers(0, len(FAMILIES) - 1).flatmap(
        lambda f: st.tuples(st.just(f), st.lists(st.integers(0, len(FAMILIES[f]) - 1), min_size=1,
                                                 max_size=len(FAMILIES[f]), unique=True)))


@settings(max_examples=300, deadline=None)
@given(_family_args(), st.lists(st.integers(-9, 9), min_size=4, max_size=4),
       st.lists(st.integers(-9, 9), min_size=4, max_size=4),
       st.fractions(min_value=Fraction(1, 5), max_value=5, max_denominator=5).filter(lambda x: x != 0))
def test_subgroup_axioms_property(fg, ca, cb, scale):
    f, idx = fg
    check_subgroup_axioms(f, idx, ca[:len(idx)], cb[:len(idx)], scale)


@settings(max_examples=300, deadline=None)
@given(_family_args(), st.lists(st.integers(-9, 9), min_size=4, max_size=4),
       st.sampled_from([Fraction(0), Fraction(1), Fraction(1, 2), Fraction(1, 3), Fraction(2, 3)]))
def test_certificate_replay_property(fg, coeffs, shift):
    f, idx = fg
    check_certificate_replay(f, idx, coeffs[:len(idx)], shift)
