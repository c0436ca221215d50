from fractions import Fraction

import pytest

from factorium.blocks import (
    DualFreeGroup, FreeUnitary, Hnuq, RhoSpectrum, SUq2, make_block, modular_spectrum, parse_q, rho_spectrum,
    spectrum_symmetric, t_character, ttau_block, ttau_inn_block,
)
from factorium.errors import MissingFactError, SpecError
from factorium.qlinear import AdditiveSubgroup, ConstantRegistry, PosReal, parse_expr

REG = ConstantRegistry()


def block(**data):
    return make_block(data, REG, "")


def eig_strs(r: RhoSpectrum):
    return sorted(str(x) for x in r.eigenvalues)


def test_suq2_rho_spin_half():
    b = block(kind="SUq2", q="1/2")
    assert eig_strs(rho_spectrum(b, Fraction(1, 2))) == ["1/2", "2"]
    assert eig_strs(rho_spectrum(b, 0)) == ["1"]


@pytest.mark.parametrize("spin", [Fraction(n, 2) for n in range(7)])
def test_suq2_ladder_is_palindromic(spin):
    r = rho_spectrum(block(kind="SUq2", q="1/3"), spin)
    ev = r.eigenvalues
    assert len(ev) == 2 * spin + 1
    assert all((ev[i] * ev[-1 - i]).is_one() for i in range(len(ev)))
    assert spectrum_symmetric(r, REG)


def test_free_unitary_spectrum_is_asymmetric():
    b = block(kind="FreeUnitary", F=["pi^(1/2)", "1", "1"])
    r = rho_spectrum(b)
    assert eig_strs(r) == sorted(["kappa(pi,1,1)*pi", "kappa(pi,1,1)", "kappa(pi,1,1)"])
    assert not spectrum_symmetric(r, REG)
    assert not b.kac


def test_kac_free_unitary_is_symmetric():
    b = block(kind="FreeUnitary", F=["1", "1", "1"])
    assert b.kac
    assert eig_strs(rho_spectrum(b)) == ["1", "1", "1"]
    assert spectrum_symmetric(rho_spectrum(b), REG)


def test_rational_free_unitary_kappa_is_explicit():
    # F^2 = diag(4, 1): kappa^2 = (1/4 + 1)/(4 + 1) = 1/4
    b = block(kind="FreeUnitary", F=["2", "1"])
    assert eig_strs(rho_spectrum(b)) == ["1/2", "2"]


def test_ttau_free_unitary():
    b = block(kind="FreeUnitary", F=["pi^(1/2)", "1", "1"])
    d = ttau_block(b, REG)
    assert d.exact and str(d.value) == "Z(2*pi/log(pi))"


def test_ttau_hnuq_and_inner_part():
    b = block(kind="Hnuq", nu="1", q="1/2")
    assert str(ttau_block(b, REG).value) == "Z(pi/log(2))"
    inn = ttau_inn_block(b)
    assert inn == AdditiveSubgroup(z=[parse_expr("pi/log(2)")], q=[parse_expr("1")])


def test_modular_spectrum_hnuq_and_kac():
    s = modular_spectrum(block(kind="Hnuq", nu="1", q="1/2"))
    assert s.normal_form() == "{0} ∪ (1/4)^ℤ"
    assert modular_spectrum(block(kind="DualFreeGroup", rank=2)).normal_form() == "{1}"


def test_t_character_exact_zero_and_value():
    b = block(kind="Hnuq", nu="1", q="1/2")
    zero = t_character(b, parse_expr("pi/log(2)"), REG, 128)
    assert zero.exact_zero
    half = t_character(b, parse_expr("pi/(2*log(2))"), REG, 128)
    assert not half.exact_zero
    assert half.interval.contains(Fraction(2, 5))


def test_flags():
    assert not block(kind="SUq2", q="1/2").factor
    h = block(kind="Hnuq", nu="1", q="-1/2")
    assert h.factor and h.injective and h.class_commutant_in_class
    d = block(kind="DualFreeGroup", rank=3)
    assert d.factor and d.kac and not d.injective
    assert not block(kind="FreeUnitary", F=["2", "1", "1"]).injective


def test_negative_q_has_same_periods():
    a = block(kind="Hnuq", nu="1", q="-1/2")
    b = block(kind="Hnuq", nu="1", q="1/2")
    assert a.period() == b.period()


@pytest.mark.parametrize("q", ["1", "0", "3/2", "-1", "pi"])
def test_q_outside_unit_interval_rejected(q):
    with pytest.raises(SpecError):
        parse_q(q, REG, "/q")


def test_hnuq_hypothesis_violation_and_missing_fact():
    with pytest.raises(SpecError):
        block(kind="Hnuq", nu="pi", q="exp(-1)")  # nu*log q = -pi lies in pi*Q
    reg = ConstantRegistry.from_dict({"constants": [{"name": "c", "enclosure": ["1", "2"]}]})
    with pytest.raises(MissingFactError):
        make_block({"kind": "Hnuq", "nu": "c", "q": "1/2"}, reg, "")


def test_free_unitary_needs_positive_entries():
    with pytest.raises(SpecError):
        block(kind="FreeUnitary", F=["-1", "1"])
    with pytest.raises(SpecError):
        block(kind="FreeUnitary", F=["1"])


def test_rho_inverse_and_product():
    r = rho_spectrum(block(kind="SUq2", q="1/2"), Fraction(1, 2))
    assert eig_strs(r.inverse()) == eig_strs(r)
    assert PosReal.rational(1) in (r * r).eigenvalues
