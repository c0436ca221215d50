from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from factorium.exactnum import (
    PRECISION_CAP, MagnitudeOverflow, PrecisionCapExceeded, RealInterval, certified_floor, eval_cos,
    eval_exp, eval_log, eval_rpow, eval_sin, floor_rpow, pi_interval, term_modulus,
)

from props import check_interval_soundness

# mpmath, 50 digits
PI = Fraction("3.14159265358979323846264338327950288419716939937")
E = Fraction("2.71828182845904523536028747135266249775724709370")
LOG3 = Fraction("1.09861228866810969139524523692252570464749033")
COS_1E6 = Fraction("0.93675212753314478693853253507491877570810")
SIN_7_3 = Fraction("0.72308588173832461679788792861636732638010")
TERM_Q13_T1 = Fraction("0.168435958174327315705032017918674727485")


def close(iv: RealInterval, ref: Fraction, tol=Fraction(1, 10 ** 40)):
    return iv.lo - tol <= ref <= iv.hi + tol


def test_pi_enclosure_tight():
    iv = pi_interval(160)
    assert close(iv, PI)
    assert iv.width < Fraction(1, 2 ** 150)


@pytest.mark.parametrize("fn,arg,ref", [
    (eval_exp, 1, E), (eval_log, 3, LOG3), (eval_cos, 10 ** 6, COS_1E6), (eval_sin, Fraction(7, 3), SIN_7_3),
])
def test_transcendental_oracle(fn, arg, ref):
    iv = fn(arg, 160)
    assert close(iv, ref)
    assert iv.width < Fraction(1, 10 ** 40)


def test_rpow_and_floor_rpow():
    iv = eval_rpow(2, Fraction(1, 2), 128)
    assert iv.lo ** 2 <= 2 <= iv.hi ** 2
    assert floor_rpow(10, Fraction(1, 2)) == 3
    assert floor_rpow(16, Fraction(1, 2)) == 4
    assert floor_rpow(27, Fraction(1, 3)) == 3


def test_certified_floor_exact_and_near_integer():
    assert certified_floor(lambda p: pi_interval(p) * 100) == 314
    # exp(pi*sqrt(163)) is within 1e-12 of an integer
    val = certified_floor(lambda p: eval_exp(pi_interval(p + 16) * eval_rpow(163, Fraction(1, 2), p + 16), p))
    assert val == 262537412640768743


def test_certified_floor_cap_on_exact_integer():
    with pytest.raises(PrecisionCapExceeded):
        certified_floor(lambda p: RealInterval(Fraction(3) - Fraction(1, 2 ** p), Fraction(3) + Fraction(1, 2 ** p)),
                        cap=256)
    assert PRECISION_CAP == 4096


def test_exp_overflow_guard():
    with pytest.raises(MagnitudeOverflow):
        eval_exp(10 ** 30)


def test_term_modulus_matches_oracle():
    iv = term_modulus(Fraction(1, 3), 1, 128)
    assert close(iv, TERM_Q13_T1)
    # t = pi/(2 log 2), q = 1/2: term = 1 - (3/4)/(5/4) = 2/5
    t = pi_interval(160) / (eval_log(2, 160) * 2)
    assert close(term_modulus(Fraction(1, 2), t, 128), Fraction(2, 5), Fraction(1, 10 ** 30))


def test_interval_arithmetic_basic():
    a = RealInterval(1, 2)
    b = RealInterval(-1, 3)
    assert (a * b).lo == -2 and (a * b).hi == 6
    assert (a - b).lo == -2 and (a - b).hi == 3
    assert RealInterval(-2, 1).square().lo == 0
    assert a.sign() == 1 and b.sign() is None


@settings(max_examples=400, deadline=None)
@given(st.integers(-3000, 3000), st.integers(1, 97), st.sampled_from(["exp", "log", "sin", "cos", "arith"]))
def test_interval_soundness_property(num, den, op):
    check_interval_soundness(num, den, op)
