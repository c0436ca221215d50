"""Certified real arithmetic.

Intervals have dyadic endpoints stored as ``Fraction`` objects whose
denominators are powers of two.  Transcendental kernels run in integer
fixed point with explicit error bars, so every returned interval is a
rigorous enclosure of the true value.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
import math

DEFAULT_PRECISION = 128
PRECISION_CAP = 4096
# largest binary exponent a result may carry
MAX_BINARY_EXPONENT = 1 << 18


class NumericError(ArithmeticError):
    pass


class MagnitudeOverflow(NumericError):
    """A value is too large (or too small) for the representable range."""


class PrecisionCapExceeded(NumericError):
    pass


class DomainError(NumericError, ValueError):
    pass


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def _ilog2(x: Fraction) -> int:
    """floor(log2 |x|) for nonzero x."""
    n, d = abs(x.numerator), x.denominator
    e = n.bit_length() - d.bit_length()
    # correct the estimate so that 2^e <= |x| < 2^(e+1)
    if e >= 0:
        if n < d << e:
            e -= 1
    else:
        if n << -e < d:
            e -= 1
    return e


def round_down(x: Fraction, bits: int) -> Fraction:
    """Largest dyadic with `bits` significant bits that is <= x."""
    if x == 0:
        return Fraction(0)
    shift = bits - 1 - _ilog2(x)
    if shift >= 0:
        return Fraction((x.numerator << shift) // x.denominator, 1 << shift)
    return Fraction((x.numerator // (x.denominator << -shift)) << -shift)


def round_up(x: Fraction, bits: int) -> Fraction:
    return -round_down(-x, bits)


class RealInterval:
    """Closed interval [lo, hi] with dyadic endpoints."""

    __slots__ = ("lo", "hi", "precision")

    def __init__(self, lo, hi=None, precision: int = DEFAULT_PRECISION):
        lo = _as_fraction(lo)
        hi = lo if hi is None else _as_fraction(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi
        self.precision = precision

    @classmethod
    def enclose(cls, lo, hi=None, precision: int = DEFAULT_PRECISION) -> "RealInterval":
        """Round arbitrary rational bounds outward to dyadic endpoints."""
        lo = _as_fraction(lo)
        hi = lo if hi is None else _as_fraction(hi)
        return cls(round_down(lo, precision + 2), round_up(hi, precision + 2), precision)

    @classmethod
    def exact(cls, x, precision: int = DEFAULT_PRECISION) -> "RealInterval":
        return cls.enclose(x, x, precision)

    # -- inspection -------------------------------------------------------
    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def magnitude(self) -> Fraction:
        return max(abs(self.lo), abs(self.hi))

    def contains(self, x) -> bool:
        if isinstance(x, RealInterval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= _as_fraction(x) <= self.hi

    __contains__ = contains

    def overlaps(self, other: "RealInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def is_positive(self) -> bool:
        return self.lo > 0

    def is_negative(self) -> bool:
        return self.hi < 0

    def sign(self) -> int | None:
        """Certified sign, or None when the interval contains 0 but is not {0}."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None

    def intersect(self, other: "RealInterval") -> "RealInterval":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            raise ValueError("disjoint intervals")
        return RealInterval(lo, hi, max(self.precision, other.precision))

    def hull(self, other: "RealInterval") -> "RealInterval":
        return RealInterval(min(self.lo, other.lo), max(self.hi, other.hi),
                            min(self.precision, other.precision))

    def floor(self) -> int:
        """Exact floor; raises when the interval straddles an integer."""
        a, b = math.floor(self.lo), math.floor(self.hi)
        if a != b:
            raise PrecisionCapExceeded(f"interval [{float(self.lo)}, {float(self.hi)}] straddles an integer")
        return a

    def __float__(self):
        return float(self.mid)

    def __repr__(self):
        return f"RealInterval({float(self.lo)!r}, {float(self.hi)!r}, width={float(self.width):.3g})"

    def __eq__(self, other):
        if not isinstance(other, RealInterval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "RealInterval":
        if isinstance(other, RealInterval):
            return other
        return RealInterval.exact(other, self.precision)

    def _mk(self, lo: Fraction, hi: Fraction, other=None) -> "RealInterval":
        p = self.precision
        if isinstance(other, RealInterval):
            p = max(p, other.precision)
        return RealInterval(round_down(lo, p + 2), round_up(hi, p + 2), p)

    def __neg__(self):
        return RealInterval(-self.hi, -self.lo, self.precision)

    def __add__(self, other):
        o = self._coerce(other)
        return self._mk(self.lo + o.lo, self.hi + o.hi, o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return self._mk(self.lo - o.hi, self.hi - o.lo, o)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        c = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return self._mk(min(c), max(c), o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("interval division by an interval containing 0")
        c = (self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi)
        return self._mk(min(c), max(c), o)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def square(self) -> "RealInterval":
        a, b = self.lo * self.lo, self.hi * self.hi
        if self.lo <= 0 <= self.hi:
            return self._mk(Fraction(0), max(a, b))
        return self._mk(min(a, b), max(a, b))

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return 1 / (self ** -n)
        if n == 0:
            return RealInterval(1, 1, self.precision)
        if n % 2 == 0:
            return (self ** (n // 2)).square()
        return (self ** (n - 1)) * self

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return RealInterval(0, max(-self.lo, self.hi), self.precision)

    def sqrt(self) -> "RealInterval":
        if self.lo < 0:
            raise DomainError("sqrt of an interval with negative part")
        p = self.precision + 4
        return RealInterval(_sqrt_bound(self.lo, p, False), _sqrt_bound(self.hi, p, True), self.precision)

    def with_precision(self, precision: int) -> "RealInterval":
        return RealInterval(self.lo, self.hi, precision)


def _sqrt_bound(x: Fraction, bits: int, upper: bool) -> Fraction:
    if x == 0:
        return Fraction(0)
    # sqrt(x) = sqrt(x * 4^w) / 2^w with w chosen for `bits` significant bits
    w = max(0, bits - _ilog2(x) // 2 + 2)
    scaled = x * (1 << (2 * w))
    if upper:
        n = -((-scaled.numerator) // scaled.denominator)  # ceil
        r = math.isqrt(n)
        if r * r < n:
            r += 1
    else:
        n = scaled.numerator // scaled.denominator
        r = math.isqrt(n)
    return Fraction(r, 1 << w)


# ---------------------------------------------------------------------------
# fixed-point kernels: an integer X stands for X / 2^wp


def _to_fixed_floor(x: Fraction, wp: int) -> int:
    return (x.numerator << wp) // x.denominator


def _to_fixed_ceil(x: Fraction, wp: int) -> int:
    return -((-x.numerator << wp) // x.denominator)


def _atanh_inv_fixed(n: int, wp: int) -> tuple[int, int]:
    """Enclosure [lo, hi] (fixed point) of atanh(1/n) for n >= 2."""
    one = 1 << wp
    power = one // n  # floor of n^-1, n^-3, ...
    n2 = n * n
    s = 0
    k = 0
    while power:
        s += power // (2 * k + 1)
        power //= n2
        k += 1
    # each term lost < 2 ulps through the two truncations; the tail after the
    # vanishing power is below one ulp times a geometric factor <= 4/3
    return s, s + 2 * k + 2


def _atan_inv_fixed(n: int, wp: int) -> tuple[int, int]:
    """Enclosure of atan(1/n) for n >= 2."""
    one = 1 << wp
    power = one // n
    n2 = n * n
    s = 0
    k = 0
    while power:
        term = power // (2 * k + 1)
        s += -term if k % 2 else term
        power //= n2
        k += 1
    err = 2 * k + 2
    return s - err, s + err


@lru_cache(maxsize=64)
def _ln2_fixed(wp: int) -> tuple[int, int]:
    lo, hi = _atanh_inv_fixed(3, wp)
    return 2 * lo, 2 * hi


@lru_cache(maxsize=64)
def _pi_fixed(wp: int) -> tuple[int, int]:
    a_lo, a_hi = _atan_inv_fixed(5, wp)
    b_lo, b_hi = _atan_inv_fixed(239, wp)
    return 16 * a_lo - 4 * b_hi, 16 * a_hi - 4 * b_lo


def _fixed_interval(lo: int, hi: int, wp: int, precision: int) -> RealInterval:
    return RealInterval(Fraction(lo, 1 << wp), Fraction(hi, 1 << wp), precision)


def pi_interval(precision: int = DEFAULT_PRECISION) -> RealInterval:
    wp = precision + 16
    lo, hi = _pi_fixed(wp)
    return _fixed_interval(lo, hi, wp, precision)


def ln2_interval(precision: int = DEFAULT_PRECISION) -> RealInterval:
    wp = precision + 16
    lo, hi = _ln2_fixed(wp)
    return _fixed_interval(lo, hi, wp, precision)


def _exp_small_fixed(x: int, wp: int) -> tuple[int, int]:
    """Enclosure of exp(x / 2^wp) for |x| <= 2^(wp-1), evaluated as a point."""
    one = 1 << wp
    s = one
    term = one
    k = 1
    while term:
        term = (term * x) // (one * k) if term * x >= 0 else -((-term * x) // (one * k))
        s += term
        k += 1
    # truncation error per step < 1 ulp and is damped by |x| < 1/2; the
    # Taylor remainder after the vanishing term is < 1 ulp
    err = 2 * k + 2
    return s - err, s + err


def _exp_point(a: Fraction, wp: int, upper: bool) -> Fraction:
    """One-sided bound of exp(a) with about wp bits of relative accuracy."""
    if a == 0:
        return Fraction(1)
    n = round(float(a) / math.log(2)) if abs(a) < 10**300 else None
    if n is None or abs(n) > MAX_BINARY_EXPONENT:
        raise MagnitudeOverflow(f"magnitude overflow: exp({float(a):.6g}) outside representable range")
    # squaring count: balances Taylor length against squaring error growth
    j = max(4, int(math.isqrt(wp)) // 2)
    gp = wp + j + n.bit_length() + 2 * wp.bit_length() + 8
    l2_lo, l2_hi = _ln2_fixed(gp)
    if upper:
        A = _to_fixed_ceil(a, gp)
        r = A - n * (l2_lo if n >= 0 else l2_hi)
    else:
        A = _to_fixed_floor(a, gp)
        r = A - n * (l2_hi if n >= 0 else l2_lo)
    # reduce by 2^j, rounding in the bound's direction
    r = -((-r) >> j) if upper else r >> j
    lo, hi = _exp_small_fixed(r, gp)
    v = hi if upper else lo
    for _ in range(j):
        v = -((-v * v) >> gp) if upper else (v * v) >> gp
    if upper:
        v += 1
    out = Fraction(v, 1 << gp)
    return out * (Fraction(2) ** n)


def eval_exp(x, precision: int = DEFAULT_PRECISION) -> RealInterval:
    """Enclosure of e^x for a rational or interval x."""
    if precision < 8:
        raise ValueError("precision must be at least 8 bits")
    if isinstance(x, RealInterval):
        lo, hi = x.lo, x.hi
    else:
        lo = hi = _as_fraction(x)
    if lo == hi == 0:
        return RealInterval(1, 1, precision)
    wp = precision + 8
    return RealInterval.enclose(_exp_point(lo, wp, False), _exp_point(hi, wp, True), precision)


def _log_point(y: Fraction, wp: int, upper: bool) -> Fraction:
    if y <= 0:
        raise DomainError("log of a nonpositive number")
    if y == 1:
        return Fraction(0)
    e = _ilog2(y)
    if abs(e) > MAX_BINARY_EXPONENT:
        raise MagnitudeOverflow("magnitude overflow in log")
    m = y / (Fraction(2) ** e)  # 1 <= m < 2
    if m * m > 2:  # keep m in [1/sqrt2, sqrt2) for faster convergence
        m /= 2
        e += 1
    gp = wp + abs(e).bit_length() + 2 * wp.bit_length() + 8
    # log y = e*log2 + 2*atanh(z), |z| < 0.172
    z = (m - 1) / (m + 1)
    neg = z < 0
    # atanh is odd and increasing: bound |z| in the direction we need
    want_upper = upper != neg
    az = -z if neg else z
    Z = _to_fixed_ceil(az, gp) if want_upper else _to_fixed_floor(az, gp)
    z2 = (Z * Z) >> gp
    power = Z
    s = 0
    k = 0
    while power:
        s += power // (2 * k + 1)
        power = (power * z2) >> gp
        k += 1
    if want_upper:
        # each truncated term is low by < 4 ulps; the tail is < 2 ulps
        s += 4 * k + 4
    at = -2 * s if neg else 2 * s
    l2_lo, l2_hi = _ln2_fixed(gp)
    if upper:
        val = at + e * (l2_hi if e >= 0 else l2_lo) + 1
    else:
        val = at + e * (l2_lo if e >= 0 else l2_hi) - 1
    return Fraction(val, 1 << gp)


def eval_log(x, precision: int = DEFAULT_PRECISION) -> RealInterval:
    if isinstance(x, RealInterval):
        lo, hi = x.lo, x.hi
    else:
        lo = hi = _as_fraction(x)
    if lo <= 0:
        raise DomainError("log of a nonpositive interval")
    wp = precision + 8
    return RealInterval.enclose(_log_point(lo, wp, False), _log_point(hi, wp, True), precision)


def _sincos_small_fixed(r: int, wp: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """Enclosures of sin and cos at the point r/2^wp, |r/2^wp| <= 1."""
    one = 1 << wp
    r2 = (r * r) >> wp
    # cos
    term = one
    c = one
    k = 0
    while term:
        term = -((term * r2) // (one * (2 * k + 1) * (2 * k + 2)))
        c += term
        k += 1
    ec = 2 * k + 3
    # sin
    term = r
    s = r
    k = 0
    while term:
        num = term * r2
        den = one * (2 * k + 2) * (2 * k + 3)
        term = -(num // den) if num >= 0 else (-num) // den
        s += term
        k += 1
    es = 2 * k + 3
    return (s - es, s + es), (c - ec, c + ec)


def _sincos(x: RealInterval, precision: int) -> tuple[RealInterval, RealInterval]:
    """Enclosures of (sin x, cos x) for an interval x."""
    wp = precision + 16
    if x.width > 1:
        full = RealInterval(-1, 1, precision)
        return full, full
    mag = x.magnitude()
    mag_bits = max(0, _ilog2(mag)) if mag else 0
    if mag_bits > MAX_BINARY_EXPONENT:
        raise MagnitudeOverflow("magnitude overflow: trigonometric argument too large")
    gp = wp + 2 * mag_bits + 8
    p_lo, p_hi = _pi_fixed(gp)
    # quadrant index from an exact division by a high-precision pi
    n = round(x.mid * 2 * (1 << gp) / p_lo)
    # r = x - n*pi/2, kept as a fixed-point interval
    if n >= 0:
        r_lo = _to_fixed_floor(x.lo, gp) - ((n * p_hi + 1) >> 1)
        r_hi = _to_fixed_ceil(x.hi, gp) - ((n * p_lo) >> 1)
    else:
        r_lo = _to_fixed_floor(x.lo, gp) - ((n * p_lo) >> 1) - 1
        r_hi = _to_fixed_ceil(x.hi, gp) - ((n * p_hi) >> 1) + 1
    rm = (r_lo + r_hi) >> 1
    h = max(rm - r_lo, r_hi - rm) + 1
    (s_lo, s_hi), (c_lo, c_hi) = _sincos_small_fixed(rm, gp)
    one = 1 << gp
    # second-order mean-value bounds over the half width h
    h2 = ((h * h) >> (gp + 1)) + 1
    smax = max(abs(s_lo), abs(s_hi))
    cmax = max(abs(c_lo), abs(c_hi))
    dc = ((smax * h) >> gp) + 1 + h2
    ds = ((cmax * h) >> gp) + 1 + h2
    sin_r = (s_lo - ds, s_hi + ds)
    cos_r = (c_lo - dc, c_hi + dc)
    q = n % 4
    if q == 0:
        sv, cv = sin_r, cos_r
    elif q == 1:
        sv, cv = cos_r, (-sin_r[1], -sin_r[0])
    elif q == 2:
        sv, cv = (-sin_r[1], -sin_r[0]), (-cos_r[1], -cos_r[0])
    else:
        sv, cv = (-cos_r[1], -cos_r[0]), sin_r

    def clip(pair):
        lo, hi = max(pair[0], -one), min(pair[1], one)
        return RealInterval.enclose(Fraction(lo, one), Fraction(hi, one), precision)

    return clip(sv), clip(cv)


def _as_interval(x, precision: int) -> RealInterval:
    if isinstance(x, RealInterval):
        return x
    x = _as_fraction(x)
    # keep absolute accuracy for large exact arguments
    extra = max(0, _ilog2(x)) if x else 0
    return RealInterval.exact(x, precision + extra)


def eval_cos(x, precision: int = DEFAULT_PRECISION) -> RealInterval:
    return _sincos(_as_interval(x, precision), precision)[1]


def eval_sin(x, precision: int = DEFAULT_PRECISION) -> RealInterval:
    return _sincos(_as_interval(x, precision), precision)[0]


def iroot(n: int, k: int) -> int:
    """floor(n^(1/k)) for n >= 0."""
    if n < 0:
        raise DomainError("iroot of a negative integer")
    if n < 2:
        return n
    if k == 1:
        return n
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def floor_rpow(base: int, exponent: Fraction) -> int:
    """Exact floor of base^exponent for a positive integer base and exponent >= 0."""
    exponent = _as_fraction(exponent)
    if exponent < 0:
        raise DomainError("floor_rpow expects a nonnegative exponent")
    return iroot(base ** exponent.numerator, exponent.denominator)


def eval_rpow(base, exponent, precision: int = DEFAULT_PRECISION) -> RealInterval:
    """Enclosure of base^exponent for rational base > 0 and rational exponent, by exact roots."""
    base = _as_fraction(base)
    exponent = _as_fraction(exponent)
    if base <= 0:
        raise DomainError("eval_rpow needs a positive base")
    if exponent.denominator == 1:
        return RealInterval.exact(base ** exponent.numerator, precision)
    a, b = exponent.numerator, exponent.denominator
    y = base ** a  # exact rational; take its b-th root
    e = _ilog2(y) // b
    w = precision + 8 - e
    scaled = y * (Fraction(2) ** (w * b))
    lo_int = scaled.numerator // scaled.denominator
    r_lo = iroot(lo_int, b)
    r_hi = r_lo + 1
    return RealInterval.enclose(Fraction(r_lo) / Fraction(2) ** w, Fraction(r_hi) / Fraction(2) ** w, precision)


def certified_floor(evaluate, precision: int = DEFAULT_PRECISION, cap: int = PRECISION_CAP) -> int:
    """Floor of the real number enclosed by ``evaluate(bits)``.

    ``evaluate`` maps a precision to an enclosure.  The precision counts bits
    beyond the integer part: it starts at `precision` and doubles until the
    enclosure no longer straddles an integer or `cap` is exceeded.
    """
    p = precision
    extra = 0
    while True:
        iv = evaluate(p + extra)
        a, b = math.floor(iv.lo), math.floor(iv.hi)
        if a == b:
            return a
        if extra == 0:
            extra = max(abs(a), abs(b)).bit_length()
            continue
        if p >= cap:
            raise PrecisionCapExceeded(
                f"floor not certified within {cap} fractional bits (interval width {float(iv.width):.3g})")
        p = min(2 * p, cap)


def term_modulus(q, t, precision: int = DEFAULT_PRECISION, log_abs_q: RealInterval | None = None) -> RealInterval:
    """Enclosure of 1 - (1-q^2)/|1 - |q|^(2+2it)|.

    `q` is a rational in (-1, 1) minus 0, or None when `log_abs_q` is given.
    `t` is a rational or an interval.
    """
    if log_abs_q is None:
        q = _as_fraction(q)
        if not (-1 < q < 1) or q == 0:
            raise DomainError("term_modulus needs 0 < |q| < 1")
        r = RealInterval.exact(q * q, precision + 16)
        log_q = eval_log(abs(q), precision + 16)
    else:
        if log_abs_q.hi >= 0:
            raise DomainError("term_modulus needs log|q| < 0")
        log_q = log_abs_q
        r = eval_exp(2 * log_q, precision + 16)
    t_iv = _as_interval(t, precision + 16)
    theta = 2 * t_iv * log_q
    c = eval_cos(theta, precision + 16)
    # 1 - 2 r cos(theta) + r^2 >= (1 - r)^2 > 0
    inner = 1 - 2 * r * c + r.square()
    floor_val = (1 - r).square()
    inner = RealInterval(max(inner.lo, floor_val.lo), max(inner.hi, floor_val.lo), inner.precision)
    modulus = inner.sqrt()
    out = 1 - (1 - r) / modulus
    # the term lies in [0, 2r/(1+r)], in particular in [0, 1]
    lo = max(out.lo, Fraction(0))
    hi = min(out.hi, Fraction(1))
    if lo > hi:
        lo = hi = Fraction(0)
    return RealInterval(lo, hi, precision)
