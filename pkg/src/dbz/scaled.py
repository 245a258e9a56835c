"""Complex numbers with a wide binary exponent.

A :class:`ScaledComplex` stores ``(mre + i*mim) * 2**exp`` with the larger
mantissa component normalised into ``[1, 2)``.  Products of completed
L-function values reach magnitudes near 1e-69 at modest heights and far
below the binary64 range higher up; keeping the exponent separate lets the
sign of a real part stay meaningful at any magnitude.
"""

from __future__ import annotations

import cmath
import decimal
import math
from dataclasses import dataclass

from .errors import DomainError, ScaledRangeError

EXP_LIMIT = 2**62
# Operands further apart than this many binary orders are swallowed by add.
GAP_BITS = 60

_LN2 = math.log(2.0)
_LOG10_2 = math.log10(2.0)


@dataclass(frozen=True, slots=True)
class ScaledComplex:
    mre: float
    mim: float
    exp: int

    # Construction through from_complex/_make guarantees normalisation; the
    # raw constructor is left permissive for deserialisation.

    @property
    def is_zero(self) -> bool:
        return self.mre == 0.0 and self.mim == 0.0

    def __neg__(self) -> ScaledComplex:
        return ScaledComplex(-self.mre, -self.mim, self.exp)

    def __mul__(self, other):
        return mul(self, _coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return div(self, _coerce(other))

    def __rtruediv__(self, other):
        return div(_coerce(other), self)

    def __add__(self, other):
        return add(self, _coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return add(self, -_coerce(other))

    def __rsub__(self, other):
        return add(_coerce(other), -self)

    def conjugate(self) -> ScaledComplex:
        return ScaledComplex(self.mre, -self.mim, self.exp)

    def __complex__(self) -> complex:
        return to_complex(self)

    def __repr__(self) -> str:
        return f"ScaledComplex({self.mre!r}, {self.mim!r}, exp={self.exp})"

    def __str__(self) -> str:
        return format_value(self)


ZERO = ScaledComplex(0.0, 0.0, 0)
ONE = ScaledComplex(1.0, 0.0, 0)


def _coerce(x) -> ScaledComplex:
    if isinstance(x, ScaledComplex):
        return x
    x = complex(x)
    return from_complex(x.real, x.imag)


def _make(re: float, im: float, exp: int) -> ScaledComplex:
    """Normalise an arbitrary finite mantissa pair."""
    m = max(abs(re), abs(im))
    if m == 0.0:
        return ZERO
    _, e = math.frexp(m)
    shift = e - 1
    exp = exp + shift
    if abs(exp) > EXP_LIMIT:
        raise ScaledRangeError(f"binary exponent {exp} out of range")
    return ScaledComplex(math.ldexp(re, -shift), math.ldexp(im, -shift), exp)


def from_complex(re: float, im: float = 0.0) -> ScaledComplex:
    """Normalised representation of ``re + i*im``."""
    if not (math.isfinite(re) and math.isfinite(im)):
        raise DomainError(f"non-finite input ({re!r}, {im!r})")
    return _make(float(re), float(im), 0)


def normalize(a: ScaledComplex) -> ScaledComplex:
    if not (math.isfinite(a.mre) and math.isfinite(a.mim)):
        raise DomainError("non-finite mantissa")
    return _make(a.mre, a.mim, a.exp)


def from_log(logvalue: complex) -> ScaledComplex:
    """``exp(logvalue)`` without forming the (possibly unrepresentable) modulus."""
    logvalue = complex(logvalue)
    if not cmath.isfinite(logvalue):
        raise DomainError(f"non-finite logarithm {logvalue!r}")
    k = math.floor(logvalue.real / _LN2)
    r = logvalue.real - k * _LN2
    m = math.exp(r)
    return _make(m * math.cos(logvalue.imag), m * math.sin(logvalue.imag), k)


def mul(a: ScaledComplex, b: ScaledComplex) -> ScaledComplex:
    if a.is_zero or b.is_zero:
        return ZERO
    re = a.mre * b.mre - a.mim * b.mim
    im = a.mre * b.mim + a.mim * b.mre
    return _make(re, im, a.exp + b.exp)


def div(a: ScaledComplex, b: ScaledComplex) -> ScaledComplex:
    if b.is_zero:
        raise ZeroDivisionError("division by a zero ScaledComplex")
    if a.is_zero:
        return ZERO
    q = complex(a.mre, a.mim) / complex(b.mre, b.mim)
    return _make(q.real, q.imag, a.exp - b.exp)


def add(a: ScaledComplex, b: ScaledComplex) -> ScaledComplex:
    if a.is_zero:
        return b
    if b.is_zero:
        return a
    if a.exp < b.exp:
        a, b = b, a
    gap = a.exp - b.exp
    if gap > GAP_BITS:
        return a
    re = a.mre + math.ldexp(b.mre, -gap)
    im = a.mim + math.ldexp(b.mim, -gap)
    return _make(re, im, a.exp)


def scale2(a: ScaledComplex, k: int) -> ScaledComplex:
    """Multiply by ``2**k`` exactly."""
    if a.is_zero:
        return a
    exp = a.exp + k
    if abs(exp) > EXP_LIMIT:
        raise ScaledRangeError(f"binary exponent {exp} out of range")
    return ScaledComplex(a.mre, a.mim, exp)


def re_sign(a: ScaledComplex) -> int:
    return (a.mre > 0) - (a.mre < 0)


def im_sign(a: ScaledComplex) -> int:
    return (a.mim > 0) - (a.mim < 0)


def abs_scaled(a: ScaledComplex) -> tuple[float, int]:
    """Modulus as ``(m, e)`` with value ``m * 2**e``."""
    return math.hypot(a.mre, a.mim), a.exp


def log10_abs(a: ScaledComplex) -> float:
    if a.is_zero:
        raise DomainError("log10 of zero")
    return math.log10(math.hypot(a.mre, a.mim)) + a.exp * _LOG10_2


def log_abs(a: ScaledComplex) -> float:
    if a.is_zero:
        raise DomainError("log of zero")
    return math.log(math.hypot(a.mre, a.mim)) + a.exp * _LN2


def to_complex(a: ScaledComplex) -> complex:
    """Fold into binary64; underflows to 0 and overflows to inf as ldexp does."""
    try:
        return complex(math.ldexp(a.mre, a.exp), math.ldexp(a.mim, a.exp))
    except OverflowError:
        return complex(math.copysign(math.inf, a.mre) if a.mre else 0.0,
                       math.copysign(math.inf, a.mim) if a.mim else 0.0)


def to_real(a: ScaledComplex) -> float:
    return to_complex(a).real


def _decimal_parts(m: float, exp: int, digits: int) -> tuple[float, int]:
    if m == 0.0:
        return 0.0, 0
    ctx = decimal.Context(prec=digits + 25)
    v = ctx.multiply(decimal.Decimal(m), ctx.power(decimal.Decimal(2), exp))
    e10 = v.adjusted()
    mant = ctx.scaleb(v, -e10)
    return float(mant), e10


def real_part_decimal(a: ScaledComplex, digits: int = 17) -> tuple[float, int]:
    """Real part as ``(mantissa, exp10)`` with ``1 <= |mantissa| < 10``."""
    return _decimal_parts(a.mre, a.exp, digits)


def imag_part_decimal(a: ScaledComplex, digits: int = 17) -> tuple[float, int]:
    return _decimal_parts(a.mim, a.exp, digits)


def format_real(m: float, e10: int, digits: int = 16) -> str:
    return f"{m:.{digits - 1}f}e{e10:+03d}"


def format_value(a: ScaledComplex, digits: int = 16) -> str:
    rm, re10 = real_part_decimal(a)
    im, ie10 = imag_part_decimal(a)
    sign = "-" if im < 0 else "+"
    return f"{format_real(rm, re10, digits)} {sign} {format_real(abs(im), ie10, digits)}i"
