import cmath
import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dbz import scaled
from dbz.errors import DomainError
from dbz.scaled import ScaledComplex

finite = st.floats(min_value=-1e150, max_value=1e150, allow_nan=False, allow_infinity=False)
nonzero = finite.filter(lambda x: abs(x) > 1e-150)
logs = st.complex_numbers(max_magnitude=5000.0, allow_nan=False, allow_infinity=False)


def close(a: complex, b: complex, rel=1e-14):
    return abs(a - b) <= rel * max(abs(a), abs(b))


@given(finite, finite)
def test_round_trip(re, im):
    # exact except when one component is subnormal relative to the other
    got = scaled.to_complex(scaled.from_complex(re, im))
    assert abs(got - complex(re, im)) <= 1e-300 * abs(complex(re, im))
    if min(abs(re), abs(im)) > 1e-150 or 0.0 in (re, im):
        assert got == complex(re, im)


@given(nonzero, finite)
def test_mantissa_normalised(re, im):
    v = scaled.from_complex(re, im)
    assert 1.0 <= max(abs(v.mre), abs(v.mim)) < 2.0


@given(nonzero, finite, nonzero, finite)
def test_mul_div_match_complex(a, b, c, d):
    x, y = complex(a, b), complex(c, d)
    sx, sy = scaled.from_complex(a, b), scaled.from_complex(c, d)
    if abs(x * y) < 1e300:
        assert close(scaled.to_complex(sx * sy), x * y)
    assert close(scaled.to_complex((sx * sy) / sy), x, 1e-13)


@given(finite, finite, finite, finite)
def test_add_matches_complex(a, b, c, d):
    x, y = complex(a, b), complex(c, d)
    got = scaled.to_complex(scaled.from_complex(a, b) + scaled.from_complex(c, d))
    assert abs(got - (x + y)) <= 4e-16 * (abs(x) + abs(y))


@given(logs, logs)
@settings(max_examples=200)
def test_from_log_is_a_homomorphism(u, v):
    prod = scaled.from_log(u) * scaled.from_log(v)
    direct = scaled.from_log(u + v)
    assert abs(scaled.log_abs(prod) - (u + v).real) < 1e-10 * max(1.0, abs((u + v).real))
    ratio = scaled.to_complex(prod / direct)
    assert abs(ratio - 1.0) < 1e-9


def test_from_log_matches_exp_in_range():
    for z in (0.3 + 1.2j, -40.0 + 3.0j, 200.0 - 7.0j):
        assert close(scaled.to_complex(scaled.from_log(z)), cmath.exp(z), 1e-13)


def test_survives_far_outside_binary64():
    tiny = scaled.from_log(-5000.0)
    assert scaled.to_complex(tiny) == 0.0
    assert scaled.log_abs(tiny) == pytest.approx(-5000.0, rel=1e-15)
    back = scaled.to_complex(tiny * scaled.from_log(5000.0))
    assert back == pytest.approx(1.0, rel=1e-12)


def test_addition_swallows_negligible_term():
    big = scaled.from_log(100.0)
    small = scaled.from_log(-100.0)
    assert big + small == big


def test_cancellation_to_zero():
    a = scaled.from_complex(3.0, -2.0)
    assert (a - a).is_zero


def test_decimal_parts_against_mpmath():
    mpmath.mp.dps = 40
    v = scaled.from_log(-158.9 + 0.4j)
    m, e = scaled.real_part_decimal(v)
    ref = mpmath.exp(mpmath.mpc(-158.9, 0.4)).real
    assert e == int(mpmath.floor(mpmath.log10(abs(ref))))
    assert m == pytest.approx(float(ref / mpmath.mpf(10) ** e), rel=1e-12)
    assert 1.0 <= abs(m) < 10.0


def test_format_value():
    v = scaled.from_complex(-0.25, 1e-3)
    assert scaled.format_value(v, 4) == "-2.500e-01 + 1.000e-03i"


def test_sign_helpers():
    v = scaled.from_complex(-1e-300, 2.0) * scaled.from_log(-1000.0)
    assert scaled.re_sign(v) == -1
    assert scaled.im_sign(v) == 1
    assert scaled.re_sign(scaled.ZERO) == 0


def test_rejects_non_finite():
    with pytest.raises(DomainError):
        scaled.from_complex(math.inf)
    with pytest.raises(DomainError):
        scaled.from_log(complex(math.nan, 0.0))


def test_conjugate_and_negation():
    v = scaled.from_log(-700.0 + 1.0j)
    assert isinstance(v.conjugate(), ScaledComplex)
    assert scaled.to_complex((v * v.conjugate()) / (v * v.conjugate())) == pytest.approx(1.0)
    assert (-v + v).is_zero
