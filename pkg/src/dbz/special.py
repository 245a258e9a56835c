"""Complex log-gamma, digamma, Riemann and Hurwitz zeta with s-derivatives.

The zeta functions use Euler-Maclaurin summation:

    zeta(s, a) = sum_{n<N} (n+a)^-s + X^(1-s)/(s-1) + X^-s/2
                 + sum_{k=1}^{M} B_2k/(2k)! * (s)_(2k-1) * X^(-s-2k+1),   X = N+a

which is valid off the critical line and for the heights used here
(|Im s| <= 1e4).  Derivatives differentiate every term in s.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError, ParameterError, PoleError

LOG_2PI = math.log(2.0 * math.pi)
EULER_GAMMA = 0.57721566490153286061

MAX_CORRECTIONS = 30
_STIRLING_TERMS = 12
_STIRLING_MIN_MODULUS = 12.0


def _bernoulli_fractions(count: int) -> list[Fraction]:
    # B_0..B_{2*count} from the standard recurrence sum_{k<m} C(m+1,k) B_k = -(m+1) B_m
    n = 2 * count
    b = [Fraction(0)] * (n + 1)
    b[0] = Fraction(1)
    for m in range(1, n + 1):
        acc = Fraction(0)
        for k in range(m):
            acc += math.comb(m + 1, k) * b[k]
        b[m] = -acc / (m + 1)
    return [b[2 * k] for k in range(1, count + 1)]


@dataclass(frozen=True)
class BernoulliTable:
    """Even Bernoulli numbers B_2, B_4, ..., B_60 (``values[k-1]`` is B_2k)."""

    values: tuple[float, ...]
    exact: tuple[Fraction, ...]

    @classmethod
    def build(cls, count: int = MAX_CORRECTIONS) -> BernoulliTable:
        exact = tuple(_bernoulli_fractions(count))
        return cls(tuple(float(b) for b in exact), exact)

    def b2k(self, k: int) -> float:
        return self.values[k - 1]


BERNOULLI = BernoulliTable.build()

# B_2k / (2k)!, the Euler-Maclaurin weights
_EM_WEIGHTS = tuple(
    float(BERNOULLI.exact[k - 1] / math.factorial(2 * k)) for k in range(1, MAX_CORRECTIONS + 1)
)
# B_2k / (2k (2k-1)), Stirling weights for log-gamma
_STIRLING_WEIGHTS = tuple(
    float(BERNOULLI.exact[k - 1] / (2 * k * (2 * k - 1))) for k in range(1, _STIRLING_TERMS + 1)
)
# B_2k / 2k, asymptotic weights for digamma
_DIGAMMA_WEIGHTS = tuple(
    float(BERNOULLI.exact[k - 1] / (2 * k)) for k in range(1, _STIRLING_TERMS + 1)
)


@dataclass(frozen=True)
class EvalParams:
    """Euler-Maclaurin controls.

    ``em_terms=None`` picks the direct-sum length per evaluation point so
    that the first omitted Bernoulli correction sits below
    ``target_rel_tol``; an explicit value is checked against the minimum
    length required by the imaginary part of ``s``.
    """

    em_terms: int | None = None
    em_corrections: int = 15
    target_rel_tol: float = 1e-12

    def __post_init__(self):
        if self.em_terms is not None and self.em_terms < 1:
            raise ParameterError(f"em_terms must be positive, got {self.em_terms}")
        if not 5 <= self.em_corrections <= MAX_CORRECTIONS:
            raise ParameterError(f"em_corrections must lie in [5, 30], got {self.em_corrections}")
        if not 1e-14 <= self.target_rel_tol <= 1e-6:
            raise ParameterError(
                f"target_rel_tol must lie in [1e-14, 1e-6], got {self.target_rel_tol}"
            )

    def terms_for(self, s: complex) -> int:
        floor = minimum_terms(s)
        if self.em_terms is None:
            return max(floor + 10, _auto_terms(s, self.em_corrections, self.target_rel_tol))
        if self.em_terms < floor:
            raise ParameterError(
                f"em_terms={self.em_terms} too small for Im s = {s.imag:g} (need >= {floor})"
            )
        return self.em_terms

    def summary(self) -> str:
        n = "auto" if self.em_terms is None else str(self.em_terms)
        return f"em_terms={n} em_corrections={self.em_corrections} target_rel_tol={self.target_rel_tol:g}"


DEFAULT_PARAMS = EvalParams()


def minimum_terms(s: complex) -> int:
    return math.ceil(1.3 * abs(s.imag) / (2.0 * math.pi)) + 10


def _auto_terms(s: complex, m: int, tol: float) -> int:
    # The k-th correction scales like (|s + 2k| / (2 pi X))^(2k); choose X so
    # the (m+1)-th falls below tol / 10.
    ratio = (tol / 10.0) ** (1.0 / (2 * m))
    return math.ceil(abs(s + 2 * m + 1) / (2.0 * math.pi * ratio))


def _check_gamma_pole(s: complex) -> None:
    if s.imag == 0.0 and s.real <= 0.0 and s.real == math.floor(s.real):
        raise PoleError(s)


def _shift_count(s: complex) -> int:
    m = 0
    while abs(s + m) < _STIRLING_MIN_MODULUS or (s + m).real < 0.5:
        m += 1
    return m


def log_gamma(s: complex) -> complex:
    """Principal branch of log Gamma(s), analytic off the negative real axis."""
    s = complex(s)
    _check_gamma_pole(s)
    m = _shift_count(s)
    z = s + m
    inv = 1.0 / z
    inv2 = inv * inv
    series = 0.0j
    p = inv
    for w in _STIRLING_WEIGHTS:
        series += w * p
        p *= inv2
    result = (z - 0.5) * cmath.log(z) - z + 0.5 * LOG_2PI + series
    for k in range(m):
        result -= cmath.log(s + k)
    return result


def digamma(s: complex) -> complex:
    s = complex(s)
    _check_gamma_pole(s)
    m = _shift_count(s)
    z = s + m
    inv2 = 1.0 / (z * z)
    series = 0.0j
    p = inv2
    for w in _DIGAMMA_WEIGHTS:
        series += w * p
        p *= inv2
    result = cmath.log(z) - 0.5 / z - series
    for k in range(m):
        result -= 1.0 / (s + k)
    return result


_TWO_PI_LD = np.longdouble(2) * np.arccos(np.longdouble(-1))
_EXTENDED = np.finfo(np.longdouble).eps < np.finfo(np.float64).eps


@lru_cache(maxsize=64)
def _offset_logs(n_terms: int, a: float) -> tuple[np.ndarray, np.ndarray | None]:
    """log(n + a) for n < n_terms, in binary64 and (if available) extended precision."""
    if _EXTENDED:
        ld = np.log(np.arange(n_terms, dtype=np.longdouble) + np.longdouble(a))
        ld.setflags(write=False)
        lx = ld.astype(np.float64)
    else:
        ld = None
        lx = np.log(np.arange(n_terms, dtype=np.float64) + a)
    lx.setflags(write=False)
    return lx, ld


def _powers(s: complex, logs: np.ndarray, logs_ld: np.ndarray | None) -> np.ndarray:
    # x^-s as exp(-sigma log x) * exp(-i t log x).  t log x reaches ~1e5, so
    # the phase is formed and reduced mod 2 pi in extended precision when the
    # platform has it; binary64 alone loses ~1e-11 of phase at t = 1e4.
    mod = np.exp(-s.real * logs)
    t = s.imag
    if t == 0.0:
        return mod.astype(np.complex128)
    if logs_ld is None:
        phase = -t * logs
    else:
        phase = np.fmod(-np.longdouble(t) * logs_ld, _TWO_PI_LD).astype(np.float64)
    return mod * (np.cos(phase) + 1j * np.sin(phase))


def _scalar_power(s: complex, x: float) -> complex:
    """x^-s for a single positive x with the same phase handling."""
    if _EXTENDED:
        ld = np.log(np.array([x], dtype=np.longdouble))
        return complex(_powers(s, ld.astype(np.float64), ld)[0])
    return complex(_powers(s, np.array([math.log(x)]), None)[0])


def _em_corrections(s: complex, log_x: float, x: float, x_pow: complex, m: int, deriv: bool):
    """Bernoulli corrections and (optionally) their s-derivative.

    ``x_pow`` is X^-s.  Returns ``(value, derivative)``.
    """
    poch = s  # (s)_(2k-1)
    dpoch = 1.0 + 0.0j
    xk = x_pow / x  # X^(-s-2k+1) for k = 1
    inv_x2 = 1.0 / (x * x)
    val = 0.0j
    der = 0.0j
    for k in range(1, m + 1):
        w = _EM_WEIGHTS[k - 1]
        val += w * poch * xk
        if deriv:
            der += w * (dpoch - poch * log_x) * xk
        a1 = s + (2 * k - 1)
        a2 = s + 2 * k
        dpoch = (dpoch * a1 + poch) * a2 + poch * a1
        poch = poch * a1 * a2
        xk *= inv_x2
    return val, der


def _em_sum(s: complex, a: float, n_terms: int, m: int, deriv: bool, with_pole: bool = True):
    logs, logs_ld = _offset_logs(n_terms, a)
    terms = _powers(s, logs, logs_ld)
    head = terms.sum()
    dhead = -(logs * terms).sum() if deriv else 0.0j
    x = n_terms + a
    log_x = math.log(x)
    x_pow = _scalar_power(s, x)
    mid = 0.5 * x_pow
    dmid = -0.5 * log_x * x_pow
    corr, dcorr = _em_corrections(s, log_x, x, x_pow, m, deriv)
    val = head + mid + corr
    der = dhead + dmid + dcorr
    if with_pole:
        inv = 1.0 / (s - 1.0)
        pole = x * x_pow * inv
        val += pole
        if deriv:
            der += pole * (-log_x - inv)
    return val, der, x, x_pow


def riemann_zeta(s: complex, p: EvalParams = DEFAULT_PARAMS) -> complex:
    s = complex(s)
    if s == 1:
        raise PoleError(s)
    n = p.terms_for(s)
    val, _, _, _ = _em_sum(s, 1.0, n, p.em_corrections, False)
    return complex(val)


def riemann_zeta_deriv(s: complex, p: EvalParams = DEFAULT_PARAMS) -> complex:
    s = complex(s)
    if s == 1:
        raise PoleError(s)
    n = p.terms_for(s)
    _, der, _, _ = _em_sum(s, 1.0, n, p.em_corrections, True)
    return complex(der)


def _check_offset(a: float) -> float:
    a = float(a)
    if not 0.0 < a <= 1.0:
        raise DomainError(f"Hurwitz offset a must lie in (0, 1], got {a}")
    return a


def hurwitz_zeta(s: complex, a: float, p: EvalParams = DEFAULT_PARAMS) -> complex:
    s = complex(s)
    a = _check_offset(a)
    if s == 1:
        raise PoleError(s)
    n = p.terms_for(s)
    val, _, _, _ = _em_sum(s, a, n, p.em_corrections, False)
    return complex(val)


def hurwitz_zeta_deriv(s: complex, a: float, p: EvalParams = DEFAULT_PARAMS) -> complex:
    s = complex(s)
    a = _check_offset(a)
    if s == 1:
        raise PoleError(s)
    n = p.terms_for(s)
    _, der, _, _ = _em_sum(s, a, n, p.em_corrections, True)
    return complex(der)


def _expm1_over(v: complex) -> tuple[complex, complex]:
    """phi(v) = (e^v - 1)/v and phi'(v), accurate near v = 0."""
    if abs(v) < 0.5:
        phi = 0.0j
        dphi = 0.0j
        term = 1.0 + 0.0j  # v^k / (k+1)!
        for k in range(0, 30):
            phi += term
            if k + 1 < 30:
                dphi += (k + 1) * term / (k + 2)
            term = term * v / (k + 2)
        return phi, dphi
    ev = cmath.exp(v)
    phi = (ev - 1.0) / v
    dphi = (v * ev - ev + 1.0) / (v * v)
    return phi, dphi


def hurwitz_difference(
    s: complex, a: float, b: float, p: EvalParams = DEFAULT_PARAMS, deriv: bool = False
) -> complex | tuple[complex, complex]:
    """``zeta(s, a) - zeta(s, b)`` with the s = 1 poles cancelled analytically.

    The two integral terms combine into ``X^(1-s) - Y^(1-s)) / (s - 1)``
    which is evaluated through ``expm1(v)/v`` so the result is regular at
    s = 1.  With ``deriv=True`` returns ``(value, d/ds value)``.
    """
    s = complex(s)
    a = _check_offset(a)
    b = _check_offset(b)
    n = p.terms_for(s)
    m = p.em_corrections
    va, da, x, _ = _em_sum(s, a, n, m, deriv, with_pole=False)
    vb, db, y, _ = _em_sum(s, b, n, m, deriv, with_pole=False)
    # (X^(1-s) - Y^(1-s)) / (s-1) = -h(u),  h(u) = e^(u Ly) d phi(u d),  u = 1-s
    lx, ly = math.log(x), math.log(y)
    d = lx - ly
    u = 1.0 - s
    base = y * _scalar_power(s, y)  # Y^(1-s)
    phi, dphi = _expm1_over(u * d)
    h = base * d * phi
    val = va - vb - h
    if not deriv:
        return complex(val)
    dh_du = ly * h + base * d * d * dphi
    der = da - db + dh_du
    return complex(val), complex(der)
