"""Completed functions xi(s), xi(s, chi_4), their derivatives, and E(z).

Both are assembled as ``exp(log prefactor) * (polynomial) * (zeta part)``
in :class:`~dbz.scaled.ScaledComplex` so the Gamma decay, about
exp(-pi |t| / 4), never underflows binary64.

    xi(s)       = 2 (s - 1) pi^(-s/2) Gamma(1 + s/2) zeta(s)
    xi(s, chi4) = (4 pi)^(-s/2) Gamma((s + 1)/2) (zeta(s, 1/4) - zeta(s, 3/4))

The first form is s(s-1) pi^(-s/2) Gamma(s/2) zeta(s) with s Gamma(s/2)
folded into 2 Gamma(1 + s/2), which removes the indeterminacy at s = 0.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from functools import lru_cache

from . import scaled
from .errors import NumericalError
from .scaled import ScaledComplex
from .special import (
    DEFAULT_PARAMS,
    EvalParams,
    digamma,
    hurwitz_difference,
    log_gamma,
    riemann_zeta,
    riemann_zeta_deriv,
)

LOG_PI = math.log(math.pi)
LOG_4PI = math.log(4.0 * math.pi)

# Removable points closer than this are handled by a limit formula.
REMOVABLE_RADIUS = 1e-6
FD_STEP = 1e-6


class LFunctionKind(enum.Enum):
    ZETA = "zeta"
    CHI4 = "chi4"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class CompletedValue:
    value: ScaledComplex
    kind: LFunctionKind
    point: complex


def _near_nonpositive_even(s: complex) -> bool:
    k = round(s.real / 2.0)
    return k <= 0 and abs(s - 2 * k) < REMOVABLE_RADIUS and k != 0


def _near_negative_odd(s: complex) -> bool:
    k = round((s.real - 1.0) / 2.0)
    return k < 0 and abs(s - (2 * k + 1)) < REMOVABLE_RADIUS


def _xi_log_prefactor(s: complex) -> complex:
    return -0.5 * s * LOG_PI + log_gamma(1.0 + 0.5 * s)


def xi(s: complex, p: EvalParams = DEFAULT_PARAMS) -> ScaledComplex:
    """Riemann xi function, entire, normalised so xi(0) = xi(1) = 1."""
    s = complex(s)
    if abs(s - 1.0) < REMOVABLE_RADIUS or _near_nonpositive_even(s):
        # zeta pole at 1 and Gamma(1 + s/2) poles at -2, -4, ...: reflect
        return xi(1.0 - s, p)
    pref = scaled.from_log(_xi_log_prefactor(s))
    poly = scaled.from_complex(2.0 * (s.real - 1.0), 2.0 * s.imag)
    z = riemann_zeta(s, p)
    return pref * poly * scaled.from_complex(z.real, z.imag)


def xi_deriv(s: complex, p: EvalParams = DEFAULT_PARAMS) -> ScaledComplex:
    """xi'(s) = e^L [(2 + (s-1)(psi(1+s/2) - log pi)) zeta(s) + 2 (s-1) zeta'(s)]."""
    s = complex(s)
    if abs(s - 1.0) < REMOVABLE_RADIUS or _near_nonpositive_even(s):
        return _central_difference(xi, s, p)
    pref = scaled.from_log(_xi_log_prefactor(s))
    z = riemann_zeta(s, p)
    dz = riemann_zeta_deriv(s, p)
    inner = (2.0 + (s - 1.0) * (digamma(1.0 + 0.5 * s) - LOG_PI)) * z + 2.0 * (s - 1.0) * dz
    return pref * scaled.from_complex(inner.real, inner.imag)


def _xi4_log_prefactor(s: complex) -> complex:
    return -0.5 * s * LOG_4PI + log_gamma(0.5 * (s + 1.0))


def xi4(s: complex, p: EvalParams = DEFAULT_PARAMS) -> ScaledComplex:
    """Completed L-function of the character mod 4 (entire)."""
    s = complex(s)
    if _near_negative_odd(s):
        # Gamma((s+1)/2) poles meet the trivial zeros of L(s, chi4)
        return _mul_complex(xi4(1.0 - s, p), epsilon_chi4().conjugate())
    pref = scaled.from_log(_xi4_log_prefactor(s))
    d = hurwitz_difference(s, 0.25, 0.75, p)
    return pref * scaled.from_complex(d.real, d.imag)


def xi4_deriv(s: complex, p: EvalParams = DEFAULT_PARAMS) -> ScaledComplex:
    s = complex(s)
    if _near_negative_odd(s):
        return _central_difference(xi4, s, p)
    pref = scaled.from_log(_xi4_log_prefactor(s))
    d, dd = hurwitz_difference(s, 0.25, 0.75, p, deriv=True)
    inner = 0.5 * (digamma(0.5 * (s + 1.0)) - LOG_4PI) * d + dd
    return pref * scaled.from_complex(inner.real, inner.imag)


def _mul_complex(a: ScaledComplex, c: complex) -> ScaledComplex:
    return a * scaled.from_complex(c.real, c.imag)


def _central_difference(f, s: complex, p: EvalParams, h: float = FD_STEP) -> ScaledComplex:
    return (f(s + h, p) - f(s - h, p)) * scaled.from_complex(0.5 / h)


def completed(s: complex, kind: LFunctionKind, p: EvalParams = DEFAULT_PARAMS) -> ScaledComplex:
    return xi(s, p) if kind is LFunctionKind.ZETA else xi4(s, p)


def completed_deriv(s: complex, kind: LFunctionKind, p: EvalParams = DEFAULT_PARAMS) -> ScaledComplex:
    return xi_deriv(s, p) if kind is LFunctionKind.ZETA else xi4_deriv(s, p)


def evaluate(s: complex, kind: LFunctionKind, p: EvalParams = DEFAULT_PARAMS) -> CompletedValue:
    return CompletedValue(completed(s, kind, p), kind, complex(s))


def log_envelope(s: complex, kind: LFunctionKind) -> float:
    """log of the Gamma-factor modulus; the natural magnitude scale of xi near s."""
    s = complex(s)
    if kind is LFunctionKind.ZETA:
        lp = _xi_log_prefactor(s) if not _near_nonpositive_even(s) else _xi_log_prefactor(1.0 - s)
        return lp.real + math.log(max(abs(2.0 * (s - 1.0)), 1.0))
    if _near_negative_odd(s):
        return _xi4_log_prefactor(1.0 - s).real
    return _xi4_log_prefactor(s).real


def debranges_E(z: complex, kind: LFunctionKind, p: EvalParams = DEFAULT_PARAMS) -> ScaledComplex:
    """E(z) = xi(1 - iz) for either kind."""
    return completed(1.0 - 1j * complex(z), kind, p)


def debranges_E_deriv(z: complex, kind: LFunctionKind, p: EvalParams = DEFAULT_PARAMS) -> ScaledComplex:
    return completed_deriv(1.0 - 1j * complex(z), kind, p) * scaled.from_complex(0.0, -1.0)


_EPSILON_REFERENCE_POINTS = (1.5 + 3.0j, 2.0 + 0.5j, 3.0 + 1.0j, 2.5 - 0.75j)


@lru_cache(maxsize=None)
def epsilon_chi4(s0: complex | None = None) -> complex:
    """Root number measured as xi4(1 - s0) / xi4(s0)."""
    points = (s0,) if s0 is not None else _EPSILON_REFERENCE_POINTS
    for pt in points:
        pt = complex(pt)
        den = _xi4_direct(pt)
        if den.is_zero or scaled.log_abs(den) < _xi4_log_prefactor(pt).real - 20.0:
            continue
        return complex(_xi4_direct(1.0 - pt) / den)
    raise NumericalError("no usable reference point for the chi4 root number")


def _xi4_direct(s: complex) -> ScaledComplex:
    # xi4 without the reflection branch, so epsilon never depends on itself
    pref = scaled.from_log(_xi4_log_prefactor(s))
    d = hurwitz_difference(s, 0.25, 0.75)
    return pref * scaled.from_complex(d.real, d.imag)


@lru_cache(maxsize=None)
def critical_phase(kind: LFunctionKind) -> complex:
    """Unit phase u with xi(1/2 + it) / u real; u = 1 for zeta."""
    if kind is LFunctionKind.ZETA:
        return 1.0 + 0.0j
    v = complex(xi4(0.5 + 2.0j))
    return v / abs(v)


def phase_of(v: ScaledComplex) -> float:
    return cmath.phase(complex(v.mre, v.mim))
