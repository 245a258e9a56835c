"""de Branges positivity functionals for the zeta and chi4 structure functions.

Two spaces are involved.  H(E) with E(z) = xi(1 - iz) has kernel

    K(w, z) = [E(z) conj E(w) - conj E(conj z) E(conj w)] / (2 pi i (conj w - z))

and at a zero w of E the value K(w, w+i) = conj E'(w) E(w+i) / (2 pi i) must
have a non-negative real part if the space were to satisfy the positivity
hypothesis.  Dropping the positive 1/(2 pi) leaves -xi'(rho) xi(1 + rho).

F(W) with W(z) = 1/E(z) has kernel K(w, z) = W(z) conj W(w) / (2 pi i (conj w - z));
positivity there forces Re W(z)/W(z+i) >= 0, equivalently
Re xi(1+it)/xi(2+it) >= 0 on the real line, and positive semi-definiteness of
K(w_a, w_b + i) + K(w_a + i, w_b) over finite point sets.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from . import scaled
from .completed import LFunctionKind, completed, completed_deriv, debranges_E
from .errors import DomainError, QuadratureError
from .linalg import jacobi_eigenvalues
from .scaled import ScaledComplex
from .special import DEFAULT_PARAMS, EvalParams
from .zeros import RESIDUAL_BOUND, SCAN_STEP, ZeroRecord, normalized_value

GRAM_MAX_ORDER = 64
GRAM_NEGATIVITY = 1e-12
SCAN_ENDPOINT_TOL = 1e-6
QUAD_TAIL_FRACTION = 1e-8
_TWO_PI_I = ScaledComplex(0.0, 1.0, 0) * scaled.from_complex(2.0 * math.pi)


@dataclass(frozen=True)
class KernelVerdict:
    kind: LFunctionKind
    zero: ZeroRecord
    value: ScaledComplex
    real_sign: int
    violates: bool
    # value omits the positive factor 1/(2 pi) of K(w, w+i)
    dropped_factor: str = "1/(2*pi)"

    @property
    def verdict(self) -> str:
        return "VIOLATED" if self.violates else "SATISFIED"


def kernel_value(rho: complex, kind: LFunctionKind, p: EvalParams = DEFAULT_PARAMS) -> ScaledComplex:
    """-xi'(rho) xi(1 + rho), i.e. conj E'(w) E(w+i) / i with rho = 1 - iw."""
    return -completed_deriv(rho, kind, p) * completed(1.0 + rho, kind, p)


def _check_zero(zero: ZeroRecord, p: EvalParams) -> None:
    if zero.residual > RESIDUAL_BOUND:
        raise DomainError(f"zero record residual {zero.residual:.3e} exceeds {RESIDUAL_BOUND}")
    t = zero.ordinate
    half = 0.5 * SCAN_STEP
    scale = max(abs(normalized_value(max(t - half, 0.0), zero.kind, p)),
                abs(normalized_value(t + half, zero.kind, p)))
    here = abs(normalized_value(t, zero.kind, p))
    if here > RESIDUAL_BOUND * scale:
        raise DomainError(f"t = {t!r} is not a {zero.kind} zero (residual {here / scale:.3e})")


def kernel_positivity(zero: ZeroRecord, p: EvalParams = DEFAULT_PARAMS) -> KernelVerdict:
    _check_zero(zero, p)
    v = kernel_value(zero.rho, zero.kind, p)
    sign = scaled.re_sign(v)
    return KernelVerdict(zero.kind, zero, v, sign, sign < 0)


def herglotz_ratio(t: float, kind: LFunctionKind, p: EvalParams = DEFAULT_PARAMS) -> float:
    """Re xi(1+it)/xi(2+it); same sign as Re W(-t)/W(-t+i) for W = 1/E."""
    num = completed(complex(1.0, t), kind, p)
    den = completed(complex(2.0, t), kind, p)
    return scaled.to_complex(num / den).real


@dataclass(frozen=True)
class ScanRow:
    t: float
    g: float
    kind: LFunctionKind


@dataclass(frozen=True)
class ScanResult:
    kind: LFunctionKind
    rows: list[ScanRow]
    negative: list[tuple[float, float]]


def _herglotz_task(args):
    t, kind, p = args
    return herglotz_ratio(t, kind, p)


def _scan_grid(t_lo: float, t_hi: float, step: float) -> list[float]:
    n = int(math.floor((t_hi - t_lo) / step + 1e-9))
    return [t_lo + i * step for i in range(n + 1)]


def scan_herglotz(
    t_lo: float,
    t_hi: float,
    step: float,
    kind: LFunctionKind,
    p: EvalParams = DEFAULT_PARAMS,
    jobs: int = 1,
) -> ScanResult:
    """Evaluate g on a grid and report maximal runs where it is negative."""
    if not (0 <= t_lo < t_hi) or step <= 0:
        raise DomainError(f"invalid scan [{t_lo}, {t_hi}] step {step}")
    ts = _scan_grid(t_lo, t_hi, step)
    tasks = [(t, kind, p) for t in ts]
    if jobs > 1 and len(ts) >= 256:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            gs = list(ex.map(_herglotz_task, tasks, chunksize=max(1, len(ts) // (4 * jobs))))
    else:
        gs = [_herglotz_task(a) for a in tasks]
    rows = [ScanRow(t, g, kind) for t, g in zip(ts, gs)]
    return ScanResult(kind, rows, _negative_runs(ts, gs, kind, p))


def _negative_runs(ts, gs, kind, p):
    def g(t):
        return herglotz_ratio(t, kind, p)

    def edge(a, b):
        return brentq(g, a, b, xtol=0.5 * SCAN_ENDPOINT_TOL)

    runs = []
    i = 0
    n = len(ts)
    while i < n:
        if gs[i] >= 0:
            i += 1
            continue
        j = i
        while j + 1 < n and gs[j + 1] < 0:
            j += 1
        left = ts[i] if i == 0 else edge(ts[i - 1], ts[i])
        right = ts[j] if j == n - 1 else edge(ts[j], ts[j + 1])
        runs.append((left, right))
        i = j + 1
    return runs


def w_function(z: complex, kind: LFunctionKind, p: EvalParams = DEFAULT_PARAMS) -> ScaledComplex:
    """W(z) = 1 / E(z)."""
    return scaled.ONE / debranges_E(z, kind, p)


def kernel_from_values(w: complex, z: complex, w_at_w: ScaledComplex, w_at_z: ScaledComplex) -> ScaledComplex:
    """F(W) kernel W(z) conj W(w) / (2 pi i (conj w - z)) from given W values."""
    den = complex(w).conjugate() - complex(z)
    if den == 0:
        raise DomainError(f"kernel denominator vanishes at w={w!r}, z={z!r}")
    return w_at_z * w_at_w.conjugate() / (_TWO_PI_I * scaled.from_complex(den.real, den.imag))


def kernel_fw(w: complex, z: complex, kind: LFunctionKind, p: EvalParams = DEFAULT_PARAMS) -> ScaledComplex:
    return kernel_from_values(w, z, w_function(w, kind, p), w_function(z, kind, p))


def kernel_he(w: complex, z: complex, kind: LFunctionKind, p: EvalParams = DEFAULT_PARAMS) -> ScaledComplex:
    """H(E) kernel [E(z) conj E(w) - conj E(conj z) E(conj w)] / (2 pi i (conj w - z))."""
    w, z = complex(w), complex(z)
    den = w.conjugate() - z
    if den == 0:
        raise DomainError("H(E) kernel on the diagonal conj(w) = z needs a derivative")
    e = lambda x: debranges_E(x, kind, p)  # noqa: E731
    num = e(z) * e(w).conjugate() - e(z.conjugate()).conjugate() * e(w.conjugate())
    return num / (_TWO_PI_I * scaled.from_complex(den.real, den.imag))


@dataclass(frozen=True)
class GramReport:
    """Gram matrix of K(w_a, w_b + i) + K(w_a + i, w_b).

    ``matrix`` is stored as ``true matrix * 2**-scale_exponent`` so entries
    fit binary64; the positive scale leaves eigenvalue signs unchanged and
    ``min_eigenvalue`` is in the same scaled units.
    """

    kind: LFunctionKind
    points: list[complex]
    matrix: np.ndarray
    scale_exponent: int
    min_eigenvalue: float
    violates: bool

    @property
    def min_eigenvalue_log10(self) -> float:
        return math.log10(abs(self.min_eigenvalue)) + self.scale_exponent * math.log10(2.0)


def _validate_points(points) -> list[complex]:
    pts = [complex(w) for w in points]
    if not pts:
        raise DomainError("at least one point is required")
    if len(pts) > GRAM_MAX_ORDER:
        raise DomainError(f"matrix order {len(pts)} exceeds {GRAM_MAX_ORDER}")
    for w in pts:
        if not w.imag > 0:
            raise DomainError(f"point {w!r} is not in the upper half-plane")
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if pts[i] == pts[j]:
                raise DomainError(f"coincident points at positions {i} and {j}")
    return pts


def gram_entries(points, kind: LFunctionKind, p: EvalParams = DEFAULT_PARAMS) -> list[list[ScaledComplex]]:
    """Upper triangle (a <= b) of the Gram matrix as scaled values."""
    pts = _validate_points(points)
    r = len(pts)
    w0 = [w_function(w, kind, p) for w in pts]
    w1 = [w_function(w + 1j, kind, p) for w in pts]
    out = [[scaled.ZERO] * r for _ in range(r)]
    for a in range(r):
        for b in range(a, r):
            out[a][b] = kernel_from_values(pts[a], pts[b] + 1j, w0[a], w1[b]) + kernel_from_values(
                pts[a] + 1j, pts[b], w1[a], w0[b]
            )
    return out


def gram_check(points, kind: LFunctionKind, p: EvalParams = DEFAULT_PARAMS) -> GramReport:
    pts = _validate_points(points)
    r = len(pts)
    ent = gram_entries(pts, kind, p)
    top = max(ent[a][b].exp for a in range(r) for b in range(a, r) if not ent[a][b].is_zero)
    m = np.zeros((r, r), dtype=np.complex128)
    for a in range(r):
        m[a, a] = scaled.to_complex(scaled.scale2(ent[a][a], -top)).real
        for b in range(a + 1, r):
            v = scaled.to_complex(scaled.scale2(ent[a][b], -top))
            m[a, b] = v
            m[b, a] = v.conjugate()
    lam = float(jacobi_eigenvalues(m)[0])
    norm = float(np.max(np.abs(m)))
    return GramReport(kind, pts, m, top, lam, lam < -GRAM_NEGATIVITY * norm)


def reproducing_quadrature_check(
    w0: complex, w: complex, kind: LFunctionKind, p: EvalParams = DEFAULT_PARAMS
) -> float:
    """Relative defect of <K(w0, .), K(w, .)>_{F(W)} against K(w0, w).

    The integrand K(w0, x) conj K(w, x) / |W(x)|^2 no longer contains W(x),
    so it is integrated with W(x) set to 1 in both kernels; W(w0) and W(w)
    enter both sides identically.
    """
    w0, w = complex(w0), complex(w)
    if not (w0.imag > 0 and w.imag > 0):
        raise DomainError("both points must lie in the upper half-plane")
    ww0, ww = w_function(w0, kind, p), w_function(w, kind, p)
    target = kernel_from_values(w0, w, ww0, ww)
    ones = scaled.ONE
    # common factor so the integrand is O(1/x^2) in binary64
    top = max(ww0.exp, ww.exp)
    a0 = scaled.scale2(ww0, -top)
    a1 = scaled.scale2(ww, -top)

    def integrand(x):
        k0 = kernel_from_values(w0, x, a0, ones)
        k1 = kernel_from_values(w, x, a1, ones)
        return scaled.to_complex(k0 * k1.conjugate())

    expected = scaled.to_complex(scaled.scale2(target, -2 * top))
    radius = max(abs(w0), abs(w)) + 1.0
    # |integrand| <= c / (4 pi^2 (|x| - radius)^2) with c = |a0 a1|; the two
    # tails together stay below QUAD_TAIL_FRACTION * |expected|.
    c = abs(scaled.to_complex(a0 * a1))
    x_max = radius + 2.0 * c / (4.0 * math.pi**2 * QUAD_TAIL_FRACTION * abs(expected))
    inner = 10.0 * radius
    floor = 1e-13 * abs(expected)
    total = _quad(integrand, -inner, inner, floor)
    for sign in (1.0, -1.0):
        total += _quad(
            lambda u, s=sign: integrand(s * math.exp(u)) * math.exp(u),
            math.log(inner),
            math.log(x_max),
            floor,
        )
    return abs(total - expected) / abs(expected)


def _quad(f, a, b, floor: float) -> complex:
    val, err = quad(f, a, b, complex_func=True, limit=400, epsabs=floor, epsrel=1e-11)
    if not (math.isfinite(val.real) and math.isfinite(val.imag)):
        raise QuadratureError("non-finite quadrature result")
    if abs(err) > 1e-7 * abs(val) + 10 * floor:
        raise QuadratureError(f"quadrature error estimate {abs(err):.2e} too large")
    return val


def default_jobs() -> int:
    return os.cpu_count() or 1
