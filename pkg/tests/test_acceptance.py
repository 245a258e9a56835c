"""Acceptance criteria, one test each, at the stated tolerances and time limits.

Each test prints (and registers for the terminal summary) one line
``criterion N: PASS|FAIL ...``.
"""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from dbz import scaled
from dbz.completed import LFunctionKind, completed, completed_deriv, debranges_E, epsilon_chi4
from dbz.positivity import (
    gram_check,
    herglotz_ratio,
    kernel_fw,
    kernel_positivity,
    reproducing_quadrature_check,
    scan_herglotz,
)
from dbz.special import hurwitz_zeta, riemann_zeta
from dbz.zeros import ZeroCache, first_zeros, locate_zero_near, nth_zero

ZETA, CHI4 = LFunctionKind.ZETA, LFunctionKind.CHI4
CATALAN = 0.9159655941772190


def report(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def decimal_value(v) -> float:
    m, e = scaled.real_part_decimal(v)
    return m, e


def rel_to(m, e, pm, pe):
    return abs(m * 10.0 ** (e - pe) - pm) / abs(pm)


def test_criterion_1_zeta_kernel(tmp_path):
    start = time.perf_counter()
    zero = nth_zero(34, ZETA, cache=ZeroCache(tmp_path))
    v = kernel_positivity(zero)
    elapsed = time.perf_counter() - start
    m, e = decimal_value(v.value)
    dev = rel_to(m, e, -5.389100507182945, -69)
    report(1, dev < 1e-6 and elapsed < 5 and v.violates,
           f"Re{{-xi'(rho) xi(1+rho)}} = {m:.15f}e{e}  rel dev {dev:.1e}  {elapsed:.2f}s")


def test_criterion_2_zeta_herglotz():
    start = time.perf_counter()
    g = herglotz_ratio(282.0, ZETA)
    elapsed = time.perf_counter() - start
    dev = abs(g + 0.000131957)
    report(2, dev < 1e-8 and elapsed < 1, f"g(282) = {g:.12e}  abs dev {dev:.1e}  {elapsed:.3f}s")


def test_criterion_3_chi4_kernel():
    start = time.perf_counter()
    zero = locate_zero_near(67.6369208635460684, CHI4)
    v = kernel_positivity(zero)
    elapsed = time.perf_counter() - start
    m, e = decimal_value(v.value)
    dev = rel_to(m, e, -2.310349004993483456, -45)
    report(3, dev < 1e-6 and elapsed < 5 and v.violates,
           f"chi4 kernel = {m:.15f}e{e}  rel dev {dev:.1e}  {elapsed:.2f}s")


def test_criterion_4_chi4_herglotz():
    start = time.perf_counter()
    g = herglotz_ratio(8714.2, CHI4)
    elapsed = time.perf_counter() - start
    dev = abs(g + 0.000422340607) / 0.000422340607
    report(4, dev < 1e-6 and elapsed < 10, f"g4(8714.2) = {g:.12e}  rel dev {dev:.1e}  {elapsed:.3f}s")


def test_criterion_5_zero_ordinates(tmp_path):
    start = time.perf_counter()
    zs = first_zeros(34, ZETA, cache=ZeroCache(tmp_path))
    elapsed = time.perf_counter() - start
    t34 = zs[33].ordinate
    t4 = locate_zero_near(67.6369208635460684, CHI4).ordinate
    d1 = abs(t34 - 111.0295355431696745)
    d2 = abs(t4 - 67.6369208635460683980549)
    report(5, d1 < 1e-9 and d2 < 1e-9 and elapsed < 60,
           f"t34 dev {d1:.1e}  chi4 dev {d2:.1e}  34-zero enumeration {elapsed:.2f}s")


@pytest.mark.parametrize("kind, lo, hi, t0", [(ZETA, 281.95, 282.15, 282.0), (CHI4, 8714.1, 8714.4, 8714.2)])
def test_criterion_6_scan_ranges(kind, lo, hi, t0):
    start = time.perf_counter()
    res = scan_herglotz(lo, hi, 0.002, kind)
    elapsed = time.perf_counter() - start
    hit = [iv for iv in res.negative if iv[0] <= t0 <= iv[1]]
    shown = ", ".join(f"[{a:.6f}, {b:.6f}]" for a, b in hit) or "none"
    report(6, bool(hit) and elapsed < 30, f"{kind} scan [{lo}, {hi}] negative on {shown}  {elapsed:.2f}s")


def _functional_equation_residual():
    worst = 0.0
    for kind in (ZETA, CHI4):
        eps = epsilon_chi4() if kind is CHI4 else 1.0
        for x in np.linspace(-2.0, 3.0, 10):
            for y in np.linspace(0.0, 50.0, 20):
                s = complex(x, y)
                a = completed(s, kind)
                b = completed(1.0 - s, kind) * scaled.from_complex(eps.real, eps.imag)
                d = a - b
                if not d.is_zero:
                    worst = max(worst, math.exp(scaled.log_abs(d) - scaled.log_abs(a)))
    return worst


def _derivative_defect():
    worst = 0.0
    h = 1e-3
    for kind in (ZETA, CHI4):
        for s in (0.5 + 20.0j, 2.0 + 3.0j, -1.5 + 7.0j, 1.0 + 282.0j, 0.5, 3.0 + 45.0j):
            f = [completed(s + k * h, kind) for k in (-2, -1, 1, 2)]
            num = (f[0] - f[3] + scaled.from_complex(8.0) * (f[2] - f[1])) * scaled.from_complex(1 / (12 * h))
            d = completed_deriv(s, kind)
            err = num - d
            # xi'(1/2) = 0, so measure against the local scale max(|f'|, |f|)
            scale = max(scaled.log_abs(d), scaled.log_abs(completed(s, kind)))
            if not err.is_zero:
                worst = max(worst, math.exp(scaled.log_abs(err) - scale))
    return worst


def _closed_form_defects():
    z2 = abs(riemann_zeta(2.0) - math.pi**2 / 6) / (math.pi**2 / 6)
    half = max(
        abs(hurwitz_zeta(s, 0.5) - (2.0**s - 1.0) * riemann_zeta(s)) / abs(hurwitz_zeta(s, 0.5))
        for s in (2.0, 3.0 + 4.0j, 0.5 + 30.0j, -0.5 + 2.0j)
    )
    cat = abs(hurwitz_zeta(2.0, 0.25) - hurwitz_zeta(2.0, 0.75) - 16 * CATALAN)
    return z2, half, cat


def _structure_function_monotone():
    ys = np.linspace(0.1, 5.0, 50)
    for kind in (ZETA, CHI4):
        for x in (0.0, 1.0, -1.0, 5.0, -5.0):
            mods = [scaled.log_abs(debranges_E(complex(x, y), kind)) for y in ys]
            if not all(b > a for a, b in zip(mods, mods[1:])):
                return False
    return True


def _gram_consistency():
    rep = gram_check([-282.05 + 0.1j, -282.0 + 0.1j, -281.95 + 0.1j], ZETA)
    hermitian = np.array_equal(rep.matrix, rep.matrix.conj().T)
    worst = 0.0
    for w in (1j, 282.0 + 0.1j, -5.0 + 2.0j):
        one = gram_check([w], ZETA)
        k = scaled.scale2(kernel_fw(w, w + 1j, ZETA), -one.scale_exponent)
        expect = 2.0 * scaled.to_complex(k).real
        worst = max(worst, abs(one.matrix[0, 0] - expect) / abs(expect))
    return hermitian, worst


def test_criterion_7_property_suite():
    start = time.perf_counter()
    fe = _functional_equation_residual()
    der = _derivative_defect()
    z2, half, cat = _closed_form_defects()
    mono = _structure_function_monotone()
    quad = max(reproducing_quadrature_check(a, b, ZETA) for a, b in ((1j, 1j), (1j, 1.0 + 2.0j), (0.5j, 3j)))
    herm, r1 = _gram_consistency()
    elapsed = time.perf_counter() - start
    ok = (fe < 1e-9 and der < 1e-7 and z2 < 1e-12 and half < 1e-12 and cat < 1e-10 and mono
          and quad < 1e-6 and herm and r1 < 1e-10 and elapsed < 180)
    report(7, ok, f"FE {fe:.1e}  d/ds {der:.1e}  zeta(2) {z2:.1e}  a=1/2 {half:.1e}  Catalan {cat:.1e}  "
                  f"|E| monotone {mono}  quadrature {quad:.1e}  Hermitian {herm}  r=1 {r1:.1e}  {elapsed:.1f}s")


def _cli(*argv, cache):
    env = {"DBZ_CACHE_DIR": str(cache), "PATH": ""}
    proc = subprocess.run([sys.executable, "-m", "dbz", *argv], capture_output=True, env=env)
    return proc.returncode, proc.stdout


def test_criterion_8_determinism(tmp_path):
    # the second repro reads the cache written by the first
    runs = [_cli("repro", cache=tmp_path / "cache") for _ in range(2)]
    runs_cold = _cli("repro", cache=tmp_path / "cold")
    scans = []
    for name in ("a", "b"):
        out = tmp_path / f"{name}.csv"
        code, _ = _cli("scan", "--from", "281.95", "--to", "282.15", "--step", "0.002",
                       "--output", str(out), "--jobs", "2", cache=tmp_path / "cache")
        scans.append((code, out.read_bytes()))
    same_repro = runs[0] == runs[1] == runs_cold and runs[0][0] == 0
    same_scan = scans[0] == scans[1] and scans[0][0] == 0
    report(8, same_repro and same_scan, f"repro byte-identical {same_repro}  scan byte-identical {same_scan}")
