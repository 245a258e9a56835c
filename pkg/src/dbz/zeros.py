"""Critical-line zeros of xi and xi(., chi4).

On Re s = 1/2 both completed functions are a fixed unimodular phase times a
real function of t.  Zeros are bracketed by sign changes of that function on
a uniform grid and refined with Brent's method.  For refinement the real
function is divided by its Gamma envelope, which is positive and smooth, so
the working values stay O(1) at every height.
"""

from __future__ import annotations

import csv
import io
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from filelock import FileLock
from scipy.optimize import brentq

from . import scaled
from .completed import LFunctionKind, completed, critical_phase, log_envelope
from .errors import ConsistencyError, DomainError, RefinementError, ZeroRangeError
from .special import DEFAULT_PARAMS, EvalParams

SCAN_STEP = 0.05
SCAN_CEILING = 1e4
BRACKET_WIDTH = 1e-10
RESIDUAL_BOUND = 1e-9
PHASE_TOLERANCE = 1e-8
TABLE_HEADER = ("kind", "index", "ordinate", "residual", "bracket_width")

_BRENT_XTOL = 1e-12
_CHUNK = 200


@dataclass(frozen=True)
class ZeroRecord:
    kind: LFunctionKind
    index: int
    ordinate: float
    residual: float
    bracket_width: float

    @property
    def rho(self) -> complex:
        return complex(0.5, self.ordinate)


def _rotated(t: float, kind: LFunctionKind, p: EvalParams) -> scaled.ScaledComplex:
    v = completed(complex(0.5, t), kind, p)
    u = critical_phase(kind)
    if kind is LFunctionKind.ZETA:
        return v
    return v * scaled.from_complex(u.real, -u.imag)


def normalized_value(t: float, kind: LFunctionKind, p: EvalParams = DEFAULT_PARAMS) -> float:
    """Real critical-line value divided by its Gamma envelope (a Hardy-Z analogue)."""
    if t < 0:
        raise DomainError(f"t must be non-negative, got {t}")
    v = _rotated(t, kind, p)
    env = log_envelope(complex(0.5, t), kind)
    # scale by exp(-env) exactly in the binary exponent, remainder in the mantissa
    k = math.floor(env / math.log(2.0))
    w = scaled.scale2(v, -k)
    c = scaled.to_complex(w) / math.exp(env - k * math.log(2.0))
    if abs(c.imag) > PHASE_TOLERANCE * max(abs(c), 1.0):
        raise ConsistencyError(
            f"{kind} value at t={t!r} has relative imaginary residue {abs(c.imag):.3e}"
        )
    return c.real


def critical_line_value(t: float, kind: LFunctionKind, p: EvalParams = DEFAULT_PARAMS) -> float:
    """The real r(t) with xi(1/2 + it) = r(t) * u; clamped to +-tiny on underflow."""
    z = normalized_value(t, kind, p)  # performs the phase-consistency check
    v = _rotated(t, kind, p)
    r = scaled.to_real(v)
    if r == 0.0 and z != 0.0:
        return math.copysign(sys.float_info.min, z)
    return r


def _grid(t_lo: float, t_hi: float, step: float) -> np.ndarray:
    n = int(math.floor((t_hi - t_lo) / step + 1e-9))
    pts = t_lo + step * np.arange(n + 1)
    if pts[-1] < t_hi:
        pts = np.append(pts, t_hi)
    return pts


def _brackets_on(ts, values) -> list[tuple[float, float]]:
    out = []
    for i in range(len(ts) - 1):
        a, b = values[i], values[i + 1]
        if a == 0.0:
            continue
        if b == 0.0 or (a < 0) != (b < 0):
            out.append((float(ts[i]), float(ts[i + 1])))
    return out


def bracket_zeros(
    t_lo: float, t_hi: float, step: float, kind: LFunctionKind, p: EvalParams = DEFAULT_PARAMS
) -> list[tuple[float, float]]:
    """Sign-change brackets of the critical-line function on a uniform grid."""
    if not (0 <= t_lo < t_hi) or step <= 0:
        raise DomainError(f"invalid scan [{t_lo}, {t_hi}] step {step}")
    ts = _grid(t_lo, t_hi, step)
    values = [normalized_value(float(t), kind, p) for t in ts]
    return _brackets_on(ts, values)


def refine_zero(
    bracket: tuple[float, float],
    kind: LFunctionKind,
    index: int = 0,
    p: EvalParams = DEFAULT_PARAMS,
) -> ZeroRecord:
    """Brent refinement of one sign-change bracket into a :class:`ZeroRecord`."""
    a, b = map(float, bracket)

    def f(t):
        return normalized_value(t, kind, p)

    fa, fb = f(a), f(b)
    if fa == 0.0:
        b, fb = a, fa
    if (fa < 0) == (fb < 0) and fa != 0.0 and fb != 0.0:
        raise RefinementError(f"no sign change on [{a}, {b}]")
    scale = max(abs(fa), abs(fb))
    if fb == 0.0:
        root = b
    else:
        root = brentq(f, a, b, xtol=_BRENT_XTOL, rtol=4 * np.finfo(float).eps, maxiter=200)
    lo, hi = _verified_bracket(f, root, a, b)
    residual = abs(f(root)) / scale if scale > 0 else 0.0
    if residual > RESIDUAL_BOUND:
        raise RefinementError(f"residual {residual:.3e} at t={root!r} exceeds bound")
    return ZeroRecord(kind, index, root, residual, hi - lo)


def _verified_bracket(f, root, a, b):
    f0 = f(root)
    if f0 == 0.0:
        return root, root
    for h in (2e-11, 3e-11, 4e-11, 5e-11):
        lo, hi = max(a, root - h), min(b, root + h)
        flo, fhi = f(lo), f(hi)
        if (flo < 0) != (fhi < 0) or flo == 0.0 or fhi == 0.0:
            return lo, hi
    raise RefinementError(f"sign change around t={root!r} not resolvable to {BRACKET_WIDTH}")


def zeros_in_range(
    t_lo: float,
    t_hi: float,
    kind: LFunctionKind,
    step: float = SCAN_STEP,
    first_index: int = 1,
    p: EvalParams = DEFAULT_PARAMS,
) -> list[ZeroRecord]:
    records = []
    for i, br in enumerate(bracket_zeros(t_lo, t_hi, step, kind, p)):
        records.append(refine_zero(br, kind, first_index + i, p))
    return records


@dataclass
class ZeroTable:
    kind: LFunctionKind
    records: list[ZeroRecord] = field(default_factory=list)
    generated_with: str = DEFAULT_PARAMS.summary()

    def __post_init__(self):
        ords = [r.ordinate for r in self.records]
        if any(b - a <= 1e-3 for a, b in zip(ords, ords[1:])):
            raise ConsistencyError("zero table ordinates closer than 1e-3")

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# generated_with: {self.generated_with}\n")
        write_zero_csv(buf, self.records)
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, kind: LFunctionKind) -> ZeroTable:
        generated_with = DEFAULT_PARAMS.summary()
        for line in text.splitlines():
            if line.startswith("# generated_with:"):
                generated_with = line.split(":", 1)[1].strip()
        records = [r for r in read_zero_csv(io.StringIO(text)) if r.kind is kind]
        return cls(kind, records, generated_with)


def format_ordinate(x: float) -> str:
    return f"{x:.17e}"


def write_zero_csv(out, records) -> None:
    out.write(",".join(TABLE_HEADER) + "\n")
    for r in records:
        out.write(
            f"{r.kind.value},{r.index},{format_ordinate(r.ordinate)},"
            f"{r.residual:.17e},{r.bracket_width:.17e}\n"
        )


def read_zero_csv(src) -> list[ZeroRecord]:
    rows = csv.reader(line for line in src if not line.startswith("#"))
    header = next(rows, None)
    if header is None:
        return []
    if tuple(header) != TABLE_HEADER:
        raise ValueError(f"unexpected zero table header {header!r}")
    return [
        ZeroRecord(LFunctionKind(k), int(i), float(o), float(res), float(w))
        for k, i, o, res, w in rows
    ]


def default_cache_dir() -> Path:
    env = os.environ.get("DBZ_CACHE_DIR")
    if env:
        return Path(env)
    if sys.platform == "win32":
        base = Path(os.environ.get("LOCALAPPDATA", Path.home() / "AppData" / "Local"))
    elif sys.platform == "darwin":
        base = Path.home() / "Library" / "Caches"
    else:
        base = Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache"))
    return base / "dbz"


class ZeroCache:
    """On-disk ZeroTable per kind; writers serialise through a file lock."""

    def __init__(self, directory: Path | str | None = None):
        self.directory = Path(directory) if directory is not None else default_cache_dir()

    def path(self, kind: LFunctionKind) -> Path:
        return self.directory / f"zeros-{kind.value}.csv"

    def load(self, kind: LFunctionKind, params: EvalParams = DEFAULT_PARAMS) -> ZeroTable:
        path = self.path(kind)
        if not path.exists():
            return ZeroTable(kind, [], params.summary())
        table = ZeroTable.from_csv(path.read_text(), kind)
        if table.generated_with != params.summary():
            return ZeroTable(kind, [], params.summary())
        return table

    def store(self, table: ZeroTable) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.path(table.kind)
        with FileLock(str(path) + ".lock"):
            tmp = path.with_suffix(".tmp")
            tmp.write_text(table.to_csv())
            os.replace(tmp, path)


def extend_table(table: ZeroTable, n: int | None = None, until: float | None = None,
                 p: EvalParams = DEFAULT_PARAMS, step: float = SCAN_STEP,
                 ceiling: float = SCAN_CEILING) -> ZeroTable:
    """Scan upward from the last known zero.

    Stops once the table holds ``n`` records, or once the scan grid has
    passed height ``until``.
    """
    records = list(table.records)
    kind = table.kind
    cell = int(math.floor(records[-1].ordinate / step)) + 1 if records else 0

    def wanted():
        if n is not None and len(records) < n:
            return True
        return until is not None and cell * step < until

    while wanted():
        if cell * step >= ceiling:
            raise ZeroRangeError(f"{kind} zero scan passed the ceiling t = {ceiling:g}")
        ts = step * np.arange(cell, cell + _CHUNK + 1)
        ts = ts[ts <= ceiling]
        values = [normalized_value(float(t), kind, p) for t in ts]
        for br in _brackets_on(ts, values):
            records.append(refine_zero(br, kind, len(records) + 1, p))
            if until is None and len(records) == n:
                break
        cell += len(ts) - 1
    return ZeroTable(kind, records, p.summary())


def _load_extended(kind, p, cache, n=None, until=None) -> ZeroTable:
    if cache is None:
        return extend_table(ZeroTable(kind, [], p.summary()), n, until, p)
    table = cache.load(kind, p)
    have_n = n is None or len(table.records) >= n
    have_t = until is None or (table.records and table.records[-1].ordinate >= until)
    if not (have_n and have_t):
        table = extend_table(table, n, until, p)
        cache.store(table)
    return table


def nth_zero(n: int, kind: LFunctionKind, p: EvalParams = DEFAULT_PARAMS,
             cache: ZeroCache | None = None) -> ZeroRecord:
    """The n-th critical-line zero (1-based, by increasing ordinate)."""
    return first_zeros(n, kind, p, cache)[n - 1]


def first_zeros(n: int, kind: LFunctionKind, p: EvalParams = DEFAULT_PARAMS,
                cache: ZeroCache | None = None) -> list[ZeroRecord]:
    if n < 1:
        raise DomainError(f"zero index must be >= 1, got {n}")
    return _load_extended(kind, p, cache, n=n).records[:n]


def zeros_between(t_lo: float, t_hi: float, kind: LFunctionKind, p: EvalParams = DEFAULT_PARAMS,
                  cache: ZeroCache | None = None) -> list[ZeroRecord]:
    """Indexed zeros with t_lo <= ordinate <= t_hi (enumerated from t = 0)."""
    if not 0 <= t_lo <= t_hi:
        raise DomainError(f"invalid range [{t_lo}, {t_hi}]")
    table = _load_extended(kind, p, cache, until=t_hi)
    return [r for r in table.records if t_lo <= r.ordinate <= t_hi]


def locate_zero_near(t: float, kind: LFunctionKind, p: EvalParams = DEFAULT_PARAMS,
                     half_width: float = 0.5 * SCAN_STEP) -> ZeroRecord:
    """Refine a user-supplied ordinate; index 0 marks an unnumbered zero."""
    lo = max(0.0, t - half_width)
    hi = t + half_width
    brackets = bracket_zeros(lo, hi, half_width / 4, kind, p)
    if not brackets:
        raise RefinementError(f"no {kind} zero within {half_width} of t = {t!r}")
    best = min(brackets, key=lambda br: abs(0.5 * (br[0] + br[1]) - t))
    return refine_zero(best, kind, 0, p)
