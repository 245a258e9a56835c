"""Command-line interface: ``dbz <command> [options]``.

Exit status: 0 success, 2 argument error, 3 numerical failure, 4 when
``--assert-nonnegative`` is given and a positivity violation was found.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import scaled
from .completed import LFunctionKind, completed, completed_deriv
from .errors import NumericalError
from .positivity import (
    default_jobs,
    gram_check,
    herglotz_ratio,
    kernel_positivity,
    scan_herglotz,
)
from .special import EvalParams
from .zeros import (
    ZeroCache,
    first_zeros,
    format_ordinate,
    locate_zero_near,
    nth_zero,
    write_zero_csv,
    zeros_between,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_VIOLATION = 4

COMMANDS = ("eval", "zeros", "kernel-check", "herglotz", "scan", "gram", "repro")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _pair(text: str) -> tuple[float, float]:
    try:
        a, b = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected RE,IM but got {text!r}") from None
    return a, b


def _points(text: str) -> list[complex]:
    pts = []
    for chunk in text.split(";"):
        if chunk.strip():
            re, im = _pair(chunk)
            pts.append(complex(re, im))
    if not pts:
        raise argparse.ArgumentTypeError("no points given")
    return pts


def _kind(text: str) -> LFunctionKind:
    try:
        return LFunctionKind(text.lower())
    except ValueError:
        raise argparse.ArgumentTypeError(f"kind must be zeta or chi4, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default=None,
                        help="output format; text, or csv for scan, when omitted")
    common.add_argument("--output", type=Path, default=None, help="write output to PATH instead of stdout")
    common.add_argument("--em-terms", type=int, default=None,
                        help="Euler-Maclaurin direct-sum length; None chooses it per point")
    common.add_argument("--em-corrections", type=int, default=15,
                        help="number of Bernoulli corrections")
    common.add_argument("--tol", type=float, default=1e-12, help="target relative tolerance")
    common.add_argument("--assert-nonnegative", action="store_true",
                        help="exit with status 4 if a positivity violation is found")
    common.add_argument("--no-cache", action="store_true",
                        help="do not read or write the zero cache (DBZ_CACHE_DIR)")

    kind_arg = _Parser(add_help=False)
    kind_arg.add_argument("--kind", type=_kind, default=LFunctionKind.ZETA,
                          help="zeta or chi4")

    parser = _Parser(prog="dbz", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub_kw = {"formatter_class": argparse.ArgumentDefaultsHelpFormatter}

    p = sub.add_parser("eval", **sub_kw, parents=[common, kind_arg], help="evaluate xi or xi4 at a point")
    p.add_argument("--s", type=_pair, required=True, metavar="RE,IM",
                   help="evaluation point (use --s=-1,2 for a negative real part)")
    p.add_argument("--derivative", action="store_true", help="evaluate the s-derivative instead")

    p = sub.add_parser("zeros", **sub_kw, parents=[common, kind_arg], help="critical-line zeros")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--count", type=int, help="first N zeros")
    g.add_argument("--range", type=_pair, metavar="LO,HI", help="zeros with LO <= t <= HI")

    p = sub.add_parser("kernel-check", **sub_kw, parents=[common, kind_arg],
                       help="sign of Re{-xi'(rho) xi(1+rho)} at a zero")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--zero-index", type=int, help="1-based zero index")
    g.add_argument("--ordinate", type=float, help="approximate zero ordinate (refined locally)")

    p = sub.add_parser("herglotz", **sub_kw, parents=[common, kind_arg], help="Re xi(1+it)/xi(2+it)")
    p.add_argument("--t", type=float, required=True, help="ordinate t >= 0")

    p = sub.add_parser("scan", **sub_kw, parents=[common, kind_arg], help="scan the Herglotz ratio over [A, B]")
    p.add_argument("--from", dest="t_from", type=float, required=True, help="first abscissa")
    p.add_argument("--to", dest="t_to", type=float, required=True, help="last abscissa")
    p.add_argument("--step", type=float, required=True, help="grid spacing")
    p.add_argument("--jobs", type=int, default=default_jobs(),
                   help="worker processes; defaults to the processor count")
    p.add_argument("--emit-plot-script", action="store_true",
                   help="also write a gnuplot script next to --output")

    p = sub.add_parser("gram", **sub_kw, parents=[common, kind_arg],
                       help="minimum eigenvalue of K(w_a, w_b+i) + K(w_a+i, w_b)")
    p.add_argument("--points", type=_points, required=True, metavar="RE,IM;RE,IM;...")

    sub.add_parser("repro", **sub_kw, parents=[common], help="reproduce the four published values")
    return parser


@dataclass
class RunConfig:
    command: str
    kind: LFunctionKind
    args: argparse.Namespace
    output_format: str
    output_path: Path | None
    assert_nonnegative: bool
    params: EvalParams


def _config(ns: argparse.Namespace) -> RunConfig:
    try:
        params = EvalParams(ns.em_terms, ns.em_corrections, ns.tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    cmd = ns.command
    if cmd == "zeros" and ns.count is not None and ns.count < 1:
        raise UsageError("--count must be >= 1")
    if cmd == "kernel-check" and ns.zero_index is not None and ns.zero_index < 1:
        raise UsageError("--zero-index must be >= 1")
    if cmd == "scan":
        if not (0 <= ns.t_from < ns.t_to) or ns.step <= 0:
            raise UsageError("scan needs 0 <= --from < --to and --step > 0")
        if ns.emit_plot_script and ns.output is None:
            raise UsageError("--emit-plot-script requires --output")
        if ns.jobs < 1:
            raise UsageError("--jobs must be >= 1")
    if cmd == "zeros" and ns.range is not None and not 0 <= ns.range[0] <= ns.range[1]:
        raise UsageError("--range needs 0 <= LO <= HI")
    if cmd == "herglotz" and ns.t < 0:
        raise UsageError("--t must be non-negative")
    fmt = ns.format or ("csv" if cmd == "scan" else "text")
    return RunConfig(cmd, getattr(ns, "kind", LFunctionKind.ZETA), ns, fmt, ns.output,
                     ns.assert_nonnegative, params)


def _json(obj, raw: dict[str, str] | None = None) -> str:
    """json.dumps, with selected values spliced in verbatim (18-digit ordinates)."""
    text = json.dumps(obj, indent=None)
    for key, literal in (raw or {}).items():
        text = text.replace(json.dumps(key), literal)
    return text


def _num(x: float) -> str:
    return f"{x:.16e}"


def _cache(cfg: RunConfig) -> ZeroCache | None:
    return None if cfg.args.no_cache else ZeroCache()


# -- commands ------------------------------------------------------------------


def _cmd_eval(cfg: RunConfig, out) -> int:
    re, im = cfg.args.s
    s = complex(re, im)
    fn = completed_deriv if cfg.args.derivative else completed
    v = fn(s, cfg.kind, cfg.params)
    rm, re10 = scaled.real_part_decimal(v)
    imm, ie10 = scaled.imag_part_decimal(v)
    lg = scaled.log10_abs(v) if not v.is_zero else float("-inf")
    name = ("xi'" if cfg.args.derivative else "xi") + ("" if cfg.kind is LFunctionKind.ZETA else "4")
    if cfg.output_format == "json":
        out.write(_json({"kind": cfg.kind.value, "derivative": cfg.args.derivative,
                         "s_re": re, "s_im": im, "re_mantissa": rm, "re_exp10": re10,
                         "im_mantissa": imm, "im_exp10": ie10, "log10_abs": lg}) + "\n")
    elif cfg.output_format == "csv":
        out.write("kind,derivative,s_re,s_im,re_mantissa,re_exp10,im_mantissa,im_exp10\n")
        out.write(f"{cfg.kind.value},{int(cfg.args.derivative)},{_num(re)},{_num(im)},"
                  f"{_num(rm)},{re10},{_num(imm)},{ie10}\n")
    else:
        out.write(f"{name}({re!r}{im:+}i) = {scaled.format_value(v)}\n")
        out.write(f"log10|{name}| = {lg:.12f}\n")
    return EXIT_OK


def _zero_json(records) -> str:
    raw = {}
    objs = []
    for i, r in enumerate(records):
        key = f"__ordinate_{i}__"
        raw[key] = format_ordinate(r.ordinate)
        objs.append({"kind": r.kind.value, "index": r.index, "ordinate": key, "residual": r.residual})
    return _json(objs, raw)


def _cmd_zeros(cfg: RunConfig, out) -> int:
    cache = _cache(cfg)
    if cfg.args.count is not None:
        records = first_zeros(cfg.args.count, cfg.kind, cfg.params, cache)
    else:
        lo, hi = cfg.args.range
        records = zeros_between(lo, hi, cfg.kind, cfg.params, cache)
    if cfg.output_format == "json":
        out.write(_zero_json(records) + "\n")
    elif cfg.output_format == "csv":
        write_zero_csv(out, records)
    else:
        for r in records:
            out.write(f"{r.kind.value} #{r.index:<5d} t = {format_ordinate(r.ordinate)}"
                      f"  residual {r.residual:.2e}  width {r.bracket_width:.2e}\n")
    return EXIT_OK


def _cmd_kernel(cfg: RunConfig, out) -> int:
    if cfg.args.zero_index is not None:
        zero = nth_zero(cfg.args.zero_index, cfg.kind, cfg.params, _cache(cfg))
    else:
        zero = locate_zero_near(cfg.args.ordinate, cfg.kind, cfg.params)
    v = kernel_positivity(zero, cfg.params)
    m, e10 = scaled.real_part_decimal(v.value)
    fields = {
        "kind": cfg.kind.value,
        "index": zero.index,
        "ordinate": "__ordinate__",
        "re_value_mantissa": m,
        "re_value_exp10": e10,
        "sign": v.real_sign,
        "verdict": v.verdict,
        "dropped_factor": v.dropped_factor,
    }
    if cfg.output_format == "json":
        out.write(_json(fields, {"__ordinate__": format_ordinate(zero.ordinate)}) + "\n")
    elif cfg.output_format == "csv":
        out.write("kind,index,ordinate,re_value_mantissa,re_value_exp10,sign,verdict\n")
        out.write(f"{cfg.kind.value},{zero.index},{format_ordinate(zero.ordinate)},"
                  f"{_num(m)},{e10},{v.real_sign},{v.verdict}\n")
    else:
        label = f"zero #{zero.index}" if zero.index else "zero"
        out.write(f"{cfg.kind.value} {label} at t = {format_ordinate(zero.ordinate)}\n")
        out.write(f"Re{{-xi'(rho) xi(1+rho)}} = {scaled.format_real(m, e10)}"
                  f"  (positive factor {v.dropped_factor} dropped)\n")
        out.write(f"verdict: {v.verdict}\n")
    return EXIT_VIOLATION if (cfg.assert_nonnegative and v.violates) else EXIT_OK


def _cmd_herglotz(cfg: RunConfig, out) -> int:
    t = cfg.args.t
    g = herglotz_ratio(t, cfg.kind, cfg.params)
    if cfg.output_format == "json":
        out.write(_json({"kind": cfg.kind.value, "t": t, "g": g}) + "\n")
    elif cfg.output_format == "csv":
        out.write(f"t,g\n{_num(t)},{_num(g)}\n")
    else:
        out.write(f"{g:.12g}\n")
    return EXIT_VIOLATION if (cfg.assert_nonnegative and g < 0) else EXIT_OK


def write_scan_csv(out, result) -> None:
    out.write("t,g\n")
    for row in result.rows:
        out.write(f"{_num(row.t)},{_num(row.g)}\n")
    for a, b in result.negative:
        out.write(f"# negative: [{_num(a)},{_num(b)}]\n")


def read_scan_csv(src, kind: LFunctionKind):
    """Parse scan CSV back into rows and negative intervals."""
    from .positivity import ScanResult, ScanRow

    rows, negative = [], []
    lines = iter(src)
    header = next(lines).strip()
    if header != "t,g":
        raise ValueError(f"unexpected scan header {header!r}")
    for line in lines:
        line = line.strip()
        if not line:
            continue
        if line.startswith("# negative:"):
            a, b = line.split("[", 1)[1].rstrip("]").split(",")
            negative.append((float(a), float(b)))
        elif not line.startswith("#"):
            t, g = line.split(",")
            rows.append(ScanRow(float(t), float(g), kind))
    return ScanResult(kind, rows, negative)


def plot_script(csv_path: Path, kind: LFunctionKind, t_from: float, t_to: float) -> str:
    png = csv_path.with_suffix(".png").name
    return "\n".join([
        f"# gnuplot script for {csv_path.name}",
        'set datafile separator ","',
        "set terminal pngcairo size 900,600",
        f'set output "{png}"',
        f'set title "Re xi(1+it)/xi(2+it), {kind.value}"',
        'set xlabel "t"',
        'set ylabel "g(t)"',
        f"set xrange [{t_from!r}:{t_to!r}]",
        "set xzeroaxis",
        "set grid",
        f'plot "{csv_path.name}" using 1:2 skip 1 with lines title "g"',
        "",
    ])


def _cmd_scan(cfg: RunConfig, out) -> int:
    a = cfg.args
    res = scan_herglotz(a.t_from, a.t_to, a.step, cfg.kind, cfg.params, jobs=a.jobs)
    if cfg.output_format == "json":
        out.write(_json({"kind": cfg.kind.value,
                         "rows": [{"t": r.t, "g": r.g} for r in res.rows],
                         "negative": [list(iv) for iv in res.negative]}) + "\n")
    elif cfg.output_format == "text":
        for r in res.rows:
            out.write(f"{r.t:.6f}  {r.g:+.12e}\n")
        for lo, hi in res.negative:
            out.write(f"negative on [{lo:.6f}, {hi:.6f}]\n")
    else:
        write_scan_csv(out, res)
    if a.emit_plot_script:
        gp = cfg.output_path.with_suffix(".gp")
        gp.write_text(plot_script(cfg.output_path, cfg.kind, a.t_from, a.t_to))
    return EXIT_VIOLATION if (cfg.assert_nonnegative and res.negative) else EXIT_OK


def _cmd_gram(cfg: RunConfig, out) -> int:
    rep = gram_check(cfg.args.points, cfg.kind, cfg.params)
    verdict = "VIOLATED" if rep.violates else "SATISFIED"
    if cfg.output_format == "json":
        out.write(_json({
            "kind": cfg.kind.value,
            "order": len(rep.points),
            "points": [[w.real, w.imag] for w in rep.points],
            "scale_exponent": rep.scale_exponent,
            "matrix": [[[z.real, z.imag] for z in row] for row in rep.matrix.tolist()],
            "min_eigenvalue": rep.min_eigenvalue,
            "verdict": verdict,
        }) + "\n")
    elif cfg.output_format == "csv":
        out.write("kind,order,scale_exponent,min_eigenvalue,verdict\n")
        out.write(f"{cfg.kind.value},{len(rep.points)},{rep.scale_exponent},"
                  f"{_num(rep.min_eigenvalue)},{verdict}\n")
    else:
        out.write(f"{cfg.kind.value} Gram matrix of order {len(rep.points)} (scaled by 2^{-rep.scale_exponent})\n")
        for row in rep.matrix:
            out.write("  " + "  ".join(f"{z.real:+.6e}{z.imag:+.6e}i" for z in row) + "\n")
        out.write(f"min eigenvalue (scaled) = {rep.min_eigenvalue:+.12e}\n")
        out.write(f"verdict: {verdict}\n")
    return EXIT_VIOLATION if (cfg.assert_nonnegative and rep.violates) else EXIT_OK


# Published values and the tolerances they are checked at.
PUBLISHED_KERNEL_ZETA = (-5.389100507182945, -69)
PUBLISHED_HERGLOTZ_ZETA = -0.000131957
PUBLISHED_KERNEL_CHI4 = (-2.310349004993483456, -45)
PUBLISHED_HERGLOTZ_CHI4 = -0.000422340607
CHI4_ZERO_ORDINATE = 67.6369208635460683980549
ZETA_ZERO_INDEX = 34


@dataclass
class ReproLine:
    label: str
    computed: str
    published: str
    deviation: float
    deviation_kind: str
    tolerance: float

    @property
    def ok(self) -> bool:
        return self.deviation <= self.tolerance

    relative: float = 0.0

    def render(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return (f"{self.label}: computed {self.computed}  published {self.published}  "
                f"rel deviation {self.relative:.2e}  "
                f"({self.deviation_kind} tol {self.tolerance:.0e})  {status}")


def _kernel_line(label, zero, published, params) -> ReproLine:
    v = kernel_positivity(zero, params)
    m, e10 = scaled.real_part_decimal(v.value)
    pm, pe = published
    dev = abs(m * 10.0 ** (e10 - pe) - pm) / abs(pm)
    return ReproLine(label, scaled.format_real(m, e10), scaled.format_real(pm, pe), dev, "rel", 1e-6, dev)


def repro_lines(params: EvalParams, cache: ZeroCache | None) -> list[ReproLine]:
    z34 = nth_zero(ZETA_ZERO_INDEX, LFunctionKind.ZETA, params, cache)
    z4 = locate_zero_near(CHI4_ZERO_ORDINATE, LFunctionKind.CHI4, params)
    g = herglotz_ratio(282.0, LFunctionKind.ZETA, params)
    g4 = herglotz_ratio(8714.2, LFunctionKind.CHI4, params)
    return [
        _kernel_line(f"zeta kernel at zero #{ZETA_ZERO_INDEX} (t={z34.ordinate:.13f})", z34,
                     PUBLISHED_KERNEL_ZETA, params),
        ReproLine("zeta Herglotz g(282)", f"{g:.12e}", f"{PUBLISHED_HERGLOTZ_ZETA:.6e}",
                  abs(g - PUBLISHED_HERGLOTZ_ZETA), "abs", 1e-8,
                  abs(g - PUBLISHED_HERGLOTZ_ZETA) / abs(PUBLISHED_HERGLOTZ_ZETA)),
        _kernel_line(f"chi4 kernel at zero t={z4.ordinate:.13f}", z4, PUBLISHED_KERNEL_CHI4, params),
        ReproLine("chi4 Herglotz g4(8714.2)", f"{g4:.12e}", f"{PUBLISHED_HERGLOTZ_CHI4:.9e}",
                  abs(g4 - PUBLISHED_HERGLOTZ_CHI4) / abs(PUBLISHED_HERGLOTZ_CHI4), "rel", 1e-6,
                  abs(g4 - PUBLISHED_HERGLOTZ_CHI4) / abs(PUBLISHED_HERGLOTZ_CHI4)),
    ]


def _cmd_repro(cfg: RunConfig, out) -> int:
    lines = repro_lines(cfg.params, _cache(cfg))
    if cfg.output_format == "json":
        out.write(_json([{"label": ln.label, "computed": ln.computed, "published": ln.published,
                          "deviation": ln.deviation, "relative_deviation": ln.relative, "deviation_kind": ln.deviation_kind,
                          "tolerance": ln.tolerance, "pass": ln.ok} for ln in lines]) + "\n")
    elif cfg.output_format == "csv":
        out.write("label,computed,published,deviation,deviation_kind,tolerance,pass\n")
        for ln in lines:
            out.write(f"\"{ln.label}\",{ln.computed},{ln.published},{ln.deviation:.3e},"
                      f"{ln.deviation_kind},{ln.tolerance:.0e},{int(ln.ok)}\n")
    else:
        for ln in lines:
            out.write(ln.render() + "\n")
    return EXIT_OK if all(ln.ok for ln in lines) else EXIT_NUMERICAL


_DISPATCH = {
    "eval": _cmd_eval,
    "zeros": _cmd_zeros,
    "kernel-check": _cmd_kernel,
    "herglotz": _cmd_herglotz,
    "scan": _cmd_scan,
    "gram": _cmd_gram,
    "repro": _cmd_repro,
}


def run(cfg: RunConfig, stdout=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    buf = io.StringIO()
    status = _DISPATCH[cfg.command](cfg, buf)
    if cfg.output_path is not None:
        cfg.output_path.write_text(buf.getvalue())
    else:
        stdout.write(buf.getvalue())
    return status


# Options whose values may legitimately begin with "-" (negative real parts).
_SIGNED_VALUE_OPTIONS = ("--s", "--range", "--points", "--ordinate", "--t", "--from", "--to")


def _glue_signed_values(argv: list[str]) -> list[str]:
    """Rewrite ``--points -1,2`` as ``--points=-1,2`` so argparse accepts it."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _SIGNED_VALUE_OPTIONS:
            nxt = next(it, None)
            if nxt is None:
                out.append(tok)
            elif nxt.startswith("-") and len(nxt) > 1 and (nxt[1].isdigit() or nxt[1] == "."):
                out.append(f"{tok}={nxt}")
            else:
                out.extend([tok, nxt])
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        ns = parser.parse_args(_glue_signed_values(argv))
        cfg = _config(ns)
    except UsageError as exc:
        print(f"dbz: usage-error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return run(cfg)
    except NumericalError as exc:
        print(f"dbz: numerical-error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ZeroDivisionError, OverflowError, FloatingPointError) as exc:
        print(f"dbz: numerical-error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
