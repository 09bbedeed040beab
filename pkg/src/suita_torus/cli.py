"""Command-line interface: ``suita-torus <subcommand> [flags]``.

Exit codes: 0 success, 1 verification failure, 2 usage/domain error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

from . import potentials as pot
from . import special_functions as sf
from . import verification as ver
from .errors import ConvergenceError, DomainError, PoleError

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

SUBCOMMANDS = ("eval", "scan-puncture", "scan-degeneration", "sup-green", "verify", "plot")

DEGENERATION_COLUMNS = ("im_tau", "ratio_punctured", "ratio_torus", "c_fund", "c_limit")
PUNCTURE_COLUMNS = ("r", "w", "c", "c_times_r", "ratio", "ratio_normalized")
REPORT_COLUMNS = ("check_name", "samples", "max_residual", "tolerance", "passed")

DEFAULT_VERIFY_TAUS = (1j, 2j, 0.3 + 1.2j)


class UsageError(Exception):
    """Bad command line; exits with status 2."""


class IoError(Exception):
    """Output could not be written; exits with status 3."""


# ---------------------------------------------------------------------------
# complex literals

_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_REAL_RE = re.compile(rf"([+-]?{_NUM})")
_IMAG_RE = re.compile(rf"([+-]?)({_NUM})?[ij]")
_BOTH_RE = re.compile(rf"([+-]?{_NUM})([+-])({_NUM})?[ij]")


def parse_complex(text: str) -> complex:
    """Parse ``a+bi``, ``a-bi``, ``a`` or ``bi`` (scientific notation allowed)."""
    s = text.strip().replace(" ", "")
    if m := _REAL_RE.fullmatch(s):
        return complex(float(m.group(1)), 0.0)
    if m := _IMAG_RE.fullmatch(s):
        mag = float(m.group(2)) if m.group(2) else 1.0
        return complex(0.0, -mag if m.group(1) == "-" else mag)
    if m := _BOTH_RE.fullmatch(s):
        mag = float(m.group(3)) if m.group(3) else 1.0
        return complex(float(m.group(1)), -mag if m.group(2) == "-" else mag)
    raise ValueError(f"not a complex literal: {text!r}")


def format_complex(z: complex) -> str:
    """Inverse of :func:`parse_complex` for finite values (17 significant digits)."""
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"cannot format non-finite {z!r}")
    return f"{z.real:.17g}{z.imag:+.17g}i"


def format_real(x: float) -> str:
    return f"{float(x):.17g}"


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, complex):
        return format_complex(v)
    if isinstance(v, float):
        return format_real(v)
    return str(v)


def to_json(obj, indent: int = 2, _level: int = 0) -> str:
    """Deterministic JSON with floats at 17 significant digits; non-finite floats become null."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_json_str(str(k))}: {to_json(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + to_json(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_real(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, complex):
        return _json_str(format_complex(obj))
    if hasattr(obj, "item"):  # numpy scalar
        return to_json(obj.item(), indent, _level)
    return _json_str(str(obj))


def _json_str(s: str) -> str:
    return json.dumps(s)


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _complex_arg(text):
    try:
        return parse_complex(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _tau_arg(text):
    tau = _complex_arg(text)
    if tau.imag <= 0:
        raise argparse.ArgumentTypeError(f"Im(tau) must be positive, got {text!r}")
    if tau.imag < sf.MIN_IM_TAU:
        raise argparse.ArgumentTypeError(f"Im(tau) must be >= {sf.MIN_IM_TAU}, got {text!r}")
    return tau


def _range_arg(text):
    parts = text.split(":")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected start:stop:step, got {text!r}") from None
    if not (step > 0 and stop >= start):
        raise argparse.ArgumentTypeError(f"need step > 0 and stop >= start, got {text!r}")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(n)]


def _radii_arg(text):
    try:
        radii = [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated radii, got {text!r}") from None
    if not radii or any(r <= 0 for r in radii):
        raise argparse.ArgumentTypeError("radii must be positive")
    return radii


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


EVAL_FUNCTIONS = (
    "nome", "theta1", "theta1-series", "theta1-prime", "eta",
    "green", "arakelov-metric", "evans", "fundamental-metric",
    "bergman-torus", "bergman-punctured", "suita-torus", "suita-punctured",
)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="suita-torus", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND", parser_class=_Parser)
    sub.required = True

    def common(p, default_format="csv"):
        p.add_argument("--out", type=Path, help="write to this file instead of stdout")
        p.add_argument("--format", choices=("csv", "json"), default=default_format)

    p = sub.add_parser("eval", help="evaluate one function and print the value")
    p.add_argument("--fn", choices=EVAL_FUNCTIONS, required=True)
    p.add_argument("--tau", type=_tau_arg, required=True)
    p.add_argument("--z", type=_complex_arg)
    p.add_argument("--w", type=_complex_arg)
    p.add_argument("--u", type=_complex_arg, default=0j)
    p.add_argument("--out", type=Path)
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")

    def scan_puncture_flags(p):
        p.add_argument("--tau", type=_tau_arg, default=1j)
        p.add_argument("--u", type=_complex_arg, default=0j)
        p.add_argument("--direction", type=_complex_arg, default=1 + 0j)
        p.add_argument("--radii", type=_radii_arg, default=[1e-1, 1e-2, 1e-3, 1e-4])

    def scan_degeneration_flags(p):
        p.add_argument("--u", type=_complex_arg, default=0j)
        p.add_argument("--w", type=_complex_arg, default=0.3 + 0j)
        p.add_argument("--im-tau", type=_range_arg, default=_range_arg("1:40:1"))

    p = sub.add_parser("scan-puncture", help="approach the puncture along a ray")
    scan_puncture_flags(p)
    common(p)
    p.add_argument("--plot", type=Path, help="also write an SVG chart of normalized ratio vs r")

    p = sub.add_parser("scan-degeneration", help="sweep tau = i t upward")
    scan_degeneration_flags(p)
    common(p)
    p.add_argument("--plot", type=Path, help="also write an SVG chart of ratio_punctured vs im_tau")

    p = sub.add_parser("sup-green", help="supremum of the Arakelov-Green function")
    p.add_argument("--tau", type=_tau_arg, required=True)
    p.add_argument("--grid", type=_positive_int, default=256)
    p.add_argument("--rounds", type=int, default=3)
    p.add_argument("--factor", type=_positive_int, default=8)
    common(p)

    p = sub.add_parser("verify", help="run the verification suite")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--tau", type=_tau_arg, action="append",
                   help="modulus to sample (repeatable; default i, 2i, 0.3+1.2i)")
    common(p, default_format="json")

    p = sub.add_parser("plot", help="SVG line chart of a scan column, with the CSV alongside")
    p.add_argument("--scan", choices=("degeneration", "puncture"), default="degeneration")
    p.add_argument("--input", type=Path, help="plot an existing scan CSV instead of running a scan")
    p.add_argument("--x", help="x column (default: the scan variable)")
    p.add_argument("--y", help="y column (default: ratio_punctured / ratio_normalized)")
    p.add_argument("--log-y", action="store_true")
    p.add_argument("--out", type=Path, required=True, help="SVG path; the CSV goes next to it")
    p.add_argument("--tau", type=_tau_arg, default=1j)
    p.add_argument("--u", type=_complex_arg, default=0j)
    p.add_argument("--w", type=_complex_arg, default=0.3 + 0j)
    p.add_argument("--direction", type=_complex_arg, default=1 + 0j)
    p.add_argument("--radii", type=_radii_arg, default=[1e-1, 1e-2, 1e-3, 1e-4])
    p.add_argument("--im-tau", type=_range_arg, default=_range_arg("1:40:1"))
    return parser


@dataclass
class CliCommand:
    subcommand: str
    options: argparse.Namespace


def parse_args(argv) -> CliCommand:
    """Parse and validate ``argv``; raises :class:`UsageError` on bad input."""
    ns = build_parser().parse_args(list(argv))
    if ns.subcommand == "eval":
        needs = {
            "theta1": ("z",), "theta1-series": ("z",), "green": ("z", "w"),
            "evans": ("z", "w"), "fundamental-metric": ("w",), "suita-punctured": ("w",),
        }.get(ns.fn, ())
        for name in needs:
            if getattr(ns, name) is None:
                raise UsageError(f"suita-torus eval: error: --fn {ns.fn} requires --{name}")
    return CliCommand(ns.subcommand, ns)


# ---------------------------------------------------------------------------
# output


def write_output(text: str, out: Path | None) -> None:
    """Write to ``out`` atomically (temp file + rename), or to stdout."""
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    out = Path(out)
    try:
        fd, tmp = tempfile.mkstemp(dir=out.parent if str(out.parent) else ".", prefix=f".{out.name}.")
        try:
            with os.fdopen(fd, "w", newline="") as fh:
                fh.write(text)
            os.chmod(tmp, 0o644)
            os.replace(tmp, out)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as exc:
        raise IoError(f"cannot write {out}: {exc}") from exc


def to_csv(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in columns])
    return buf.getvalue()


def _render(rows, columns, fmt):
    if fmt == "json":
        return to_json([{c: r[c] for c in columns} for r in rows]) + "\n"
    return to_csv(columns, rows)


def degeneration_rows(u, w, im_tau_values):
    return [
        {"im_tau": s.tau.imag, "ratio_punctured": s.ratio, "ratio_torus": s.ratio_torus,
         "c_fund": s.c, "c_limit": s.c_limit}
        for s in ver.degeneration_scan(u, w, im_tau_values)
    ]


def puncture_rows(tau, u, direction, radii):
    pt = pot.PuncturedTorus.from_tau(tau, u)
    return [
        {"r": s.r, "w": s.w, "c": s.c, "c_times_r": s.c_times_r, "ratio": s.ratio,
         "ratio_normalized": s.normalized_ratio}
        for s in ver.asymptotic_scan_puncture(pt, direction, radii)
    ]


def _eval_value(o):
    tau = o.tau
    nome = sf.nome_from_tau(tau)
    fn = o.fn
    if fn == "nome":
        return nome.q
    if fn == "theta1":
        return sf.theta1(o.z, nome)
    if fn == "theta1-series":
        return sf.theta1_series_oracle(o.z, nome)
    if fn == "theta1-prime":
        return sf.theta1_prime_at_zero(nome)
    if fn == "eta":
        return sf.dedekind_eta(nome)
    torus = pot.Torus(nome)
    if fn == "green":
        return pot.arakelov_green(torus, o.z, o.w)
    if fn == "arakelov-metric":
        return pot.arakelov_metric_torus(torus)
    if fn == "bergman-torus":
        return pot.bergman_density_torus(torus)
    if fn == "suita-torus":
        return pot.suita_ratio_torus(torus)
    pt = pot.PuncturedTorus(torus, o.u)
    if fn == "evans":
        return pot.evans_selberg(pt, o.w, o.z)
    if fn == "fundamental-metric":
        return pot.fundamental_metric(pt, o.w)
    if fn == "bergman-punctured":
        return pot.bergman_density_punctured(pt)
    if fn == "suita-punctured":
        return pot.suita_ratio_punctured(pt, o.w)
    raise UsageError(f"unknown function {fn!r}")  # pragma: no cover - argparse restricts choices


def _read_csv(path: Path):
    try:
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    return rows


def _column(rows, name, path):
    if not rows or name not in rows[0]:
        raise UsageError(f"suita-torus plot: error: column {name!r} not in {path}")
    return [float(r[name]) for r in rows]


def _write_svg(out, rows, xcol, ycol, log_y, title):
    from .plotting import line_chart_svg

    x = [float(r[xcol]) for r in rows]
    y = [float(r[ycol]) for r in rows]
    write_output(line_chart_svg(x, y, xcol, ycol, log_y=log_y, title=title), out)


def run(cmd: CliCommand) -> int:
    """Execute a parsed command; returns the process exit code."""
    o = cmd.options
    if cmd.subcommand == "eval":
        value = _eval_value(o)
        if o.format == "json":
            text = to_json({"fn": o.fn, "value": value}) + "\n"
        elif o.format == "csv":
            text = to_csv(("fn", "value"), [{"fn": o.fn, "value": value}])
        else:
            text = _fmt(value) + "\n"
        write_output(text, o.out)
        return EXIT_OK

    if cmd.subcommand == "scan-degeneration":
        rows = degeneration_rows(o.u, o.w, o.im_tau)
        write_output(_render(rows, DEGENERATION_COLUMNS, o.format), o.out)
        if o.plot:
            _write_svg(o.plot, rows, "im_tau", "ratio_punctured", True, "punctured Suita ratio")
        return EXIT_OK

    if cmd.subcommand == "scan-puncture":
        rows = puncture_rows(o.tau, o.u, o.direction, o.radii)
        write_output(_render(rows, PUNCTURE_COLUMNS, o.format), o.out)
        if o.plot:
            _write_svg(o.plot, rows, "r", "ratio_normalized", False, "normalized ratio near the puncture")
        return EXIT_OK

    if cmd.subcommand == "sup-green":
        config = ver.SupSearchConfig(coarse_grid=o.grid, refinement_rounds=o.rounds, refinement_factor=o.factor)
        s, argmax = ver.sup_green(pot.Torus.from_tau(o.tau), config)
        rows = [{"tau": o.tau, "s": s, "argmax": argmax, "exp_minus_2s": math.exp(-2 * s)}]
        write_output(_render(rows, ("tau", "s", "argmax", "exp_minus_2s"), o.format), o.out)
        return EXIT_OK

    if cmd.subcommand == "verify":
        taus = o.tau if o.tau else list(DEFAULT_VERIFY_TAUS)
        reports = ver.run_full_suite(o.seed, taus)
        if o.format == "json":
            text = to_json([r.to_dict() for r in reports]) + "\n"
        else:
            text = to_csv(REPORT_COLUMNS, [r.to_dict() for r in reports])
        write_output(text, o.out)
        return EXIT_OK if ver.suite_passed(reports) else EXIT_FAILED

    if cmd.subcommand == "plot":
        if o.input is not None:
            rows = _read_csv(o.input)
            header = list(rows[0]) if rows else []
            xcol = o.x or (header[0] if header else "")
            ycol = o.y or ("ratio_punctured" if "ratio_punctured" in header else "ratio_normalized")
        elif o.scan == "degeneration":
            rows = degeneration_rows(o.u, o.w, o.im_tau)
            xcol, ycol = o.x or "im_tau", o.y or "ratio_punctured"
        else:
            rows = puncture_rows(o.tau, o.u, o.direction, o.radii)
            xcol, ycol = o.x or "r", o.y or "ratio_normalized"
        source = o.input or "scan"
        _column(rows, xcol, source)
        _column(rows, ycol, source)
        if o.input is None:
            columns = DEGENERATION_COLUMNS if o.scan == "degeneration" else PUNCTURE_COLUMNS
            write_output(to_csv(columns, rows), Path(o.out).with_suffix(".csv"))
        _write_svg(o.out, rows, xcol, ycol, o.log_y, None)
        return EXIT_OK

    raise UsageError(f"unknown subcommand {cmd.subcommand!r}")  # pragma: no cover


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        return run(parse_args(argv))
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, PoleError, ConvergenceError) as exc:
        print(f"suita-torus: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IoError as exc:
        print(f"suita-torus: error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
