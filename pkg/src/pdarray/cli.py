"""``pdarray`` command line: sweeps, plots, verification and layout dumps.

Exit codes: 0 success, 1 usage or input error, 2 numerical or verification
failure. ``PDARRAY_OUTPUT_DIR`` sets where outputs go when no explicit path
is given; without it, CSV goes to stdout.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import verify as verify_mod
from .beams import BeamKind, BeamPattern, Normalization, capture_profile
from .errors import CsvParseError, NumericalError, PdArrayError
from .hexgeom import DistanceModel, layout, layout_csv
from .plotting import PlotSpec, render_plot
from .sweeps import SweepKind, SweepSpec, run_sweep

OUTPUT_DIR_ENV = "PDARRAY_OUTPUT_DIR"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILURE = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for numerical failures here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(text):
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _name_list(text):
    return tuple(v.strip() for v in text.split(",") if v.strip())


def _nonneg_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected an integer >= 0, got {value}")
    return value


# config-file key -> (argparse dest, converter)
_SWEEP_KEYS = {
    "sweep": ("sweep", str),
    "G-max": ("G_max", _nonneg_int),
    "rho": ("rho", _float_list),
    "rho0": ("rho0", float),
    "xi": ("xi", _float_list),
    "snr-db": ("snr_db", _float_list),
    "beams": ("beams", _name_list),
    "out": ("out", str),
    "distance-model": ("distance_model", str),
    "normalization": ("normalization", str),
}


def read_config(path):
    """Parse a ``key = value`` file whose keys mirror the sweep flags.

    Blank lines and ``#`` comments are ignored; keys may use ``-`` or ``_``.
    """
    path = Path(path)
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    lookup = {k.lower().replace("_", "-"): k for k in _SWEEP_KEYS}
    values = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        canonical = lookup.get(key.lower().replace("_", "-"))
        if canonical is None:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        dest, convert = _SWEEP_KEYS[canonical]
        try:
            values[dest] = convert(value)
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise UsageError(f"{path}:{lineno}: {exc}") from None
    return values


def _output_dir():
    value = os.environ.get(OUTPUT_DIR_ENV)
    return Path(value) if value else None


def _emit(text, out, default_name):
    """Write ``text`` to ``out``, the env output dir, or stdout (in that order)."""
    if out is None:
        directory = _output_dir()
        if directory is None:
            sys.stdout.write(text)
            return None
        out = directory / default_name
    out = Path(out)
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc.strerror}") from None
    return out


def build_sweep_spec(args) -> SweepSpec:
    values = read_config(args.config) if args.config else {}
    for key, (dest, _) in _SWEEP_KEYS.items():
        flag_value = getattr(args, dest)
        if flag_value is not None:
            values[dest] = flag_value
    if "sweep" not in values:
        raise UsageError("no sweep kind given (use --sweep or a 'sweep =' config line)")
    try:
        kind = SweepKind(values.pop("sweep"))
    except ValueError:
        raise UsageError(f"unknown sweep kind; choose from {[k.value for k in SweepKind]}") from None
    values.pop("out", None)
    try:
        return SweepSpec(kind=kind, **values)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _cmd_sweep(args):
    spec = build_sweep_spec(args)
    out = args.out
    if out is None and args.config:
        out = read_config(args.config).get("out")
    text = run_sweep(spec)
    path = _emit(text, out, f"{spec.kind.value}.csv")
    if path is not None:
        print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK


def _cmd_plot(args):
    svg = args.svg
    if svg is None:
        directory = _output_dir() or Path(args.csv).parent
        svg = directory / (Path(args.csv).stem + ".svg")
    try:
        path = render_plot(args.csv, svg, PlotSpec(title=args.title))
    except OSError as exc:
        raise UsageError(f"{exc.filename}: {exc.strerror}") from None
    except CsvParseError as exc:
        raise UsageError(f"{args.csv}: {exc}") from None
    print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK


def _cmd_verify(args):
    try:
        results = verify_mod.run_checks(
            profile=args.profile, skip=args.skip or (), corner_perturbation=args.corner_perturbation
        )
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    report = verify_mod.report_csv(results)
    out = args.report
    if out is None and _output_dir() is not None:
        out = _output_dir() / "verify_report.csv"
    if out is not None:
        _emit(report, out, "verify_report.csv")
    failed = [r for r in results if not r.passed]
    for r in results:
        status = "pass" if r.passed else "FAIL"
        print(f"[{status}] {r.group}: {r.name}  observed={r.observed!s} expected={r.expected!s} tol={r.tolerance!s}")
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_OK if not failed else EXIT_FAILURE


def _cmd_layout(args):
    lay = layout(args.G, args.rho, args.distance_model)
    _emit(layout_csv(lay), args.out, f"layout_G{args.G}.csv")
    return EXIT_OK


def _cmd_profile(args):
    lay = layout(args.G, args.rho, args.distance_model)
    prof = capture_profile(BeamPattern(BeamKind(args.beam)), lay, args.normalization)
    _emit(prof.to_csv(), args.out, f"profile_{args.beam}_G{args.G}.csv")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pdarray", description="Photodetector-array loss-factor sweeps and checks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sw = sub.add_parser("sweep", help="run a parameter sweep and emit CSV")
    sw.add_argument("--sweep", choices=[k.value for k in SweepKind], default=None)
    sw.add_argument("--G-max", dest="G_max", type=_nonneg_int, default=None)
    sw.add_argument("--rho", type=_float_list, default=None, help="comma-separated PD radii (waist units)")
    sw.add_argument("--rho0", type=float, default=None)
    sw.add_argument("--xi", type=_float_list, default=None, help="comma-separated bandwidth exponents")
    sw.add_argument("--snr-db", dest="snr_db", type=_float_list, default=None, help="reference SNRs in dB")
    sw.add_argument("--beams", type=_name_list, default=None, help="e.g. gaussian,lg10,uniform")
    sw.add_argument("--out", default=None)
    sw.add_argument("--distance-model", dest="distance_model", choices=[d.value for d in DistanceModel], default=None)
    sw.add_argument("--normalization", choices=[n.value for n in Normalization], default=None)
    sw.add_argument("--config", default=None, help="key=value file; flags override it")
    sw.set_defaults(func=_cmd_sweep)

    pl = sub.add_parser("plot", help="render a sweep CSV as SVG")
    pl.add_argument("csv")
    pl.add_argument("svg", nargs="?", default=None)
    pl.add_argument("--title", default=None)
    pl.set_defaults(func=_cmd_plot)

    ve = sub.add_parser("verify", help="cross-check closed forms against oracles")
    ve.add_argument("--profile", choices=sorted(verify_mod.TOLERANCE_PROFILES), default="default")
    ve.add_argument("--skip", action="append", metavar="GROUP", help=f"one of {', '.join(verify_mod.CHECK_GROUPS)}")
    ve.add_argument("--report", default=None, help="CSV report path")
    ve.add_argument("--corner-perturbation", type=float, default=0.0, help="fault injection: relative corner offset error")
    ve.set_defaults(func=_cmd_verify)

    for name, func, help_text in (("layout", _cmd_layout, "dump PD positions"), ("profile", _cmd_profile, "dump captured fractions")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--G", type=_nonneg_int, required=True)
        p.add_argument("--rho", type=float, required=True)
        p.add_argument("--distance-model", dest="distance_model", choices=[d.value for d in DistanceModel], default="lumped-ring")
        p.add_argument("--out", default=None)
        if name == "profile":
            p.add_argument("--beam", choices=[b.value for b in BeamKind], default="gaussian")
            p.add_argument("--normalization", choices=[n.value for n in Normalization], default="reference-disk")
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"pdarray: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CsvParseError as exc:
        print(f"pdarray: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"pdarray: numerical failure: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except PdArrayError as exc:
        print(f"pdarray: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
