"""Command line: ``paritymzi run|verify|figure|width``.

Exit codes: 0 success, 1 verification failure, 2 usage or configuration
error, 3 I/O error.
"""
import argparse
import sys

from ..detection import conventional_fwhm, parity_fwhm, split_photons
from ..errors import DomainError, UsageError
from .engine import run
from .figures import FIGURES, figure_table
from .scenario import FORMATS, load_scenario
from .table import TableIOError, emit, to_csv, to_json
from .verify import verify

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


def _write(table, fmt, path):
    if path is None:
        sys.stdout.write(to_csv(table) if fmt == "csv" else to_json(table))
    else:
        emit(table, fmt, path)
        print(f"wrote {path}", file=sys.stderr)


def _cmd_run(args):
    try:
        scenario = load_scenario(args.scenario)
    except OSError as exc:
        raise TableIOError(f"cannot read {args.scenario}: {exc.strerror or exc}") from exc
    table = run(scenario)
    _write(table, args.format or scenario.output_format, args.out or scenario.output_path)
    return EXIT_OK


def _cmd_verify(args):
    report = verify("full" if args.full else "quick")
    print(report.format())
    return EXIT_OK if report.passed else EXIT_VERIFY


def _cmd_figure(args):
    _write(figure_table(args.number), args.format, args.out)
    return EXIT_OK


def _cmd_width(args):
    n_c, n_s = split_photons(args.n_in, args.eta)
    print(f"parity_fwhm {parity_fwhm(n_c, n_s, args.phi_c):.12g}")
    print(f"conventional_fwhm {conventional_fwhm():.12g}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="paritymzi",
        description="Sweeps, figure data and cross-checks for coherent x squeezed-vacuum interferometry.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="evaluate a scenario file")
    p.add_argument("scenario", help="path to a key = value scenario file")
    p.add_argument("--out", help="output path (default: output.path from the file, else stdout)")
    p.add_argument("--format", choices=FORMATS, help="override output.format")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("verify", help="run the cross-check matrix")
    p.add_argument("--full", action="store_true", help="include the slower checks")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("figure", help="data behind one figure")
    p.add_argument("number", type=int, choices=sorted(FIGURES))
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", choices=FORMATS, default="csv")
    p.set_defaults(func=_cmd_figure)

    p = sub.add_parser("width", help="parity fringe FWHM at phi = 0")
    p.add_argument("--eta", type=float, required=True, help="squeezed fraction n_s / n_in")
    p.add_argument("--n-in", type=float, required=True, help="total input photon number")
    p.add_argument("--phi-c", type=float, default=0.0, help="coherent phase")
    p.set_defaults(func=_cmd_width)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TableIOError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
