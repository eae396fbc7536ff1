"""Command-line front end: ``helixinfo <command> [options]``.

Exit status is 0 on success, 1 for validation, consistency and
configuration errors (including bad flags), 2 for I/O errors.
"""
from __future__ import annotations

import argparse
import logging
import sys
from typing import Sequence

from . import __version__
from .aggregate import ALL, address_census, aggregate
from .classify import (
    PRESETS,
    Coverage,
    classify_address,
    country_tags,
    default_config,
    load_config,
    load_preset,
    match_country,
)
from .errors import HelixError
from .ingest import bundled_path, ingest_counts, ingest_published_rows, ingest_records
from .overlap import MODES, POLICIES, READINGS, STRICT, CountVector, decompose, interpretation_search
from .report import FORMATS, ClassifiedAddress, DecompositionRow, TrendReport, report, write_report
from .systemness import (
    BASES,
    CATEGORY_MODES,
    METHODS,
    systemness_test,
    transmission_row,
    transmission_series,
    trend_fit,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2


class UsageError(HelixError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _vector(text: str) -> CountVector:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) not in (7, 8):
        raise argparse.ArgumentTypeError("expected u,i,g,ui,ug,ig,uig[,total]")
    try:
        nums = [float(p) if "." in p or "e" in p.lower() else int(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not numeric: {text!r}") from None
    return CountVector(*nums[:7], total=nums[7] if len(nums) == 8 else None)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=FORMATS, default="table", help="output layout (default: table)")
    p.add_argument("--full-precision", action="store_true", help="print values unrounded")
    p.add_argument("-o", "--output", default="-", help="output file (default: stdout)")


def _counts_source(p: argparse.ArgumentParser, allow_vector: bool = True) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("counts", nargs="?", help="count file: year,u,i,g,ui,ug,ig,uig[,total]")
    src.add_argument("--table5", action="store_true", help="use the bundled USPTO series (1993-2001)")
    if allow_vector:
        src.add_argument("--vector", type=_vector, help="one inline vector u,i,g,ui,ug,ig,uig[,total]")


def _rules_source(p: argparse.ArgumentParser) -> None:
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--rules", help="rules/gazetteer JSON file")
    grp.add_argument("--preset", choices=PRESETS, help="bundled rule preset")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="helixinfo", description="Triple Helix information indicators.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("decompose", help="overlapping counts -> exclusive cells")
    _counts_source(p)
    p.add_argument("--policy", choices=POLICIES, default=STRICT)
    _common(p)

    p = sub.add_parser("transmission", help="T(uig) and bilateral transmissions per year")
    _counts_source(p)
    p.add_argument("--mode", choices=MODES, help="normalization (default: cube if total given, else closed7)")
    p.add_argument("--policy", choices=POLICIES, default=STRICT)
    p.add_argument("--exhaustive", action="store_true",
                   help="allow cube mode without a total: every item carries a term")
    _common(p)

    p = sub.add_parser("systemness", help="Markov vs trend prediction test")
    _counts_source(p, allow_vector=False)
    p.add_argument("--target", type=int, required=True, help="year to predict")
    p.add_argument("--modes", nargs="+", choices=tuple(CATEGORY_MODES), default=list(CATEGORY_MODES))
    p.add_argument("--method", choices=METHODS, default="linear")
    p.add_argument("--basis", choices=BASES, default="shares")
    p.add_argument("--policy", choices=POLICIES, default=STRICT)
    _common(p)

    p = sub.add_parser("trend", help="least-squares trend with r²")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("counts", nargs="?", help="count file; T(uig) in mbit is fitted")
    src.add_argument("--table5", action="store_true", help="use the bundled USPTO series")
    src.add_argument("--values", help="year,value file to fit directly")
    p.add_argument("--window", nargs=2, type=int, metavar=("FIRST", "LAST"))
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--policy", choices=POLICIES, default=STRICT)
    _common(p)

    p = sub.add_parser("classify", help="sector and country tags per address")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("records", nargs="?", help="JSON-lines record file")
    src.add_argument("--address", action="append", help="classify this address (repeatable)")
    _rules_source(p)
    p.add_argument("--skip-malformed", action="store_true")
    _common(p)

    p = sub.add_parser("aggregate", help="per-subset overlap counts and T(uig)")
    p.add_argument("records", help="JSON-lines record file")
    p.add_argument("--subset", action="append", dest="subsets", metavar="NAME",
                   help=f"subset name (repeatable; default {ALL!r})")
    _rules_source(p)
    p.add_argument("--skip-malformed", action="store_true")
    _common(p)

    p = sub.add_parser("census", help="address counts per sector")
    p.add_argument("records", help="JSON-lines record file")
    _rules_source(p)
    p.add_argument("--skip-malformed", action="store_true")
    _common(p)

    p = sub.add_parser("interpret", help="test both pair-column readings of published rows")
    p.add_argument("rows", nargs="?", help="CSV of published rows (default: bundled SCI 2000 table)")
    p.add_argument("--subset", action="append", dest="subsets", metavar="NAME")
    p.add_argument("--reading", action="append", choices=READINGS, dest="readings")
    _common(p)
    return parser


def _config(args):
    if getattr(args, "rules", None):
        return load_config(args.rules)
    if getattr(args, "preset", None):
        return load_preset(args.preset)
    return default_config()


def _frame(args):
    if args.table5:
        return ingest_counts(bundled_path("table5"))
    return ingest_counts(args.counts)


def _vectors(args):
    if getattr(args, "vector", None) is not None:
        return [args.vector]
    return list(_frame(args).vectors)


def _report_skips(skipped) -> None:
    for exc in skipped:
        print(f"skipped: {exc}", file=sys.stderr)


def _cmd_decompose(args):
    rows = []
    for v in _vectors(args):
        cube, rep = decompose(v, args.policy)
        rows.append(DecompositionRow(v.year, cube, rep))
    return report(rows, args.format, kind="decomposition", full_precision=args.full_precision)


def _cmd_transmission(args):
    if args.vector is not None:
        rows = [transmission_row(args.vector, args.mode, args.policy, exhaustive=args.exhaustive)]
    else:
        rows = transmission_series(_frame(args), args.mode, args.policy, exhaustive=args.exhaustive)
    modes = sorted({r.mode for r in rows})
    print(f"normalization: {', '.join(modes)}", file=sys.stderr)
    return report(rows, args.format, kind="transmission", full_precision=args.full_precision)


def _cmd_systemness(args):
    frame = _frame(args)
    results = [
        systemness_test(frame.with_mode(m), args.target, method=args.method, basis=args.basis, policy=args.policy)
        for m in args.modes
    ]
    return report(results, args.format, kind="systemness", full_precision=args.full_precision)


def _read_values(path):
    import csv

    points = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or len(header) != 2:
            raise UsageError(f"{path}: expected a two-column header year,value")
        for row in reader:
            if not row:
                continue
            try:
                points.append((int(row[0]), float(row[1])))
            except (ValueError, IndexError):
                raise UsageError(f"{path}:{reader.line_num}: malformed row {row!r}") from None
    return points


def _cmd_trend(args):
    if args.values and args.mode:
        raise UsageError("--mode applies to count files, not to --values")
    window = tuple(args.window) if args.window else None
    if args.values:
        points, mode = _read_values(args.values), None
    else:
        rows = transmission_series(_frame(args), args.mode, args.policy)
        points = [(r.year, r.t_uig.millibits) for r in rows]
        mode = rows[0].mode if rows else None
    fit = trend_fit(points, window)
    n = len([p for p in points if window is None or window[0] <= p[0] <= window[1]])
    return report(TrendReport(fit, window, n, mode), args.format, kind="trend", full_precision=args.full_precision)


def _cmd_classify(args):
    cfg = _config(args)
    rows = []
    if args.address:
        for k, address in enumerate(args.address, start=1):
            country = match_country(address, cfg.gazetteer)
            rows.append(ClassifiedAddress(str(k), address, classify_address(address, cfg.rules),
                                          country_tags(country, cfg.groups)))
    else:
        skipped: list = []
        for rec in ingest_records(args.records, cfg, skip_malformed=args.skip_malformed, skipped=skipped):
            for address, label, tags in zip(rec.addresses, rec.sector_labels, rec.country_tags):
                rows.append(ClassifiedAddress(rec.record_id, address, label, tags))
        _report_skips(skipped)
    return report(rows, args.format, kind="classification", full_precision=args.full_precision)


def _cmd_aggregate(args):
    cfg = _config(args)
    subsets = args.subsets or [ALL]
    # validate names before reading the file
    aggregate([], subsets, cfg)
    skipped: list = []
    coverage = Coverage()
    records = ingest_records(args.records, cfg, skip_malformed=args.skip_malformed,
                             skipped=skipped, coverage=coverage)
    tables = aggregate(records, subsets, cfg)
    _report_skips(skipped)
    print(f"country coverage: {coverage.matched} of {coverage.matched + coverage.unmatched} addresses",
          file=sys.stderr)
    return report(tables, args.format, kind="subsets", full_precision=args.full_precision)


def _cmd_census(args):
    cfg = _config(args)
    skipped: list = []
    census = address_census(ingest_records(args.records, cfg, skip_malformed=args.skip_malformed, skipped=skipped))
    _report_skips(skipped)
    return report(census, args.format, kind="census", full_precision=args.full_precision)


def _cmd_interpret(args):
    rows = ingest_published_rows(args.rows)
    if args.subsets:
        known = {r.name for r in rows}
        unknown = [s for s in args.subsets if s not in known]
        if unknown:
            raise UsageError(f"subsets not in the table: {unknown}")
        rows = [r for r in rows if r.name in args.subsets]
    results = interpretation_search(rows, tuple(args.readings or READINGS))
    return report(results, args.format, kind="readings", full_precision=args.full_precision)


COMMANDS = {
    "decompose": _cmd_decompose,
    "transmission": _cmd_transmission,
    "systemness": _cmd_systemness,
    "trend": _cmd_trend,
    "classify": _cmd_classify,
    "aggregate": _cmd_aggregate,
    "census": _cmd_census,
    "interpret": _cmd_interpret,
}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except HelixError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        text = COMMANDS[args.command](args)
        write_report(text, args.output)
    except HelixError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
