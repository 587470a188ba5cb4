"""Command-line interface: convert, cluster, dupes, top-senders, filter.

Machine output goes to --out or stdout; diagnostics (including the
skip-list of unparseable files) go to stderr. Exit codes: 0 success,
1 usage error, 2 data error, 3 I/O error. Log verbosity is controlled by
MAILMINER_LOG (quiet, info, debug).
"""

import argparse
import logging
import os
import sys

from .analysis import render_report, summarize, top_senders
from .cluster import KMeansConfig, kmeans, select_k
from .core import (
    DirectoryUnreadable,
    EmptyDataset,
    EmptyResultSchema,
    MalformedInput,
    NotNumeric,
    RaggedRow,
    TooFewRows,
    UnknownAttribute,
)
from .ingest import scan_corpus
from .tabular import (
    CANONICAL_ATTRIBUTES,
    duplicate_profile,
    filter_discretize,
    filter_randomize,
    filter_remove,
    filter_sample,
    read_csv,
    records_to_dataset,
    write_arff,
    write_csv,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_IO = 3

log = logging.getLogger("mailminer")

# Kind hints applied whenever a CSV carries the canonical email columns.
CANONICAL_HINTS = {"Date": "numeric", "HTML": ("nominal", ("yes", "no"))}

_REPORT_FORMATS = {"text": "text", "csv": "csv", "svg": "svg-bars"}


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; the CLI contract says 1
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _setup_logging():
    level = {"quiet": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}.get(
        os.environ.get("MAILMINER_LOG", "info"), logging.INFO
    )
    logging.basicConfig(stream=sys.stderr, level=level, format="%(message)s")


def _usage(message):
    print(f"mailminer: error: {message}", file=sys.stderr)
    return EXIT_USAGE


def _emit(write, out_path):
    """Run `write(sink)` against --out or stdout."""
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as f:
            write(f)
    else:
        write(sys.stdout)


def _scan(directory):
    result = scan_corpus(directory)
    log.info("records: %d  skipped: %d", len(result.records), len(result.skipped))
    for entry in result.skipped:
        log.warning("skipped %s: %s", entry.path, entry.reason)
    return result


def _split_attrs(spec_text):
    return [a for a in spec_text.split(",") if a]


def cmd_convert(args):
    attrs = _split_attrs(args.attrs)
    for name in attrs:
        if name not in CANONICAL_ATTRIBUTES:
            return _usage(f"unknown attribute {name!r} in --attrs")
    result = _scan(args.dir)
    ds = records_to_dataset(result.records, attrs)
    writer = write_csv if args.format == "csv" else write_arff
    _emit(lambda f: writer(ds, f), args.out)
    return EXIT_OK


def cmd_cluster(args):
    if (args.k is None) == (not args.auto_k):
        return _usage("exactly one of --k / --auto-k is required")
    if args.k is not None and args.k < 1:
        return _usage("--k must be >= 1")
    if args.auto_k and args.kmax < 2:
        return _usage("--kmax must be >= 2")
    if args.max_iter < 1:
        return _usage("--max-iter must be >= 1")
    ds = read_csv(args.csv, kind_hints=CANONICAL_HINTS, relation_name="emails")
    if args.k is not None:
        cfg = KMeansConfig(
            k=args.k, fixed_k=True, max_iterations=args.max_iter, seed=args.seed
        )
        model = kmeans(ds, cfg)
    else:
        cfg = KMeansConfig(
            fixed_k=False, k_max=args.kmax, max_iterations=args.max_iter, seed=args.seed
        )
        _, model = select_k(ds, cfg)
    summary = summarize(model, ds)
    _emit(lambda f: render_report(summary, _REPORT_FORMATS[args.report], f), args.out)
    return EXIT_OK


def cmd_dupes(args):
    attrs = _split_attrs(args.attrs)
    if not attrs:
        return _usage("--attrs must name at least one attribute")
    ds = read_csv(args.csv, kind_hints=CANONICAL_HINTS, relation_name="emails")
    try:
        profile = duplicate_profile(ds, attrs)
    except UnknownAttribute as exc:
        return _usage(str(exc))
    _emit(lambda f: render_report(profile, "text", f), args.out)
    return EXIT_OK


def cmd_top_senders(args):
    if args.n < 1:
        return _usage("-n must be >= 1")
    result = _scan(args.dir)
    report = top_senders(result.records, args.n)
    _emit(lambda f: render_report(report, "text", f), args.out)
    return EXIT_OK


def cmd_filter(args):
    hints = dict(CANONICAL_HINTS)
    discretize_target = None
    if args.discretize:
        name, sep, bins_text = args.discretize.rpartition(":")
        if not sep or not name:
            return _usage("--discretize needs the form name:bins")
        try:
            bins = int(bins_text)
        except ValueError:
            return _usage(f"bad bin count {bins_text!r}")
        if bins < 1:
            return _usage("--discretize bin count must be >= 1")
        discretize_target = (name, bins)
        # non-canonical targets are read as numeric; canonical text/nominal
        # columns keep their kind so discretizing them reports NotNumeric
        if name not in CANONICAL_ATTRIBUTES:
            hints[name] = "numeric"
    ds = read_csv(args.csv, kind_hints=hints, relation_name="emails")
    try:
        if args.remove:
            out = filter_remove(ds, _split_attrs(args.remove))
        elif args.sample is not None:
            if not 0 < args.sample <= 1:
                return _usage("--sample fraction must be in (0, 1]")
            out = filter_sample(ds, args.sample, args.seed)
        elif args.shuffle:
            out = filter_randomize(ds, args.seed)
        else:
            out = filter_discretize(ds, *discretize_target)
    except (UnknownAttribute, EmptyResultSchema, NotNumeric) as exc:
        return _usage(str(exc))
    _emit(lambda f: write_csv(out, f), args.out)
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="mailminer", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="scan an .eml corpus into CSV or ARFF")
    p.add_argument("dir")
    p.add_argument("--attrs", default=",".join(CANONICAL_ATTRIBUTES))
    p.add_argument("--format", choices=("csv", "arff"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("cluster", help="k-means over a converted CSV")
    p.add_argument("csv")
    p.add_argument("--k", type=int)
    p.add_argument("--auto-k", action="store_true", dest="auto_k")
    p.add_argument("--kmax", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iter", type=int, default=100, dest="max_iter")
    p.add_argument("--report", choices=tuple(_REPORT_FORMATS), default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("dupes", help="duplicate-instance profile of a CSV")
    p.add_argument("csv")
    p.add_argument("--attrs", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_dupes)

    p = sub.add_parser("top-senders", help="rank sender addresses by mail count")
    p.add_argument("dir")
    p.add_argument("-n", type=int, default=10)
    p.add_argument("--out")
    p.set_defaults(func=cmd_top_senders)

    p = sub.add_parser("filter", help="apply one preprocessing filter to a CSV")
    p.add_argument("csv")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--remove", metavar="NAMES")
    group.add_argument("--sample", type=float, metavar="FRACTION")
    group.add_argument("--shuffle", action="store_true")
    group.add_argument("--discretize", metavar="NAME:BINS")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_filter)

    return parser


def main(argv=None):
    _setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    try:
        return args.func(args)
    except (UnknownAttribute, EmptyResultSchema, NotNumeric) as exc:
        return _usage(str(exc))
    except (RaggedRow, TooFewRows, EmptyDataset, MalformedInput, ValueError) as exc:
        print(f"mailminer: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except DirectoryUnreadable as exc:
        print(f"mailminer: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"mailminer: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
