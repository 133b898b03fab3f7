"""``credit-engine`` command line.

Exit status: 0 on success, 1 on usage errors, 2 on data errors. Tables on
stdout use 6 significant digits; files keep full double precision.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import credit, effort, report, store
from .exceptions import (
    BaselineMissingError,
    CreditEngineError,
    DataError,
    UndefinedIndicatorError,
)

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def g6(x: float) -> str:
    return format(x, "#.6g")


def _cmd_expected_value(args, out):
    model = credit.ValuationModel(args.v1)
    print(g6(credit.expected_value(args.n, model)), file=out)


def _cmd_credits(args, out):
    model = credit.ValuationModel(args.v1)
    vec = credit.credits_for(args.method, args.n, model)
    if args.scale_to_vn:
        vec = vec.scale_to(model)
    print("author\tcredit\tshare_pct", file=out)
    for i, (c, p) in enumerate(zip(vec.credits, vec.percentages), start=1):
        print(f"{i}\t{g6(c)}\t{g6(p)}", file=out)
    print(f"total\t{g6(vec.total)}", file=out)


def _cmd_simulate(args, out):
    model = credit.ValuationModel(args.v1)
    if args.chain:
        results = effort.chain_estimate(
            args.n, args.samples, args.seed, args.mode, args.sampler, model, args.workers
        )
    else:
        v_prev = credit.expected_value(args.n - 1, model) if args.n >= 2 else model.base_value
        results = [effort.estimate_vn(args.n, v_prev, args.samples, args.seed, args.sampler, args.workers)]
    print("n\testimate\tstd_error\ttheoretical\taccepted\tdrawn\tacceptance_rate", file=out)
    for r in results:
        print(
            "\t".join(
                (
                    str(r.n),
                    g6(r.estimate),
                    g6(r.standard_error),
                    g6(credit.expected_value(r.n, model)),
                    str(r.samples_accepted),
                    str(r.samples_drawn),
                    g6(r.acceptance_rate),
                )
            ),
            file=out,
        )
    if args.chain and args.mode == "full":
        print(f"# propagated std_error of n={results[-1].n}: {g6(effort.propagated_standard_error(results))}", file=out)


def _cmd_ingest(args, out):
    result = store.ingest(args.input, args.format)
    for rej in result.rejections:
        print(f"{args.input}:{rej.line}: rejected: {rej.reason}", file=sys.stderr)
    stats = store.build_stats(result.records, args.year_min, args.year_max, args.doc_type, args.top_bin)
    store.persist_stats(stats.bins, stats.reference_sets, args.out)
    print(f"read\t{len(result.records)}", file=out)
    print(f"rejected\t{len(result.rejections)}", file=out)
    print(f"kept\t{len(stats.records)}", file=out)
    print(f"reference_sets\t{len(stats.reference_sets)}", file=out)
    print(f"bins\t{len(stats.bins)}", file=out)


def _cmd_compare(args, out):
    rows = report.compare(args.stats, range(1, args.n_max + 1), args.out)
    out.write(report.format_table(rows, "#.6g"))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="credit-engine", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("expected-value", help="expected value of an n-author publication")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--v1", type=float, default=1.0, help="single-author value (default 1)")
    s.set_defaults(func=_cmd_expected_value)

    s = sub.add_parser("credits", help="per-author credits under a counting method")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--method", required=True, choices=[m.value for m in credit.CountingMethod])
    s.add_argument("--scale-to-vn", action="store_true", help="rescale shares to the n-author expected value")
    s.add_argument("--v1", type=float, default=1.0)
    s.set_defaults(func=_cmd_credits)

    s = sub.add_parser("simulate", help="Monte Carlo estimate of the n-author value")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--samples", type=int, default=10**6)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--sampler", choices=["rejection", "simplex"], default="simplex")
    s.add_argument("--chain", action="store_true", help="run every step n = 2..N")
    s.add_argument("--mode", choices=["verify", "full"], default="verify")
    s.add_argument("--workers", type=int, default=None)
    s.add_argument("--v1", type=float, default=1.0)
    s.set_defaults(func=_cmd_simulate)

    s = sub.add_parser("ingest", help="normalise a publication file into a stats file")
    s.add_argument("--input", required=True)
    s.add_argument("--format", choices=["csv", "jsonl"], required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--year-min", type=int, default=store.DEFAULT_YEAR_MIN)
    s.add_argument("--year-max", type=int, default=store.DEFAULT_YEAR_MAX)
    s.add_argument("--doc-type", default=store.DEFAULT_DOC_TYPE)
    s.add_argument("--top-bin", type=int, default=store.DEFAULT_TOP_BIN)
    s.set_defaults(func=_cmd_ingest)

    s = sub.add_parser("compare", help="theoretical vs empirical comparison table")
    s.add_argument("--stats", required=True)
    s.add_argument("--n-max", type=int, required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=_cmd_compare)
    return p


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(str(exc).rstrip(), file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        args.func(args, out)
    except (DataError, UndefinedIndicatorError, BaselineMissingError) as exc:
        print(f"credit-engine: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (CreditEngineError, ValueError) as exc:
        print(f"credit-engine: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def main():
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    sys.exit(run())
