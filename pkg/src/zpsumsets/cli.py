"""Command line interface.

Subcommands: ``sumset``, ``diam``, ``transform`` (excess set and all
Davenport splits of one pair), ``verify`` (exhaustive or sampled theorem
verification with a JSON report, CSV projection and optional figures) and
``search`` (extremal witness hunt).

Exit codes: 0 run completed with zero conclusion failures; 1 at least one
counterexample was found (the report is still written); 2 usage or
configuration error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .core import ResidueSet, residues_from_csv, diameter, min_cover_ap
from .davenport import build_context, splits
from .harness import (
    CardinalityFilters,
    ConfigError,
    RunConfig,
    SEARCH_CRITERIA,
    extremal_search,
    run_verification,
)
from . import report as report_mod


def _add_p(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--p", type=int, required=True, help="prime modulus")


def _add_filters(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--min-a", type=int, default=None, help="lower bound on |A|")
    sp.add_argument("--max-a", type=int, default=None, help="upper bound on |A|")
    sp.add_argument("--min-b", type=int, default=None, help="lower bound on |B|")
    sp.add_argument("--max-b", type=int, default=None, help="upper bound on |B|")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zpsumsets",
        description="Sumset arithmetic over Z/pZ and theorem verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("sumset", help="print the Minkowski sum A+B")
    _add_p(sp)
    sp.add_argument("--a", required=True, help="members of A, comma separated")
    sp.add_argument("--b", required=True, help="members of B, comma separated")

    sp = sub.add_parser("diam", help="print the diameter and a minimal cover of A")
    _add_p(sp)
    sp.add_argument("--a", required=True, help="members of A, comma separated")

    sp = sub.add_parser("transform", help="print E and all Davenport splits for (A, B)")
    _add_p(sp)
    sp.add_argument("--a", required=True, help="members of A, comma separated")
    sp.add_argument("--b", required=True, help="members of B (must contain 0, |B| >= 2)")

    sp = sub.add_parser("verify", help="verify one theorem exhaustively or by sampling")
    _add_p(sp)
    sp.add_argument("--theorem", required=True, help="theorem id (see README)")
    sp.add_argument("--exhaustive", action="store_true", help="sweep the whole space")
    sp.add_argument("--samples", type=int, default=None, help="number of sampled instances")
    sp.add_argument("--seed", type=int, default=0, help="sampling seed (default 0)")
    sp.add_argument("--workers", type=int, default=1, help="worker processes")
    sp.add_argument("--out", default=None, help="write the JSON report here")
    sp.add_argument("--csv", default=None, help="write the CSV projection here")
    sp.add_argument("--figures", default=None, help="render figures into this directory")
    sp.add_argument("--max-counterexamples", type=int, default=100)
    sp.add_argument("--constant", default=None, help="freiman_24 doubling constant, e.g. 2.4 or 12/5")
    sp.add_argument("--divisor", default=None, help="freiman_24 cardinality bound divisor, e.g. 35")
    _add_filters(sp)

    sp = sub.add_parser("search", help="hunt extremal witnesses")
    _add_p(sp)
    sp.add_argument("--criterion", required=True, choices=SEARCH_CRITERIA)
    sp.add_argument("--out", default=None, help="write the witnesses as JSON here")
    _add_filters(sp)
    return parser


def _filters_from_args(args) -> CardinalityFilters:
    return CardinalityFilters(
        min_a=args.min_a, max_a=args.max_a, min_b=args.min_b, max_b=args.max_b
    )


def _cmd_sumset(args) -> int:
    a = residues_from_csv(args.p, args.a)
    b = residues_from_csv(args.p, args.b)
    from .core import sumset

    print(sumset(a, b).literal())
    return 0


def _cmd_diam(args) -> int:
    a = residues_from_csv(args.p, args.a)
    d = diameter(a)
    cover = min_cover_ap(a)
    print(f"diam={d} cover=(start={cover.start},d={cover.diff},k={cover.length})")
    return 0


def _cmd_transform(args) -> int:
    a = residues_from_csv(args.p, args.a)
    b = residues_from_csv(args.p, args.b)
    ctx = build_context(a, b)
    print(f"S={ctx.sum.literal()}")
    print(f"C={ctx.companion.literal()}")
    print(f"E={ctx.excess.literal()}")
    for s in splits(ctx):
        print(f"e={s.e} lower={s.lower.literal()} upper={s.upper.literal()}")
    return 0


def _cmd_verify(args) -> int:
    if args.exhaustive == (args.samples is not None):
        raise ConfigError("choose exactly one of --exhaustive or --samples N")
    kwargs = {}
    if args.constant is not None:
        kwargs["freiman_constant"] = Fraction(args.constant)
    if args.divisor is not None:
        kwargs["freiman_divisor"] = Fraction(args.divisor)
    config = RunConfig(
        theorem_id=args.theorem,
        p=args.p,
        mode="exhaustive" if args.exhaustive else "sample",
        sample_count=args.samples,
        seed=args.seed if not args.exhaustive else None,
        workers=args.workers,
        filters=_filters_from_args(args),
        max_counterexamples=args.max_counterexamples,
        **kwargs,
    )
    report = run_verification(config)
    print(report.summary())
    doc = report.to_json_doc()
    if args.out:
        print(f"report: {report_mod.write_json(doc, args.out)}")
    if args.csv:
        print(f"csv: {report_mod.write_csv(doc, args.csv)}")
    if args.figures:
        from .plots import render_report_figures

        for path in render_report_figures(doc, args.figures):
            print(f"figure: {path}")
    return 1 if report.failure_total else 0


def _cmd_search(args) -> int:
    witnesses = extremal_search(args.p, args.criterion, _filters_from_args(args))
    print(f"witnesses={len(witnesses)}")
    for w in witnesses:
        print(w)
    if args.out:
        doc = {
            "schema": "zp-sumsets/1",
            "search": {
                "criterion": args.criterion,
                "p": args.p,
                "filters": _filters_from_args(args).to_doc(),
            },
            "witness_count": len(witnesses),
            "witnesses": witnesses,
        }
        print(f"report: {report_mod.write_json(doc, args.out)}")
    return 0


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    commands = {
        "sumset": _cmd_sumset,
        "diam": _cmd_diam,
        "transform": _cmd_transform,
        "verify": _cmd_verify,
        "search": _cmd_search,
    }
    try:
        return commands[args.command](args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
