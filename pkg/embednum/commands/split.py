"""
Split Commands - the definite splittings Y_n and Z_n.
"""

import argparse

from embednum.commands import mode_from
from embednum.config import Config
from embednum.services.splitcon import yn_construction, zn_construction
from embednum.utils.output import OutputRecord, render_records

CONSTRUCTIONS = {"yn": yn_construction, "zn": zn_construction}


def split(args: argparse.Namespace, config: Config) -> str:
    report = CONSTRUCTIONS[args.kind](args.n, mode_from(args), trace=args.trace)
    trace = None
    if args.trace:
        trace = [f"check: {c}" for c in report.checks]
        if report.closed_form_lower is not None:
            trace.append(f"closed-form lower from the rank {report.fillings[0].b2} "
                         f"definite filling: {report.closed_form_lower}")
        if report.search is not None:
            trace.extend(report.search.trace_lines())
    record = OutputRecord.from_bound(report.manifold, report.eps, trace)
    return render_records([record], config.output_format)


def setup(subparsers, parents):
    """Register the split command."""
    parser = subparsers.add_parser("split", parents=parents,
                                   help="definite splitting manifolds Y_n (yn) and Z_n (zn)")
    parser.add_argument("kind", choices=sorted(CONSTRUCTIONS))
    parser.add_argument("n", type=int, metavar="N")
    parser.set_defaults(handler=split)
