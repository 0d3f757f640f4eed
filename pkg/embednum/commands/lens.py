"""
Lens Commands - bounds for lens spaces and the L_n ledger.
"""

import argparse

from embednum.commands import build_ledger, mode_from
from embednum.config import Config
from embednum.services.manifolds import LensSpace, lens_bounds
from embednum.utils.logging import get_logger
from embednum.utils.output import OutputRecord, render_records

logger = get_logger(__name__)


def lens(args: argparse.Namespace, config: Config) -> str:
    """Bounds for L(p,q); for L(2k,1) also the plumbing spin structure from the ledger."""
    space = LensSpace.of(args.p, args.q)
    bound = lens_bounds(space, mode_from(args), trace=args.trace)
    records = [OutputRecord.from_bound(str(space), bound, list(bound.notes) if args.trace else None)]
    p = space.p
    if p % 2 == 0 and space.q in (1, p - 1) and p <= config.table_max:
        ledger = build_ledger(p, args)
        records.append(OutputRecord.from_bound(
            f"L_{p} (plumbing spin structure)", ledger.bound(p),
            ledger.explain(p) if args.trace else None,
        ))
    elif p % 2 == 0 and space.q in (1, p - 1):
        logger.info(f"Skipping the spin-refined ledger for p = {p} > {config.table_max}")
    return render_records(records, config.output_format)


def lens_table(args: argparse.Namespace, config: Config) -> str:
    """Ledger intervals for L_2, ..., L_N after propagation."""
    n_max = args.max or config.table_max
    ledger = build_ledger(n_max, args)
    records = [
        OutputRecord.from_bound(f"L_{n}", ledger.bound(n), ledger.explain(n) if args.trace else None)
        for n in ledger.indices
    ]
    return render_records(records, config.output_format)


def setup(subparsers, parents):
    """Register the lens commands."""
    parser = subparsers.add_parser("lens", parents=parents, help="bounds for the lens space L(P,Q)")
    parser.add_argument("p", type=int, metavar="P")
    parser.add_argument("q", type=int, metavar="Q")
    parser.set_defaults(handler=lens)

    parser = subparsers.add_parser("lens-table", parents=parents,
                                   help="propagated bounds for L_n = L(n, n-1), n = 2..N")
    parser.add_argument("--max", type=int, default=None, metavar="N")
    parser.set_defaults(handler=lens_table)
