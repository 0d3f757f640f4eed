"""
Table Commands - the L(n,1) and L_n tables and the limit of eps(L_n)/n.
"""

import argparse

from embednum.commands import build_ledger
from embednum.config import Config
from embednum.services.propagate import TABLE_INDICES, emit_table, epsilon_L_bounds
from embednum.utils.output import render_mapping, render_table

TABLE_CHOICES = {"figure1": "figure1", "small-ln": "small_ln"}


def table(args: argparse.Namespace, config: Config) -> str:
    which = TABLE_CHOICES[args.which]
    ledger = build_ledger(max(TABLE_INDICES[which]), args)
    return render_table(emit_table(ledger, which), config.output_format, trace=args.trace)


def limit(args: argparse.Namespace, config: Config) -> str:
    ledger = build_ledger(config.table_max, args)
    bounds = epsilon_L_bounds(ledger)
    data = {
        "quantity": "lim eps(L_n)/n",
        "lower": str(bounds.lower),
        "upper": str(bounds.upper) if bounds.upper is not None else None,
        "lower_assumption": bounds.lower_assumption.value,
        "upper_assumption": bounds.upper_assumption.value,
        "upper_attained_at": bounds.witness,
    }
    if args.trace and bounds.witness is not None:
        data["trace"] = " | ".join(ledger.explain(bounds.witness))
    return render_mapping(data, config.output_format)


def setup(subparsers, parents):
    """Register the table commands."""
    parser = subparsers.add_parser("table", parents=parents, help="reproduce an exact table")
    parser.add_argument("which", choices=sorted(TABLE_CHOICES))
    parser.set_defaults(handler=table)

    parser = subparsers.add_parser("limit", parents=parents, help="bounds on lim eps(L_n)/n")
    parser.set_defaults(handler=limit)
