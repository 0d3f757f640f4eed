"""
Form Command - invariants of a symmetric integer matrix read from a file.
"""

import argparse

from embednum.config import Config
from embednum.services.forms import load_form, summarize
from embednum.utils.output import render_mapping


def form(args: argparse.Namespace, config: Config) -> str:
    return render_mapping(summarize(load_form(args.file)).to_dict(), config.output_format)


def setup(subparsers, parents):
    """Register the form command."""
    parser = subparsers.add_parser("form", parents=parents,
                                   help='rank, signature, determinant and parity of {"n", "rows"} JSON')
    parser.add_argument("--file", required=True, metavar="PATH")
    parser.set_defaults(handler=form)
