"""
Manifold Commands - Brieskorn spheres, knot surgeries, branched covers.
"""

import argparse

from embednum.commands import mode_from
from embednum.config import Config
from embednum.services.manifolds import Brieskorn, brieskorn_bounds, dbc_upper, surgery_eps_bounds
from embednum.utils.output import OutputRecord, render_records


def brieskorn(args: argparse.Namespace, config: Config) -> str:
    space = Brieskorn.of(args.p, args.q, args.r)
    bound = brieskorn_bounds(space, mode_from(args), d_zero=args.d_zero, trace=args.trace)
    record = OutputRecord.from_bound(str(space), bound, list(bound.notes) if args.trace else None)
    return render_records([record], config.output_format)


def surgery(args: argparse.Namespace, config: Config) -> str:
    bound = surgery_eps_bounds(args.p, args.q)
    record = OutputRecord.from_bound(f"S^3_{{{args.p}/{args.q}}}(K)", bound,
                                     list(bound.notes) if args.trace else None)
    return render_records([record], config.output_format)


def dbc(args: argparse.Namespace, config: Config) -> str:
    bound = dbc_upper(args.genus, args.unknotting)
    record = OutputRecord.from_bound(f"Sigma(K), g={args.genus}, u={args.unknotting}", bound)
    return render_records([record], config.output_format)


def setup(subparsers, parents):
    """Register the manifold commands."""
    parser = subparsers.add_parser("brieskorn", parents=parents, help="bounds for Sigma(P,Q,R)")
    for name in ("p", "q", "r"):
        parser.add_argument(name, type=int, metavar=name.upper())
    parser.add_argument("--d-zero", dest="d_zero", action="store_true",
                        help="the d-invariant vanishes: no definite spin filling")
    parser.set_defaults(handler=brieskorn)

    parser = subparsers.add_parser("surgery", parents=parents,
                                   help="knot-independent bounds for P/Q surgery on a knot")
    parser.add_argument("p", type=int, metavar="P")
    parser.add_argument("q", type=int, metavar="Q")
    parser.set_defaults(handler=surgery)

    parser = subparsers.add_parser("dbc", parents=parents,
                                   help="upper bound for the double branched cover of a knot")
    parser.add_argument("--genus", type=int, required=True, metavar="G")
    parser.add_argument("--unknotting", type=int, required=True, metavar="U")
    parser.set_defaults(handler=dbc)
