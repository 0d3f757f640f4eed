"""embednum command groups"""

import argparse

from embednum.services.bounds import Mode
from embednum.services.propagate import BoundLedger, propagate, seed_ledger


def mode_from(args: argparse.Namespace) -> Mode:
    return Mode.ASSUME_11_8 if args.assume_11_8 else Mode.FURUTA_10_8


def build_ledger(n_max: int, args: argparse.Namespace) -> BoundLedger:
    """Seed and propagate a ledger with the registry loaded for this run."""
    return propagate(seed_ledger(n_max, mode_from(args), registry=args.registry))
