"""
Bound Propagation Service.
A ledger of intervals for the embedding numbers of L_n = L(n, n-1) (for
even n, the spin structure bounding the plumbing), seeded with computed
bounds and cited facts and closed under the step and subadditivity rules.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from embednum.services.bounds import Assumption, Bound, Direction, Mode, weakest
from embednum.services.facts import FactRegistry, get_fact_registry
from embednum.services.kirby import chain_presentations
from embednum.services.obstruct import (
    SpinFilling,
    SplitConstraints,
    min_embedding_lower,
    spin_filling_b2_parity,
)
from embednum.utils.logging import get_logger

logger = get_logger(__name__)

LOWER = "lower"
UPPER = "upper"


@dataclass(frozen=True)
class Derivation:
    """One tightening step: the rule, the value it produced and the steps it used."""
    rule: str
    index: int
    side: str
    value: int
    inputs: Tuple["Derivation", ...] = ()
    assumption: Assumption = Assumption.UNCONDITIONAL
    citation: str = ""

    def lines(self, depth: int = 0) -> List[str]:
        pad = "  " * depth
        cite = f" [{self.citation}]" if self.citation else ""
        out = [f"{pad}{self.side}(L_{self.index}) = {self.value} by {self.rule}{cite}"]
        for source in self.inputs:
            out.extend(source.lines(depth + 1))
        return out

    def rules_used(self) -> List[str]:
        used = [self.rule]
        for source in self.inputs:
            used.extend(r for r in source.rules_used() if r not in used)
        return used


class LedgerContradiction(Exception):
    """An interval emptied: the seeds or the fact registry are inconsistent."""

    def __init__(self, n: int, lower: Derivation, upper: Derivation):
        self.n = n
        self.lower = lower
        self.upper = upper
        chain = "\n".join(lower.lines(1) + upper.lines(1))
        super().__init__(f"contradiction at L_{n}: lower {lower.value} > upper {upper.value}\n{chain}")


@dataclass
class LedgerEntry:
    n: int
    lower: Optional[Derivation] = None
    upper: Optional[Derivation] = None
    history: List[Derivation] = field(default_factory=list)

    @property
    def lower_value(self) -> int:
        return self.lower.value if self.lower else 0

    @property
    def upper_value(self) -> Optional[int]:
        return self.upper.value if self.upper else None

    @property
    def exact(self) -> bool:
        return self.upper is not None and self.lower_value == self.upper.value


class BoundLedger:
    """
    Intervals [lower, upper] for L_2, ..., L_{n_max} with derivation chains.
    """

    def __init__(self, n_max: int, mode: Mode = Mode.FURUTA_10_8,
                 registry: Optional[FactRegistry] = None):
        if n_max < 2:
            raise ValueError(f"n_max must be at least 2, got {n_max}")
        self.n_max = n_max
        self.mode = mode
        self.registry = registry if registry is not None else FactRegistry()
        self.entries: Dict[int, LedgerEntry] = {n: LedgerEntry(n) for n in range(2, n_max + 1)}

    @property
    def indices(self) -> List[int]:
        return sorted(self.entries)

    def __contains__(self, n: int) -> bool:
        return n in self.entries

    def lower(self, n: int) -> int:
        return self.entries[n].lower_value

    def upper(self, n: int) -> Optional[int]:
        return self.entries[n].upper_value

    def _check(self, n: int):
        entry = self.entries[n]
        if entry.upper is not None and entry.lower is not None and entry.lower.value > entry.upper.value:
            logger.error(f"Contradiction at L_{n}: {entry.lower.value} > {entry.upper.value}")
            raise LedgerContradiction(n, entry.lower, entry.upper)

    def tighten(self, d: Derivation) -> bool:
        """Record d if it improves its side; returns whether anything changed."""
        entry = self.entries[d.index]
        current = entry.lower if d.side == LOWER else entry.upper
        if current is not None:
            if d.side == LOWER and d.value <= current.value:
                return False
            if d.side == UPPER and d.value >= current.value:
                return False
        if d.side == LOWER:
            entry.lower = d
        else:
            entry.upper = d
        entry.history.append(d)
        self._check(d.index)
        return True

    def bound(self, n: int) -> Bound:
        entry = self.entries[n]
        bound = Bound()
        if entry.lower is not None:
            bound = bound.tighten_lower(entry.lower.value, entry.lower.assumption,
                                        entry.lower.citation or entry.lower.rule)
        if entry.upper is not None:
            bound = bound.tighten_upper(entry.upper.value, entry.upper.assumption,
                                        entry.upper.citation or entry.upper.rule)
        return bound

    def explain(self, n: int) -> List[str]:
        entry = self.entries[n]
        lines = []
        for d in (entry.lower, entry.upper):
            if d is not None:
                lines.extend(d.lines())
        return lines

    def rows(self) -> List[Tuple[int, int, Optional[int]]]:
        return [(n, self.lower(n), self.upper(n)) for n in self.indices]

    def copy(self) -> "BoundLedger":
        clone = BoundLedger(self.n_max, self.mode, self.registry)
        for n, entry in self.entries.items():
            clone.entries[n] = LedgerEntry(n, entry.lower, entry.upper, list(entry.history))
        return clone

    def verify_derivations(self) -> List[str]:
        """Replay every current derivation; returns a list of problems (empty if sound)."""
        problems = []
        seen = set()
        stack = [d for e in self.entries.values() for d in (e.lower, e.upper) if d is not None]
        while stack:
            d = stack.pop()
            if id(d) in seen:
                continue
            seen.add(id(d))
            expected = _replay(d, self)
            if expected != d.value:
                problems.append(f"{d.side}(L_{d.index}) by {d.rule}: recorded {d.value}, replay gives {expected}")
            stack.extend(d.inputs)
        return problems


# Seed rules

def plumbing_filling(n: int) -> SpinFilling:
    """Spin filling of L_n from its even chain presentation for the plumbing spin structure."""
    pres = next(p for p in chain_presentations(n, n - 1) if p.plumbing)
    b2, sigma = pres.filling
    return SpinFilling(b2, sigma)


def _chain_count(n: int) -> int:
    return next(p.count for p in chain_presentations(n, n - 1) if p.plumbing)


def _search_lower(n: int, mode: Mode) -> int:
    parity = spin_filling_b2_parity(1 if n % 2 else 2)
    constraints = SplitConstraints(fillings=(plumbing_filling(n),), b2_parity=parity,
                                   mode=mode, h1_order=n)
    return min_embedding_lower(constraints, limit=_chain_count(n))


def _fact_value(d: Derivation, ledger: BoundLedger) -> Optional[int]:
    for fact in ledger.registry.for_index(d.index):
        if fact.value == d.value and fact.citation == d.citation:
            return fact.value
    return None


def _replay(d: Derivation, ledger: BoundLedger) -> Optional[int]:
    if d.rule == "chain":
        return _chain_count(d.index)
    if d.rule == "splitting-search":
        return _search_lower(d.index, ledger.mode)
    if d.rule == "no-lens-in-S4":
        return 1
    if d.rule == "fact":
        return _fact_value(d, ledger)
    if d.rule == "step" and len(d.inputs) == 1 and abs(d.inputs[0].index - d.index) == 1:
        source = d.inputs[0]
        return source.value + 1 if d.side == UPPER else source.value - 1
    if d.rule == "subadditive" and len(d.inputs) == 2:
        a, b = d.inputs
        if a.index + b.index == d.index:
            return a.value + b.value + 1
    return None


def seed_ledger(n_max: int, mode: Mode = Mode.FURUTA_10_8,
                registry: Optional[FactRegistry] = None) -> BoundLedger:
    """
    Populate a ledger with every computed bound and every registered fact.

    Args:
        n_max: largest index (at least 2)
        mode: inequality mode for the splitting search
        registry: facts to apply; defaults to the global registry

    Returns:
        The seeded (not yet propagated) ledger.
    """
    if registry is None:
        registry = get_fact_registry()
    ledger = BoundLedger(n_max, mode, registry)
    for n in ledger.indices:
        ledger.tighten(Derivation("chain", n, UPPER, _chain_count(n),
                                  citation="even chain presentation, plumbing spin structure"))
        ledger.tighten(Derivation("no-lens-in-S4", n, LOWER, 1))
        ledger.tighten(Derivation("splitting-search", n, LOWER, _search_lower(n, mode),
                                  assumption=mode.assumption,
                                  citation=f"filling {plumbing_filling(n)}, {mode.value}"))
    for fact in registry:
        if fact.index not in ledger:
            continue
        sides = (LOWER, UPPER) if fact.direction is Direction.EXACT else (fact.direction.value,)
        for side in sides:
            d = Derivation("fact", fact.index, side, fact.value, assumption=fact.assumption,
                           citation=fact.citation)
            if not ledger.tighten(d):
                logger.warning(f"Fact {side}(L_{fact.index}) = {fact.value} is not tighter than "
                               f"the computed bound")
    return ledger


# Relational rules

def _rules(ledger: BoundLedger) -> List[Tuple[str, int, int]]:
    rules = []
    for n in ledger.indices:
        for k in (n - 1, n + 1):
            if k in ledger:
                rules.append(("step-up", n, k))
                rules.append(("step-down", n, k))
        for m in range(2, n // 2 + 1):
            if n - m in ledger:
                rules.append(("subadditive", n, m))
    return rules


def _apply(ledger: BoundLedger, rule: Tuple[str, int, int]) -> bool:
    kind, n, k = rule
    if kind == "step-up":
        source = ledger.entries[k].upper
        if source is None:
            return False
        return ledger.tighten(Derivation("step", n, UPPER, source.value + 1, (source,),
                                         source.assumption))
    if kind == "step-down":
        source = ledger.entries[k].lower
        if source is None or source.value - 1 <= 0:
            return False
        return ledger.tighten(Derivation("step", n, LOWER, source.value - 1, (source,),
                                         source.assumption))
    a, b = ledger.entries[k].upper, ledger.entries[n - k].upper
    if a is None or b is None:
        return False
    return ledger.tighten(Derivation("subadditive", n, UPPER, a.value + b.value + 1, (a, b),
                                     weakest(a.assumption, b.assumption)))


def propagate(ledger: BoundLedger, rng: Optional[random.Random] = None) -> BoundLedger:
    """Apply the step and subadditivity rules until nothing changes; rng shuffles rule order."""
    rules = _rules(ledger)
    rounds = 0
    changed = True
    while changed:
        changed = False
        rounds += 1
        order = list(rules)
        if rng is not None:
            rng.shuffle(order)
        for rule in order:
            if _apply(ledger, rule):
                changed = True
    logger.info(f"Ledger fixpoint reached after {rounds} rounds")
    return ledger


# Limit and tables

@dataclass(frozen=True)
class LimitBounds:
    lower: Fraction
    upper: Optional[Fraction]
    lower_assumption: Assumption
    upper_assumption: Assumption
    witness: Optional[int] = None

    def as_tuple(self) -> Tuple[Fraction, Optional[Fraction]]:
        return self.lower, self.upper


def epsilon_L_bounds(ledger: BoundLedger, mode: Optional[Mode] = None) -> LimitBounds:
    """Bounds on the limit of eps(L_n)/n: a closed-form lower, and min (upper(n)+1)/n."""
    mode = mode or ledger.mode
    if mode is Mode.FURUTA_10_8:
        lower = Fraction(1, 9)
    elif mode is Mode.ASSUME_11_8:
        lower = Fraction(3, 19)
    else:
        lower = Fraction(0)
    upper = None
    witness = None
    upper_assumption = Assumption.UNCONDITIONAL
    for n in ledger.indices:
        entry = ledger.entries[n]
        if entry.upper is None:
            continue
        candidate = Fraction(entry.upper.value + 1, n)
        if upper is None or candidate < upper:
            upper, witness, upper_assumption = candidate, n, entry.upper.assumption
    return LimitBounds(lower=lower, upper=upper, lower_assumption=mode.assumption,
                       upper_assumption=upper_assumption, witness=witness)


TABLE_INDICES = {
    "figure1": tuple(range(3, 20, 2)),
    "small_ln": tuple(range(2, 20)),
}


@dataclass(frozen=True)
class TableCell:
    n: int
    label: str
    value: int
    assumption: Assumption
    derivation: Tuple[str, ...]


@dataclass(frozen=True)
class Table:
    which: str
    cells: Tuple[TableCell, ...]


def emit_table(ledger: BoundLedger, which: str, indices: Optional[Iterable[int]] = None) -> Table:
    """Exact-valued table of L(n,1) (figure1, odd n) or L_n (small_ln)."""
    which = which.replace("-", "_")
    if which not in TABLE_INDICES:
        raise ValueError(f"unknown table {which!r}; expected one of {', '.join(TABLE_INDICES)}")
    wanted = TABLE_INDICES[which] if indices is None else tuple(indices)
    cells = []
    for n in wanted:
        if n not in ledger:
            raise ValueError(f"ledger does not cover n = {n}")
        entry = ledger.entries[n]
        if not entry.exact:
            raise ValueError(f"L_{n} is only known to lie in [{entry.lower_value}, {entry.upper_value}]")
        label = f"L({n},1)" if which == "figure1" else f"L_{n}"
        cells.append(TableCell(n=n, label=label, value=entry.upper.value,
                               assumption=weakest(entry.lower.assumption, entry.upper.assumption),
                               derivation=tuple(ledger.explain(n))))
    return Table(which=which, cells=tuple(cells))
