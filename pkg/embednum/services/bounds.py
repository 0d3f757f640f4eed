"""
Bound bookkeeping.
Intervals on an embedding number together with the assumption and citation
behind each side.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple


class Assumption(str, Enum):
    """What a bound rests on, besides exact computation."""
    UNCONDITIONAL = "Unconditional"
    CITED_CONSTRUCTION = "CitedConstruction"
    ASSUMES_11_8 = "Assumes11_8"


# Higher rank = weaker footing. Combining sides keeps the weakest.
ASSUMPTION_RANK = {
    Assumption.UNCONDITIONAL: 0,
    Assumption.CITED_CONSTRUCTION: 1,
    Assumption.ASSUMES_11_8: 2,
}


def weakest(*assumptions: Assumption) -> Assumption:
    """Combine assumptions, keeping the one with the weakest footing."""
    if not assumptions:
        return Assumption.UNCONDITIONAL
    return max(assumptions, key=ASSUMPTION_RANK.__getitem__)


class Mode(str, Enum):
    """Which closed spin 4-manifold inequality the obstructions may use."""
    FURUTA_10_8 = "Furuta10_8"
    ASSUME_11_8 = "Assume11_8"
    ROKHLIN_ONLY = "RokhlinOnly"

    @property
    def assumption(self) -> Assumption:
        if self is Mode.ASSUME_11_8:
            return Assumption.ASSUMES_11_8
        return Assumption.UNCONDITIONAL


class Direction(str, Enum):
    LOWER = "lower"
    UPPER = "upper"
    EXACT = "exact"


@dataclass(frozen=True)
class Bound:
    """
    An interval [lower, upper] for an embedding number.

    upper is None when no upper bound is known. Each side carries its own
    assumption tag and citation so that conditional results never pass for
    unconditional ones.
    """
    lower: int = 0
    upper: Optional[int] = None
    lower_assumption: Assumption = Assumption.UNCONDITIONAL
    upper_assumption: Assumption = Assumption.UNCONDITIONAL
    lower_citation: str = ""
    upper_citation: str = ""
    notes: Tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.lower < 0:
            raise ValueError(f"lower bound must be non-negative, got {self.lower}")
        if self.upper is not None and self.upper < self.lower:
            raise ValueError(f"empty interval: lower {self.lower} > upper {self.upper}")

    @classmethod
    def exact_value(cls, value: int, assumption: Assumption = Assumption.UNCONDITIONAL,
                    citation: str = "") -> "Bound":
        return cls(lower=value, upper=value, lower_assumption=assumption,
                   upper_assumption=assumption, lower_citation=citation,
                   upper_citation=citation)

    @property
    def exact(self) -> bool:
        return self.upper is not None and self.lower == self.upper

    @property
    def assumption(self) -> Assumption:
        """Weakest assumption among the sides that carry information."""
        used = []
        if self.lower > 0:
            used.append(self.lower_assumption)
        if self.upper is not None:
            used.append(self.upper_assumption)
        return weakest(*used)

    @property
    def citations(self) -> List[str]:
        cites = []
        if self.lower > 0 and self.lower_citation:
            cites.append(self.lower_citation)
        if self.upper is not None and self.upper_citation and self.upper_citation not in cites:
            cites.append(self.upper_citation)
        return cites

    def _better_lower(self, value: int, assumption: Assumption) -> bool:
        if value != self.lower:
            return value > self.lower
        return ASSUMPTION_RANK[assumption] < ASSUMPTION_RANK[self.lower_assumption]

    def _better_upper(self, value: int, assumption: Assumption) -> bool:
        if self.upper is None or value != self.upper:
            return self.upper is None or value < self.upper
        return ASSUMPTION_RANK[assumption] < ASSUMPTION_RANK[self.upper_assumption]

    def tighten_lower(self, value: int, assumption: Assumption = Assumption.UNCONDITIONAL,
                      citation: str = "") -> "Bound":
        """Raise the lower side if value improves it; ValueError if the interval empties."""
        if not self._better_lower(value, assumption):
            return self
        return replace(self, lower=value, lower_assumption=assumption, lower_citation=citation)

    def tighten_upper(self, value: int, assumption: Assumption = Assumption.UNCONDITIONAL,
                      citation: str = "") -> "Bound":
        """Lower the upper side if value improves it; ValueError if the interval empties."""
        if not self._better_upper(value, assumption):
            return self
        return replace(self, upper=value, upper_assumption=assumption, upper_citation=citation)

    def intersect(self, other: "Bound") -> "Bound":
        result = self.tighten_lower(other.lower, other.lower_assumption, other.lower_citation)
        if other.upper is not None:
            result = result.tighten_upper(other.upper, other.upper_assumption, other.upper_citation)
        extra = tuple(n for n in other.notes if n not in result.notes)
        return replace(result, notes=result.notes + extra) if extra else result

    def with_note(self, note: str) -> "Bound":
        return replace(self, notes=self.notes + (note,))

    def describe(self) -> str:
        if self.exact:
            return f"exact {self.lower}"
        if self.upper is None:
            return f">= {self.lower}"
        return f"[{self.lower}, {self.upper}]"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
            "assumption": self.assumption.value,
            "lower_assumption": self.lower_assumption.value,
            "upper_assumption": self.upper_assumption.value,
            "citations": self.citations,
            "notes": list(self.notes),
        }
