"""
Fact Registry Service.
Loads bounds proved by constructions the library cannot re-derive.
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional

from embednum.services.bounds import Assumption, Direction
from embednum.utils.logging import get_logger

logger = get_logger(__name__)

REQUIRED_KEYS = ("index", "direction", "value", "assumption", "citation")


@dataclass(frozen=True)
class Fact:
    """A cited bound on the embedding number of L_n = L(n, n-1)."""
    index: int
    direction: Direction
    value: int
    assumption: Assumption
    citation: str

    def __post_init__(self):
        if self.index < 2:
            raise ValueError(f"fact index must be >= 2, got {self.index}")
        if self.value < 0:
            raise ValueError(f"fact value must be non-negative, got {self.value}")
        if self.assumption is Assumption.CITED_CONSTRUCTION and not self.citation.strip():
            raise ValueError(f"fact for n={self.index} is a cited construction but has no citation")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Fact":
        if not isinstance(data, dict):
            raise ValueError(f"fact record must be an object, got {type(data).__name__}")
        missing = [k for k in REQUIRED_KEYS if k not in data]
        if missing:
            raise ValueError(f"fact record is missing keys: {', '.join(missing)}")
        unknown = sorted(set(data) - set(REQUIRED_KEYS))
        if unknown:
            logger.warning(f"Ignoring unknown fact keys: {', '.join(unknown)}")
        for key in ("index", "value"):
            if isinstance(data[key], bool) or not isinstance(data[key], int):
                raise ValueError(f"fact {key} must be an integer, got {data[key]!r}")
        if not isinstance(data["citation"], str):
            raise ValueError("fact citation must be a string")
        try:
            direction = Direction(data["direction"])
            assumption = Assumption(data["assumption"])
        except ValueError as e:
            raise ValueError(f"invalid fact record: {e}")
        return cls(index=data["index"], direction=direction, value=data["value"],
                   assumption=assumption, citation=data["citation"])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "index": self.index,
            "direction": self.direction.value,
            "value": self.value,
            "assumption": self.assumption.value,
            "citation": self.citation,
        }


class FactRegistry:
    """
    Cited facts, keyed by index.
    """

    def __init__(self, facts: Optional[List[Fact]] = None, source: str = "<memory>"):
        self.facts: List[Fact] = list(facts or [])
        self.source = source

    @classmethod
    def load(cls, path: str) -> "FactRegistry":
        """
        Load and validate a registry file.

        Args:
            path: JSON file holding an array of fact records

        Returns:
            The registry; any schema problem raises ValueError.
        """
        file = Path(path)
        if not file.exists():
            raise ValueError(f"facts file not found: {path}")
        try:
            with open(file, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ValueError(f"malformed facts file {file.name}: {e}")
        if not isinstance(data, list):
            raise ValueError(f"facts file {file.name} must hold a JSON array")
        facts = [Fact.from_dict(record) for record in data]
        logger.info(f"Loaded {len(facts)} facts from {file.name}")
        return cls(facts, source=str(file))

    def for_index(self, n: int) -> List[Fact]:
        return [f for f in self.facts if f.index == n]

    def without(self, *indices: int) -> "FactRegistry":
        return FactRegistry([f for f in self.facts if f.index not in indices], source=self.source)

    def __len__(self) -> int:
        return len(self.facts)

    def __iter__(self):
        return iter(self.facts)


# Global registry (lazy loaded)
_registry: Optional[FactRegistry] = None


def init_fact_registry(path: str) -> FactRegistry:
    """Initialize the global fact registry from a file."""
    global _registry
    _registry = FactRegistry.load(path)
    return _registry


def get_fact_registry() -> FactRegistry:
    """Get the global fact registry, loading the configured file on first use."""
    global _registry
    if _registry is None:
        from embednum.config import get_config
        _registry = FactRegistry.load(get_config().facts_path)
    return _registry
