"""
Output records and renderers for the command line.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from embednum.services.bounds import Assumption, Bound
from embednum.services.propagate import Table

RECORD_FIELDS = ("manifold", "lower", "upper", "exact", "assumption", "citations")


@dataclass
class OutputRecord:
    """One line of output: a manifold and what is known about its embedding number."""
    manifold: str
    lower: int
    upper: Optional[int]
    exact: bool
    assumption: str
    citations: List[str] = field(default_factory=list)
    trace: List[str] = field(default_factory=list)

    def __post_init__(self):
        if self.exact and self.lower != self.upper:
            raise ValueError(f"{self.manifold}: exact record needs lower == upper")

    @classmethod
    def from_bound(cls, manifold: str, bound: Bound, trace: Optional[List[str]] = None) -> "OutputRecord":
        return cls(manifold=manifold, lower=bound.lower, upper=bound.upper, exact=bound.exact,
                   assumption=bound.assumption.value, citations=bound.citations,
                   trace=list(trace or []))

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "OutputRecord":
        """Rebuild a record from JSON, validating the schema."""
        missing = [k for k in RECORD_FIELDS if k not in data]
        if missing:
            raise ValueError(f"record is missing keys: {', '.join(missing)}")
        if not isinstance(data["manifold"], str):
            raise ValueError("manifold must be a string")
        if isinstance(data["lower"], bool) or not isinstance(data["lower"], int) or data["lower"] < 0:
            raise ValueError("lower must be a non-negative integer")
        if data["upper"] is not None and (isinstance(data["upper"], bool) or not isinstance(data["upper"], int)):
            raise ValueError("upper must be an integer or null")
        if not isinstance(data["exact"], bool):
            raise ValueError("exact must be a boolean")
        Assumption(data["assumption"])
        if not isinstance(data["citations"], list):
            raise ValueError("citations must be a list")
        return cls(manifold=data["manifold"], lower=data["lower"], upper=data["upper"],
                   exact=data["exact"], assumption=data["assumption"],
                   citations=list(data["citations"]), trace=list(data.get("trace", [])))

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "manifold": self.manifold,
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
            "assumption": self.assumption,
            "citations": self.citations,
        }
        if self.trace:
            data["trace"] = self.trace
        return data

    def value_text(self) -> str:
        if self.exact:
            return f"exact {self.lower}"
        if self.upper is None:
            return f">= {self.lower}"
        return f"[{self.lower}, {self.upper}]"


def render_records(records: List[OutputRecord], fmt: str) -> str:
    if fmt == "json":
        payload: Any = records[0].to_dict() if len(records) == 1 else [r.to_dict() for r in records]
        return json.dumps(payload, indent=2, ensure_ascii=False)
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(RECORD_FIELDS)
        for r in records:
            writer.writerow([r.manifold, r.lower, "" if r.upper is None else r.upper,
                             r.exact, r.assumption, "; ".join(r.citations)])
        return buffer.getvalue().rstrip("\n")
    lines = []
    for r in records:
        lines.append(f"{r.manifold}: {r.value_text()} ({r.assumption})")
        lines.extend(f"  - {c}" for c in r.citations)
        for entry in r.trace:
            lines.extend(f"    {line}" for line in entry.splitlines())
    return "\n".join(lines)


def render_table(table: Table, fmt: str, trace: bool = False) -> str:
    """Two-row grid (n, value) for text/csv, one column per cell in csv; cell records for json."""
    if fmt == "json":
        cells = []
        for cell in table.cells:
            item = {"n": cell.n, "manifold": cell.label, "value": cell.value,
                    "assumption": cell.assumption.value}
            if trace:
                item["trace"] = list(cell.derivation)
            cells.append(item)
        return json.dumps({"table": table.which, "cells": cells}, indent=2, ensure_ascii=False)
    header = ["n"] + [str(c.n) for c in table.cells]
    values = ["eps"] + [str(c.value) for c in table.cells]
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header[1:])
        writer.writerow(values[1:])
        return buffer.getvalue().rstrip("\n")
    width = max((len(s) for s in header + values), default=1)
    lines = [" ".join(s.rjust(width) for s in header), " ".join(s.rjust(width) for s in values)]
    if trace:
        for cell in table.cells:
            lines.append(f"{cell.label} ({cell.assumption.value}):")
            lines.extend(f"  {line}" for line in cell.derivation)
    return "\n".join(lines)


def render_mapping(data: Dict[str, Any], fmt: str) -> str:
    """Key/value report (form invariants, limit bounds)."""
    if fmt == "json":
        return json.dumps(data, indent=2)
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(list(data))
        writer.writerow(list(data.values()))
        return buffer.getvalue().rstrip("\n")
    return "\n".join(f"{key}: {value}" for key, value in data.items())
