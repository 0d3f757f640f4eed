"""
Symmetric Integer Bilinear Forms.
Exact rank, determinant and signature, parity and definiteness, block sums,
and the existence/classification of even unimodular forms.

All arithmetic is exact: determinants use fraction-free (Bareiss) elimination
on sparse rows, signatures use symmetric congruence elimination over
Fraction. E8 is the negative definite Gram matrix of the E8 Dynkin diagram.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence, Tuple

from embednum.utils.logging import get_logger

logger = get_logger(__name__)

# Edges of the E8 Dynkin diagram: a chain of seven nodes with node 7
# attached to node 2.
E8_EDGES = ((0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7))


class Definiteness(str, Enum):
    NEGATIVE = "neg"
    POSITIVE = "pos"
    INDEFINITE = "indefinite"
    ZERO_RANK = "zero-rank"


@dataclass(frozen=True)
class QuadraticForm:
    """A symmetric integer matrix. Symmetry is checked on construction."""
    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.entries)
        object.__setattr__(self, "entries", rows)
        n = len(rows)
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ValueError(f"row {i} has length {len(row)}, expected {n}")
            for value in row:
                if isinstance(value, bool) or not isinstance(value, int):
                    raise ValueError(f"entries must be integers, got {value!r} in row {i}")
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(
                        f"matrix is not symmetric: entry ({i},{j}) = {rows[i][j]} "
                        f"but ({j},{i}) = {rows[j][i]}"
                    )

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, index: int) -> Tuple[int, ...]:
        return self.entries[index]

    def diagonal(self) -> Tuple[int, ...]:
        return tuple(self.entries[i][i] for i in range(self.n))

    # Standard forms

    @classmethod
    def empty(cls) -> "QuadraticForm":
        return cls(())

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]]) -> "QuadraticForm":
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def diagonal_form(cls, values: Sequence[int]) -> "QuadraticForm":
        n = len(values)
        return cls(tuple(tuple(values[i] if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def chain(cls, diagonal: Sequence[int]) -> "QuadraticForm":
        """Linear plumbing: the given diagonal, 1 on the off-diagonals."""
        n = len(diagonal)
        rows = [[0] * n for _ in range(n)]
        for i, value in enumerate(diagonal):
            rows[i][i] = value
            if i + 1 < n:
                rows[i][i + 1] = rows[i + 1][i] = 1
        return cls.from_rows(rows)

    @classmethod
    def e8(cls) -> "QuadraticForm":
        rows = [[-2 if i == j else 0 for j in range(8)] for i in range(8)]
        for i, j in E8_EDGES:
            rows[i][j] = rows[j][i] = 1
        return cls.from_rows(rows)

    @classmethod
    def hyperbolic(cls) -> "QuadraticForm":
        return cls(((0, 1), (1, 0)))

    # JSON matrix format: {"n": <int>, "rows": [[...], ...]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "QuadraticForm":
        if not isinstance(data, dict) or "rows" not in data:
            raise ValueError('matrix JSON must be an object with keys "n" and "rows"')
        rows = data["rows"]
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise ValueError('"rows" must be a list of lists of integers')
        n = data.get("n", len(rows))
        if isinstance(n, bool) or not isinstance(n, int) or n != len(rows):
            raise ValueError(f'"n" = {n!r} does not match the {len(rows)} rows given')
        return cls.from_rows(rows)

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "rows": [list(r) for r in self.entries]}


def load_form(path: str) -> QuadraticForm:
    """Read a form from a JSON matrix file; every problem surfaces as ValueError."""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except FileNotFoundError:
        raise ValueError(f"matrix file not found: {path}")
    except json.JSONDecodeError as e:
        raise ValueError(f"malformed matrix file {Path(path).name}: {e}")
    form = QuadraticForm.from_dict(data)
    logger.debug(f"Loaded {form.n}x{form.n} form from {path}")
    return form


# Invariants

def determinant(Q: QuadraticForm) -> int:
    """Exact determinant by sparse Bareiss elimination; det of the empty form is 1."""
    n = Q.n
    rows: List[Dict[int, int]] = [{j: v for j, v in enumerate(r) if v} for r in Q.entries]
    sign = 1
    prev = 1
    for k in range(n):
        pivot = next((i for i in range(k, n) if rows[i].get(k)), None)
        if pivot is None:
            return 0
        if pivot != k:
            rows[k], rows[pivot] = rows[pivot], rows[k]
            sign = -sign
        pivot_row = rows[k]
        a_kk = pivot_row[k]
        for i in range(k + 1, n):
            row = rows[i]
            a_ik = row.get(k, 0)
            updated = {j: v * a_kk for j, v in row.items() if j > k}
            if a_ik:
                for j, v in pivot_row.items():
                    if j > k:
                        updated[j] = updated.get(j, 0) - a_ik * v
            rows[i] = {j: v // prev for j, v in updated.items() if v}
        prev = a_kk
    return sign * prev


def _set_symmetric(m: List[Dict[int, Fraction]], i: int, j: int, value: Fraction):
    if value:
        m[i][j] = value
        m[j][i] = value
    else:
        m[i].pop(j, None)
        m[j].pop(i, None)


def _diagonalize(Q: QuadraticForm) -> List[Fraction]:
    """
    Congruence-diagonalize Q over the rationals.

    Returns the nonzero diagonal entries; their count is the rank and their
    signs give the signature.
    """
    m: List[Dict[int, Fraction]] = [
        {j: Fraction(v) for j, v in enumerate(row) if v} for row in Q.entries
    ]
    active = set(range(Q.n))
    pivots: List[Fraction] = []
    while active:
        order = sorted(active)
        k = next((i for i in order if m[i].get(i)), None)
        if k is None:
            # Zero diagonal: replace e_i by e_i + e_j for a nonzero a_ij.
            i = next((i for i in order if m[i]), None)
            if i is None:
                break
            j = min(m[i])
            a_ii, a_ij, a_jj = m[i].get(i, 0), m[i][j], m[j].get(j, 0)
            for t, v in list(m[j].items()):
                if t != i:
                    _set_symmetric(m, i, t, m[i].get(t, 0) + v)
            _set_symmetric(m, i, i, a_ii + 2 * a_ij + a_jj)
            k = i
        pivot = m[k][k]
        pivots.append(pivot)
        neighbours = [(i, v) for i, v in m[k].items() if i != k]
        for i, a_ik in neighbours:
            for j, a_kj in neighbours:
                if j >= i:
                    _set_symmetric(m, i, j, m[i].get(j, 0) - a_ik * a_kj / pivot)
        for i, _ in neighbours:
            m[i].pop(k, None)
        m[k] = {}
        active.discard(k)
    return pivots


def signature(Q: QuadraticForm) -> int:
    pivots = _diagonalize(Q)
    return sum(1 if p > 0 else -1 for p in pivots)


def rank(Q: QuadraticForm) -> int:
    return len(_diagonalize(Q))


def is_even(Q: QuadraticForm) -> bool:
    return all(d % 2 == 0 for d in Q.diagonal())


def is_unimodular(Q: QuadraticForm) -> bool:
    return abs(determinant(Q)) == 1


def _definiteness(r: int, s: int) -> Definiteness:
    if r == 0:
        return Definiteness.ZERO_RANK
    if s == r:
        return Definiteness.POSITIVE
    if s == -r:
        return Definiteness.NEGATIVE
    return Definiteness.INDEFINITE


def is_definite(Q: QuadraticForm) -> Definiteness:
    pivots = _diagonalize(Q)
    return _definiteness(len(pivots), sum(1 if p > 0 else -1 for p in pivots))


@dataclass(frozen=True)
class FormSummary:
    """All numerical invariants of a form, computed once."""
    n: int
    rank: int
    sigma: int
    det: int
    even: bool
    definiteness: Definiteness

    @property
    def unimodular(self) -> bool:
        return abs(self.det) == 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "rank": self.rank,
            "signature": self.sigma,
            "determinant": self.det,
            "even": self.even,
            "unimodular": self.unimodular,
            "definiteness": self.definiteness.value,
        }


def summarize(Q: QuadraticForm) -> FormSummary:
    pivots = _diagonalize(Q)
    r = len(pivots)
    s = sum(1 if p > 0 else -1 for p in pivots)
    return FormSummary(n=Q.n, rank=r, sigma=s, det=determinant(Q), even=is_even(Q),
                       definiteness=_definiteness(r, s))


# Constructions

def direct_sum(Q1: QuadraticForm, Q2: QuadraticForm) -> QuadraticForm:
    n1, n2 = Q1.n, Q2.n
    rows = [list(r) + [0] * n2 for r in Q1.entries]
    rows += [[0] * n1 + list(r) for r in Q2.entries]
    return QuadraticForm.from_rows(rows)


def scaled_copies(Q: QuadraticForm, k: int) -> QuadraticForm:
    """The direct sum of k copies of Q (k = 0 gives the empty form)."""
    if k < 0:
        raise ValueError(f"number of copies must be non-negative, got {k}")
    n = Q.n
    size = n * k
    rows = [[0] * size for _ in range(size)]
    for block in range(k):
        offset = block * n
        for i in range(n):
            for j in range(n):
                rows[offset + i][offset + j] = Q.entries[i][j]
    return QuadraticForm.from_rows(rows)


def negate(Q: QuadraticForm) -> QuadraticForm:
    return QuadraticForm.from_rows([[-v for v in r] for r in Q.entries])


# Even unimodular forms

def even_unimodular_exists(rank: int, sig: int) -> bool:
    """Whether an even unimodular form of the given rank and signature exists."""
    if rank < 0 or abs(sig) > rank:
        return False
    if sig % 8 != 0 or (rank - sig) % 2 != 0:
        return False
    if rank == abs(sig):
        return rank % 8 == 0
    return True


def classify_indefinite_even(rank: int, sig: int) -> Tuple[int, int]:
    """
    Classify an indefinite even unimodular form as aE8 + bH.

    Args:
        rank: rank of the form
        sig: signature of the form

    Returns:
        (a, b) with a = sig / -8 (negative a means |a| positive definite
        E8 blocks) and b >= 1 copies of H.
    """
    if not even_unimodular_exists(rank, sig):
        raise ValueError(f"no even unimodular form has rank {rank} and signature {sig}")
    if rank == abs(sig):
        raise ValueError(f"rank {rank}, signature {sig} is definite, not indefinite")
    a = -sig // 8
    return a, (rank - 8 * abs(a)) // 2


def _term(coef: int, name: str) -> str:
    if coef == 1:
        return name
    if coef == -1:
        return f"-{name}"
    return f"{coef}{name}"


def describe_even_form(rank: int, sig: int) -> str:
    """Readable name for the even unimodular forms with these invariants."""
    if rank == 0:
        return "0"
    if not even_unimodular_exists(rank, sig):
        raise ValueError(f"no even unimodular form has rank {rank} and signature {sig}")
    if rank == abs(sig):
        copies = -sig // 8
        if rank == 8:
            return _term(copies, "E8")
        side = "negative" if sig < 0 else "positive"
        return f"{side} definite rank {rank} (e.g. {_term(copies, 'E8')})"
    a, b = classify_indefinite_even(rank, sig)
    if a == 0:
        return _term(b, "H")
    return f"{_term(a, 'E8')} ⊕ {_term(b, 'H')}"
