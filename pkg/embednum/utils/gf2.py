"""
Linear algebra over GF(2).
Used to enumerate characteristic sublinks of a framed link.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import List, Optional, Tuple

import numpy as np

# Enumerating a coset is exponential in the kernel dimension.
MAX_KERNEL_DIM = 20


def to_gf2(matrix) -> np.ndarray:
    return np.asarray(matrix, dtype=np.int64) % 2


@dataclass(frozen=True)
class RowReduceResult:
    matrix: np.ndarray
    rank: int
    pivots: Tuple[int, ...]


def gf2_row_reduce(matrix) -> RowReduceResult:
    """Reduced row echelon form over GF(2)."""
    mat = to_gf2(matrix).astype(np.uint8)
    rows, cols = mat.shape
    pivots: List[int] = []
    row = 0
    for col in range(cols):
        if row == rows:
            break
        hits = np.nonzero(mat[row:, col])[0]
        if hits.size == 0:
            continue
        pivot = row + int(hits[0])
        if pivot != row:
            mat[[row, pivot]] = mat[[pivot, row]]
        others = np.nonzero(mat[:, col])[0]
        for r in others:
            if r != row:
                mat[r, :] ^= mat[row, :]
        pivots.append(col)
        row += 1
    return RowReduceResult(matrix=mat, rank=len(pivots), pivots=tuple(pivots))


def gf2_nullspace_basis(matrix) -> np.ndarray:
    """Return a basis (one vector per row) for the nullspace of matrix over GF(2)."""
    reduced = gf2_row_reduce(matrix)
    mat = reduced.matrix
    n = mat.shape[1]
    pivot_set = set(reduced.pivots)
    basis = []
    for free in (c for c in range(n) if c not in pivot_set):
        vec = np.zeros(n, dtype=np.uint8)
        vec[free] = 1
        for row, col in enumerate(reduced.pivots):
            if mat[row, free]:
                vec[col] = 1
        basis.append(vec)
    if not basis:
        return np.zeros((0, n), dtype=np.uint8)
    return np.vstack(basis)


def gf2_solve(matrix, vector) -> Optional[np.ndarray]:
    """
    Find one solution x of matrix @ x = vector over GF(2).

    Returns:
        A particular solution with all free variables set to 0, or None
        when the system is inconsistent.
    """
    mat = to_gf2(matrix)
    n = mat.shape[1]
    augmented = np.concatenate([mat, to_gf2(vector).reshape(-1, 1)], axis=1)
    reduced = gf2_row_reduce(augmented)
    if n in reduced.pivots:
        return None
    solution = np.zeros(n, dtype=np.uint8)
    for row, col in enumerate(reduced.pivots):
        solution[col] = reduced.matrix[row, n]
    return solution


def gf2_solutions(matrix, vector) -> List[Tuple[int, ...]]:
    """All solutions of matrix @ x = vector over GF(2), sorted lexicographically."""
    mat = to_gf2(matrix)
    if mat.shape[1] == 0:
        return [()] if not to_gf2(vector).any() else []
    particular = gf2_solve(mat, vector)
    if particular is None:
        return []
    basis = gf2_nullspace_basis(mat)
    if basis.shape[0] > MAX_KERNEL_DIM:
        raise ValueError(f"GF(2) kernel of dimension {basis.shape[0]} is too large to enumerate")
    solutions = set()
    for coeffs in product((0, 1), repeat=basis.shape[0]):
        vec = particular.copy()
        for c, b in zip(coeffs, basis):
            if c:
                vec ^= b
        solutions.add(tuple(int(v) for v in vec))
    return sorted(solutions)
