"""
Definite Splitting Constructions.
Splits #n K3 and #8n K3 into two definite pieces along a rational homology
sphere Y_n and an integral homology sphere Z_n, verifies the form-level
accounting by exact computation, and bounds the embedding numbers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

from embednum.services.bounds import Bound, Mode
from embednum.services.forms import (
    FormSummary,
    QuadraticForm,
    classify_indefinite_even,
    direct_sum,
    scaled_copies,
    summarize,
)
from embednum.services.obstruct import (
    SearchResult,
    SpinFilling,
    SplitConstraints,
    definite_lower_closed_form,
    search_embedding_lower,
)
from embednum.utils.logging import get_logger

logger = get_logger(__name__)


def q6() -> QuadraticForm:
    """Linear chain of six -2's (determinant 7)."""
    return QuadraticForm.chain([-2] * 6)


def yn_u_form(n: int) -> QuadraticForm:
    """4nE8 + nQ6, the negative definite piece of the Y_n splitting."""
    return direct_sum(scaled_copies(QuadraticForm.e8(), 4 * n), scaled_copies(q6(), n))


@dataclass(frozen=True)
class SplitReport:
    n: int
    kind: str
    u_form: FormSummary
    v_rank: int
    v_sigma: int
    k_rank: int
    k_sigma: int
    k_decomposition: Tuple[int, int]
    fillings: Tuple[SpinFilling, ...]
    eps: Bound
    closed_form_lower: Optional[int]
    checks: Tuple[str, ...] = field(default_factory=tuple)
    search: Optional[SearchResult] = None

    @property
    def manifold(self) -> str:
        return f"{self.kind}_{self.n}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "manifold": self.manifold,
            "u_form": self.u_form.to_dict(),
            "v_rank": self.v_rank,
            "v_sigma": self.v_sigma,
            "k_rank": self.k_rank,
            "k_sigma": self.k_sigma,
            "k_decomposition": list(self.k_decomposition),
            "fillings": [f.to_dict() for f in self.fillings],
            "closed_form_lower": self.closed_form_lower,
            "eps": self.eps.to_dict(),
            "checks": list(self.checks),
        }


def _require(condition: bool, message: str, checks: list):
    if not condition:
        raise RuntimeError(f"construction invariant failed: {message}")
    checks.append(message)


def _closed_form(b0: int, mode: Mode) -> Optional[int]:
    if mode is Mode.ROKHLIN_ONLY:
        return None
    return definite_lower_closed_form(b0, mode)


def yn_construction(n: int, mode: Mode = Mode.ASSUME_11_8, trace: bool = False) -> SplitReport:
    """
    Split #n K3 (form 4nE8 + 6nH) along Y_n into U_n = 4nE8 + nQ6 and a
    positive definite V_n of rank 6n.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    checks: list = []
    u = summarize(yn_u_form(n))
    k_rank, k_sigma = 44 * n, -32 * n
    _require(u.rank == 38 * n, f"rank(U) = {u.rank} = 38n", checks)
    _require(u.sigma == -38 * n, f"sigma(U) = {u.sigma} = -38n", checks)
    _require(abs(u.det) == 7 ** n, f"|det(U)| = {abs(u.det)} = 7^n", checks)
    _require(u.even, "U is even", checks)
    decomposition = classify_indefinite_even(k_rank, k_sigma)
    _require(decomposition == (4 * n, 6 * n), f"K = {decomposition[0]}E8 + {decomposition[1]}H", checks)
    v_rank, v_sigma = k_rank - u.rank, k_sigma - u.sigma
    _require(v_rank == v_sigma == 6 * n, f"V positive definite of rank {v_rank}", checks)

    filling = SpinFilling(38 * n, -38 * n)
    result = search_embedding_lower(SplitConstraints(fillings=(filling,), mode=mode),
                                    trace=trace, limit=6 * n)
    eps = Bound(upper=6 * n, upper_citation="doubling V_n gives #6n S2xS2")
    eps = eps.tighten_lower(result.value, mode.assumption,
                            f"spin splitting search ({mode.value}) with filling U_n")
    logger.debug(f"Y_{n}: {eps.describe()}")
    return SplitReport(n=n, kind="Y", u_form=u, v_rank=v_rank, v_sigma=v_sigma,
                       k_rank=k_rank, k_sigma=k_sigma, k_decomposition=decomposition,
                       fillings=(filling,), eps=eps,
                       closed_form_lower=_closed_form(38 * n, mode),
                       checks=tuple(checks), search=result if trace else None)


def zn_construction(n: int, mode: Mode = Mode.ASSUME_11_8, trace: bool = False) -> SplitReport:
    """
    Split #8n K3 (form 16nE8 + 24nH = 19nE8 + -3nE8) along the integral
    homology sphere Z_n into definite pieces of ranks 152n and 24n.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    checks: list = []
    k_rank, k_sigma = 176 * n, -128 * n
    decomposition = classify_indefinite_even(k_rank, k_sigma)
    _require(decomposition == (16 * n, 24 * n), f"K = {decomposition[0]}E8 + {decomposition[1]}H", checks)
    _require(16 * n * 8 + 24 * n * 2 == 19 * n * 8 + 3 * n * 8 == k_rank,
             f"rank {k_rank} = 16n*8 + 24n*2 = 19n*8 + 3n*8", checks)
    _require(-152 * n + 24 * n == k_sigma, f"signature {k_sigma} = -152n + 24n", checks)
    u = summarize(scaled_copies(QuadraticForm.e8(), 19 * n))
    _require(u.rank == 152 * n and u.sigma == -152 * n and u.det == 1 and u.even,
             f"U = 19nE8 even unimodular negative definite of rank {u.rank}", checks)
    v_rank, v_sigma = k_rank - u.rank, k_sigma - u.sigma
    _require(v_rank == v_sigma == 24 * n, f"V = -3nE8 positive definite of rank {v_rank}", checks)

    fillings = (SpinFilling(152 * n, -152 * n), SpinFilling(24 * n, -24 * n))
    constraints = SplitConstraints(mu=(-152 * n) % 16, fillings=fillings, zhs=True, mode=mode)
    result = search_embedding_lower(constraints, trace=trace, limit=24 * n)
    eps = Bound(upper=24 * n, upper_citation="doubling the positive definite piece gives #24n S2xS2")
    eps = eps.tighten_lower(result.value, mode.assumption,
                            f"spin splitting search ({mode.value}) with both definite fillings")
    logger.debug(f"Z_{n}: {eps.describe()}")
    return SplitReport(n=n, kind="Z", u_form=u, v_rank=v_rank, v_sigma=v_sigma,
                       k_rank=k_rank, k_sigma=k_sigma, k_decomposition=decomposition,
                       fillings=fillings, eps=eps,
                       closed_form_lower=_closed_form(152 * n, mode),
                       checks=tuple(checks), search=result if trace else None)
