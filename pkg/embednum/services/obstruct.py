"""
Obstruction Service.
Lower bounds on embedding numbers from spin 4-manifold topology: Rokhlin
residues, the 10/8 and 11/8 inequalities, and an exhaustive search over the
(b2, signature) of the two pieces an embedding Y in #m S2xS2 cuts out.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt
from typing import Dict, Iterator, List, Optional, Tuple

from embednum.services.bounds import Mode
from embednum.services.forms import describe_even_form, even_unimodular_exists
from embednum.utils.logging import get_logger

logger = get_logger(__name__)

DEFAULT_SEARCH_LIMIT = 512


@dataclass(frozen=True)
class SpinFilling:
    """(b2, sigma) of a spin 4-manifold W with boundary the 3-manifold."""
    b2: int
    sigma: int

    def __post_init__(self):
        if self.b2 < 0:
            raise ValueError(f"b2 must be non-negative, got {self.b2}")
        if abs(self.sigma) > self.b2:
            raise ValueError(f"|sigma| = {abs(self.sigma)} exceeds b2 = {self.b2}")
        if (self.b2 - self.sigma) % 2:
            raise ValueError(f"b2 = {self.b2} and sigma = {self.sigma} have different parity")

    @classmethod
    def from_dict(cls, data: Dict[str, int]) -> "SpinFilling":
        return cls(b2=int(data["b2"]), sigma=int(data["sigma"]))

    def to_dict(self) -> Dict[str, int]:
        return {"b2": self.b2, "sigma": self.sigma}

    def __str__(self) -> str:
        return f"({self.b2}, {self.sigma})"


@dataclass(frozen=True)
class SplitConstraints:
    """
    Everything known about the pieces U and V of a splitting of #m S2xS2.

    Attributes:
        mu: Rokhlin invariant as a residue mod 16, or None
        fillings: spin fillings W of Y (boundary orientation: dW = Y)
        zhs: Y is an integral homology sphere, so both piece forms are even unimodular
        forbid_definite: Y bounds no spin definite 4-manifold of nonzero rank
        b2_parity: required parity of b2 of every spin filling, or None
        mode: which closed spin inequality to apply
        h1_order: |H1(Y)| when known; a non-square order rules out pieces with b2 = 0
    """
    mu: Optional[int] = None
    fillings: Tuple[SpinFilling, ...] = field(default_factory=tuple)
    zhs: bool = False
    forbid_definite: bool = False
    b2_parity: Optional[int] = None
    mode: Mode = Mode.FURUTA_10_8
    h1_order: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "fillings", tuple(self.fillings))
        if self.mu is not None:
            object.__setattr__(self, "mu", self.mu % 16)
            for f in self.fillings:
                if (f.sigma - self.mu) % 16:
                    raise ValueError(
                        f"filling {f} has signature {f.sigma} which is not congruent "
                        f"to mu = {self.mu} mod 16"
                    )
        elif self.fillings:
            residues = {f.sigma % 16 for f in self.fillings}
            if len(residues) > 1:
                raise ValueError(f"fillings disagree mod 16: residues {sorted(residues)}")
        if self.b2_parity not in (None, 0, 1):
            raise ValueError(f"b2_parity must be 0, 1 or None, got {self.b2_parity}")
        if self.h1_order is not None and self.h1_order < 1:
            raise ValueError(f"h1_order must be positive, got {self.h1_order}")

    @property
    def residue(self) -> Optional[int]:
        """The Rokhlin residue, read off a filling when mu was not supplied."""
        if self.mu is not None:
            return self.mu
        if self.fillings:
            return self.fillings[0].sigma % 16
        return None

    @property
    def h1_square(self) -> bool:
        if self.h1_order is None:
            return True
        root = isqrt(self.h1_order)
        return root * root == self.h1_order


def rokhlin_mu(f: SpinFilling) -> int:
    return f.sigma % 16


def closed_spin_ok(b2: int, sigma: int, mode: Mode) -> bool:
    """Whether a closed spin 4-manifold with these invariants is allowed in mode."""
    if sigma % 16:
        raise ValueError(f"closed spin signature must be divisible by 16, got {sigma}")
    if b2 < abs(sigma):
        raise ValueError(f"b2 = {b2} is smaller than |sigma| = {abs(sigma)}")
    if mode is Mode.ROKHLIN_ONLY or sigma == 0:
        return True
    if 8 * b2 < 10 * abs(sigma) + 16:
        return False
    if mode is Mode.ASSUME_11_8:
        return 8 * b2 >= 11 * abs(sigma)
    return True


def _inequality_name(mode: Mode) -> str:
    return "11/8" if mode is Mode.ASSUME_11_8 else "10/8"


def _closed_failure(b2: int, sigma: int, mode: Mode, label: str) -> Optional[str]:
    if closed_spin_ok(b2, sigma, mode):
        return None
    return f"{label} closes up to b2={b2}, sigma={sigma}, violating {_inequality_name(mode)}"


def _piece_name(b2: int, sigma: int) -> str:
    if even_unimodular_exists(b2, sigma):
        return describe_even_form(b2, sigma)
    return f"(b2={b2}, sigma={sigma})"


def candidate_failure(b_u: int, sigma_u: int, m: int, c: SplitConstraints) -> Optional[str]:
    """
    First reason the pieces U=(b_u, sigma_u), V=(2m-b_u, -sigma_u) are impossible.

    Returns:
        None when the candidate passes every constraint in c.
    """
    b_v, sigma_v = 2 * m - b_u, -sigma_u
    residue = c.residue
    if residue is not None and (sigma_u - residue) % 16:
        return f"sigma_U = {sigma_u} is not congruent to mu = {residue} mod 16"
    if c.b2_parity is not None and (b_u % 2 != c.b2_parity or b_v % 2 != c.b2_parity):
        return f"spin fillings must have b2 = {c.b2_parity} mod 2"
    if not c.h1_square and (b_u == 0 or b_v == 0):
        return f"a piece with b2 = 0 is a rational ball, impossible since |H1| = {c.h1_order} is not a square"
    if c.zhs:
        for label, b, s in (("U", b_u, sigma_u), ("V", b_v, sigma_v)):
            if not even_unimodular_exists(b, s):
                return f"no even unimodular form for {label} (rank {b}, signature {s})"
    if c.forbid_definite:
        for label, b, s in (("U", b_u, sigma_u), ("V", b_v, sigma_v)):
            if b > 0 and b == abs(s):
                return (f"definite piece {label} excluded: "
                        f"U = {_piece_name(b_u, sigma_u)}, V = {_piece_name(b_v, sigma_v)}")
    for f in c.fillings:
        reason = _closed_failure(f.b2 + b_v, f.sigma + sigma_v, c.mode, f"W{f} glued to V")
        if reason:
            return reason
        reason = _closed_failure(f.b2 + b_u, -f.sigma + sigma_u, c.mode, f"-W{f} glued to U")
        if reason:
            return reason
    return None


def _signature_candidates(b_u: int, b_v: int, c: SplitConstraints) -> Iterator[int]:
    limit = min(b_u, b_v)
    residue = c.residue
    if residue is not None:
        start, step = -limit + (residue + limit) % 16, 16
    elif c.zhs:
        start, step = -limit + limit % 8, 8
    else:
        start, step = -limit, 1
    return iter(range(start, limit + 1, step))


@dataclass(frozen=True)
class Candidate:
    b_u: int
    sigma_u: Optional[int]
    reason: Optional[str]

    def describe(self) -> str:
        if self.sigma_u is None:
            return f"b_U={self.b_u}: {self.reason}"
        verdict = self.reason or "feasible"
        return f"b_U={self.b_u}, sigma_U={self.sigma_u}: {verdict}"


@dataclass(frozen=True)
class SearchStep:
    m: int
    feasible: bool
    candidates: Tuple[Candidate, ...]


@dataclass(frozen=True)
class SearchResult:
    """The least feasible m, and per-m records when the search was traced."""
    value: int
    steps: Tuple[SearchStep, ...] = ()

    def trace_lines(self) -> List[str]:
        lines = []
        for step in self.steps:
            lines.append(f"m={step.m}: {'feasible' if step.feasible else 'infeasible'}")
            lines.extend(f"  {cand.describe()}" for cand in step.candidates)
        return lines


def _scan(m: int, c: SplitConstraints, record: bool) -> Tuple[bool, List[Candidate]]:
    seen: List[Candidate] = []
    for b_u in range(2 * m + 1):
        b_v = 2 * m - b_u
        found_any = False
        for sigma_u in _signature_candidates(b_u, b_v, c):
            found_any = True
            reason = candidate_failure(b_u, sigma_u, m, c)
            if record:
                seen.append(Candidate(b_u, sigma_u, reason))
            if reason is None:
                return True, seen
        if record and not found_any:
            seen.append(Candidate(b_u, None, "no admissible signature with |sigma| <= min(b_U, b_V)"))
    return False, seen


def feasible(m: int, c: SplitConstraints) -> bool:
    """Whether some pair of pieces of #m S2xS2 passes every constraint."""
    if m < 0:
        raise ValueError(f"m must be non-negative, got {m}")
    return _scan(m, c, record=False)[0]


def definite_start(c: SplitConstraints) -> int:
    """
    Least m not already excluded by a negative definite filling's closed form.

    Every m below this value is infeasible for c, since each filling's closed
    form is a lower bound for the search with that filling alone.
    """
    if c.mode is Mode.ROKHLIN_ONLY:
        return 0
    starts = [definite_lower_closed_form(f.b2, c.mode)
              for f in c.fillings if f.b2 > 0 and f.sigma == -f.b2]
    return max(starts, default=0)


def search_embedding_lower(c: SplitConstraints, trace: bool = False,
                           limit: Optional[int] = None) -> SearchResult:
    """
    Least feasible m with m <= limit.

    limit is a known upper bound on the embedding number; without one the
    search stops at DEFAULT_SEARCH_LIMIT. A traced search walks every m from
    0 and keeps every candidate. Otherwise feasibility is monotone in m, so
    the search bisects between definite_start(c) and limit.

    Raises:
        RuntimeError: no m <= limit is feasible, so c contradicts the upper bound.
    """
    limit = DEFAULT_SEARCH_LIMIT if limit is None else limit
    if limit < 0:
        raise ValueError(f"limit must be non-negative, got {limit}")
    failure = f"no feasible splitting found with m <= {limit}"
    if trace:
        steps = []
        for m in range(limit + 1):
            ok, seen = _scan(m, c, record=True)
            steps.append(SearchStep(m=m, feasible=ok, candidates=tuple(seen)))
            logger.debug(f"m={m}: {'feasible' if ok else 'infeasible'}")
            if ok:
                return SearchResult(value=m, steps=tuple(steps))
        raise RuntimeError(failure)

    lo = definite_start(c)
    if lo > limit or not feasible(limit, c):
        raise RuntimeError(failure)
    hi = limit
    while lo < hi:
        mid = (lo + hi) // 2
        ok = feasible(mid, c)
        logger.debug(f"m={mid}: {'feasible' if ok else 'infeasible'}")
        if ok:
            hi = mid
        else:
            lo = mid + 1
    return SearchResult(value=hi)


def min_embedding_lower(c: SplitConstraints, limit: Optional[int] = None) -> int:
    return search_embedding_lower(c, limit=limit).value


def definite_lower_closed_form(b0: int, mode: Mode) -> int:
    """Closed-form lower bound from one negative definite spin filling with b2 = b0."""
    if b0 <= 0:
        raise ValueError(f"b0 must be positive, got {b0}")
    if mode is Mode.FURUTA_10_8:
        return (b0 + 16) // 9
    if mode is Mode.ASSUME_11_8:
        return (3 * b0 + 18) // 19
    raise ValueError("no closed form is available in RokhlinOnly mode")


def spin_filling_b2_parity(link_components: int) -> int:
    """Parity of b2 for spin fillings of the double branched cover of a link."""
    if link_components < 1:
        raise ValueError(f"a link has at least one component, got {link_components}")
    return (link_components + 1) % 2
