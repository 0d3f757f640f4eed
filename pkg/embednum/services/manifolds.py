"""
Manifold Families.
Lens spaces, Brieskorn spheres and knot surgeries, with the bound
assembly for each family.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt
from typing import Callable, List, Optional, Tuple

import numpy as np

from embednum.services.bounds import Assumption, Bound, Mode, weakest
from embednum.services.kirby import CHAIN_CITATION, chain_presentations
from embednum.services.obstruct import (
    SpinFilling,
    SplitConstraints,
    definite_lower_closed_form,
    rokhlin_mu,
    search_embedding_lower,
    spin_filling_b2_parity,
)
from embednum.utils.logging import get_logger

logger = get_logger(__name__)

NO_LENS_IN_S4 = "no lens space embeds in S^4"
SFS_CITATION = "Seifert fibered bound (p-1)(q-1)(r-1)"
OS_D_ZERO = "d(Sigma(2,3,6n+1)) = 0 (Ozsvath-Szabo): no definite spin filling"
CALLER_D_ZERO = "caller-supplied d = 0: no definite spin filling"
TANGE_CITATION = "spin definite filling with b2 = 8n (Tange)"

# Optional rational-ball predicate for odd p; unbound by default.
RationalBallPredicate = Callable[["LensSpace"], bool]
_rational_ball_predicate: Optional[RationalBallPredicate] = None


def set_rational_ball_predicate(predicate: Optional[RationalBallPredicate]):
    """Install (or clear with None) a predicate deciding whether L(p,q) bounds a rational ball."""
    global _rational_ball_predicate
    _rational_ball_predicate = predicate


def is_square(n: int) -> bool:
    if n < 0:
        return False
    root = isqrt(n)
    return root * root == n


@dataclass(frozen=True)
class LensSpace:
    """L(p,q): -p/q surgery on the unknot, with 0 < q < p and gcd(p,q) = 1."""
    p: int
    q: int

    def __post_init__(self):
        if self.p < 2:
            raise ValueError(f"lens space needs p >= 2, got {self.p}")
        if not 0 < self.q < self.p or gcd(self.p, self.q) != 1:
            raise ValueError(f"L({self.p},{self.q}) is not normalized (need 0 < q < p, coprime)")

    @classmethod
    def of(cls, p: int, q: int) -> "LensSpace":
        """Normalize q modulo p before constructing."""
        if p < 2:
            raise ValueError(f"lens space needs p >= 2, got {p}")
        if gcd(p, q) != 1:
            raise ValueError(f"p and q must be coprime, got gcd({p}, {q}) = {gcd(p, q)}")
        return cls(p, q % p)

    def reverse(self) -> "LensSpace":
        """Orientation reversal: -L(p,q) = L(p, p-q)."""
        return LensSpace(self.p, self.p - self.q)

    def is_diffeomorphic(self, other: "LensSpace") -> bool:
        """Orientation-preserving: same p and q' = q^(+-1) mod p."""
        if self.p != other.p:
            return False
        return self.q == other.q or (self.q * other.q) % self.p == 1

    def __str__(self) -> str:
        return f"L({self.p},{self.q})"


@dataclass(frozen=True)
class Brieskorn:
    """Sigma(p,q,r) with pairwise coprime exponents, stored sorted."""
    p: int
    q: int
    r: int

    def __post_init__(self):
        if not 2 <= self.p <= self.q <= self.r:
            raise ValueError(f"exponents must be sorted and >= 2, got {self.triple}")
        for a, b in ((self.p, self.q), (self.p, self.r), (self.q, self.r)):
            if gcd(a, b) != 1:
                raise ValueError(f"exponents must be pairwise coprime, got {self.triple}")

    @classmethod
    def of(cls, p: int, q: int, r: int) -> "Brieskorn":
        a, b, c = sorted((p, q, r))
        return cls(a, b, c)

    @property
    def triple(self) -> Tuple[int, int, int]:
        return self.p, self.q, self.r

    def __str__(self) -> str:
        return f"Sigma({self.p},{self.q},{self.r})"


# Lens spaces

def lens_basic_lower(L: LensSpace) -> Bound:
    return Bound(lower=1, lower_citation=NO_LENS_IN_S4)


def branched_link_components(L: LensSpace) -> int:
    """L(p,q) is the double branched cover of a two-bridge knot (p odd) or link (p even)."""
    return 1 if L.p % 2 else 2


def lens_bounds(L: LensSpace, mode: Mode = Mode.FURUTA_10_8, trace: bool = False) -> Bound:
    """
    All bounds for L(p,q) that do not depend on a choice of spin structure.

    The lower bound from the splitting search is the minimum over spin
    structures, each contributing the spin filling of its even chain
    presentation.
    """
    bound = lens_basic_lower(L)
    presentations = chain_presentations(L.p, L.q)
    parity = spin_filling_b2_parity(branched_link_components(L))
    bound = bound.tighten_upper(min(pres.count for pres in presentations),
                                citation=CHAIN_CITATION)
    engine_values = []
    for pres in presentations:
        b2, sigma = pres.filling
        constraints = SplitConstraints(fillings=(SpinFilling(b2, sigma),), b2_parity=parity,
                                       mode=mode, h1_order=L.p)
        result = search_embedding_lower(constraints, trace=trace, limit=pres.count)
        engine_values.append(result.value)
        bound = bound.with_note(f"{pres.describe()}, filling ({b2}, {sigma}), "
                                f"splitting search lower {result.value}")
        if trace:
            bound = bound.with_note("\n".join(result.trace_lines()))
    bound = bound.tighten_lower(min(engine_values), mode.assumption,
                                f"spin splitting search ({mode.value}), minimum over spin structures")
    if L.q in (1, L.p - 1):
        # L(p,1) = S^3_{-p}(unknot) and L(p,p-1) is its reverse.
        bound = bound.intersect(surgery_eps_bounds(L.p, 1))
    if _rational_ball_predicate is not None and L.p % 2:
        if _rational_ball_predicate(L):
            bound = bound.tighten_upper(1, Assumption.CITED_CONSTRUCTION, "bounds a rational ball")
        else:
            bound = bound.tighten_lower(2, Assumption.CITED_CONSTRUCTION, "bounds no rational ball")
    return bound


# Brieskorn spheres

def milnor_fiber(B: Brieskorn) -> SpinFilling:
    """
    (b2, sigma) of the Milnor fiber bounded by Sigma(p,q,r).

    sigma counts triples 0<i<p, 0<j<q, 0<k<r by s = i/p + j/q + k/r mod 2:
    +1 for s in (0,1), -1 for s in (1,2). Scaled by N = pqr this is exact
    integer arithmetic.
    """
    p, q, r = B.triple
    n = p * q * r
    j = np.arange(1, q, dtype=np.int64)[:, None]
    k = np.arange(1, r, dtype=np.int64)[None, :]
    base = j * (p * r) + k * (p * q)
    sigma = 0
    for i in range(1, p):
        s = (base + i * q * r) % (2 * n)
        sigma += int(np.count_nonzero((s > 0) & (s < n)))
        sigma -= int(np.count_nonzero(s > n))
    return SpinFilling(b2=(p - 1) * (q - 1) * (r - 1), sigma=sigma)


def brieskorn_mu(B: Brieskorn) -> int:
    return rokhlin_mu(milnor_fiber(B))


def tange_families(n: int) -> Tuple[Brieskorn, ...]:
    """The four Brieskorn families bounding spin definite manifolds with b2 = 8n."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return (
        Brieskorn.of(4 * n - 2, 4 * n - 1, 8 * n - 3),
        Brieskorn.of(4 * n - 1, 4 * n, 8 * n - 1),
        Brieskorn.of(4 * n - 2, 4 * n - 1, 8 * n * n - 4 * n + 1),
        Brieskorn.of(4 * n - 1, 4 * n, 8 * n * n - 1),
    )


def tange_index(B: Brieskorn) -> Optional[int]:
    """The n with B in tange_families(n), if any."""
    n = (B.q + 1) // 4
    if n < 1:
        return None
    return n if B in tange_families(n) else None


def tange_lower(n: int, mode: Mode = Mode.FURUTA_10_8) -> Bound:
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    value = definite_lower_closed_form(8 * n, mode)
    return Bound(lower=value, lower_assumption=mode.assumption, lower_citation=TANGE_CITATION)


def torus_knot_surgery(B: Brieskorn) -> Optional[Tuple[int, int]]:
    """
    Recognize Sigma(p,q,pqn+-1) as -1/n surgery on a torus knot.

    Returns:
        (n, +-1) or None.
    """
    pq = B.p * B.q
    for sign in (1, -1):
        if (B.r - sign) % pq == 0 and (B.r - sign) // pq >= 1:
            return (B.r - sign) // pq, sign
    return None


def in_two_three_family(B: Brieskorn) -> bool:
    """Sigma(2,3,6n+1)."""
    return B.p == 2 and B.q == 3 and B.r % 6 == 1


def brieskorn_bounds(B: Brieskorn, mode: Mode = Mode.FURUTA_10_8, d_zero: bool = False,
                     trace: bool = False) -> Bound:
    p, q, r = B.triple
    bound = Bound(upper=(p - 1) * (q - 1) * (r - 1), upper_citation=SFS_CITATION)
    if p % 2 == 0 and q == p + 1 and (r - 1) % (p * q) == 0 and ((r - 1) // (p * q)) % 2 == 1:
        bound = bound.tighten_upper((p + 1) ** 2 + 1,
                                    citation="Sigma(p,p+1,p(p+1)n+1), n odd: (p+1)^2 + 1")
    surgery = torus_knot_surgery(B)
    if surgery is not None and surgery[0] % 2 == 0:
        bound = bound.intersect(surgery_eps_bounds(1, surgery[0]))
    exact_two = fintushel_stern_signs(B)
    if exact_two is not None:
        bound = bound.intersect(exact_two)
    fillings = [milnor_fiber(B)]
    tange_n = tange_index(B)
    if tange_n is not None:
        fillings.append(SpinFilling(8 * tange_n, -8 * tange_n))
        bound = bound.with_note(f"member of the b2 = 8n definite families with n = {tange_n}")
    constraints = SplitConstraints(mu=brieskorn_mu(B), fillings=tuple(fillings), zhs=True,
                                   forbid_definite=d_zero, mode=mode)
    result = search_embedding_lower(constraints, trace=trace, limit=bound.upper)
    citation = f"spin splitting search ({mode.value})"
    if d_zero:
        citation += "; " + (OS_D_ZERO if in_two_three_family(B) else CALLER_D_ZERO)
    bound = bound.tighten_lower(result.value, mode.assumption, citation)
    if trace:
        bound = bound.with_note("\n".join(result.trace_lines()))
    return bound


def fintushel_stern_exact_two(p: int, q: int, r: int) -> Optional[Bound]:
    """
    Exact value 2 for Sigma(|p|,|q|,|r|) when pq + pr + qr = -1.

    Returns:
        The exact bound, or None when the identity does not hold.
    """
    for value in (p, q, r):
        if value % 2 == 0 or abs(value) <= 1:
            raise ValueError(f"entries must be odd with absolute value > 1, got {(p, q, r)}")
    for a, b in ((p, q), (p, r), (q, r)):
        if gcd(a, b) != 1:
            raise ValueError(f"entries must be pairwise coprime, got {(p, q, r)}")
    if p * q + p * r + q * r != -1:
        return None
    return Bound.exact_value(2, citation="pq + pr + qr = -1 (Fintushel-Stern)")


def fintushel_stern_signs(B: Brieskorn) -> Optional[Bound]:
    """Exact value 2 when some sign choice on an all-odd triple satisfies pq + pr + qr = -1."""
    p, q, r = B.triple
    if not (p % 2 and q % 2 and r % 2):
        return None
    for signed in ((-p, q, r), (p, -q, r), (p, q, -r)):
        exact = fintushel_stern_exact_two(*signed)
        if exact is not None:
            return exact
    return None


def fintushel_stern_family(p: int) -> Tuple[int, int, int]:
    """Signed triple realising Sigma(p-2, p, (p^2-2p-1)/2) in the pq + pr + qr = -1 family."""
    if p < 5 or p % 2 == 0:
        raise ValueError(f"the family needs odd p >= 5, got {p}")
    return -(p - 2), p, (p * p - 2 * p - 1) // 2


def fintushel_stern_triples(limit: int) -> List[Tuple[int, int, int]]:
    """All signed odd triples a < b < c, 1 < |.| <= limit, pairwise coprime, with ab + ac + bc = -1."""
    values = [v for v in range(-limit, limit + 1) if v % 2 and abs(v) > 1]
    found = []
    for x, a in enumerate(values):
        for y in range(x + 1, len(values)):
            b = values[y]
            if gcd(a, b) != 1:
                continue
            for c in values[y + 1:]:
                if a * b + a * c + b * c == -1 and gcd(a, c) == 1 and gcd(b, c) == 1:
                    found.append((a, b, c))
    return found


# Knot surgeries and general rules

def surgery_eps_bounds(p: int, q: int) -> Bound:
    """Knot-independent bounds for S^3_{p/q}(K)."""
    if q == 0 and abs(p) != 1:
        raise ValueError(f"p/q = {p}/0 is not a valid surgery coefficient")
    if gcd(p, q) != 1:
        raise ValueError(f"p and q must be coprime, got gcd({p}, {q}) = {gcd(p, q)}")
    if q < 0:
        p, q = -p, -q
    a = abs(p)
    bound = Bound()
    if a <= 1:
        if a == 1 and q % 2 == 0 and q != 0:
            return bound.tighten_upper(2, citation="S^3_{1/2n}(K) has embedding number at most 2")
        note = "S^3_0(K) has b1 = 1" if a == 0 else "integral homology sphere surgery"
        return bound.with_note(f"{note}: no knot-independent bound")
    bound = bound.tighten_lower(1, citation="H1 = Z/p is not of the form G + G")
    if q == 1 and a % 2 == 0:
        bound = bound.tighten_upper(1, citation="even integral surgery embeds in S2xS2")
    elif q == 1 and not is_square(a):
        bound = bound.tighten_lower(2, citation="odd integral surgery, |H1| not a square")
    return bound


def dbc_upper(genus: int, unknotting: int) -> Bound:
    """Double branched cover bound: 2 min(g(K), u(K))."""
    if genus < 0 or unknotting < 0:
        raise ValueError("genus and unknotting number must be non-negative")
    return Bound(upper=2 * min(genus, unknotting),
                 upper_citation="double branched cover: 2 min(g, u)")


def connected_sum(a: Bound, b: Bound) -> Bound:
    """Upper bound for M # N from bounds for M and N."""
    if a.upper is None or b.upper is None:
        return Bound().with_note("connected sum: no upper bound without both summands bounded")
    return Bound(upper=a.upper + b.upper,
                 upper_assumption=weakest(a.upper_assumption, b.upper_assumption),
                 upper_citation="subadditivity under connected sum")


def orientation_reverse(a: Bound) -> Bound:
    """The embedding number does not see orientation."""
    return a


def sum_with_reverse(a: Bound) -> Bound:
    """Upper bound for M # -M from a bound for M."""
    if a.upper is None:
        return Bound()
    return Bound(upper=a.upper, upper_assumption=a.upper_assumption,
                 upper_citation="M # -M embeds wherever M does")
