"""
Kirby Calculus on Linking Matrices.
Negative continued fractions, linear plumbings, blow-ups and blow-downs,
characteristic sublinks, and the even-framed chain presentations that give
upper bounds for lens spaces.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import List, Sequence, Tuple

import numpy as np

from embednum.services.bounds import Bound
from embednum.services.forms import QuadraticForm, determinant, is_even, signature
from embednum.utils.gf2 import gf2_solutions
from embednum.utils.logging import get_logger

logger = get_logger(__name__)

CHAIN_CITATION = "even-framed surgery presentation from the linear plumbing"


@dataclass(frozen=True)
class NegCF:
    """Canonical negative continued fraction [a1, ..., an]^- with every ai >= 2."""
    coefficients: Tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(self.coefficients)
        object.__setattr__(self, "coefficients", coeffs)
        if not coeffs:
            raise ValueError("a continued fraction needs at least one coefficient")
        if any(a < 2 for a in coeffs):
            raise ValueError(f"canonical coefficients must all be >= 2, got {list(coeffs)}")

    def __len__(self) -> int:
        return len(self.coefficients)

    def __iter__(self):
        return iter(self.coefficients)

    def __getitem__(self, index: int) -> int:
        return self.coefficients[index]


@dataclass(frozen=True)
class CharSublink:
    """Indicator vector of a characteristic sublink L' of a framed link."""
    indicator: Tuple[int, ...]

    @property
    def count(self) -> int:
        """Number of components in L'."""
        return sum(self.indicator)

    @property
    def components(self) -> Tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.indicator) if v)

    @property
    def is_empty(self) -> bool:
        return self.count == 0

    def __str__(self) -> str:
        return "(" + ",".join(str(v) for v in self.indicator) + ")"


def _check_lens_parameters(p: int, q: int):
    if p <= 1:
        raise ValueError(f"p must be > 1, got {p}")
    if not 0 < q < p:
        raise ValueError(f"q must satisfy 0 < q < p, got p={p}, q={q}")
    if gcd(p, q) != 1:
        raise ValueError(f"p and q must be coprime, got gcd({p}, {q}) = {gcd(p, q)}")


def neg_cf(p: int, q: int) -> NegCF:
    """Expand p/q = a1 - 1/(a2 - 1/(...)) with every ai >= 2."""
    _check_lens_parameters(p, q)
    coeffs = []
    while q:
        a = -(-p // q)
        coeffs.append(a)
        p, q = q, a * q - p
    return NegCF(tuple(coeffs))


def cf_to_fraction(cf: NegCF) -> Tuple[int, int]:
    p, q = 1, 0
    for a in reversed(cf.coefficients):
        p, q = a * p - q, p
    return p, q


def linking_matrix(cf: NegCF) -> QuadraticForm:
    return QuadraticForm.chain([-a for a in cf])


def _mod2_system(Q: QuadraticForm):
    matrix = np.array(Q.entries, dtype=np.int64).reshape(Q.n, Q.n)
    return matrix, np.array(Q.diagonal(), dtype=np.int64)


def is_characteristic(Q: QuadraticForm, x: CharSublink) -> bool:
    if len(x.indicator) != Q.n:
        return False
    for i, row in enumerate(Q.entries):
        total = sum(v * xi for v, xi in zip(row, x.indicator))
        if (total - row[i]) % 2:
            return False
    return True


def characteristic_sublinks(Q: QuadraticForm) -> List[CharSublink]:
    """All x with Qx = diag(Q) mod 2, in lexicographic order."""
    if Q.n == 0:
        return [CharSublink(())]
    matrix, diag = _mod2_system(Q)
    return [CharSublink(x) for x in gf2_solutions(matrix, diag)]


def even_framing_count(cf: NegCF, x: CharSublink) -> int:
    """
    Number of components of the even-framed presentation built from x.

    This is n + sum over i in L' of (a_i - 1), minus the number of
    components of L'.
    """
    if not is_characteristic(linking_matrix(cf), x):
        raise ValueError(f"{x} is not a characteristic sublink of {list(cf.coefficients)}")
    return len(cf) + sum(cf[i] - 1 for i in x.components) - x.count


def blow_up(Q: QuadraticForm, sign: int, link: Sequence[int]) -> QuadraticForm:
    """
    Add a (sign)-framed unknot with the given linking numbers.

    Framings of the existing components change by sign * lk^2, so the
    result is congruent to Q plus a (sign) block and blow_down inverts it.
    """
    if sign not in (1, -1):
        raise ValueError(f"blow-up sign must be +1 or -1, got {sign}")
    link = list(link)
    if len(link) != Q.n:
        raise ValueError(f"link vector has length {len(link)}, expected {Q.n}")
    n = Q.n
    rows = [
        [Q.entries[i][j] + sign * link[i] * link[j] for j in range(n)] + [link[i]]
        for i in range(n)
    ]
    rows.append(link + [sign])
    return QuadraticForm.from_rows(rows)


def blow_down(Q: QuadraticForm, k: int) -> QuadraticForm:
    """Remove a component with framing e = +-1: Q'[i][j] = Q[i][j] - e Q[i][k] Q[j][k]."""
    if not 0 <= k < Q.n:
        raise ValueError(f"index {k} out of range for a {Q.n}-component link")
    e = Q.entries[k][k]
    if e not in (1, -1):
        raise ValueError(f"can only blow down a +1 or -1 framed component, got framing {e}")
    keep = [i for i in range(Q.n) if i != k]
    rows = [
        [Q.entries[i][j] - e * Q.entries[i][k] * Q.entries[j][k] for j in keep]
        for i in keep
    ]
    return QuadraticForm.from_rows(rows)


def even_chain_presentation(p: int, q: int, x: CharSublink) -> QuadraticForm:
    """
    Even-framed presentation of L(p,q) obtained from the chain and x.

    Each component i of L' is blown up a_i - 1 times with +1 meridians,
    bringing its framing to -1, and is then blown down. Components of L'
    are never adjacent in a chain, so the blow-downs do not interfere.
    """
    cf = neg_cf(p, q)
    Q = linking_matrix(cf)
    if not is_characteristic(Q, x):
        raise ValueError(f"{x} is not a characteristic sublink for L({p},{q})")
    for i in x.components:
        for _ in range(cf[i] - 1):
            meridian = [1 if t == i else 0 for t in range(Q.n)]
            Q = blow_up(Q, 1, meridian)
    for i in sorted(x.components, reverse=True):
        Q = blow_down(Q, i)
    return Q


@dataclass(frozen=True)
class ChainPresentation:
    """One spin structure of L(p,q), seen through its characteristic sublink."""
    sublink: CharSublink
    count: int
    form: QuadraticForm

    @property
    def plumbing(self) -> bool:
        """True for the spin structure that extends over the plumbing (x = 0)."""
        return self.sublink.is_empty

    @property
    def filling(self) -> Tuple[int, int]:
        """(b2, sigma) of the spin 4-manifold given by the even presentation."""
        return self.form.n, signature(self.form)

    def describe(self) -> str:
        label = " (plumbing spin structure)" if self.plumbing else ""
        return f"x={self.sublink}: {self.count} even-framed components{label}"


def chain_presentations(p: int, q: int) -> List[ChainPresentation]:
    cf = neg_cf(p, q)
    result = []
    for x in characteristic_sublinks(linking_matrix(cf)):
        form = even_chain_presentation(p, q, x)
        count = even_framing_count(cf, x)
        if form.n != count or not is_even(form) or abs(determinant(form)) != p:
            raise RuntimeError(f"even presentation for L({p},{q}), x={x} failed its invariants")
        result.append(ChainPresentation(sublink=x, count=count, form=form))
    logger.debug(f"L({p},{q}): {len(result)} characteristic sublinks")
    return result


def chain_upper_bound(p: int, q: int) -> Bound:
    """Upper bound on the embedding number of L(p,q) from even chain presentations."""
    presentations = chain_presentations(p, q)
    best = min(pres.count for pres in presentations)
    bound = Bound(upper=best, upper_citation=CHAIN_CITATION)
    if len(presentations) > 1:
        for pres in presentations:
            bound = bound.with_note(pres.describe())
    return bound
