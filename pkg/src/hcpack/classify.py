"""Arithmetic classification of (lattice, d2): case labels, sliding, D*.

Case taxonomy per lattice:

    A2:  TA1  no prime factor of d2 is congruent to 1 mod 3
         TA2  exactly one such prime, with exponent 1
         TB   everything else (multiple quadratic-form solutions)
    H2:  HA1/HA2/HB mirror the T-cases when 3 | d2; HC (with the companion
         value dstar2) when 3 does not divide d2; ten known exceptional
         values get their own label and are off-limits downstream.
    Z2:  a single generic label; the fine structure lives in mtriangles.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import lattice
from .errors import DomainError

# Values with sliding: density-preserving relative shifts between maximal
# packings exist, there are infinitely many maximally-dense packings and the
# contour machinery is unavailable.  Both lists are known to be complete.
H2_SLIDING = frozenset({4, 7, 31, 133})
Z2_SLIDING = frozenset({
    4, 8, 9, 18, 20, 29, 45, 72, 80, 90, 106, 121, 157, 160, 218, 281, 392,
    521, 698, 821, 1042, 1325, 1348, 1517, 1565, 2005, 2792, 3034, 3709,
    4453, 4756, 6865, 11449, 12740, 13225, 15488, 22784, 29890, 37970,
})

# Honeycomb values whose unique densest packing class is not a sublattice
# (for 67 one of two classes is non-lattice).  Detected, never enumerated.
H2_EXCEPTIONAL = frozenset({1, 13, 16, 28, 49, 64, 67, 97, 157, 256})

# Union of the two special honeycomb families; outside it the D*-construction
# gives the honeycomb packing density when 3 does not divide d2.
H2_SPECIAL = H2_EXCEPTIONAL | H2_SLIDING


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division; fine at desk scale."""
    if n < 1:
        raise DomainError(f"cannot factorize {n}")
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_loschian(n: int) -> bool:
    """n = a^2 + ab + b^2 iff primes congruent to 2 mod 3 occur in even powers."""
    if n == 0:
        return True
    return all(e % 2 == 0 for p, e in factorize(n).items() if p % 3 == 2)


def is_sum_of_two_squares(n: int) -> bool:
    if n == 0:
        return True
    return all(e % 2 == 0 for p, e in factorize(n).items() if p % 4 == 3)


@dataclass(frozen=True)
class CaseLabel:
    tag: str
    dstar2: int | None = None

    def __str__(self):
        if self.dstar2 is not None:
            return f"{self.tag}(dstar2={self.dstar2})"
        return self.tag


@dataclass(frozen=True)
class SlidingStatus:
    sliding: bool
    source: str  # "lookup" or "verified"


def _t_case(d2: int) -> str:
    ones = [(p, e) for p, e in factorize(d2).items() if p % 3 == 1]
    if not ones:
        return "TA1"
    if len(ones) == 1 and ones[0][1] == 1:
        return "TA2"
    return "TB"


def classify(kind, d2: int) -> CaseLabel:
    lattice.check_kind(kind)
    if d2 < 1:
        raise DomainError(f"d2 must be positive, got {d2}")
    if kind == lattice.Z2:
        if not is_sum_of_two_squares(d2):
            return CaseLabel("NotAttainable")
        return CaseLabel("ZGeneric")
    if not is_loschian(d2):
        return CaseLabel("NotAttainable")
    if kind == lattice.A2:
        return CaseLabel(_t_case(d2))
    # H2
    if d2 in H2_EXCEPTIONAL:
        return CaseLabel("HExceptional")
    if d2 % 3 == 0:
        return CaseLabel({"TA1": "HA1", "TA2": "HA2", "TB": "HB"}[_t_case(d2)])
    return CaseLabel("HC", dstar2=dstar(d2))


def dstar(d2: int) -> int:
    """Smallest Loeschian number strictly above d2 that is divisible by 3."""
    if not is_loschian(d2):
        raise DomainError(f"d2={d2} is not attainable on H2")
    if d2 % 3 == 0:
        raise DomainError(f"dstar is defined only when 3 does not divide d2, got {d2}")
    n = d2 + 1
    while True:
        if n % 3 == 0 and is_loschian(n):
            return n
        n += 1


def sliding_status(kind, d2: int) -> SlidingStatus:
    lattice.check_kind(kind)
    table = {lattice.A2: frozenset(), lattice.H2: H2_SLIDING, lattice.Z2: Z2_SLIDING}
    return SlidingStatus(sliding=d2 in table[kind], source="lookup")
