"""Torsion primes and the separable index of a representation.

For a subset S of the distinct characters of a module, the map sending
the free basis to the characters has a gcd of rank-sized minors g_S; a
prime divides g_S exactly when the rank of the character matrix drops
mod p, i.e. when the torus stabilizer of a vector supported on S picks
up infinitesimal directions. The torsion-prime index is the largest
prime dividing any g_S, and the separable index is its maximum with the
representation height. Primes above the separable index act with
reduced stabilizers everywhere.

Subset enumeration is pruned to rationally independent subsets of size
at most the rank: if the rank of the character matrix of S drops mod p,
so does the rank of every independent rank-sized subfamily of its
columns (a column subset can only lose rank), and independent subsets
are themselves subsets of the support, so the pruned union is the full
union. The equality against the full powerset is a test invariant.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import ceil, comb, factorial
from typing import Iterable, Sequence

from .errors import GuardExceeded
from .intlinalg import (
    IntMatrix,
    invert_rational,
    is_prime,
    prime_factors,
    rank_minor_gcd,
    rational_rank,
)
from .reps import DEFAULT_DIMENSION_CAP, RepSpec, WeightMultiset, expand, rep_height
from .rootdata import RootDatum, Weight, check_weight

DEFAULT_SUBSET_CAP = 2_000_000


@dataclass(frozen=True)
class CharacterSupport:
    """A set of distinct characters, in fundamental-weight coordinates."""

    datum: RootDatum
    characters: frozenset[Weight]

    def __post_init__(self):
        for w in self.characters:
            check_weight(self.datum, w)

    def sorted_characters(self) -> tuple[Weight, ...]:
        return tuple(sorted(self.characters))


def character_support(datum: RootDatum, weights: Iterable[Sequence[int]]) -> CharacterSupport:
    return CharacterSupport(datum, frozenset(check_weight(datum, w) for w in weights))


def support_of_multiset(ms: WeightMultiset) -> CharacterSupport:
    return CharacterSupport(ms.datum, ms.distinct_weights())


def _lattice_coordinates(datum: RootDatum, w: Weight) -> tuple[int, ...]:
    # solve lattice_basis . x = w exactly and insist on integrality
    inv = invert_rational(datum.lattice_basis)
    coords = []
    for i in range(datum.rank):
        c = sum((inv[i][j] * w[j] for j in range(datum.rank)), Fraction(0))
        if c.denominator != 1:
            raise ValueError(f"character {w} is not in the declared character lattice")
        coords.append(int(c))
    return tuple(coords)


def character_matrix(datum: RootDatum, support: CharacterSupport) -> IntMatrix:
    """rank x |S| matrix whose columns are the characters in the
    coordinates of the datum's character lattice."""
    if datum != support.datum:
        raise ValueError("support belongs to a different root datum")
    chars = support.sorted_characters()
    if not chars:
        raise ValueError("character support is empty")
    return IntMatrix.from_columns([_lattice_coordinates(datum, w) for w in chars],
                                  rows=datum.rank)


def subset_g(datum: RootDatum, support: CharacterSupport) -> int:
    """gcd of the rank-sized minors of the character matrix; 1 at rank 0."""
    return rank_minor_gcd(character_matrix(datum, support))


def torsion_primes(datum: RootDatum, full_support: CharacterSupport,
                   cap: int = DEFAULT_SUBSET_CAP) -> frozenset[int]:
    """Primes dividing g_S for some subset S of the support."""
    if datum != full_support.datum:
        raise ValueError("support belongs to a different root datum")
    chars = full_support.sorted_characters()
    cols = [_lattice_coordinates(datum, w) for w in chars]
    n = len(cols)
    r = datum.rank
    max_size = min(r, n)
    total = sum(comb(n, s) for s in range(1, max_size + 1))
    if total > cap:
        raise GuardExceeded("subset-enumeration",
                            f"{total} candidate subsets of {n} characters exceed cap {cap}")
    primes: set[int] = set()
    for size in range(1, max_size + 1):
        for combo in combinations(range(n), size):
            m = IntMatrix.from_columns([cols[i] for i in combo], rows=r)
            if rational_rank(m) < size:
                continue
            g = rank_minor_gcd(m)
            if g > 1:
                primes |= prime_factors(g)
    return frozenset(primes)


def torsion_primes_powerset(datum: RootDatum, full_support: CharacterSupport,
                            cap: int = DEFAULT_SUBSET_CAP) -> frozenset[int]:
    """Reference enumeration over every nonempty subset; exponential, for
    cross-checking the pruned route at small sizes."""
    chars = full_support.sorted_characters()
    cols = [_lattice_coordinates(datum, w) for w in chars]
    n = len(cols)
    if 2 ** n - 1 > cap:
        raise GuardExceeded("subset-enumeration", f"2^{n}-1 subsets exceed cap {cap}")
    primes: set[int] = set()
    for size in range(1, n + 1):
        for combo in combinations(range(n), size):
            g = rank_minor_gcd(IntMatrix.from_columns([cols[i] for i in combo], rows=datum.rank))
            if g > 1:
                primes |= prime_factors(g)
    return frozenset(primes)


@dataclass(frozen=True)
class IndexReport:
    """Computed bundle of prime bounds for one representation."""

    height: Fraction
    torsion_primes: frozenset[int]
    p_T: int
    psi: Fraction
    dimension: int
    weak_bound: int

    def __post_init__(self):
        if self.psi != max(self.height, Fraction(self.p_T)):
            raise ValueError("psi must equal max(height, p_T)")
        if self.torsion_primes and self.p_T != max(self.torsion_primes):
            raise ValueError("p_T must be the largest torsion prime")
        if not self.torsion_primes and self.p_T != 1:
            raise ValueError("p_T defaults to 1 without torsion primes")


def separable_index(datum: RootDatum, spec: RepSpec,
                    dimension_cap: int = DEFAULT_DIMENSION_CAP,
                    subset_cap: int = DEFAULT_SUBSET_CAP) -> IndexReport:
    """Height, torsion primes, separable index and the factorial bound."""
    ms = expand(datum, spec, cap=dimension_cap)
    height = rep_height(datum, ms)
    primes = torsion_primes(datum, support_of_multiset(ms), cap=subset_cap)
    p_t = max(primes) if primes else 1
    psi = max(height, Fraction(p_t))
    weak = factorial(datum.rank) * ceil(height) ** datum.rank
    return IndexReport(
        height=height,
        torsion_primes=primes,
        p_T=p_t,
        psi=psi,
        dimension=ms.dimension(),
        weak_bound=weak,
    )


def is_low_separable_index(report: IndexReport, p: int) -> bool:
    """p is safely above every obstruction iff p > psi."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return Fraction(p) > report.psi


def check_weak_bound(report: IndexReport) -> bool:
    """p_T <= rank! * ceil(height)^rank; a False here means a bug upstream."""
    if report.height < 1:
        raise ValueError("weak bound is only meaningful for height >= 1")
    return report.p_T <= report.weak_bound
