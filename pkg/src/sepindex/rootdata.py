"""Root data for the simple types A through G.

Weights are plain integer tuples in fundamental-weight coordinates of
the simply connected form: pairing a weight with the i-th simple coroot
just reads off coordinate i, and the j-th simple root is the j-th
column of the Cartan matrix. The convention is

    cartan[i][j] = <alpha_j, alpha_i_check> = 2(alpha_i, alpha_j)/(alpha_i, alpha_i),

pinned by tests against Euclidean root models (both orientations of G2
behave differently under it; here alpha_1 is the long root of G2).

The height of a weight is the sum of its coefficients over the simple
roots, extended linearly; it is rational, and integral exactly on the
root lattice. The invariant inner product is normalized so short roots
have squared length 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import GuardExceeded
from .intlinalg import IntMatrix, determinant, invert_rational

Weight = tuple[int, ...]

ADMISSIBLE_RANKS = {
    "A": lambda r: r >= 1,
    "B": lambda r: r >= 2,
    "C": lambda r: r >= 2,
    "D": lambda r: r >= 3,
    "E": lambda r: r in (6, 7, 8),
    "F": lambda r: r == 4,
    "G": lambda r: r == 2,
}

DEFAULT_ORBIT_CAP = 1_000_000


def cartan_matrix_entries(type_letter: str, rank: int) -> tuple[tuple[int, ...], ...]:
    """Generated Cartan table for the declared type, in the fixed convention."""
    if type_letter not in ADMISSIBLE_RANKS or not ADMISSIBLE_RANKS[type_letter](rank):
        raise ValueError(f"inadmissible type/rank: {type_letter}{rank}")
    m = [[2 * int(i == j) for j in range(rank)] for i in range(rank)]

    def bond(i, j, mij=-1, mji=-1):
        m[i][j] = mij
        m[j][i] = mji

    if type_letter == "A":
        for i in range(rank - 1):
            bond(i, i + 1)
    elif type_letter in ("B", "C"):
        for i in range(rank - 2):
            bond(i, i + 1)
        if type_letter == "B":
            # last simple root short: its row carries the -2
            bond(rank - 2, rank - 1, -1, -2)
        else:
            bond(rank - 2, rank - 1, -2, -1)
    elif type_letter == "D":
        for i in range(rank - 3):
            bond(i, i + 1)
        bond(rank - 3, rank - 2)
        bond(rank - 3, rank - 1)
    elif type_letter == "E":
        chain = [0, 2, 3, 4, 5, 6, 7][: rank - 1]
        for x, y in zip(chain, chain[1:]):
            bond(x, y)
        bond(1, 3)
    elif type_letter == "F":
        bond(0, 1)
        bond(1, 2, -1, -2)  # alpha_1, alpha_2 long; alpha_3, alpha_4 short
        bond(2, 3)
    elif type_letter == "G":
        bond(0, 1, -1, -3)  # alpha_1 long, alpha_2 short
    return tuple(tuple(row) for row in m)


def _symmetrizer_entries(type_letter: str, rank: int) -> tuple[int, ...]:
    # d_i = (alpha_i, alpha_i)/2 with short roots normalized to length^2 = 2
    if type_letter in ("A", "D", "E"):
        return (1,) * rank
    if type_letter == "B":
        return (2,) * (rank - 1) + (1,)
    if type_letter == "C":
        return (1,) * (rank - 1) + (2,)
    if type_letter == "F":
        return (2, 2, 1, 1)
    if type_letter == "G":
        return (3, 1)
    raise ValueError(type_letter)


@dataclass(frozen=True)
class RootDatum:
    """A simple root datum plus the character lattice of the chosen form.

    ``lattice_basis`` columns generate X(T) inside the full weight
    lattice (fundamental-weight coordinates); the identity is the simply
    connected form. Heights, orbits and roots live on the weight lattice
    and do not depend on the basis; only the character-matrix coordinates
    of higher modules do.
    """

    type_letter: str
    rank: int
    cartan: IntMatrix
    lattice_basis: IntMatrix

    def __post_init__(self):
        expected = cartan_matrix_entries(self.type_letter, self.rank)
        if self.cartan.entries != expected:
            raise ValueError(f"Cartan matrix does not match generated {self.type_letter}{self.rank} table")
        if self.lattice_basis.rows != self.rank or self.lattice_basis.cols != self.rank:
            raise ValueError("lattice basis must be rank x rank")
        if determinant(self.lattice_basis) == 0:
            raise ValueError("lattice basis is singular")

    @property
    def name(self) -> str:
        return f"{self.type_letter}{self.rank}"


def make_datum(type_letter: str, rank: int,
               lattice_basis: IntMatrix | Sequence[Sequence[int]] | None = None) -> RootDatum:
    cartan = IntMatrix.from_rows(cartan_matrix_entries(type_letter, rank), cols=rank)
    if lattice_basis is None:
        basis = IntMatrix.identity(rank)
    elif isinstance(lattice_basis, IntMatrix):
        basis = lattice_basis
    else:
        basis = IntMatrix.from_rows(lattice_basis, cols=rank)
    return RootDatum(type_letter, rank, cartan, basis)


def check_weight(datum: RootDatum, w: Sequence[int]) -> Weight:
    if len(w) != datum.rank:
        raise ValueError(f"weight length {len(w)} does not match rank {datum.rank}")
    return tuple(int(x) for x in w)


@lru_cache(maxsize=None)
def _inverse_cartan(datum: RootDatum) -> tuple[tuple[Fraction, ...], ...]:
    return invert_rational(datum.cartan)


@lru_cache(maxsize=None)
def symmetrizers(datum: RootDatum) -> tuple[int, ...]:
    return _symmetrizer_entries(datum.type_letter, datum.rank)


@lru_cache(maxsize=None)
def _form_matrix(datum: RootDatum) -> tuple[tuple[Fraction, ...], ...]:
    # (x, y) = x^T B y on fundamental-weight coordinates
    inv = _inverse_cartan(datum)
    d = symmetrizers(datum)
    return tuple(tuple(d[j] * inv[j][k] for k in range(datum.rank)) for j in range(datum.rank))


def root_coordinates(datum: RootDatum, w: Sequence[int | Fraction]) -> tuple[Fraction, ...]:
    """Coefficients of w over the simple roots."""
    inv = _inverse_cartan(datum)
    r = datum.rank
    return tuple(sum((inv[i][j] * w[j] for j in range(r)), Fraction(0)) for i in range(r))


def weight_height(datum: RootDatum, w: Sequence[int | Fraction]) -> Fraction:
    """Sum of the simple-root coefficients of w, a linear functional."""
    return sum(root_coordinates(datum, w), Fraction(0))


def inner_product(datum: RootDatum, x: Sequence[int | Fraction],
                  y: Sequence[int | Fraction]) -> Fraction:
    """Invariant form with short roots of squared length 2."""
    b = _form_matrix(datum)
    r = datum.rank
    total = Fraction(0)
    for j in range(r):
        xj = x[j]
        if xj:
            total += xj * sum((b[j][k] * y[k] for k in range(r)), Fraction(0))
    return total


def simple_reflection(datum: RootDatum, i: int, w: Sequence[int | Fraction]):
    """s_i(w) = w - <w, alpha_i_check> alpha_i."""
    c = w[i]
    if not c:
        return tuple(w)
    col = tuple(datum.cartan.entries[k][i] for k in range(datum.rank))
    return tuple(w[k] - c * col[k] for k in range(datum.rank))


def is_dominant(datum: RootDatum, w: Sequence[int | Fraction]) -> bool:
    return all(x >= 0 for x in w)


def dominant_representative(datum: RootDatum, w: Sequence[int]) -> Weight:
    """The unique dominant weight in the Weyl orbit of w.

    Reflecting at a negative coordinate strictly increases the height,
    so the loop terminates inside the (finite) orbit.
    """
    cur = check_weight(datum, w)
    while True:
        i = next((k for k, x in enumerate(cur) if x < 0), None)
        if i is None:
            return cur
        cur = simple_reflection(datum, i, cur)


def weyl_orbit(datum: RootDatum, w: Sequence[int], cap: int = DEFAULT_ORBIT_CAP) -> frozenset[Weight]:
    """Closure of {w} under the simple reflections."""
    start = check_weight(datum, w)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for v in frontier:
            for i in range(datum.rank):
                image = simple_reflection(datum, i, v)
                if image not in seen:
                    seen.add(image)
                    nxt.append(image)
                    if len(seen) > cap:
                        raise GuardExceeded("weyl-orbit", f"orbit of {start} exceeds {cap} elements")
        frontier = nxt
    return frozenset(seen)


@lru_cache(maxsize=None)
def positive_roots(datum: RootDatum) -> tuple[Weight, ...]:
    """All positive roots, sorted by (height, coordinates).

    Every root is Weyl-conjugate to a simple root, so the full root set
    is the union of the simple-root orbits; positivity is read off the
    simple-root coefficients.
    """
    roots: set[Weight] = set()
    for i in range(datum.rank):
        alpha = datum.cartan.column(i)
        roots |= weyl_orbit(datum, alpha)
    pos = []
    for beta in roots:
        coords = root_coordinates(datum, beta)
        if all(c >= 0 for c in coords):
            if any(c.denominator != 1 for c in coords):
                raise AssertionError("root with non-integral root coordinates")
            pos.append((sum(coords), beta))
    pos.sort()
    return tuple(beta for _, beta in pos)


def highest_root(datum: RootDatum) -> Weight:
    """The dominance-maximal root."""
    pos = positive_roots(datum)
    theta = pos[-1]
    for beta in pos:
        diff = root_coordinates(datum, tuple(t - b for t, b in zip(theta, beta)))
        if not all(c >= 0 for c in diff):
            raise AssertionError("no dominance-maximal positive root found")
    return theta


def coxeter_number(datum: RootDatum) -> int:
    n2 = 2 * len(positive_roots(datum))
    if n2 % datum.rank:
        raise AssertionError("positive-root count not divisible by rank")
    return n2 // datum.rank


def rho(datum: RootDatum) -> Weight:
    """Sum of the fundamental weights."""
    return (1,) * datum.rank


def dominance_leq(datum: RootDatum, mu: Sequence[int], lam: Sequence[int]) -> bool:
    """mu <= lam iff lam - mu is a nonnegative integral combination of simple roots."""
    mu = check_weight(datum, mu)
    lam = check_weight(datum, lam)
    coords = root_coordinates(datum, tuple(a - b for a, b in zip(lam, mu)))
    return all(c.denominator == 1 and c >= 0 for c in coords)


def coweight_pairing(coweight: Sequence[int], w: Sequence[int | Fraction]):
    """Pairing of a coweight (coroot-basis coordinates) with a weight
    (fundamental-weight coordinates): a plain dot product."""
    return sum(c * x for c, x in zip(coweight, w))


def coweight_of_weight(datum: RootDatum, w: Sequence[int | Fraction]) -> tuple[Fraction, ...]:
    """Coroot-basis coordinates of the coweight identified with w under
    the invariant form, i.e. the unique m with <chi, m> = (chi, w)."""
    d = symmetrizers(datum)
    c = root_coordinates(datum, w)
    return tuple(Fraction(d[j]) * c[j] for j in range(datum.rank))


def dual_simple_reflection(datum: RootDatum, i: int, coweight: Sequence[int]) -> tuple[int, ...]:
    """Action of s_i on coroot-basis coordinates of a coweight."""
    alpha = datum.cartan.column(i)
    c = coweight_pairing(coweight, alpha)
    return tuple(x - c * int(j == i) for j, x in enumerate(coweight))
