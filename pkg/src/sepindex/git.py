"""Torus-level geometric invariant theory on a weight support.

A vector is semistable for the torus action exactly when the origin
lies in the convex hull of its weight support; otherwise the optimal
destabilizing one-parameter subgroup is dual, under the invariant inner
product, to the minimal-norm point of the hull, and it is returned as a
primitive integral coweight (coroot-basis coordinates of the simply
connected form, so pairing against fundamental-weight coordinates is a
plain dot product). A destabilizer pairs strictly positively with the
whole support: the limit at 0 of the twisted vector vanishes.

The minimal-norm point is found by exact face enumeration: the origin
is projected onto the affine hull of every affinely independent subset
of at most rank+1 support points, projections falling outside their
simplex are discarded, and the smallest surviving norm wins. The
minimizer over a convex polytope is unique and lies in the relative
interior of some face, whose vertices contain an affinely independent
subset realizing it, so the enumeration is exhaustive; ties between
faces cannot change the point. Supports here are desk-scale, which
makes the combinatorial method preferable to iterative schemes with
tolerance questions.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from dataclasses import dataclass

from .index import CharacterSupport, subset_g
from .intlinalg import (
    IntMatrix,
    is_prime,
    primitive_integer_vector,
    primitive_kernel_vector,
    rational_rank,
    solve_linear_system,
)
from .rootdata import (
    RootDatum,
    Weight,
    check_weight,
    coweight_of_weight,
    coweight_pairing,
    inner_product,
)

STABLE = "stable"
SEMISTABLE_NOT_STABLE = "semistable_not_stable"
UNSTABLE = "unstable"


@dataclass(frozen=True)
class OneParamSubgroup:
    """Primitive integral coweight, a destabilizing direction."""

    coords: tuple[int, ...]

    def __post_init__(self):
        from math import gcd

        g = 0
        for x in self.coords:
            if not isinstance(x, int) or isinstance(x, bool):
                raise TypeError("coweight coordinates must be ints")
            g = gcd(g, x)
        if g != 1:
            raise ValueError(f"coweight {self.coords} is not primitive")

    def pairing(self, w: Sequence[int | Fraction]):
        return coweight_pairing(self.coords, w)


def support_of(datum: RootDatum, coefficients: Mapping[Sequence[int], object]) -> CharacterSupport:
    """Weights carrying a nonzero coefficient."""
    weights = [check_weight(datum, w) for w, a in coefficients.items() if a]
    if not weights:
        raise ValueError("vector has empty support")
    return CharacterSupport(datum, frozenset(weights))


def _require_support(support: CharacterSupport) -> tuple[Weight, ...]:
    pts = support.sorted_characters()
    if not pts:
        raise ValueError("empty support")
    return pts


def is_torus_separable(support: CharacterSupport, p: int) -> bool:
    """The torus orbit map at a vector with this support is separable iff
    p does not divide the minor gcd of the support."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return subset_g(support.datum, support) % p != 0


def _project_origin(datum: RootDatum, pts: Sequence[Weight]) -> tuple[Fraction, ...] | None:
    """Projection of 0 onto the affine hull of pts under the invariant
    form, returned only when it has nonnegative barycentric coordinates;
    None for affinely dependent subsets (covered by smaller ones)."""
    v0 = pts[0]
    diffs = [tuple(a - b for a, b in zip(v, v0)) for v in pts[1:]]
    if diffs:
        gram = [[inner_product(datum, di, dj) for dj in diffs] for di in diffs]
        rhs = [-inner_product(datum, di, v0) for di in diffs]
        sol = solve_linear_system(gram, rhs)
        if sol is None:
            return None
        if any(s < 0 for s in sol) or sum(sol) > 1:
            return None
        x = [Fraction(c) for c in v0]
        for s, d in zip(sol, diffs):
            if s:
                for j in range(len(x)):
                    x[j] += s * d[j]
        return tuple(x)
    return tuple(Fraction(c) for c in v0)


def minimum_norm_point(support: CharacterSupport) -> tuple[Fraction, ...]:
    """The unique point of the convex hull of the support closest to the
    origin in the invariant norm."""
    datum = support.datum
    pts = _require_support(support)
    best: tuple[Fraction, tuple[Fraction, ...]] | None = None
    max_size = min(len(pts), datum.rank + 1)
    for size in range(1, max_size + 1):
        for combo in combinations(pts, size):
            x = _project_origin(datum, combo)
            if x is None:
                continue
            key = (inner_product(datum, x, x), x)
            if best is None or key < best:
                best = key
    assert best is not None
    return best[1]


def is_torus_semistable(support: CharacterSupport) -> bool:
    """Origin inside the convex hull of the support."""
    return all(x == 0 for x in minimum_norm_point(support))


def kempf_one_ps(support: CharacterSupport) -> OneParamSubgroup | None:
    """The optimal destabilizing one-parameter subgroup, or None when the
    support is semistable.

    The returned primitive coweight is a positive multiple of the dual of
    the minimal-norm point q; it pairs with every support character at
    least as strongly as (q, q) > 0, and its normalized minimal pairing
    equals the norm of q, the optimum over all one-parameter subgroups.
    """
    q = minimum_norm_point(support)
    if all(x == 0 for x in q):
        return None
    dual = coweight_of_weight(support.datum, q)
    return OneParamSubgroup(primitive_integer_vector(dual))


def classify_section_value(support: CharacterSupport) -> str:
    """One of stable / semistable_not_stable / unstable.

    Unstable means the origin is outside the hull; stable means it is
    interior with the support spanning the full weight space, i.e. no
    nonzero coweight pairs nonnegatively with all of the support. The
    candidate coweights are kernel directions of (rank-1)-subsets: any
    extreme ray of the nonnegative-pairing cone is cut out by rank-1
    independent support characters, and if the span is deficient the
    whole orthogonal line already witnesses non-stability.
    """
    datum = support.datum
    pts = _require_support(support)
    if not is_torus_semistable(support):
        return UNSTABLE
    n = datum.rank
    span = rational_rank(IntMatrix.from_rows(pts, cols=n))
    if span < n:
        return SEMISTABLE_NOT_STABLE
    candidates: list[tuple[int, ...]] = []
    if n == 1:
        candidates.append((1,))
    else:
        for combo in combinations(pts, n - 1):
            if rational_rank(IntMatrix.from_rows(combo, cols=n)) < n - 1:
                continue
            k = primitive_kernel_vector(combo, n)
            if k is not None:
                candidates.append(k)
    for k in candidates:
        sig = [coweight_pairing(k, w) for w in pts]
        if all(s >= 0 for s in sig) or all(s <= 0 for s in sig):
            return SEMISTABLE_NOT_STABLE
    return STABLE
