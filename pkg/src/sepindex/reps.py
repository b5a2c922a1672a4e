"""Weight multisets of rational representations.

Characters are the characteristic-zero (Weyl module) characters:
dominant supports by exact enumeration, multiplicities by Freudenthal's
recursion with the invariant form, totals cross-checked against the
Weyl dimension formula in the test suite. Constructors (sums, tensors,
duals, symmetric and exterior powers of the type-A standard module)
operate on the multisets directly.

Representation heights follow the convention that the height of a
module is the maximum of twice the weight height over the dominant
weights present. Subtracting a positive root can only lower the height,
so for a single Weyl module the maximum sits at the highest weight; the
general operation still scans the whole support so that restrictions
and other hand-built multisets are handled correctly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import comb, factorial
from typing import Iterable, Mapping, Sequence, Union

from .errors import GuardExceeded
from .intlinalg import is_prime
from .rootdata import (
    RootDatum,
    Weight,
    cartan_matrix_entries,
    check_weight,
    dominant_representative,
    highest_root,
    inner_product,
    is_dominant,
    make_datum,
    positive_roots,
    rho,
    root_coordinates,
    simple_reflection,
    weight_height,
    weyl_orbit,
)

DEFAULT_DIMENSION_CAP = 200_000


@dataclass(frozen=True)
class WeightMultiset:
    """Weights of a representation with positive multiplicities.

    For an honest representation of the semisimple group the multiset is
    Weyl-symmetric and its weighted sum vanishes; ``assert_valid`` checks
    both (tests call it, hot paths do not).
    """

    datum: RootDatum
    entries: dict[Weight, int]

    def __post_init__(self):
        if not self.entries:
            raise ValueError("empty weight multiset")
        for w, m in self.entries.items():
            check_weight(self.datum, w)
            if not isinstance(m, int) or m <= 0:
                raise ValueError(f"multiplicity of {w} must be a positive integer")

    def dimension(self) -> int:
        return sum(self.entries.values())

    def distinct_weights(self) -> frozenset[Weight]:
        return frozenset(self.entries)

    def assert_valid(self) -> None:
        r = self.datum.rank
        total = [0] * r
        for w, m in self.entries.items():
            for k in range(r):
                total[k] += m * w[k]
            for i in range(r):
                image = simple_reflection(self.datum, i, w)
                if self.entries.get(image) != m:
                    raise AssertionError(f"multiset not Weyl-symmetric at {w} / reflection {i}")
        if any(total):
            raise AssertionError(f"weighted sum of weights is {tuple(total)}, not zero")


# ---------------------------------------------------------------------------
# Weyl modules


def dominant_weights_below(datum: RootDatum, hw: Sequence[int]) -> list[tuple[int, Weight]]:
    """All dominant mu <= hw with hw - mu in the root lattice.

    Returned as (depth, mu) pairs where depth is the number of simple
    roots subtracted (so the weight height is ht(hw) - depth). The search
    walks the subtraction vector k coordinate by coordinate; dominance
    constraints become interval bounds on k once the last simple root
    they mention is reached, and the root coordinates of hw bound each
    k_i from above because the inverse Cartan matrix is positive.
    """
    hw = check_weight(datum, hw)
    if not is_dominant(datum, hw):
        raise ValueError(f"{hw} is not dominant")
    r = datum.rank
    m = datum.cartan.entries
    cb = root_coordinates(datum, hw)
    kmax = [int(x) for x in cb]  # floor; coordinates are nonnegative
    cons_at: list[list[int]] = [[] for _ in range(r)]
    for i in range(r):
        cons_at[max(j for j in range(r) if m[i][j])].append(i)
    out: list[tuple[int, Weight]] = []
    k = [0] * r

    def descend(depth: int, subtracted: int) -> None:
        if depth == r:
            mu = tuple(hw[i] - sum(m[i][j] * k[j] for j in range(r) if k[j]) for i in range(r))
            out.append((subtracted, mu))
            return
        lo, hi = 0, kmax[depth]
        for i in cons_at[depth]:
            s = hw[i] - sum(m[i][j] * k[j] for j in range(r) if j != depth and m[i][j] and k[j])
            c = m[i][depth]
            if c > 0:
                hi = min(hi, s // 2)
            else:
                lo = max(lo, -(s // (-c)))
        for val in range(lo, hi + 1):
            k[depth] = val
            descend(depth + 1, subtracted + val)
        k[depth] = 0

    descend(0, 0)
    return out


def weyl_dimension(datum: RootDatum, hw: Sequence[int]) -> int:
    """Weyl dimension formula, evaluated as an exact rational product."""
    hw = check_weight(datum, hw)
    if not is_dominant(datum, hw):
        raise ValueError(f"{hw} is not dominant")
    rh = rho(datum)
    shifted = tuple(a + b for a, b in zip(hw, rh))
    num = Fraction(1)
    for alpha in positive_roots(datum):
        num *= Fraction(inner_product(datum, shifted, alpha), inner_product(datum, rh, alpha))
    if num.denominator != 1:
        raise AssertionError("Weyl dimension formula did not produce an integer")
    return int(num)


@lru_cache(maxsize=None)
def _dominant_character(datum: RootDatum, hw: Weight) -> tuple[tuple[Weight, int], ...]:
    """Multiplicities of the dominant weights of the Weyl module, by
    Freudenthal's recursion processed in decreasing weight height."""
    support = dominant_weights_below(datum, hw)
    support.sort(key=lambda t: (t[0], t[1]))
    support_set = {mu for _, mu in support}
    pos = positive_roots(datum)
    rh = rho(datum)
    shifted_norm = inner_product(datum, tuple(a + b for a, b in zip(hw, rh)),
                                 tuple(a + b for a, b in zip(hw, rh)))
    mult: dict[Weight, int] = {}
    for depth, mu in support:
        if depth == 0:
            mult[mu] = 1
            continue
        mu_rho = tuple(a + b for a, b in zip(mu, rh))
        denom = shifted_norm - inner_product(datum, mu_rho, mu_rho)
        total = Fraction(0)
        for alpha in pos:
            j = 1
            while True:
                nu = tuple(a + j * b for a, b in zip(mu, alpha))
                m_nu = mult.get(dominant_representative(datum, nu))
                if m_nu is None:
                    break
                total += m_nu * inner_product(datum, nu, alpha)
                j += 1
        val = 2 * total / denom
        if val.denominator != 1 or val <= 0:
            raise AssertionError(f"Freudenthal recursion failed at {mu}")
        mult[mu] = int(val)
    return tuple(mult.items())


def dominant_character(datum: RootDatum, hw: Sequence[int]) -> dict[Weight, int]:
    hw = check_weight(datum, hw)
    if not is_dominant(datum, hw):
        raise ValueError(f"{hw} is not dominant")
    return dict(_dominant_character(datum, hw))


def weyl_module_weights(datum: RootDatum, hw: Sequence[int],
                        cap: int = DEFAULT_DIMENSION_CAP) -> WeightMultiset:
    """Full weight multiset of the Weyl module with the given highest weight."""
    hw = check_weight(datum, hw)
    dim = weyl_dimension(datum, hw)
    if dim > cap:
        raise GuardExceeded("dimension", f"module of dimension {dim} exceeds cap {cap}")
    entries: dict[Weight, int] = {}
    for mu, m in dominant_character(datum, hw).items():
        for w in weyl_orbit(datum, mu, cap=cap):
            entries[w] = m
    return WeightMultiset(datum, entries)


def irreducible_height(datum: RootDatum, hw: Sequence[int]) -> Fraction:
    """Height of the module with highest weight hw, without expanding it.

    Every dominant weight present sits below hw in the dominance order,
    and height only drops when positive roots are subtracted, so the
    maximum of 2 ht over the support is 2 ht(hw). The agreement with the
    expanded-multiset route is a test invariant.
    """
    hw = check_weight(datum, hw)
    if not is_dominant(datum, hw):
        raise ValueError(f"{hw} is not dominant")
    return 2 * weight_height(datum, hw)


# ---------------------------------------------------------------------------
# Representation constructors


@dataclass(frozen=True)
class Irreducible:
    highest_weight: tuple[int, ...]


@dataclass(frozen=True)
class Named:
    name: str  # trivial | standard | adjoint


@dataclass(frozen=True)
class Dual:
    base: "RepSpec"


@dataclass(frozen=True)
class DirectSum:
    parts: tuple["RepSpec", ...]


@dataclass(frozen=True)
class Tensor:
    factors: tuple["RepSpec", ...]


@dataclass(frozen=True)
class SymmetricPower:
    power: int
    base: "RepSpec"


@dataclass(frozen=True)
class ExteriorPower:
    power: int
    base: "RepSpec"


RepSpec = Union[Irreducible, Named, Dual, DirectSum, Tensor, SymmetricPower, ExteriorPower]

CATALOG_NAMES = ("trivial", "standard", "adjoint")


def resolve_named(datum: RootDatum, name: str) -> Irreducible:
    if name == "trivial":
        return Irreducible((0,) * datum.rank)
    if name == "standard":
        if datum.type_letter not in ("A", "B", "C", "D"):
            raise ValueError(f"'standard' is only defined for classical types, not {datum.name}")
        return Irreducible(tuple(int(i == 0) for i in range(datum.rank)))
    if name == "adjoint":
        return Irreducible(highest_root(datum))
    raise ValueError(f"unknown catalog name {name!r}")


def spec_string(spec: RepSpec) -> str:
    """Canonical text form; parses back to an equal tree."""
    if isinstance(spec, Named):
        return spec.name
    if isinstance(spec, Irreducible):
        return "hw(" + ",".join(str(x) for x in spec.highest_weight) + ")"
    if isinstance(spec, Dual):
        return f"dual({spec_string(spec.base)})"
    if isinstance(spec, DirectSum):
        return "sum(" + ",".join(spec_string(p) for p in spec.parts) + ")"
    if isinstance(spec, Tensor):
        return "tensor(" + ",".join(spec_string(p) for p in spec.factors) + ")"
    if isinstance(spec, SymmetricPower):
        return f"sym({spec.power},{spec_string(spec.base)})"
    if isinstance(spec, ExteriorPower):
        return f"wedge({spec.power},{spec_string(spec.base)})"
    raise TypeError(f"not a rep spec: {spec!r}")


def _tensor_pair(a: WeightMultiset, b: WeightMultiset, cap: int) -> WeightMultiset:
    if a.dimension() * b.dimension() > cap:
        raise GuardExceeded("dimension",
                            f"tensor of dimensions {a.dimension()} x {b.dimension()} exceeds cap {cap}")
    entries: dict[Weight, int] = {}
    for w1, m1 in a.entries.items():
        for w2, m2 in b.entries.items():
            key = tuple(x + y for x, y in zip(w1, w2))
            entries[key] = entries.get(key, 0) + m1 * m2
    return WeightMultiset(a.datum, entries)


def _is_type_a_standard(datum: RootDatum, spec: RepSpec) -> bool:
    if datum.type_letter != "A":
        return False
    if isinstance(spec, Named):
        return spec.name == "standard"
    if isinstance(spec, Irreducible):
        return spec.highest_weight == resolve_named(datum, "standard").highest_weight
    return False


def _power_base_weights(datum: RootDatum, spec: RepSpec, cap: int) -> list[Weight]:
    # symmetric/exterior powers are exposed for the type-A standard module
    # only (all the SL(n) bookkeeping the indices need); the recursion
    # below would work for any multiplicity-free multiset.
    if not _is_type_a_standard(datum, spec):
        raise ValueError("symmetric/exterior powers are supported for the standard module of type A only")
    base = expand(datum, spec, cap=cap)
    out: list[Weight] = []
    for w, m in sorted(base.entries.items()):
        out.extend([w] * m)
    return out


def _exterior_power(datum: RootDatum, weights: list[Weight], k: int, cap: int) -> WeightMultiset:
    n = len(weights)
    if k < 0 or k > n:
        raise ValueError(f"exterior power {k} out of range for dimension {n}")
    if comb(n, k) > cap:
        raise GuardExceeded("dimension", f"wedge^{k} of dimension {comb(n, k)} exceeds cap {cap}")
    zero = (0,) * datum.rank
    dp: list[dict[Weight, int]] = [{zero: 1}] + [dict() for _ in range(k)]
    for w in weights:
        for c in range(min(k, n) - 1, -1, -1):
            if dp[c]:
                tgt = dp[c + 1]
                for s, m in dp[c].items():
                    key = tuple(x + y for x, y in zip(s, w))
                    tgt[key] = tgt.get(key, 0) + m
    return WeightMultiset(datum, dp[k])


def _symmetric_power(datum: RootDatum, weights: list[Weight], k: int, cap: int) -> WeightMultiset:
    if k < 0:
        raise ValueError("symmetric power must be nonnegative")
    n = len(weights)
    if comb(n + k - 1, k) > cap:
        raise GuardExceeded("dimension",
                            f"sym^{k} of dimension {comb(n + k - 1, k)} exceeds cap {cap}")
    zero = (0,) * datum.rank
    dp: list[dict[Weight, int]] = [{zero: 1}] + [dict() for _ in range(k)]
    for w in weights:
        # ascending sweep lets the same basis vector repeat (multisets)
        for c in range(k):
            if dp[c]:
                tgt = dp[c + 1]
                for s, m in dp[c].items():
                    key = tuple(x + y for x, y in zip(s, w))
                    tgt[key] = tgt.get(key, 0) + m
    return WeightMultiset(datum, dp[k])


def expand(datum: RootDatum, spec: RepSpec, cap: int = DEFAULT_DIMENSION_CAP) -> WeightMultiset:
    """Weight multiset of a constructor tree."""
    if isinstance(spec, Named):
        return expand(datum, resolve_named(datum, spec.name), cap=cap)
    if isinstance(spec, Irreducible):
        return weyl_module_weights(datum, spec.highest_weight, cap=cap)
    if isinstance(spec, Dual):
        base = expand(datum, spec.base, cap=cap)
        return WeightMultiset(datum, {tuple(-x for x in w): m for w, m in base.entries.items()})
    if isinstance(spec, DirectSum):
        if not spec.parts:
            raise ValueError("empty direct sum is not a representation here")
        entries: dict[Weight, int] = {}
        for part in spec.parts:
            for w, m in expand(datum, part, cap=cap).entries.items():
                entries[w] = entries.get(w, 0) + m
        return WeightMultiset(datum, entries)
    if isinstance(spec, Tensor):
        if not spec.factors:
            raise ValueError("empty tensor product is not supported")
        out = expand(datum, spec.factors[0], cap=cap)
        for part in spec.factors[1:]:
            out = _tensor_pair(out, expand(datum, part, cap=cap), cap)
        return out
    if isinstance(spec, SymmetricPower):
        return _symmetric_power(datum, _power_base_weights(datum, spec.base, cap), spec.power, cap)
    if isinstance(spec, ExteriorPower):
        return _exterior_power(datum, _power_base_weights(datum, spec.base, cap), spec.power, cap)
    raise TypeError(f"not a rep spec: {spec!r}")


# ---------------------------------------------------------------------------
# Heights on multisets


def dominant_weights_occurring(ms: WeightMultiset) -> frozenset[Weight]:
    return frozenset(w for w in ms.entries if is_dominant(ms.datum, w))


def rep_height(datum: RootDatum, ms: WeightMultiset) -> Fraction:
    """max of 2 ht over the dominant weights present."""
    if ms.datum != datum:
        raise ValueError("multiset belongs to a different root datum")
    dom = dominant_weights_occurring(ms)
    if not dom:
        raise ValueError("no dominant weight present; not a Weyl-closed multiset")
    return max(2 * weight_height(datum, w) for w in dom)


def is_low_height(datum: RootDatum, ms: WeightMultiset, p: int) -> bool:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return rep_height(datum, ms) < p


# ---------------------------------------------------------------------------
# Levi restriction


def _identify_simple_diagram(sub: tuple[tuple[int, ...], ...]) -> tuple[str, tuple[int, ...]]:
    """Match a connected Cartan submatrix against the generated tables.

    Returns (type_letter, perm) with sub[perm[i]][perm[j]] equal to the
    standard table entry (i, j).
    """
    k = len(sub)
    candidates = [letter for letter, ok in (
        ("A", k >= 1), ("B", k >= 2), ("C", k >= 2), ("D", k >= 3),
        ("E", k in (6, 7, 8)), ("F", k == 4), ("G", k == 2),
    ) if ok]
    row_profile = sorted(sorted(row) for row in sub)
    for letter in candidates:
        std = cartan_matrix_entries(letter, k)
        if sorted(sorted(row) for row in std) != row_profile:
            continue
        for perm in permutations(range(k)):
            if all(sub[perm[i]][perm[j]] == std[i][j] for i in range(k) for j in range(k)):
                return letter, perm
    raise ValueError("submatrix is not the Cartan matrix of a single simple type")


def _connected(sub: tuple[tuple[int, ...], ...]) -> bool:
    k = len(sub)
    seen = {0}
    frontier = [0]
    while frontier:
        i = frontier.pop()
        for j in range(k):
            if j not in seen and sub[i][j] != 0 and i != j:
                seen.add(j)
                frontier.append(j)
    return len(seen) == k


def restrict_to_levi(datum: RootDatum, simple_subset: Iterable[int],
                     ms: WeightMultiset) -> WeightMultiset:
    """Restriction to the Levi generated by a subset of the simple roots.

    Weights project by pairing with the retained simple coroots, which in
    fundamental-weight coordinates just selects the retained entries;
    multiplicities of weights with equal projection accumulate. The
    subset must induce a connected subdiagram (a single simple type);
    products must be handled factor by factor by the caller.
    """
    idxs = sorted(set(simple_subset))
    if not idxs:
        raise ValueError("simple_subset must be nonempty")
    if len(idxs) >= datum.rank:
        raise ValueError("simple_subset must be a proper subset of the simple roots")
    if idxs[0] < 0 or idxs[-1] >= datum.rank:
        raise ValueError("simple-root index out of range")
    cart = datum.cartan.entries
    sub = tuple(tuple(cart[i][j] for j in idxs) for i in idxs)
    if not _connected(sub):
        raise ValueError("simple_subset induces a product of types; restrict one connected piece at a time")
    letter, perm = _identify_simple_diagram(sub)
    target = make_datum(letter, len(idxs))
    entries: dict[Weight, int] = {}
    for w, m in ms.entries.items():
        key = tuple(w[idxs[perm[i]]] for i in range(len(idxs)))
        entries[key] = entries.get(key, 0) + m
    return WeightMultiset(target, entries)
