"""Exact integer and rational linear algebra.

Smith normal form with unimodular transforms, ranks over Q and over F_p,
minor gcds and rational inversion. Entries are Python ints (arbitrary
precision) and fractions.Fraction; no floats anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


def _check_int(x) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise TypeError(f"matrix entries must be plain ints, got {type(x).__name__}")
    return x


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, row-major. Empty shapes are allowed."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows:
            raise ValueError("entry rows do not match declared row count")
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError("ragged matrix rows")
            for x in row:
                _check_int(x)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], cols: int | None = None) -> "IntMatrix":
        data = tuple(tuple(_check_int(x) for x in row) for row in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(len(data), cols, data)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int | None = None) -> "IntMatrix":
        cols = len(columns)
        if rows is None:
            rows = len(columns[0]) if cols else 0
        data = tuple(tuple(_check_int(col[i]) for col in columns) for i in range(rows))
        return cls(rows, cols, data)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.entries)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows,
                         tuple(tuple(self.entries[i][j] for i in range(self.rows))
                               for j in range(self.cols)))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        data = tuple(
            tuple(sum(self.entries[i][k] * other.entries[k][j] for k in range(self.cols))
                  for j in range(other.cols))
            for i in range(self.rows))
        return IntMatrix(self.rows, other.cols, data)

    def is_diagonal(self) -> bool:
        return all(x == 0 for i, row in enumerate(self.entries)
                   for j, x in enumerate(row) if i != j)


@dataclass(frozen=True)
class SmithDecomposition:
    """U @ M @ V == D with U, V unimodular and D diagonal.

    The nonzero diagonal entries are the elementary divisors; consecutive
    nonzero ones divide each other and their count is the rank of M over Q.
    """

    d: IntMatrix
    u: IntMatrix
    v: IntMatrix
    elementary_divisors: tuple[int, ...]


def smith_normal_form(m: IntMatrix) -> SmithDecomposition:
    """Smith normal form with transforms.

    Pivots are chosen with minimal absolute value to damp coefficient
    growth. Works on any integer matrix, including empty ones.
    """
    nr, nc = m.rows, m.cols
    a = [list(row) for row in m.entries]
    u = [[int(i == j) for j in range(nr)] for i in range(nr)]
    v = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):
        # row_dst += f * row_src, mirrored on U
        arow, asrc = a[dst], a[src]
        for k in range(nc):
            arow[k] += f * asrc[k]
        urow, usrc = u[dst], u[src]
        for k in range(nr):
            urow[k] += f * usrc[k]

    def add_col(dst, src, f):
        for row in a:
            row[dst] += f * row[src]
        for row in v:
            row[dst] += f * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    limit = min(nr, nc)
    while t < limit:
        best = None
        pr = pc = -1
        for i in range(t, nr):
            for j in range(t, nc):
                x = a[i][j]
                if x != 0 and (best is None or abs(x) < best):
                    best, pr, pc = abs(x), i, j
        if best is None:
            break
        if pr != t:
            swap_rows(t, pr)
        if pc != t:
            swap_cols(t, pc)
        while True:
            if a[t][t] < 0:
                negate_row(t)
            p = a[t][t]
            restart = False
            for i in range(t + 1, nr):
                x = a[i][t]
                if x:
                    q = x // p
                    if q:
                        add_row(i, t, -q)
                    if a[i][t]:
                        # remainder is a strictly smaller pivot
                        swap_rows(t, i)
                        restart = True
                        break
            if restart:
                continue
            for j in range(t + 1, nc):
                x = a[t][j]
                if x:
                    q = x // p
                    if q:
                        add_col(j, t, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        restart = True
                        break
            if restart:
                continue
            bad = None
            for i in range(t + 1, nr):
                if any(a[i][j] % p for j in range(t + 1, nc)):
                    bad = i
                    break
            if bad is None:
                break
            # pull a non-divisible entry into row t and reduce again
            add_row(t, bad, 1)
        t += 1

    divisors = tuple(a[i][i] for i in range(limit) if a[i][i] != 0)
    return SmithDecomposition(
        d=IntMatrix(nr, nc, tuple(tuple(row) for row in a)),
        u=IntMatrix(nr, nr, tuple(tuple(row) for row in u)),
        v=IntMatrix(nc, nc, tuple(tuple(row) for row in v)),
        elementary_divisors=divisors,
    )


def rational_rank(m: IntMatrix) -> int:
    """Rank over Q by fraction-free elimination."""
    a = [list(row) for row in m.entries]
    nr, nc = m.rows, m.cols
    rank = 0
    for col in range(nc):
        piv = next((i for i in range(rank, nr) if a[i][col]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        pv = a[rank][col]
        for i in range(rank + 1, nr):
            x = a[i][col]
            if x:
                a[i] = [a[i][j] * pv - a[rank][j] * x for j in range(nc)]
        rank += 1
        if rank == nr:
            break
    return rank


def rank_minor_gcd(m: IntMatrix) -> int:
    """gcd of all r x r minors, r the rank over Q.

    Equals the product of the elementary divisors; defined as 1 when the
    rank is 0 (empty gcd convention), so no prime ever divides it.
    """
    g = 1
    for d in smith_normal_form(m).elementary_divisors:
        g *= d
    return g


def rank_mod_p(m: IntMatrix, p: int) -> int:
    """Rank of m with entries reduced mod the prime p."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    a = [[x % p for x in row] for row in m.entries]
    nr, nc = m.rows, m.cols
    rank = 0
    for col in range(nc):
        piv = next((i for i in range(rank, nr) if a[i][col]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][col], -1, p)
        a[rank] = [(x * inv) % p for x in a[rank]]
        for i in range(rank + 1, nr):
            x = a[i][col]
            if x:
                a[i] = [(a[i][j] - x * a[rank][j]) % p for j in range(nc)]
        rank += 1
        if rank == nr:
            break
    return rank


def determinant(m: IntMatrix) -> int:
    """Exact integer determinant (Bareiss)."""
    if m.rows != m.cols:
        raise ValueError("determinant needs a square matrix")
    n = m.rows
    if n == 0:
        return 1
    a = [list(row) for row in m.entries]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k]), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def invert_rational(m: IntMatrix) -> tuple[tuple[Fraction, ...], ...]:
    """Exact rational inverse; raises ValueError on singular input."""
    if m.rows != m.cols:
        raise ValueError("inverse needs a square matrix")
    n = m.rows
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m.entries)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col]), None)
        if piv is None:
            raise ValueError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col]:
                f = a[i][col]
                a[i] = [a[i][j] - f * a[col][j] for j in range(2 * n)]
    return tuple(tuple(row[n:]) for row in a)


def solve_linear_system(rows: Sequence[Sequence[Fraction | int]],
                        rhs: Sequence[Fraction | int]) -> tuple[Fraction, ...] | None:
    """Solve a square rational system exactly; None if singular."""
    n = len(rows)
    if n == 0:
        return ()
    a = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(rows)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col]), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col]:
                f = a[i][col]
                a[i] = [a[i][j] - f * a[col][j] for j in range(n + 1)]
    return tuple(a[i][n] for i in range(n))


def primitive_kernel_vector(rows: Sequence[Sequence[int]], n: int) -> tuple[int, ...] | None:
    """A primitive integer vector killed by every row, or None if the rows
    have full column rank. With rank n-1 the answer is unique up to sign."""
    a = [[Fraction(x) for x in row] for row in rows]
    nr = len(a)
    pivots: list[int] = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, nr) if a[i][col]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pv = a[r][col]
        a[r] = [x / pv for x in a[r]]
        for i in range(nr):
            if i != r and a[i][col]:
                f = a[i][col]
                a[i] = [a[i][j] - f * a[r][j] for j in range(n)]
        pivots.append(col)
        r += 1
    if r == n:
        return None
    free = next(j for j in range(n) if j not in pivots)
    vec = [Fraction(0)] * n
    vec[free] = Fraction(1)
    for i, col in enumerate(pivots):
        vec[col] = -a[i][free]
    return primitive_integer_vector(vec)


def primitive_integer_vector(vec: Sequence[Fraction | int]) -> tuple[int, ...]:
    """Scale a nonzero rational vector by a positive rational to the
    primitive integer vector on the same ray."""
    fracs = [Fraction(x) for x in vec]
    if all(x == 0 for x in fracs):
        raise ValueError("zero vector has no primitive representative")
    lcm = 1
    for x in fracs:
        lcm = lcm * x.denominator // gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in fracs]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)


def prime_factors(n: int) -> frozenset[int]:
    """Set of primes dividing n >= 1; empty for n = 1."""
    if n < 1:
        raise ValueError("prime_factors needs a positive integer")
    if n == 1:
        return frozenset()
    from sympy import factorint

    return frozenset(factorint(n))


def is_prime(p: int) -> bool:
    if not isinstance(p, int) or isinstance(p, bool):
        return False
    from sympy import isprime

    return bool(isprime(p))
