"""Exact sparse linear algebra: rank oracles, determinants, Smith normal form.

Two coefficient domains are supported: exact rationals (`fraction`) and the
prime field GF(p) with p = 2**31 - 1 by default.  Rank over GF(p) can only be
less than or equal to the rational rank; identity-critical callers either use
rationals or confirm GF(p) results against a second prime.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

DEFAULT_PRIME = (1 << 31) - 1

SparseColumn = Sequence[tuple[int, object]]  # sorted (row, nonzero coefficient)


class Field:
    """Arithmetic hooks for a coefficient domain."""

    def convert(self, x):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        raise NotImplementedError


class RationalField(Field):
    name = "fraction"

    def convert(self, x):
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        return 1 / Fraction(a)

    def is_zero(self, a):
        return a == 0


class PrimeField(Field):
    def __init__(self, p: int = DEFAULT_PRIME):
        self.p = p
        self.name = f"gf({p})"

    def convert(self, x):
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError("denominator divisible by the field prime")
            return x.numerator * pow(x.denominator, self.p - 2, self.p) % self.p
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        return pow(a, self.p - 2, self.p)

    def is_zero(self, a):
        return a % self.p == 0


def get_field(domain: str | Field = "fraction", prime: int = DEFAULT_PRIME) -> Field:
    if isinstance(domain, Field):
        return domain
    if domain == "fraction":
        return RationalField()
    if domain in ("gfp", "gf", "prime"):
        return PrimeField(prime)
    raise ValueError(f"unknown coefficient domain {domain!r}")


class SparseColumnMatrix:
    """Columns stored as sorted (row, coefficient) pairs; exact coefficients."""

    def __init__(self, rows: int, cols: int, columns: Iterable[SparseColumn]):
        self.rows = rows
        self.cols = cols
        self.columns: list[tuple[tuple[int, object], ...]] = [
            tuple(col) for col in columns
        ]
        if len(self.columns) != cols:
            raise ValueError("column count mismatch")
        for col in self.columns:
            prev = -1
            for r, v in col:
                if not 0 <= r < rows:
                    raise ValueError(f"row index {r} out of bounds")
                if r <= prev:
                    raise ValueError("column rows not strictly increasing")
                if v == 0:
                    raise ValueError("stored zero coefficient")
                prev = r

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence]) -> "SparseColumnMatrix":
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        columns = [
            [(i, dense[i][j]) for i in range(rows) if dense[i][j] != 0]
            for j in range(cols)
        ]
        return cls(rows, cols, columns)

    @classmethod
    def from_boundary(cls, bnd) -> "SparseColumnMatrix":
        return cls(len(bnd.row_simplices), len(bnd.col_simplices), bnd.columns)

    def to_dense(self) -> list[list]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for j, col in enumerate(self.columns):
            for i, v in col:
                out[i][j] = v
        return out

    def transpose(self) -> "SparseColumnMatrix":
        cols: list[list[tuple[int, object]]] = [[] for _ in range(self.rows)]
        for j, col in enumerate(self.columns):
            for i, v in col:
                cols[i].append((j, v))
        return SparseColumnMatrix(self.cols, self.rows, cols)

    def __repr__(self) -> str:
        nnz = sum(len(c) for c in self.columns)
        return f"SparseColumnMatrix({self.rows}x{self.cols}, nnz={nnz})"


class RankOracle:
    """Incremental linear-independence oracle over a coefficient domain.

    Accepted columns are kept as an echelon basis keyed by pivot row; a probe
    that reduces to zero is dependent and leaves the state untouched.
    """

    def __init__(self, rows: int, domain: str | Field = "fraction"):
        self.rows = rows
        self.field = get_field(domain)
        self._pivots: dict[int, dict[int, object]] = {}

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def _reduce(self, col: SparseColumn) -> dict[int, object]:
        f = self.field
        work = {r: f.convert(v) for r, v in col}
        while work:
            low = max(work)
            piv = self._pivots.get(low)
            if piv is None:
                return work
            coef = f.neg(work[low])
            for r, v in piv.items():
                acc = f.add(work.get(r, 0), f.mul(coef, v))
                if f.is_zero(acc):
                    work.pop(r, None)
                else:
                    work[r] = acc
        return work

    def would_accept(self, col: SparseColumn) -> bool:
        """Probe independence without changing the oracle."""
        return bool(self._reduce(col))

    def try_add(self, col: SparseColumn) -> bool:
        """Incorporate the column iff independent of the accepted ones."""
        work = self._reduce(col)
        if not work:
            return False
        low = max(work)
        inv = self.field.inv(work[low])
        self._pivots[low] = {r: self.field.mul(inv, v) for r, v in work.items()}
        return True


def rank(M: SparseColumnMatrix, domain: str | Field = "fraction") -> int:
    oracle = RankOracle(M.rows, domain)
    for col in M.columns:
        oracle.try_add(col)
    return oracle.rank


def _int_entries(M: SparseColumnMatrix) -> list[list[int]]:
    dense = M.to_dense()
    for row in dense:
        for v in row:
            if isinstance(v, Fraction):
                if v.denominator != 1:
                    raise ValueError("integer matrix required")
            elif not isinstance(v, int):
                raise ValueError("integer matrix required")
    return [[int(v) for v in row] for row in dense]


@dataclass(frozen=True)
class SmithForm:
    """Positive elementary divisors d_1 | d_2 | ... | d_r of an integer matrix."""

    divisors: tuple[int, ...]
    rank: int

    @property
    def product(self) -> int:
        out = 1
        for d in self.divisors:
            out *= d
        return out


def smith_normal_form(M: SparseColumnMatrix | Sequence[Sequence[int]]) -> SmithForm:
    """Diagonalize by unimodular row/column moves, pivoting on minimal |entry|.

    Arbitrary-precision integers throughout; the divisors form a divisibility
    chain and their product equals the gcd of the maximal-size minors.
    """
    if isinstance(M, SparseColumnMatrix):
        a = _int_entries(M)
    else:
        a = [[int(v) for v in row] for row in M]
    m = len(a)
    n = len(a[0]) if m else 0
    divisors: list[int] = []
    t = 0
    while t < min(m, n):
        # minimal absolute value pivot in the active submatrix
        piv = None
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best):
                    best = abs(v)
                    piv = (i, j)
                    if best == 1:
                        break
            if best == 1:
                break
        if piv is None:
            break
        i0, j0 = piv
        a[t], a[i0] = a[i0], a[t]
        if j0 != t:
            for row in a:
                row[t], row[j0] = row[j0], row[t]
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                q = a[i][t]
                if q:
                    k = q // p
                    if k:
                        a[i] = [x - k * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        dirty = True
                        break
            if dirty:
                continue
            for j in range(t + 1, n):
                q = a[t][j]
                if q:
                    k = q // p
                    if k:
                        for row in a:
                            row[j] -= k * row[t]
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        dirty = True
                        break
            if dirty:
                continue
            # pivot must divide the rest of the submatrix
            offender = None
            for i in range(t + 1, m):
                row = a[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[offender])]
        divisors.append(abs(a[t][t]))
        t += 1
    # enforce the divisibility chain (pairwise gcd/lcm fixup)
    for i in range(len(divisors)):
        for j in range(i + 1, len(divisors)):
            g = gcd(divisors[i], divisors[j])
            divisors[j] = divisors[i] * divisors[j] // g
            divisors[i] = g
    return SmithForm(tuple(divisors), len(divisors))


def determinant(M: SparseColumnMatrix | Sequence[Sequence]) -> Fraction | int:
    """Exact determinant; fraction-free Bareiss elimination for integer input."""
    dense = M.to_dense() if isinstance(M, SparseColumnMatrix) else [list(r) for r in M]
    n = len(dense)
    if any(len(row) != n for row in dense):
        raise ValueError("determinant needs a square matrix")
    if n == 0:
        return 1
    if all(isinstance(v, int) or (isinstance(v, Fraction) and v.denominator == 1)
           for row in dense for v in row):
        return _det_bareiss([[int(v) for v in row] for row in dense])
    return _det_fraction([[Fraction(v) for v in row] for row in dense])


def _det_bareiss(a: list[list[int]]) -> int:
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pk = a[k][k]
        for i in range(k + 1, n):
            row_i = a[i]
            row_k = a[k]
            aik = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (pk * row_i[j] - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = pk
    return sign * a[n - 1][n - 1]


def _det_fraction(a: list[list[Fraction]]) -> Fraction:
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        inv = 1 / a[k][k]
        for i in range(k + 1, n):
            if a[i][k] != 0:
                coef = a[i][k] * inv
                a[i] = [x - coef * y for x, y in zip(a[i], a[k])]
    return det


def gcd_of_minors(M: SparseColumnMatrix | Sequence[Sequence[int]], r: int) -> int:
    """gcd of all r x r minors; brute-force oracle for small matrices."""
    dense = M.to_dense() if isinstance(M, SparseColumnMatrix) else [list(x) for x in M]
    m, n = len(dense), len(dense[0])
    g = 0
    for rows in itertools.combinations(range(m), r):
        for cols in itertools.combinations(range(n), r):
            sub = [[dense[i][j] for j in cols] for i in rows]
            g = gcd(g, abs(_det_bareiss([row[:] for row in sub])))
    return g
