"""Fast rank/pairing engines for Monte Carlo trials.

The jitted kernel runs the greedy column reduction over GF(2**31 - 1) (a
Mersenne prime, so reduction is shift-and-add) on dense row vectors; it
returns, for every column in event order, whether it entered the greedy basis
and which row it pairs with.  Rows are fed in reverse event order so the
reduction's pivot is always the youngest face, which makes the (row, column)
pairs exactly the persistence pairs one degree down.

Degree-1 ranks (graphs) use a plain union-find instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numba import njit

from .simplicial import Filtration, Simplex, boundary_matrix

MERSENNE_P = (1 << 31) - 1
_P = np.uint64(MERSENNE_P)
_MASK = np.uint64(MERSENNE_P)
_SHIFT = np.uint64(31)
_ZERO = np.uint64(0)


@njit(cache=True, inline="always")
def _fold(x):
    x = (x & _MASK) + (x >> _SHIFT)
    x = (x & _MASK) + (x >> _SHIFT)
    if x >= _P:
        x -= _P
    return x


@njit(cache=True, inline="always")
def _mulmod(a, b):
    return _fold(a * b)


@njit(cache=True)
def _modinv(a):
    # Fermat: a^(p-2) mod p
    e = _P - np.uint64(2)
    out = np.uint64(1)
    base = a
    while e > _ZERO:
        if e & np.uint64(1):
            out = _mulmod(out, base)
        base = _mulmod(base, base)
        e >>= np.uint64(1)
    return out


@njit(cache=True)
def greedy_pairing_gfp(col_starts, col_rows, col_vals, n_rows, max_rank):
    """Greedy left-to-right reduction; returns (accepted, pivot_row, processed).

    ``col_starts``/``col_rows``/``col_vals`` hold the columns in CSR layout
    with values already reduced mod p.  Stops once ``max_rank`` columns are
    accepted; later columns are necessarily dependent.
    """
    nc = col_starts.size - 1
    cap = max_rank if max_rank > 0 else 1
    basis = np.zeros((cap, n_rows), np.uint64)
    pivot_of_row = np.full(n_rows, -1, np.int64)
    accepted = np.zeros(nc, np.bool_)
    pivot_row = np.full(nc, -1, np.int64)
    work = np.zeros(n_rows, np.uint64)
    rank = 0
    processed = nc
    for j in range(nc):
        if rank >= max_rank:
            processed = j
            break
        lo = n_rows
        for t in range(col_starts[j], col_starts[j + 1]):
            r = col_rows[t]
            work[r] = _fold(work[r] + col_vals[t])
            if r < lo:
                lo = r
        pos = lo
        accept_pos = -1
        while pos < n_rows:
            v = work[pos]
            if v != _ZERO:
                b = pivot_of_row[pos]
                if b < 0:
                    accept_pos = pos
                    break
                row = basis[b]
                for i in range(pos, n_rows):
                    work[i] = _fold(work[i] + v * (_P - row[i]))
            pos += 1
        if accept_pos >= 0:
            inv = _modinv(work[accept_pos])
            brow = basis[rank]
            for i in range(accept_pos, n_rows):
                brow[i] = _mulmod(work[i], inv)
                work[i] = _ZERO
            pivot_of_row[accept_pos] = rank
            accepted[j] = True
            pivot_row[j] = accept_pos
            rank += 1
    return accepted, pivot_row, processed


def warmup() -> None:
    """Trigger jit compilation on a toy input (cached across processes)."""
    starts = np.array([0, 1, 2], dtype=np.int64)
    rows = np.array([0, 1], dtype=np.int64)
    vals = np.array([1, 1], dtype=np.uint64)
    greedy_pairing_gfp(starts, rows, vals, 2, 2)


@dataclass
class PairingResult:
    """Outcome of the greedy reduction on one boundary degree.

    Column/row simplices are in event order; ``accepted[j]`` marks greedy
    basis columns and ``pivot_row[j]`` indexes the row simplex the column
    kills (-1 if none).  ``processed`` counts columns actually reduced before
    the rank saturated.
    """

    col_simplices: list
    col_times: list
    row_simplices: list
    row_times: list
    accepted: np.ndarray
    pivot_row: np.ndarray
    processed: int

    @property
    def accepted_indices(self) -> np.ndarray:
        return np.nonzero(self.accepted)[0]

    def accepted_weight(self) -> Fraction:
        return sum((self.col_times[j] for j in self.accepted_indices), Fraction(0))

    def pairs(self) -> list[tuple[Fraction, Fraction]]:
        """Finite persistence pairs (birth of killed row, column time)."""
        out = []
        for j in self.accepted_indices:
            b = self.row_times[self.pivot_row[j]]
            d = self.col_times[j]
            if d > b:
                out.append((b, d))
        return out

    def pivot_row_weight(self) -> Fraction:
        return sum(
            (self.row_times[self.pivot_row[j]] for j in self.accepted_indices),
            Fraction(0),
        )


def _event_order(simplices, births) -> list[int]:
    return sorted(range(len(simplices)), key=lambda i: (births[simplices[i]], simplices[i]))


def greedy_pairing(F: Filtration, d: int, max_rank: int) -> PairingResult:
    """Run the GF(p) kernel on the degree-d boundary of a filtration."""
    X = F.complex
    bnd = boundary_matrix(X, d)
    rows = list(bnd.row_simplices)
    cols = list(bnd.col_simplices)
    row_order = _event_order(rows, F.births)[::-1]  # youngest first
    col_order = _event_order(cols, F.births)
    row_pos = np.empty(len(rows), dtype=np.int64)
    for pos, i in enumerate(row_order):
        row_pos[i] = pos
    nnz = sum(len(c) for c in bnd.columns)
    starts = np.zeros(len(cols) + 1, dtype=np.int64)
    crows = np.empty(nnz, dtype=np.int64)
    cvals = np.empty(nnz, dtype=np.uint64)
    k = 0
    for out_j, j in enumerate(col_order):
        for r, sign in bnd.columns[j]:
            crows[k] = row_pos[r]
            cvals[k] = 1 if sign > 0 else MERSENNE_P - 1
            k += 1
        starts[out_j + 1] = k
    accepted, pivot_row, processed = greedy_pairing_gfp(
        starts, crows, cvals, len(rows), max_rank
    )
    return PairingResult(
        col_simplices=[cols[j] for j in col_order],
        col_times=[F.births[cols[j]] for j in col_order],
        row_simplices=[rows[i] for i in row_order],
        row_times=[F.births[rows[i]] for i in row_order],
        accepted=accepted,
        pivot_row=pivot_row,
        processed=processed,
    )


class UnionFind:
    """Path-halving union-find over range(n)."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def kruskal_split(F: Filtration) -> tuple[list[tuple[Fraction, Simplex]], list[tuple[Fraction, Simplex]]]:
    """(forest edges, cycle edges) of the edge filtration in event order."""
    n = F.complex.n_vertices
    uf = UnionFind(n)
    tree: list[tuple[Fraction, Simplex]] = []
    cycle: list[tuple[Fraction, Simplex]] = []
    for t, e in F.events(1):
        (tree if uf.union(e[0], e[1]) else cycle).append((t, e))
    return tree, cycle
