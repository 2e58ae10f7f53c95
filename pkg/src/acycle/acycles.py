"""Spanning acycles: detection, greedy minimization, torsion orders,
determinantal-expansion checks, and the shadow partition.

A degree-k spanning acycle of X is a set S of k-simplices such that the
complex S together with the full (k-1)-skeleton has trivial top homology and
finite homology one degree down; these sets are exactly the bases of the
column matroid of the degree-k boundary, which is what the greedy optimizer
exploits.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd
from typing import Iterable, Iterator, Mapping, Sequence

from .linalg import (
    Field,
    RankOracle,
    SparseColumnMatrix,
    determinant,
    get_field,
    rank,
    smith_normal_form,
)
from .simplicial import (
    DomainError,
    Filtration,
    Simplex,
    SimplicialComplex,
    as_simplex,
    boundary_matrix,
)


class PreconditionError(ValueError):
    """A stated hypothesis of an operation fails on the given input."""


class StructuralError(RuntimeError):
    """The input is structurally unable to produce a result (rank deficit)."""


def _boundary_columns(
    X: SimplicialComplex, k: int, cols: Sequence[Simplex] | None = None
):
    """Sparse columns of the degree-k boundary; degree 0 is the augmentation."""
    if k == 0:
        n = len(cols) if cols is not None else X.f(0)
        return [((0, 1),)] * n, 1
    bnd = boundary_matrix(X, k, cols=cols)
    return list(bnd.columns), len(bnd.row_simplices)


def _rank_of_degree(X: SimplicialComplex, k: int, domain) -> int:
    """Rank of the degree-k boundary (augmentation at k = 0); 0 out of range."""
    if k < 0 or k > X.dim:
        return 0
    if k == 0:
        return 1 if X.f(0) else 0
    return rank(SparseColumnMatrix.from_boundary(boundary_matrix(X, k)), domain)


def reduced_betti(X: SimplicialComplex, j: int, domain: str | Field = "fraction") -> int:
    """Betti number of X in degree j, reduced in degree 0; -1 counts as 0."""
    if j < 0:
        return 0
    if j > X.dim:
        return 0
    return X.f(j) - _rank_of_degree(X, j, domain) - _rank_of_degree(X, j + 1, domain)


def gamma(X: SimplicialComplex, k: int, domain: str | Field = "fraction") -> int:
    """Forced cardinality of every degree-k spanning acycle of X.

    Computed as f_k - beta_k + beta_{k-1} of the k-skeleton.
    """
    if not 0 <= k <= X.dim:
        raise DomainError(f"gamma degree {k} out of range 0..{X.dim}")
    sk = X.skeleton(k) if k < X.dim else X
    return X.f(k) - reduced_betti(sk, k, domain) + reduced_betti(sk, k - 1, domain)


def gamma_closed_form(X: SimplicialComplex, k: int) -> int:
    """Alternating-sum formula for gamma, valid when every skeleton below the
    top dimension has vanishing Betti number one degree down."""
    if not 0 <= k <= X.dim:
        raise DomainError(f"gamma degree {k} out of range 0..{X.dim}")
    alt = sum((-1) ** j * X.f(j) for j in range(k))
    return (-1) ** k * (1 - alt)


@dataclass(frozen=True)
class SpanningAcycleResult:
    degree: int
    simplices: tuple[Simplex, ...]
    weight: Fraction
    certified: bool

    @property
    def gamma(self) -> int:
        return len(self.simplices)

    def to_json_obj(self) -> dict:
        return {
            "degree": self.degree,
            "gamma": self.gamma,
            "weight": f"{self.weight.numerator}/{self.weight.denominator}",
            "simplices": [list(s) for s in self.simplices],
            "certified": self.certified,
        }


def is_spanning_acycle(
    X: SimplicialComplex,
    S: Iterable[Iterable[int]],
    k: int,
    domain: str | Field = "fraction",
) -> bool:
    """True iff S has the forced cardinality and independent boundary columns."""
    subset = tuple(sorted(as_simplex(s) for s in S))
    members = set(X.simplices(k))
    for s in subset:
        if s not in members:
            raise DomainError(f"{s} is not a {k}-simplex of the complex")
    if len(set(subset)) != len(subset):
        return False
    if len(subset) != gamma(X, k, domain):
        return False
    cols, n_rows = _boundary_columns(X, k, cols=subset)
    oracle = RankOracle(n_rows, domain)
    return all(oracle.try_add(c) for c in cols)


def check_identity_hypotheses(
    X: SimplicialComplex, d: int, domain: str | Field = "fraction"
) -> None:
    """Raise unless beta_{d-1} of the d-skeleton and beta_{d-2} of the
    (d-1)-skeleton both vanish (the hypotheses of the lifetime identity)."""
    if not 1 <= d <= X.dim:
        raise DomainError(f"degree {d} out of range 1..{X.dim}")
    b1 = reduced_betti(X.skeleton(d), d - 1, domain)
    if b1 != 0:
        raise PreconditionError(
            f"beta_{d-1} of the {d}-skeleton is {b1}, expected 0"
        )
    if d >= 2:
        b2 = reduced_betti(X.skeleton(d - 1), d - 2, domain)
        if b2 != 0:
            raise PreconditionError(
                f"beta_{d-2} of the {d-1}-skeleton is {b2}, expected 0"
            )


def _greedy_min_acycle(
    F: Filtration, k: int, domain: str | Field
) -> tuple[list[Simplex], Fraction]:
    """Matroid greedy over boundary columns in filtration-event order."""
    X = F.complex
    target = gamma(X, k, domain)
    if k == 0:
        cols = {s: ((0, 1),) for s in X.simplices(0)}
        n_rows = 1
    else:
        bnd = boundary_matrix(X, k)
        cols = dict(zip(bnd.col_simplices, bnd.columns))
        n_rows = len(bnd.row_simplices)
    oracle = RankOracle(n_rows, domain)
    chosen: list[Simplex] = []
    weight = Fraction(0)
    for t, s in F.events(k):
        if oracle.try_add(cols[s]):
            chosen.append(s)
            weight += t
            if len(chosen) == target:
                return chosen, weight
    raise StructuralError(
        f"only {len(chosen)} independent degree-{k} columns, need {target}"
    )


def min_spanning_acycle(
    F: Filtration, d: int, domain: str | Field = "fraction"
) -> SpanningAcycleResult:
    """Minimum-weight degree-d spanning acycle by greedy in event order.

    The greedy is optimal because spanning acycles are the bases of a linear
    matroid; ties are broken by the canonical event order, so the returned set
    is deterministic and its weight is the global minimum.
    """
    check_identity_hypotheses(F.complex, d, domain)
    chosen, weight = _greedy_min_acycle(F, d, domain)
    other = "gfp" if get_field(domain).name == "fraction" else "fraction"
    certified = is_spanning_acycle(F.complex, chosen, d, other)
    return SpanningAcycleResult(d, tuple(sorted(chosen)), weight, certified)


def max_complement_weight(
    F: Filtration, d: int, domain: str | Field = "fraction"
) -> Fraction:
    """Weight of the heaviest complement of a degree-(d-1) spanning acycle.

    Equals total (d-1)-weight minus the minimum spanning-acycle weight one
    degree down; degree 0 acycles are single vertices.
    """
    check_identity_hypotheses(F.complex, d, domain)
    _, min_weight = _greedy_min_acycle(F, d - 1, domain)
    total = F.weight(F.complex.simplices(d - 1))
    return total - min_weight


def lifetime_via_msa(F: Filtration, d: int, domain: str | Field = "fraction") -> Fraction:
    """Lifetime sum one degree down, via the spanning-acycle weight formula."""
    msa = min_spanning_acycle(F, d, domain)
    return msa.weight - max_complement_weight(F, d, domain)


def torsion_order(X: SimplicialComplex, S: Iterable[Iterable[int]], k: int) -> int:
    """Order of the homology one degree below the acycle S (always finite).

    Product of the elementary divisors of the degree-k boundary restricted to
    the columns of S, which presents the cokernel up to a free summand.
    """
    subset = tuple(sorted(as_simplex(s) for s in S))
    if not is_spanning_acycle(X, subset, k):
        raise PreconditionError("S is not a spanning acycle")
    if k == 0:
        return 1
    bnd = boundary_matrix(X, k, cols=subset)
    return smith_normal_form(SparseColumnMatrix.from_boundary(bnd)).product


class _IntEchelon:
    """Exact integer echelon with push/pop for depth-first enumeration.

    Stored pivot vectors are reduced against all earlier pivots, so one pass
    in insertion order fully reduces an incoming vector.
    """

    def __init__(self, n_rows: int):
        self.n_rows = n_rows
        self.pivots: list[tuple[int, list[int]]] = []

    def _reduce(self, vec: list[int]) -> list[int]:
        for r, pv in self.pivots:
            a = vec[r]
            if a:
                p = pv[r]
                vec = [p * x - a * y for x, y in zip(vec, pv)]
                g = 0
                for x in vec:
                    g = gcd(g, x)
                if g > 1:
                    vec = [x // g for x in vec]
        return vec

    def try_push(self, vec: Sequence[int]) -> bool:
        red = self._reduce(list(vec))
        if any(red):
            pivot_row = next(r for r, x in enumerate(red) if x)
            self.pivots.append((pivot_row, red))
            return True
        return False

    def pop(self) -> None:
        self.pivots.pop()

    @property
    def rank(self) -> int:
        return len(self.pivots)


def _dense_int_columns(X: SimplicialComplex, d: int) -> tuple[list[Simplex], list[list[int]]]:
    bnd = boundary_matrix(X, d)
    m = len(bnd.row_simplices)
    dense = []
    for col in bnd.columns:
        vec = [0] * m
        for r, v in col:
            vec[r] = v
        dense.append(vec)
    return list(bnd.col_simplices), dense


def iter_spanning_acycles(
    X: SimplicialComplex, d: int, cap: int = 10**7
) -> Iterator[tuple[int, ...]]:
    """Yield index tuples (into the lex-ordered d-simplices) of every degree-d
    spanning acycle, in lexicographic subset order.  Refuses above ``cap``
    candidate subsets."""
    g = gamma(X, d)
    candidates, dense = _dense_int_columns(X, d)
    total = comb(len(candidates), g)
    if total > cap:
        raise PreconditionError(
            f"enumeration of {total} candidate subsets exceeds cap {cap}"
        )
    ech = _IntEchelon(len(dense[0]) if dense else 0)
    chosen: list[int] = []
    n = len(candidates)

    def dfs(i: int) -> Iterator[tuple[int, ...]]:
        if len(chosen) == g:
            yield tuple(chosen)
            return
        if n - i < g - len(chosen):
            return
        if ech.try_push(dense[i]):
            chosen.append(i)
            yield from dfs(i + 1)
            chosen.pop()
            ech.pop()
        yield from dfs(i + 1)

    yield from dfs(0)


def kalai_census(n: int, d: int, cap: int = 10**7) -> dict[int, int]:
    """Count degree-d spanning acycles of the complete complex by torsion order."""
    if not 1 <= d <= n - 1:
        raise DomainError(f"degree {d} out of range for {n} vertices")
    from .simplicial import build_skeleton

    X = build_skeleton(n, d)
    simplices, dense = _dense_int_columns(X, d)
    census: dict[int, int] = {}
    for idx in iter_spanning_acycles(X, d, cap):
        sub = SparseColumnMatrix.from_dense(
            [[dense[j][r] for j in idx] for r in range(len(dense[0]))]
        )
        t = smith_normal_form(sub).product
        census[t] = census.get(t, 0) + 1
    return census


def kalai_sum(n: int, d: int, cap: int = 10**7) -> int:
    """Sum of squared torsion orders over all degree-d spanning acycles of the
    complete complex on n vertices; the caller compares with n**comb(n-2, d)."""
    return sum(t * t * c for t, c in kalai_census(n, d, cap).items())


def _as_weight_map(X, k, weights) -> dict[Simplex, Fraction]:
    sims = X.simplices(k)
    if weights is None:
        return {s: Fraction(1) for s in sims}
    out = {as_simplex(s): Fraction(v) for s, v in weights.items()}
    missing = [s for s in sims if s not in out]
    if missing:
        raise DomainError(f"missing weight for {missing[0]}")
    return out


def det_expansion_check(
    X: SimplicialComplex,
    K: Iterable[Iterable[int]],
    x: Mapping | None = None,
    y: Mapping | None = None,
    cap: int = 10**7,
    domain_check: bool = True,
) -> bool:
    """Verify the squared-minor expansion of the weighted boundary Gram matrix.

    The Gram determinant of diag(x) * boundary * diag(y) restricted to the
    rows K must equal the sum over spanning acycles S of
    (det of the K,S minor)^2 * x_K^2 * y_S^2, exactly.  When the complement of
    K is itself a spanning acycle one degree down, every minor is additionally
    checked against the homology-order formula.
    """
    K_set = tuple(sorted(as_simplex(s) for s in K))
    if not K_set:
        raise DomainError("K must be nonempty")
    d = len(K_set[0])  # K holds (d-1)-simplices, which have d vertices
    g = gamma(X, d)
    if len(K_set) != g:
        raise DomainError(f"|K| = {len(K_set)} but gamma = {g}")
    rows_lower = set(X.simplices(d - 1))
    for s in K_set:
        if s not in rows_lower:
            raise DomainError(f"{s} is not a ({d-1})-simplex of the complex")
    xw = _as_weight_map(X, d - 1, x)
    yw = _as_weight_map(X, d, y)

    bnd = boundary_matrix(X, d, rows=K_set)
    cols = list(bnd.col_simplices)
    weighted = [
        [(r, xw[K_set[r]] * sign * yw[cols[j]]) for r, sign in col]
        for j, col in enumerate(bnd.columns)
    ]
    # Gram matrix of the weighted K-rows
    gram = [[Fraction(0)] * g for _ in range(g)]
    for col in weighted:
        for (r1, v1) in col:
            for (r2, v2) in col:
                gram[r1][r2] += v1 * v2
    lhs = determinant(gram)

    x_K = Fraction(1)
    for s in K_set:
        x_K *= xw[s]
    col_index = {s: j for j, s in enumerate(cols)}
    dense_K = [[0] * g for _ in range(g)]  # reused buffer
    rhs = Fraction(0)
    minors: dict[tuple[int, ...], int] = {}
    for idx in iter_spanning_acycles(X, d, cap):
        for jj, j in enumerate(idx):
            for r in range(g):
                dense_K[r][jj] = 0
            for r, sign in bnd.columns[j]:
                dense_K[r][jj] = sign
        det = determinant([row[:] for row in dense_K])
        minors[idx] = int(det)
        y_S = Fraction(1)
        for j in idx:
            y_S *= yw[cols[j]]
        rhs += det * det * x_K * x_K * y_S * y_S
    if lhs != rhs:
        return False

    if domain_check:
        L = tuple(sorted(rows_lower - set(K_set)))
        if _complement_is_acycle(X, L, d - 1):
            divisor = _torsion_of_full_lower_skeleton(X, d - 1)
            t_L = _torsion_of_columns(X, d - 1, L)
            for idx, det in minors.items():
                if det == 0:
                    continue
                S = [cols[j] for j in idx]
                t_S = torsion_order(X, S, d)
                if abs(det) * divisor != t_S * t_L:
                    return False
    return True


def _complement_is_acycle(X, L, k) -> bool:
    if k == 0:
        return len(L) == 1
    try:
        return is_spanning_acycle(X, L, k)
    except DomainError:
        return False


def _torsion_of_columns(X, k, cols) -> int:
    if k == 0 or not cols:
        return 1
    bnd = boundary_matrix(X, k, cols=tuple(cols))
    return smith_normal_form(SparseColumnMatrix.from_boundary(bnd)).product


def _torsion_of_full_lower_skeleton(X, k) -> int:
    """Order of the degree-(k-1) homology of the full k-skeleton (finite by
    hypothesis when used)."""
    if k <= 0:
        return 1
    bnd = boundary_matrix(X, k)
    return smith_normal_form(SparseColumnMatrix.from_boundary(bnd)).product


@dataclass(frozen=True)
class ShadowPartition:
    """Partition of all ambient d-simplices by the effect of adding one.

    ``adders`` drop the Betti number one degree down by one; ``shadow_side``
    leave it unchanged (this side contains the complex's own d-simplices).
    ``is_hull`` marks complexes already closed under shadow addition.
    """

    degree: int
    adders: frozenset
    shadow_side: frozenset
    is_hull: bool

    def hull_simplices(self) -> frozenset:
        return self.shadow_side


def _require_complete_lower_skeleton(Y: SimplicialComplex, d: int) -> None:
    n = Y.n_vertices
    for j in range(d):
        if Y.f(j) != comb(n, j + 1):
            raise PreconditionError(
                f"({d-1})-skeleton not complete: f_{j} = {Y.f(j)} != C({n},{j+1})"
            )
    if Y.dim > d:
        raise PreconditionError(f"complex has dimension {Y.dim} > {d}")


def shadow(Y: SimplicialComplex, d: int, domain: str | Field = "fraction") -> ShadowPartition:
    """Classify every ambient d-simplex by one rank probe against Y's columns."""
    _require_complete_lower_skeleton(Y, d)
    n = Y.n_vertices
    row_index = {s: i for i, s in enumerate(Y.simplices(d - 1))}
    n_rows = len(row_index)
    oracle = RankOracle(n_rows, domain)
    own = set(Y.simplices(d))
    if d <= Y.dim:
        bnd = boundary_matrix(Y, d)
        for col in bnd.columns:
            oracle.try_add(col)
    adders = []
    shadow_side = []
    from .simplicial import boundary_faces

    for vs in itertools.combinations(range(n), d + 1):
        s = tuple(vs)
        if s in own:
            shadow_side.append(s)
            continue
        col = sorted((row_index[f], sign) for f, sign in boundary_faces(s))
        if oracle.would_accept(col):
            adders.append(s)
        else:
            shadow_side.append(s)
    shadow_set = frozenset(shadow_side)
    return ShadowPartition(d, frozenset(adders), shadow_set, shadow_set == frozenset(own))


def rank_bound_check(Y: SimplicialComplex, d: int, domain: str | Field = "fraction") -> bool:
    """Exact check of the rank and Betti inequalities against the adder count.

    rank of the degree-d boundary >= (d+1)/n * |Y_d|, and the Betti number one
    degree down <= (d+1)/n * (number of adders); both in rational arithmetic.
    """
    _require_complete_lower_skeleton(Y, d)
    n = Y.n_vertices
    r = _rank_of_degree(Y, d, domain)
    part = shadow(Y, d, domain)
    beta = comb(n - 1, d) - r
    frac = Fraction(d + 1, n)
    return r >= frac * Y.f(d) and beta <= frac * len(part.adders)
