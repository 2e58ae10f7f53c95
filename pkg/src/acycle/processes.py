"""Random simplicial complex processes with reproducible, splittable seeding.

Birth times are dyadic rationals k / 2**32 drawn from uniform integers, so
all downstream arithmetic stays exact; the distributional error per sample is
below 2**-32.  Per-trial streams come from a counter-based generator keyed by
hashing (master seed, trial index), so trials are independent and immune to
scheduling order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, log

import numpy as np

from .simplicial import DomainError, Filtration, Simplex, SimplicialComplex, build_skeleton

TIME_DENOM = 1 << 32


@dataclass(frozen=True)
class SeedSpec:
    """Master seed plus trial index; identical specs reproduce bit-for-bit."""

    master: int
    trial: int = 0

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(entropy=self.master, spawn_key=(self.trial,))
        return np.random.Generator(np.random.Philox(seq))


def _as_seed(seed: SeedSpec | int) -> SeedSpec:
    return seed if isinstance(seed, SeedSpec) else SeedSpec(int(seed))


def _dyadic_times(rng: np.random.Generator, size: int) -> list[Fraction]:
    ks = rng.integers(0, TIME_DENOM, size=size, dtype=np.int64)
    return [Fraction(int(k), TIME_DENOM) for k in ks]


def _exponential_times(rng: np.random.Generator, size: int) -> list[Fraction]:
    # mean-1 exponentials quantized to the dyadic grid (still exact rationals)
    us = rng.integers(1, TIME_DENOM, size=size, dtype=np.int64)
    out = []
    for u in us:
        x = -log(float(u) / TIME_DENOM)
        out.append(Fraction(max(0, round(x * TIME_DENOM)), TIME_DENOM))
    return out


def lm_process(
    n: int, d: int, seed: SeedSpec | int, birth_law: str = "uniform"
) -> Filtration:
    """The degree-d random growth process on n vertices.

    The complete (d-1)-skeleton is present at time 0 and each d-simplex is
    born at an independent uniform (or mean-1 exponential) time.
    """
    if not 1 <= d <= n - 1:
        raise DomainError(f"need 1 <= d <= n-1, got d={d}, n={n}")
    X = build_skeleton(n, d)
    births: dict[Simplex, Fraction] = {}
    for j in range(d):
        for s in X.simplices(j):
            births[s] = Fraction(0)
    top = X.simplices(d)
    rng = _as_seed(seed).generator()
    if birth_law == "uniform":
        times = _dyadic_times(rng, len(top))
    elif birth_law == "exponential":
        times = _exponential_times(rng, len(top))
    else:
        raise DomainError(f"unknown birth law {birth_law!r}")
    births.update(zip(top, times))
    return Filtration(X, births, validate=False)


def clique_process(n: int, seed: SeedSpec | int, max_dim: int) -> Filtration:
    """Flag complexes of the random graph process, truncated at max_dim.

    Vertices are born at 0, edges at i.i.d. uniform times, and every higher
    simplex at the maximum of its edge times, so the filtration is monotone by
    construction and saturates to the complete complex truncated at max_dim.
    """
    if max_dim < 1:
        raise DomainError("max_dim must be >= 1")
    if n < 1:
        raise DomainError("need at least one vertex")
    max_dim = min(max_dim, n - 1)
    X = build_skeleton(n, max_dim)
    rng = _as_seed(seed).generator()
    edges = X.simplices(1)
    edge_time = dict(zip(edges, _dyadic_times(rng, len(edges))))
    births: dict[Simplex, Fraction] = {s: Fraction(0) for s in X.simplices(0)}
    births.update(edge_time)
    for k in range(2, max_dim + 1):
        for s in X.simplices(k):
            births[s] = max(
                edge_time[(a, b)] for a, b in itertools.combinations(s, 2)
            )
    return Filtration(X, births, validate=False)


def _unrank_combination(index: int, n: int, k: int) -> tuple[int, ...]:
    """The index-th k-subset of range(n) in lexicographic order."""
    out = []
    x = 0
    for slot in range(k, 0, -1):
        while True:
            block = comb(n - x - 1, slot - 1)
            if index < block:
                break
            index -= block
            x += 1
        out.append(x)
        x += 1
    return tuple(out)


def uniform_complex(n: int, d: int, m: int, seed: SeedSpec | int) -> SimplicialComplex:
    """Complete (d-1)-skeleton plus a uniformly random m-subset of d-simplices."""
    if not 1 <= d <= n - 1:
        raise DomainError(f"need 1 <= d <= n-1, got d={d}, n={n}")
    N = comb(n, d + 1)
    if not 0 <= m <= N:
        raise DomainError(f"m = {m} exceeds the {N} available d-simplices")
    rng = _as_seed(seed).generator()
    picks = rng.choice(N, size=m, replace=False) if m else np.empty(0, dtype=np.int64)
    skeleton = build_skeleton(n, d - 1)
    extra = [_unrank_combination(int(i), n, d + 1) for i in picks]
    return SimplicialComplex(
        itertools.chain(skeleton.all_simplices(), extra), validate=False
    )


@dataclass(frozen=True)
class ProcessSpec:
    """Which random process to sample, with its parameters."""

    kind: str  # "linial-meshulam" | "clique" | "uniform-complex"
    n: int
    d: int
    birth_law: str = "uniform"
    max_dim: int | None = None
    m: int | None = None

    def __post_init__(self):
        if self.kind not in ("linial-meshulam", "clique", "uniform-complex"):
            raise DomainError(f"unknown process kind {self.kind!r}")
        if not 1 <= self.d <= self.n - 1:
            raise DomainError(f"need 1 <= d <= n-1, got d={self.d}, n={self.n}")
        if self.kind == "uniform-complex":
            if self.m is None or not 0 <= self.m <= comb(self.n, self.d + 1):
                raise DomainError("uniform-complex needs 0 <= m <= C(n, d+1)")

    def sample(self, seed: SeedSpec | int) -> Filtration:
        if self.kind == "linial-meshulam":
            return lm_process(self.n, self.d, seed, self.birth_law)
        if self.kind == "clique":
            return clique_process(self.n, seed, self.max_dim or self.d)
        raise DomainError("uniform-complex samples a complex, not a filtration")

    def sample_complex(self, seed: SeedSpec | int) -> SimplicialComplex:
        if self.kind != "uniform-complex":
            return self.sample(seed).complex
        return uniform_complex(self.n, self.d, int(self.m), seed)
