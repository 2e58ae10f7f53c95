"""Lexicographic (d-1, d) acyclic matchings and critical-simplex counts.

Pairing rule: a (d-1)-simplex pairs with its cheapest admissible coface,
where admissible means the added vertex exceeds the simplex's own maximum
(equivalently, the coface is lexicographically later).  One coface admits at
most one such face, so the pairing is injective by construction; the
verifier checks acyclicity independently anyway.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Mapping

from .simplicial import DomainError, Simplex, SimplicialComplex, as_simplex


@dataclass(frozen=True)
class AcyclicMatching:
    """Partition of the complex into paired and critical simplices.

    ``paired`` maps each matched (d-1)-simplex to its d-dimensional partner;
    everything else (in every dimension) is critical.
    """

    dimension: int
    paired: Mapping[Simplex, Simplex]
    critical: frozenset

    def critical_in_dim(self, k: int) -> frozenset:
        return frozenset(s for s in self.critical if len(s) - 1 == k)


def lex_matching(X: SimplicialComplex, d: int) -> AcyclicMatching:
    """Build the lexicographic (d-1, d) matching under the integer vertex order."""
    if not 1 <= d:
        raise DomainError("matching dimension must be >= 1")
    upper = set(X.simplices(d))
    paired: dict[Simplex, Simplex] = {}
    used: set[Simplex] = set()
    for s in X.simplices(d - 1):
        top = s[-1]
        partner = None
        for v in range(top + 1, X.n_vertices):
            cand = s + (v,)
            if cand in upper:
                partner = cand
                break
        if partner is None or partner in used:
            continue
        paired[s] = partner
        used.add(partner)
    critical = frozenset(
        s for s in X.all_simplices() if s not in paired and s not in used
    )
    return AcyclicMatching(d, paired, critical)


def critical_count(M: AcyclicMatching, k: int) -> int:
    return len(M.critical_in_dim(k))


@dataclass(frozen=True)
class CriticalEstimate:
    value: float
    upper_bound: float


def expected_critical(n: int, d: int, t: float) -> CriticalEstimate:
    """Expected number of critical (d-1)-simplices in the clique complex at
    edge probability t, with the closed-form upper bound.

    A (d-1)-simplex with maximum vertex in position j is critical exactly when
    none of its admissible cofaces is present, giving the summand
    C(j-1, d-1) * t^C(d,2) * (1 - t^d)^(n-j).
    """
    if not 0.0 <= t <= 1.0:
        raise DomainError("probability t must lie in [0, 1]")
    if d < 1 or n < d:
        raise DomainError("need n >= d >= 1")
    t_edges = t ** comb(d, 2)
    value = 0.0
    for j in range(d, n + 1):
        value += comb(j - 1, d - 1) * t_edges * (1.0 - t**d) ** (n - j)
    exponent = comb(d, 2) - d
    if t > 0:
        upper = comb(n, d - 1) * t**exponent
    else:
        upper = comb(n, d - 1) * (1.0 if exponent == 0 else 0.0)
        if exponent < 0:
            upper = float("inf")
    return CriticalEstimate(value, upper)


def verify_acyclic(M: AcyclicMatching) -> bool:
    """Check matching shape and that the induced face relation has no cycle.

    Builds the digraph on matched (d-1)-simplices where q' precedes q whenever
    q' is a face of q's partner, and topologically sorts it.
    """
    paired = dict(M.paired)
    # shape: bijection onto distinct cofaces, each one dimension up
    targets = list(paired.values())
    if len(set(targets)) != len(targets):
        return False
    for q, kpartner in paired.items():
        if len(kpartner) != len(q) + 1 or not set(q) < set(kpartner):
            return False
        if q in M.critical or kpartner in M.critical:
            return False
    # q' < q  iff  q' is a face of paired[q]
    succ: dict[Simplex, list[Simplex]] = {q: [] for q in paired}
    indeg: dict[Simplex, int] = {q: 0 for q in paired}
    for q, kpartner in paired.items():
        for j in range(len(kpartner)):
            face = kpartner[:j] + kpartner[j + 1 :]
            if face != q and face in paired:
                succ[q].append(face)
                indeg[face] += 1
    queue = [q for q, deg in indeg.items() if deg == 0]
    seen = 0
    while queue:
        q = queue.pop()
        seen += 1
        for nxt in succ[q]:
            indeg[nxt] -= 1
            if indeg[nxt] == 0:
                queue.append(nxt)
    return seen == len(paired)


def matching_from_pairs(
    X: SimplicialComplex, pairs: Mapping[Simplex, Simplex], d: int
) -> AcyclicMatching:
    """Assemble a matching object from explicit pairs (for tests and checks)."""
    paired = {as_simplex(q): as_simplex(k) for q, k in pairs.items()}
    used = set(paired.values())
    critical = frozenset(
        s for s in X.all_simplices() if s not in paired and s not in used
    )
    return AcyclicMatching(d, paired, critical)
