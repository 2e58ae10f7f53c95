import random
from fractions import Fraction
from math import comb

import pytest

from acycle.acycles import (
    PreconditionError,
    det_expansion_check,
    gamma,
    gamma_closed_form,
    is_spanning_acycle,
    iter_spanning_acycles,
    kalai_census,
    kalai_sum,
    lifetime_via_msa,
    max_complement_weight,
    min_spanning_acycle,
    rank_bound_check,
    shadow,
    torsion_order,
)
from acycle.processes import clique_process, lm_process, uniform_complex
from acycle.simplicial import (
    DomainError,
    Filtration,
    SimplicialComplex,
    build_skeleton,
)
from tests.conftest import RP2_FACES, TETRA_TRIANGLES


def test_gamma_complete_complexes():
    for n in (4, 5, 6):
        X = build_skeleton(n, n - 1)
        for k in range(n):
            assert gamma(X, k) == comb(n - 1, k)
            assert gamma_closed_form(X, k) == comb(n - 1, k)


def test_gamma_connected_graph_is_spanning_tree_size():
    X = SimplicialComplex.from_maximal([(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)])
    assert gamma(X, 1) == 3


def test_gamma_rejects_bad_degree(tetra_skeleton):
    with pytest.raises(DomainError):
        gamma(tetra_skeleton, 5)


def test_spanning_acycle_detection(tetra_skeleton):
    import itertools

    for trio in itertools.combinations(TETRA_TRIANGLES, 3):
        assert is_spanning_acycle(tetra_skeleton, trio, 2)
    for duo in itertools.combinations(TETRA_TRIANGLES, 2):
        assert not is_spanning_acycle(tetra_skeleton, duo, 2)
    with pytest.raises(DomainError):
        is_spanning_acycle(tetra_skeleton, [(0, 1, 4)], 2)


def test_spanning_tree_of_k3():
    X = build_skeleton(3, 1)
    assert is_spanning_acycle(X, [(0, 1), (0, 2)], 1)
    assert not is_spanning_acycle(X, [(0, 1), (0, 1)], 1)


def test_min_spanning_acycle_kruskal(k3_filtration):
    res = min_spanning_acycle(k3_filtration, 1)
    assert set(res.simplices) == {(0, 1), (0, 2)}
    assert res.weight == Fraction(3, 4)
    assert res.certified
    assert res.gamma == 2


def test_min_spanning_acycle_two_skeleton():
    X = build_skeleton(4, 2)
    births = {s: Fraction(0) for s in X.all_simplices() if len(s) <= 2}
    tris = X.simplices(2)
    for i, s in enumerate(tris):
        births[s] = Fraction(i + 1, 10)
    F = Filtration(X, births)
    res = min_spanning_acycle(F, 2)
    assert res.weight == Fraction(6, 10)
    assert set(res.simplices) == set(tris[:3])


def test_msa_precondition_error():
    # an unfillable 1-cycle leaves beta_1 of the 2-skeleton nonzero
    Y = SimplicialComplex.from_maximal([(0, 1, 2), (0, 3), (1, 3)])
    G = Filtration(Y, {s: Fraction(0) for s in Y.all_simplices()})
    with pytest.raises(PreconditionError, match="beta_1"):
        min_spanning_acycle(G, 2)


def test_max_complement_weight_lm_is_zero():
    F = lm_process(6, 2, seed=3)
    assert max_complement_weight(F, 2) == 0
    assert max_complement_weight(F, 1) == 0


def test_max_complement_weight_clique_matches_kruskal():
    from acycle.kernels import kruskal_split

    F = clique_process(5, seed=9, max_dim=2)
    _, cycle_edges = kruskal_split(F)
    expected = sum((t for t, _ in cycle_edges), Fraction(0))
    assert max_complement_weight(F, 2) == expected


def test_lifetime_via_msa_matches_persistence(k3_filtration):
    assert lifetime_via_msa(k3_filtration, 1) == Fraction(3, 4)


def test_lifetime_all_zero_times():
    X = build_skeleton(4, 2)
    F = Filtration(X, {s: Fraction(0) for s in X.all_simplices()})
    assert lifetime_via_msa(F, 2) == 0


def test_greedy_weight_is_tie_robust():
    # same time multiset, relabeled vertices: different tie order, equal weight
    X = build_skeleton(5, 2)
    tris = X.simplices(2)
    times = [Fraction(i % 3, 4) for i in range(len(tris))]
    births = {s: Fraction(0) for s in X.all_simplices() if len(s) <= 2}
    births.update(zip(tris, times))
    F1 = Filtration(X, births)
    perm = {0: 4, 1: 3, 2: 2, 3: 1, 4: 0}
    births2 = {s: Fraction(0) for s in X.all_simplices() if len(s) <= 2}
    births2.update(
        {tuple(sorted(perm[v] for v in s)): t for s, t in zip(tris, times)}
    )
    F2 = Filtration(X, births2)
    r1, r2 = min_spanning_acycle(F1, 2), min_spanning_acycle(F2, 2)
    assert r1.weight == r2.weight


def test_minimality_against_enumeration():
    rng = random.Random(5)
    X = build_skeleton(5, 2)
    tris = X.simplices(2)
    births = {s: Fraction(0) for s in X.all_simplices() if len(s) <= 2}
    births.update({s: Fraction(rng.randrange(1, 64), 64) for s in tris})
    F = Filtration(X, births)
    best = min_spanning_acycle(F, 2)
    weights = []
    for idx in iter_spanning_acycles(X, 2):
        weights.append(sum((births[tris[j]] for j in idx), Fraction(0)))
    assert best.weight == min(weights)


def test_torsion_orders(tetra_skeleton):
    assert torsion_order(tetra_skeleton, TETRA_TRIANGLES[:3], 2) == 1
    X6 = build_skeleton(6, 2)
    assert torsion_order(X6, RP2_FACES, 2) == 2
    X3 = build_skeleton(3, 1)
    assert torsion_order(X3, [(0, 1), (1, 2)], 1) == 1
    with pytest.raises(PreconditionError):
        torsion_order(tetra_skeleton, TETRA_TRIANGLES[:2], 2)


def test_kalai_small_cases():
    assert kalai_sum(3, 1) == 3
    assert kalai_sum(4, 2) == 4
    assert kalai_sum(5, 2) == 125
    census = kalai_census(4, 2)
    assert census == {1: 4}


def test_kalai_cap_refused():
    with pytest.raises(PreconditionError, match="cap"):
        kalai_sum(7, 2, cap=10**4)


def test_det_expansion_tetra_boundary_sphere():
    X = SimplicialComplex.from_maximal(TETRA_TRIANGLES)
    # K = complement of a spanning tree of the edge graph
    tree = [(0, 1), (0, 2), (0, 3)]
    K = [e for e in X.simplices(1) if e not in tree]
    assert len(K) == gamma(X, 2) == 3
    assert det_expansion_check(X, K)
    # random rational weights
    rng = random.Random(1)
    x = {e: Fraction(rng.randrange(1, 7), rng.randrange(1, 5)) for e in X.simplices(1)}
    y = {t: Fraction(rng.randrange(1, 7), rng.randrange(1, 5)) for t in X.simplices(2)}
    assert det_expansion_check(X, K, x, y)


def test_det_expansion_kalai_anchor():
    # full complex on 4 vertices, K = edges avoiding vertex 0: Gram det = 4
    from acycle.linalg import determinant
    from acycle.simplicial import boundary_matrix

    X = build_skeleton(4, 2)
    K = tuple(s for s in X.simplices(1) if 0 not in s)
    bnd = boundary_matrix(X, 2, rows=K)
    g = len(K)
    gram = [[0] * g for _ in range(g)]
    for col in bnd.columns:
        for r1, v1 in col:
            for r2, v2 in col:
                gram[r1][r2] += v1 * v2
    assert determinant(gram) == 4  # n^C(n-2, d) for n=4, d=2
    assert det_expansion_check(X, K)


def test_det_expansion_cardinality_error():
    X = build_skeleton(4, 2)
    with pytest.raises(DomainError):
        det_expansion_check(X, [(0, 1)])


def test_shadow_partition():
    X = build_skeleton(4, 2)
    # one triangle on the full 1-skeleton
    Y = SimplicialComplex.from_maximal([(0, 1, 2), (0, 3), (1, 3), (2, 3)])
    part = shadow(Y, 2)
    assert len(part.adders) == 3
    assert part.shadow_side == frozenset({(0, 1, 2)})
    assert part.is_hull  # nothing outside Y is shadowed yet

    # three tetrahedron faces shadow the fourth, so they are not a hull
    Y3 = SimplicialComplex.from_maximal(TETRA_TRIANGLES[:3])
    part3 = shadow(Y3, 2)
    assert part3.shadow_side == frozenset(TETRA_TRIANGLES)
    assert not part3.adders and not part3.is_hull

    # no 2-simplices: every triangle is an adder
    Y0 = build_skeleton(4, 1)
    part0 = shadow(Y0, 2)
    assert len(part0.adders) == 4 and not part0.shadow_side

    # full skeleton: no adders
    part_full = shadow(build_skeleton(4, 2), 2)
    assert not part_full.adders and part_full.is_hull


def test_shadow_requires_complete_skeleton():
    Y = SimplicialComplex.from_maximal([(0, 1), (1, 2)])  # missing edge (0,2), n=3
    with pytest.raises(PreconditionError):
        shadow(Y, 2)


def test_shadow_monotone_under_inclusion():
    n, d = 6, 2
    for seed in range(4):
        small = uniform_complex(n, d, 4, seed)
        extra = [s for s in build_skeleton(n, d).simplices(d) if s not in small][:3]
        big = small.with_added(extra)
        ps, pb = shadow(small, d), shadow(big, d)
        assert pb.adders <= ps.adders
        assert ps.shadow_side <= pb.shadow_side


def test_rank_bound_check_edge_cases():
    assert rank_bound_check(build_skeleton(5, 1), 2)  # no 2-simplices
    assert rank_bound_check(build_skeleton(5, 2), 2)  # full skeleton


def test_rank_bound_check_uniform_samples():
    for seed in range(10):
        Y = uniform_complex(7, 2, 3 + seed, seed)
        assert rank_bound_check(Y, 2)


def test_hull_preserves_betti():
    from acycle.acycles import reduced_betti

    for seed in range(3):
        Y = uniform_complex(6, 2, 5, seed)
        part = shadow(Y, 2)
        hull = build_skeleton(6, 1).with_added(part.hull_simplices())
        assert reduced_betti(hull, 1) == reduced_betti(Y, 1)
