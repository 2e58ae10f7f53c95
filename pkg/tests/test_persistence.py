import io
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from acycle.persistence import (
    PersistenceDiagram,
    betti_curve,
    compute_persistence,
    diagram_from_json_obj,
    diagram_to_csv,
    diagram_to_json_obj,
    integrate_betti,
    l2_norm_sq,
    l2_via_integral,
    lifetime_sum,
    persistent_betti,
)
from acycle.processes import clique_process, lm_process
from acycle.simplicial import DomainError


def test_reduced_degree_zero_merges(k3_filtration):
    D = compute_persistence(k3_filtration, 0)
    assert sorted(D.pairs) == [
        (Fraction(0), Fraction(1, 4)),
        (Fraction(0), Fraction(1, 2)),
    ]
    assert lifetime_sum(D) == Fraction(3, 4)


def test_cycle_born_at_last_edge(filled_triangle_filtration):
    D = compute_persistence(filled_triangle_filtration, 1)
    assert D.pairs == [(Fraction(3, 4), Fraction(1))]
    assert lifetime_sum(D) == Fraction(1, 4)


def test_degree_without_simplices_gives_empty_diagram(k3_filtration):
    D = compute_persistence(k3_filtration, 5)
    assert len(D) == 0
    assert lifetime_sum(D) == 0


def test_negative_degree_rejected(k3_filtration):
    with pytest.raises(DomainError):
        compute_persistence(k3_filtration, -1)


def test_infinite_class_reported():
    # two components forever: one infinite class survives reduction
    from acycle.simplicial import Filtration, SimplicialComplex

    X = SimplicialComplex([(0,), (1,), (2,), (0, 1)])
    F = Filtration(X, {(0,): Fraction(0), (1,): Fraction(0), (2,): Fraction(0),
                       (0, 1): Fraction(1, 2)})
    D = compute_persistence(F, 0)
    assert D.n_infinite == 1
    assert lifetime_sum(D) == math.inf


def test_lifetime_sum_empty():
    assert lifetime_sum(PersistenceDiagram(1)) == 0


def test_betti_curve_matches_lifetime(filled_triangle_filtration):
    F = filled_triangle_filtration
    curve = betti_curve(F, 1)
    assert curve.value(Fraction(3, 4)) == 1
    assert curve.value(Fraction(1, 2)) == 0
    assert curve.value(Fraction(1)) == 0
    assert integrate_betti(curve, Fraction(1)) == Fraction(1, 4)
    assert integrate_betti(curve, Fraction(7, 8)) == Fraction(1, 8)


def test_betti_curve_equals_diagram_counts_on_random_instances():
    for seed in range(6):
        F = lm_process(6, 2, seed=seed)
        D = compute_persistence(F, 1)
        curve = betti_curve(F, 1)
        for t, _ in curve.breakpoints:
            assert curve.value(t) == persistent_betti(D, t, t)
        assert D.n_infinite == 0
        assert lifetime_sum(D) == integrate_betti(curve, F.saturation_time)


def test_pairing_backend_independent():
    for seed in range(5):
        F = lm_process(6, 2, seed=seed)
        a = compute_persistence(F, 1, "fraction")
        b = compute_persistence(F, 1, "gfp")
        assert a.pairs == b.pairs
    F = clique_process(6, seed=1, max_dim=2)
    assert compute_persistence(F, 1, "fraction").pairs == compute_persistence(F, 1, "gfp").pairs


def test_persistent_betti_examples():
    D = PersistenceDiagram(1, [(Fraction(3, 4), Fraction(1))])
    assert persistent_betti(D, Fraction(3, 4), Fraction(7, 8)) == 1
    assert persistent_betti(D, Fraction(1, 2), Fraction(7, 8)) == 0
    with pytest.raises(DomainError):
        persistent_betti(D, Fraction(1), Fraction(1, 2))


def test_l2_examples():
    assert l2_norm_sq(PersistenceDiagram(0)) == 0
    D = PersistenceDiagram(0, [(Fraction(0), Fraction(1))])
    assert l2_norm_sq(D) == 1 == l2_via_integral(D)
    D = PersistenceDiagram(0, [(Fraction(0), Fraction(1)), (Fraction(1, 4), Fraction(1, 2))])
    assert l2_norm_sq(D) == Fraction(17, 16) == l2_via_integral(D)
    D_inf = PersistenceDiagram(0, [(Fraction(0), None)])
    with pytest.raises(DomainError):
        l2_norm_sq(D_inf)


@given(
    st.lists(
        st.tuples(
            st.integers(min_value=0, max_value=12), st.integers(min_value=1, max_value=12)
        ),
        min_size=0,
        max_size=8,
    )
)
@settings(max_examples=80, deadline=None)
def test_l2_identity_on_random_diagrams(raw):
    pairs = [
        (Fraction(b, 12), Fraction(b + w, 12)) for b, w in raw
    ]
    D = PersistenceDiagram(1, pairs)
    assert l2_norm_sq(D) == l2_via_integral(D)


def test_diagram_serialization_round_trip(filled_triangle_filtration):
    D = compute_persistence(filled_triangle_filtration, 1)
    obj = diagram_to_json_obj(D)
    assert obj == [{"degree": 1, "birth": "3/4", "death": "1/1"}]
    [D2] = diagram_from_json_obj(obj)
    assert D2.pairs == D.pairs
    buf = io.StringIO()
    diagram_to_csv(D, buf)
    lines = buf.getvalue().strip().splitlines()
    assert lines[0].startswith("degree,birth,death,lifetime")
    assert "3/4" in lines[1] and "0.25" in lines[1]
