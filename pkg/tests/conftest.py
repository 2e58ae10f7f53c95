from fractions import Fraction

import pytest

from acycle.simplicial import Filtration, SimplicialComplex

# the 6-vertex projective-plane triangulation: a spanning acycle of the full
# 2-skeleton with homology order 2 one degree down
RP2_FACES = [
    (0, 1, 2), (0, 1, 3), (0, 2, 4), (0, 3, 5), (0, 4, 5),
    (1, 2, 5), (1, 3, 4), (1, 4, 5), (2, 3, 4), (2, 3, 5),
]

TETRA_TRIANGLES = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]


@pytest.fixture
def k3_filtration() -> Filtration:
    """Three vertices at 0, edges at 1/4, 1/2, 3/4."""
    X = SimplicialComplex([(0,), (1,), (2,), (0, 1), (0, 2), (1, 2)])
    births = {
        (0,): Fraction(0), (1,): Fraction(0), (2,): Fraction(0),
        (0, 1): Fraction(1, 4), (0, 2): Fraction(1, 2), (1, 2): Fraction(3, 4),
    }
    return Filtration(X, births)


@pytest.fixture
def filled_triangle_filtration(k3_filtration) -> Filtration:
    """The K3 filtration with the 2-face arriving at time 1."""
    X = SimplicialComplex.from_maximal([(0, 1, 2)])
    births = dict(k3_filtration.births)
    births[(0, 1, 2)] = Fraction(1)
    return Filtration(X, births)


@pytest.fixture
def tetra_skeleton() -> SimplicialComplex:
    return SimplicialComplex.from_maximal(TETRA_TRIANGLES)
