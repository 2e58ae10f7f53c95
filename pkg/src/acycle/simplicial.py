"""Finite simplicial complexes, filtrations, and oriented boundary matrices.

Simplices are canonical tuples of strictly increasing 0-based vertex ids.
The orientation of every simplex is the one induced by the vertex order,
and boundary signs alternate accordingly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Iterator, Mapping, Sequence

Simplex = tuple  # tuple[int, ...], strictly increasing vertex ids


class DomainError(ValueError):
    """Invalid argument for a combinatorial operation (bad dimension, etc.)."""


def as_simplex(vertices: Iterable[int]) -> Simplex:
    """Canonicalize an iterable of vertex ids into a simplex tuple."""
    vs = tuple(sorted(int(v) for v in vertices))
    if not vs:
        raise DomainError("a simplex needs at least one vertex")
    if vs[0] < 0:
        raise DomainError(f"negative vertex id in {vs}")
    if any(a == b for a, b in zip(vs, vs[1:])):
        raise DomainError(f"repeated vertex in {vs}")
    return vs


def simplex_dim(s: Simplex) -> int:
    return len(s) - 1


def faces(s: Simplex) -> list[Simplex]:
    """All codimension-1 faces of ``s`` (empty list for vertices)."""
    if len(s) == 1:
        return []
    return [s[:j] + s[j + 1 :] for j in range(len(s))]


def boundary_faces(s: Simplex) -> list[tuple[Simplex, int]]:
    """Codimension-1 faces of ``s`` paired with the alternating sign (-1)^j."""
    return [(s[:j] + s[j + 1 :], -1 if j % 2 else 1) for j in range(len(s))]


class SimplicialComplex:
    """A finite simplicial complex on contiguous vertex ids 0..n-1.

    Immutable after construction.  The constructor rejects input that is not
    downward closed or whose vertex ids are not contiguous.
    """

    def __init__(self, simplices: Iterable[Iterable[int]], validate: bool = True):
        by_dim: dict[int, set[Simplex]] = {}
        for s in simplices:
            t = as_simplex(s)
            by_dim.setdefault(len(t) - 1, set()).add(t)
        if not by_dim:
            raise DomainError("empty complex")
        self._by_dim: list[tuple[Simplex, ...]] = []
        for k in range(max(by_dim) + 1):
            self._by_dim.append(tuple(sorted(by_dim.get(k, ()))))
        self._all = frozenset(itertools.chain.from_iterable(self._by_dim))
        self.n_vertices = max(v for (v,) in self._by_dim[0]) + 1 if self._by_dim[0] else 0
        if validate:
            self._validate()

    def _validate(self) -> None:
        if len(self._by_dim[0]) != self.n_vertices:
            raise DomainError("vertex ids must be contiguous 0..n-1")
        for k in range(1, len(self._by_dim)):
            for s in self._by_dim[k]:
                for f in faces(s):
                    if f not in self._all:
                        raise DomainError(f"not downward closed: {s} lacks face {f}")

    @classmethod
    def from_maximal(cls, simplices: Iterable[Iterable[int]]) -> "SimplicialComplex":
        """Build the downward closure of the given generating simplices."""
        closure: set[Simplex] = set()
        stack = [as_simplex(s) for s in simplices]
        while stack:
            s = stack.pop()
            if s in closure:
                continue
            closure.add(s)
            stack.extend(faces(s))
        return cls(closure, validate=True)

    @property
    def dim(self) -> int:
        return len(self._by_dim) - 1

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(sk) for sk in self._by_dim)

    def f(self, k: int) -> int:
        return len(self._by_dim[k]) if 0 <= k <= self.dim else 0

    def simplices(self, k: int) -> tuple[Simplex, ...]:
        """The k-simplices in lexicographic order."""
        if not 0 <= k <= self.dim:
            return ()
        return self._by_dim[k]

    def all_simplices(self) -> Iterator[Simplex]:
        return itertools.chain.from_iterable(self._by_dim)

    def __contains__(self, s: Iterable[int]) -> bool:
        return as_simplex(s) in self._all

    def __len__(self) -> int:
        return len(self._all)

    def skeleton(self, k: int) -> "SimplicialComplex":
        if not 0 <= k <= self.dim:
            raise DomainError(f"skeleton dimension {k} out of range 0..{self.dim}")
        return SimplicialComplex(
            itertools.chain.from_iterable(self._by_dim[: k + 1]), validate=False
        )

    def with_added(self, extra: Iterable[Iterable[int]]) -> "SimplicialComplex":
        """A new complex with the extra simplices added (closure re-checked)."""
        return SimplicialComplex(
            itertools.chain(self.all_simplices(), map(as_simplex, extra))
        )

    def __repr__(self) -> str:
        return f"SimplicialComplex(n={self.n_vertices}, f={self.f_vector})"


def build_skeleton(n: int, k: int) -> SimplicialComplex:
    """The complete k-skeleton on n vertices: every subset of size <= k+1."""
    if n < 1 or not 0 <= k <= n - 1:
        raise DomainError(f"skeleton dimension {k} out of range for {n} vertices")
    sims = itertools.chain.from_iterable(
        itertools.combinations(range(n), j + 1) for j in range(k + 1)
    )
    return SimplicialComplex(sims, validate=False)


@dataclass(frozen=True)
class BoundaryMatrix:
    """Signed incidence matrix of the degree-k boundary operator.

    ``columns[j]`` lists (row index, sign) pairs, rows sorted increasing, for
    the j-th k-simplex; rows index (k-1)-simplices.  Row and column orders are
    the lexicographic simplex orders unless explicitly overridden.
    """

    degree: int
    row_simplices: tuple[Simplex, ...]
    col_simplices: tuple[Simplex, ...]
    columns: tuple[tuple[tuple[int, int], ...], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.row_simplices), len(self.col_simplices))


def boundary_matrix(
    X: SimplicialComplex,
    k: int,
    rows: Sequence[Simplex] | None = None,
    cols: Sequence[Simplex] | None = None,
) -> BoundaryMatrix:
    """Boundary operator from k-chains to (k-1)-chains of X.

    The column of <v0...vk> has entry (-1)^j at the face dropping v_j.
    Optional ``rows``/``cols`` restrict and reorder the simplex bases.
    """
    if not 1 <= k <= X.dim:
        raise DomainError(f"boundary degree {k} out of range 1..{X.dim}")
    row_s = tuple(rows) if rows is not None else X.simplices(k - 1)
    col_s = tuple(cols) if cols is not None else X.simplices(k)
    row_index = {s: i for i, s in enumerate(row_s)}
    columns = []
    for s in col_s:
        entries = []
        for f, sign in boundary_faces(s):
            i = row_index.get(f)
            if i is not None:
                entries.append((i, sign))
        entries.sort()
        columns.append(tuple(entries))
    return BoundaryMatrix(k, row_s, col_s, tuple(columns))


def augmentation_matrix(X: SimplicialComplex) -> BoundaryMatrix:
    """The augmentation map sending every vertex to the empty-simplex row.

    This is the degree-0 boundary of the reduced chain complex; ranks computed
    with it yield reduced Betti numbers in degree 0.
    """
    col_s = X.simplices(0)
    return BoundaryMatrix(0, ((),), col_s, tuple(((0, 1),) for _ in col_s))


class Filtration:
    """A simplicial complex with a nonnegative exact-rational birth time per simplex.

    Birth times are monotone under inclusion: a face is never born after a
    coface.  Immutable after construction.
    """

    def __init__(
        self,
        complex: SimplicialComplex,
        births: Mapping[Simplex, Fraction],
        validate: bool = True,
    ):
        self.complex = complex
        self.births: dict[Simplex, Fraction] = {
            as_simplex(s): Fraction(t) for s, t in births.items()
        }
        if validate:
            self._validate()

    def _validate(self) -> None:
        for s in self.complex.all_simplices():
            t = self.births.get(s)
            if t is None:
                raise DomainError(f"missing birth time for {s}")
            if t < 0:
                raise DomainError(f"negative birth time for {s}")
            for f in faces(s):
                if self.births[f] > t:
                    raise DomainError(
                        f"birth times not monotone: face {f} born after {s}"
                    )

    @property
    def saturation_time(self) -> Fraction:
        return max(self.births.values())

    def birth(self, s: Iterable[int]) -> Fraction:
        return self.births[as_simplex(s)]

    def weight(self, simplices: Iterable[Simplex]) -> Fraction:
        return sum((self.births[s] for s in simplices), Fraction(0))

    def events(self, k: int | None = None) -> list[tuple[Fraction, Simplex]]:
        """Events sorted by (time, dimension, lexicographic vertices).

        With ``k`` given, only k-simplices; otherwise all simplices.  The
        order is a total refinement of the face partial order.
        """
        if k is None:
            items = self.complex.all_simplices()
        else:
            items = self.complex.simplices(k)
        return sorted(((self.births[s], s) for s in items), key=_event_key)

    def subcomplex_at(self, t: Fraction) -> SimplicialComplex:
        present = [s for s in self.complex.all_simplices() if self.births[s] <= t]
        return SimplicialComplex(present, validate=False)

    def __repr__(self) -> str:
        return f"Filtration({self.complex!r}, T={self.saturation_time})"


def _event_key(item: tuple[Fraction, Simplex]):
    t, s = item
    return (t, len(s), s)


def filtration_events(F: Filtration, k: int | None = None):
    """Sorted (time, simplex) events; module-level alias of Filtration.events."""
    return F.events(k)


def filtration_to_text(F: Filtration) -> str:
    """One `v0 v1 ... vk num/den` line per simplex; '#' starts a comment."""
    lines = ["# simplicial filtration: vertices then birth time num/den"]
    for t, s in F.events():
        lines.append(" ".join(map(str, s)) + f" {t.numerator}/{t.denominator}")
    return "\n".join(lines) + "\n"


def filtration_from_text(text: str, origin: str = "<text>") -> Filtration:
    births: dict[Simplex, Fraction] = {}
    for ln, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            t = Fraction(parts[-1])
            s = as_simplex(int(v) for v in parts[:-1])
        except (ValueError, ZeroDivisionError, IndexError) as exc:
            raise DomainError(f"{origin}:{ln}: bad simplex line {line!r}") from exc
        births[s] = t
    X = SimplicialComplex(births.keys())
    return Filtration(X, births)


def write_filtration(F: Filtration, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(filtration_to_text(F))


def read_filtration(path: str) -> Filtration:
    with open(path) as fh:
        return filtration_from_text(fh.read(), origin=path)
