"""Persistence diagrams, lifetime sums, Betti curves, and the l1/l2 functionals.

Degree-0 homology is reduced throughout (the class of the oldest component is
dropped); this is a global convention, not a flag.  A class with birth b and
death d is alive on [b, d), so Betti curves are right-continuous step
functions and zero-lifetime pairs are discarded.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import IO, Iterable

from .linalg import Field, RankOracle, get_field
from .simplicial import DomainError, Filtration, Simplex, boundary_matrix


@dataclass
class PersistenceDiagram:
    """Multiset of (birth, death) pairs in one degree; death None means infinity."""

    degree: int
    pairs: list[tuple[Fraction, Fraction | None]] = field(default_factory=list)

    @property
    def reduced(self) -> bool:
        return self.degree == 0

    @property
    def n_finite(self) -> int:
        return sum(1 for _, d in self.pairs if d is not None)

    @property
    def n_infinite(self) -> int:
        return sum(1 for _, d in self.pairs if d is None)

    def __len__(self) -> int:
        return len(self.pairs)


def _column_dicts(bnd, fld: Field) -> list[dict[int, object]]:
    return [{r: fld.convert(v) for r, v in col} for col in bnd.columns]


def _reduce_boundary(
    columns: list[dict[int, object]], fld: Field, skip: set[int] | None = None
) -> tuple[dict[int, int], list[int]]:
    """Left-to-right column reduction over a field.

    Returns (pivot row -> column index) for columns that reduce to nonzero,
    and the list of column indices that reduce to zero.  Columns in ``skip``
    are treated as already zero (clearing).
    """
    pivots: dict[int, dict[int, object]] = {}
    pivot_col: dict[int, int] = {}
    zeroed: list[int] = []
    for j, col in enumerate(columns):
        if skip is not None and j in skip:
            zeroed.append(j)
            continue
        work = col
        while work:
            low = max(work)
            piv = pivots.get(low)
            if piv is None:
                break
            coef = fld.neg(work[low])
            for r, v in piv.items():
                acc = fld.add(work.get(r, 0), fld.mul(coef, v))
                if fld.is_zero(acc):
                    work.pop(r, None)
                else:
                    work[r] = acc
        if work:
            low = max(work)
            inv = fld.inv(work[low])
            pivots[low] = {r: fld.mul(inv, v) for r, v in work.items()}
            pivot_col[low] = j
        else:
            zeroed.append(j)
    return pivot_col, zeroed


def compute_persistence(
    F: Filtration, k: int, domain: str | Field = "fraction"
) -> PersistenceDiagram:
    """Degree-k persistence diagram of a filtration by column reduction.

    Deterministic given the canonical event order (time, dimension, lex).
    Columns of the degree-(k+1) boundary give the deaths; creators in degree k
    are found by reducing the degree-k boundary with the clearing shortcut.
    """
    if k < 0:
        raise DomainError("negative persistence degree")
    X = F.complex
    if k > X.dim:
        return PersistenceDiagram(k)
    fld = get_field(domain)
    k_simplices = [s for _, s in F.events(k)]
    k_index = {s: i for i, s in enumerate(k_simplices)}

    deaths: dict[int, Fraction] = {}
    cleared: set[int] = set()
    if k + 1 <= X.dim:
        up_cols = [s for _, s in F.events(k + 1)]
        bnd_up = boundary_matrix(X, k + 1, rows=k_simplices, cols=up_cols)
        pivot_col, _ = _reduce_boundary(_column_dicts(bnd_up, fld), fld)
        for low, j in pivot_col.items():
            deaths[low] = F.births[up_cols[j]]
        cleared = set(pivot_col)  # these k-simplices create and later die

    if k == 0:
        # augmentation row: reduced degree-0 convention
        columns = [{0: fld.convert(1)} for _ in k_simplices]
    else:
        low_rows = [s for _, s in F.events(k - 1)]
        bnd = boundary_matrix(X, k, rows=low_rows, cols=k_simplices)
        columns = _column_dicts(bnd, fld)
    _, zeroed = _reduce_boundary(columns, fld, skip=cleared)

    pairs: list[tuple[Fraction, Fraction | None]] = []
    for j in zeroed:
        birth = F.births[k_simplices[j]]
        death = deaths.get(j)
        if death is None:
            pairs.append((birth, None))
        elif death > birth:
            pairs.append((birth, death))
    pairs.sort(key=lambda p: (p[0], p[1] is None, p[1]))
    return PersistenceDiagram(k, pairs)


def lifetime_sum(D: PersistenceDiagram) -> Fraction | float:
    """Sum of (death - birth); infinity as soon as one death is infinite."""
    if D.n_infinite:
        return math.inf
    return sum((d - b for b, d in D.pairs), Fraction(0))


@dataclass
class BettiCurve:
    """Right-continuous integer step function t -> beta_k(t).

    ``breakpoints`` holds (time, value) with strictly increasing times; the
    value applies from its time up to the next breakpoint.  Before the first
    breakpoint the curve is 0.
    """

    degree: int
    breakpoints: list[tuple[Fraction, int]] = field(default_factory=list)

    def value(self, t: Fraction) -> int:
        out = 0
        for bt, v in self.breakpoints:
            if bt > t:
                break
            out = v
        return out

    def integrate(self, upto: Fraction) -> Fraction:
        total = Fraction(0)
        for (t0, v), nxt in zip(self.breakpoints, self.breakpoints[1:] + [None]):
            if t0 >= upto:
                break
            t1 = upto if nxt is None else min(nxt[0], upto)
            total += v * (t1 - t0)
        return total

    @property
    def final_value(self) -> int:
        return self.breakpoints[-1][1] if self.breakpoints else 0


def betti_curve(F: Filtration, k: int, domain: str | Field = "fraction") -> BettiCurve:
    """Betti curve computed by incremental rank at every event time.

    Independent of the persistence pairing: ranks of the degree-k and
    degree-(k+1) boundaries are grown column by column in event order.
    """
    if k < 0:
        raise DomainError("negative degree")
    X = F.complex
    if k > X.dim:
        return BettiCurve(k)
    k_lex = {s: i for i, s in enumerate(X.simplices(k))}
    if k == 0:
        low_cols = {s: ((0, 1),) for s in X.simplices(0)}
        low_rank = RankOracle(1, domain)
    else:
        rows_lex = {s: i for i, s in enumerate(X.simplices(k - 1))}
        bnd = boundary_matrix(X, k)
        low_cols = dict(zip(bnd.col_simplices, bnd.columns))
        low_rank = RankOracle(len(rows_lex), domain)
    up_cols: dict[Simplex, tuple] = {}
    if k + 1 <= X.dim:
        bnd_up = boundary_matrix(X, k + 1)
        up_cols = dict(zip(bnd_up.col_simplices, bnd_up.columns))
    up_rank = RankOracle(len(k_lex), domain)

    curve: list[tuple[Fraction, int]] = []
    f_k = 0
    events = F.events()
    i = 0
    while i < len(events):
        t = events[i][0]
        while i < len(events) and events[i][0] == t:
            s = events[i][1]
            d = len(s) - 1
            if d == k:
                f_k += 1
                low_rank.try_add(low_cols[s])
            elif d == k + 1:
                up_rank.try_add(up_cols[s])
            i += 1
        beta = f_k - low_rank.rank - up_rank.rank
        if not curve or curve[-1][1] != beta:
            curve.append((t, beta))
    return BettiCurve(k, curve)


def integrate_betti(curve: BettiCurve, upto: Fraction) -> Fraction:
    return curve.integrate(Fraction(upto))


def persistent_betti(D: PersistenceDiagram, s: Fraction, t: Fraction) -> int:
    """Number of classes born by time s and still alive strictly after t."""
    s, t = Fraction(s), Fraction(t)
    if s > t:
        raise DomainError("persistent Betti needs s <= t")
    return sum(1 for b, d in D.pairs if b <= s and (d is None or d > t))


def l2_norm_sq(D: PersistenceDiagram) -> Fraction:
    """Squared l2 norm of the lifetime vector, summed directly."""
    if D.n_infinite:
        raise DomainError("l2 norm undefined with infinite lifetimes")
    return sum(((d - b) ** 2 for b, d in D.pairs), Fraction(0))


def l2_via_integral(D: PersistenceDiagram) -> Fraction:
    """Squared l2 norm as 2 * integral of the two-parameter Betti count.

    Evaluated exactly over the rectangle decomposition induced by the
    diagram's birth/death coordinates; must agree with `l2_norm_sq`.
    """
    if D.n_infinite:
        raise DomainError("l2 norm undefined with infinite lifetimes")
    if not D.pairs:
        return Fraction(0)
    coords = sorted({c for b, d in D.pairs for c in (b, d)})
    total = Fraction(0)
    for i in range(len(coords) - 1):
        for j in range(i, len(coords) - 1):
            count = sum(
                1 for b, d in D.pairs if b <= coords[i] and d >= coords[j + 1]
            )
            if not count:
                continue
            wi = coords[i + 1] - coords[i]
            wj = coords[j + 1] - coords[j]
            area = wi * wi / 2 if i == j else wi * wj
            total += count * area
    return 2 * total


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def diagram_to_json_obj(D: PersistenceDiagram) -> list[dict]:
    return [
        {
            "degree": D.degree,
            "birth": _frac_str(b),
            "death": "inf" if d is None else _frac_str(d),
        }
        for b, d in D.pairs
    ]


def diagram_from_json_obj(items: Iterable[dict]) -> list[PersistenceDiagram]:
    by_deg: dict[int, PersistenceDiagram] = {}
    for item in items:
        deg = int(item["degree"])
        d = None if item["death"] == "inf" else Fraction(item["death"])
        by_deg.setdefault(deg, PersistenceDiagram(deg)).pairs.append(
            (Fraction(item["birth"]), d)
        )
    return [by_deg[k] for k in sorted(by_deg)]


def diagram_to_csv(D: PersistenceDiagram, fh: IO[str]) -> None:
    """CSV with decimal (17 significant digits) and exact rational columns."""
    w = csv.writer(fh)
    w.writerow(
        ["degree", "birth", "death", "lifetime", "birth_exact", "death_exact", "lifetime_exact"]
    )
    for b, d in D.pairs:
        if d is None:
            w.writerow([D.degree, f"{float(b):.17g}", "inf", "inf", _frac_str(b), "inf", "inf"])
        else:
            life = d - b
            w.writerow(
                [
                    D.degree,
                    f"{float(b):.17g}",
                    f"{float(d):.17g}",
                    f"{float(life):.17g}",
                    _frac_str(b),
                    _frac_str(d),
                    _frac_str(life),
                ]
            )
