"""Limiting-constant machinery: fixed-point roots, thresholds, and the
conjectured lifetime-sum constants by adaptive quadrature.

For degree d the integrand h_d(c) uses the trivial branch t = 1 up to the
threshold c_star(d) and the smallest interior fixed point beyond it; the
threshold equation is exactly the condition making h_d continuous there, so
the only non-smooth point of the integrand is a kink at c_star.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from .simplicial import DomainError

_ROOT_TOL = 1e-14
_GRID = 4096


def _bisect(f, lo: float, hi: float, tol: float = _ROOT_TOL) -> float:
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise ValueError("bisection bracket does not change sign")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (fhi > 0):
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def _fixed_point_gap(t: float, c: float, d: int) -> float:
    return t - math.exp(-c * (1.0 - t) ** d)


def _polish_root(t: float, c: float, d: int) -> float:
    """Newton steps to full relative precision; bisection alone is only
    absolutely accurate, which is too coarse for roots near 0."""
    for _ in range(8):
        e = math.exp(-c * (1.0 - t) ** d)
        gp = 1.0 - c * d * (1.0 - t) ** (d - 1) * e
        if abs(gp) < 0.5:  # near-double root: keep the bisection value
            break
        step = (t - e) / gp
        t2 = t - step
        if not 0.0 < t2 < 1.0 or t2 == t:
            break
        t = t2
    return t


def t_c(c: float, d: int) -> float:
    """Smallest positive root of t = exp(-c (1-t)^d); 1 when none is interior.

    Scans a grid on (0, 1) for the first sign change of the gap, refining the
    grid when the change sits within one cell of t = 1, then bisects.
    """
    if c < 0:
        raise DomainError("c must be nonnegative")
    if d < 1:
        raise DomainError("d must be >= 1")
    if c == 0.0:
        return 1.0
    grid = _GRID
    for _ in range(10):
        # the gap is -exp(-c) < 0 at t = 0+, so scan from the left edge
        prev_t = 0.0
        prev_g = -math.exp(-c)
        bracket = None
        for i in range(1, grid):
            t = i / grid
            g = _fixed_point_gap(t, c, d)
            if prev_g <= 0.0 < g or prev_g < 0.0 <= g:
                bracket = (prev_t, t)
                break
            prev_t, prev_g = t, g
        if bracket is None:
            return 1.0
        if bracket[1] < 1.0 - 1.5 / grid:
            return _polish_root(
                _bisect(lambda t: _fixed_point_gap(t, c, d), *bracket), c, d
            )
        grid *= 4
    return _polish_root(_bisect(lambda t: _fixed_point_gap(t, c, d), *bracket), c, d)


def psi(t: float, d: int) -> float:
    """-log(t) / (1-t)^d on (0, 1)."""
    if not 0.0 < t < 1.0:
        raise DomainError("psi is defined on the open interval (0, 1)")
    return -math.log(t) / (1.0 - t) ** d


@lru_cache(maxsize=None)
def t_star(d: int) -> float:
    """Unique interior root of (d+1)(1-t) + (1+dt) log t = 0; 1 for d = 1."""
    if d < 1:
        raise DomainError("d must be >= 1")
    if d == 1:
        return 1.0

    def eq(t: float) -> float:
        return (d + 1) * (1.0 - t) + (1.0 + d * t) * math.log(t)

    return _bisect(eq, 1e-12, 1.0 - 1e-9)


@lru_cache(maxsize=None)
def c_star(d: int) -> float:
    """Threshold value psi_d(t_star); 1 for d = 1."""
    if d == 1:
        return 1.0
    return psi(t_star(d), d)


def _smallest_root_fast(c: float, d: int) -> float:
    """Smallest interior fixed point for c past the threshold (bracketed)."""
    if d >= 2:
        hi = t_star(d)
        if _fixed_point_gap(hi, c, d) <= 0.0:
            return t_c(c, d)  # fall back to the scanning version
        return _polish_root(
            _bisect(lambda t: _fixed_point_gap(t, c, d), 1e-300, hi), c, d
        )
    # d = 1: shrink toward 1 until the gap is positive
    hi = 0.5
    while _fixed_point_gap(hi, c, d) <= 0.0:
        hi = 0.5 * (1.0 + hi)
        if 1.0 - hi < 1e-15:
            return 1.0
    return _polish_root(
        _bisect(lambda t: _fixed_point_gap(t, c, d), 1e-300, hi), c, d
    )


def h(c: float, d: int) -> float:
    """Asymptotic Betti-density integrand.

    Equals 1 - c/(d+1) on the trivial branch (c <= c_star) and the fixed
    point expression beyond the threshold; continuous at the threshold by the
    choice of t_star, with a kink.
    """
    if c < 0:
        raise DomainError("c must be nonnegative")
    if d < 1:
        raise DomainError("d must be >= 1")
    if c <= c_star(d):
        return 1.0 - c / (d + 1)
    t = _smallest_root_fast(c, d)
    if t >= 1.0:
        return 1.0 - c / (d + 1)
    u = 1.0 - t
    return c * t * u**d + c * u ** (d + 1) / (d + 1) + t - c / (d + 1)


@dataclass
class QuadraturePanel:
    a: float
    b: float
    value: float
    error: float


@dataclass
class LimitEvaluation:
    """Result of the conjectured-limit quadrature for one degree."""

    d: int
    c_star: float
    t_star: float
    value: float
    error_estimate: float
    panels: list[QuadraturePanel] = field(default_factory=list)
    conjectural: bool = True


class QuadratureError(RuntimeError):
    def __init__(self, message: str, panels: list[QuadraturePanel]):
        super().__init__(message)
        self.panels = panels


def _adaptive_simpson(f, a: float, b: float, tol: float, panels: list[QuadraturePanel],
                      max_depth: int = 40) -> tuple[float, float]:
    """Adaptive Simpson with per-panel Richardson error estimates."""

    def simpson(x0, x2, f0, f1, f2):
        return (x2 - x0) / 6.0 * (f0 + 4.0 * f1 + f2)

    def recurse(x0, x2, f0, f1, f2, whole, eps, depth):
        x1 = 0.5 * (x0 + x2)
        lm = 0.5 * (x0 + x1)
        rm = 0.5 * (x1 + x2)
        flm = f(lm)
        frm = f(rm)
        left = simpson(x0, x1, f0, flm, f1)
        right = simpson(x1, x2, f1, frm, f2)
        err = (left + right - whole) / 15.0
        if depth >= max_depth:
            raise QuadratureError(
                f"refinement did not converge on [{x0}, {x2}]", panels
            )
        if abs(err) <= eps:
            val = left + right + err
            panels.append(QuadraturePanel(x0, x2, val, abs(err)))
            return val, abs(err)
        lv, le = recurse(x0, x1, f0, flm, f1, left, eps / 2.0, depth + 1)
        rv, re = recurse(x1, x2, f1, frm, f2, right, eps / 2.0, depth + 1)
        return lv + rv, le + re

    if b <= a:
        return 0.0, 0.0
    m = 0.5 * (a + b)
    fa, fm, fb = f(a), f(m), f(b)
    whole = simpson(a, b, fa, fm, fb)
    return recurse(a, b, fa, fm, fb, whole, tol, 0)


def limit_constant(d: int, tol: float = 1e-6) -> LimitEvaluation:
    """Evaluate the conjectured limit of the scaled lifetime sum in degree d-1.

    Integrates h_d over [0, infinity) split at the threshold (integrand kink)
    and truncated where the integrand falls below tol/1000, with an analytic
    tail bound folded into the error estimate.  The d = 1 value is exact in
    the limit; d >= 2 values are conjectural.
    """
    if d < 1:
        raise DomainError("d must be >= 1")
    if tol <= 0:
        raise DomainError("tol must be positive")
    cs = c_star(d)
    ts = t_star(d)
    fd_tail = math.factorial(d)
    c_max = max(4.0 * cs, 30.0)
    # truncate where the integrand is negligible AND the analytic tail bound
    # (2 * t_c <= 2 * exp(-c/2) out there) is below the error budget
    while (
        h(c_max, d) >= tol * 1e-3 or 4.0 * math.exp(-c_max / 2.0) >= tol * fd_tail / 4.0
    ) and c_max < 1e4:
        c_max *= 1.5
    panels: list[QuadraturePanel] = []
    fd = math.factorial(d)
    # accepted-panel error claims accumulate across refinement levels, so the
    # per-piece budget is kept well under the requested tolerance
    inner_tol = tol * fd / 16.0
    v1, e1 = _adaptive_simpson(lambda c: h(c, d), 0.0, cs, inner_tol, panels)
    v2, e2 = _adaptive_simpson(lambda c: h(c, d), cs, c_max, inner_tol, panels)
    # beyond c_max the integrand is below 2 * exp(-c/2)
    tail = 4.0 * math.exp(-c_max / 2.0)
    value = (v1 + v2) / fd
    err = (e1 + e2 + tail) / fd
    return LimitEvaluation(d, cs, ts, value, err, panels, conjectural=(d >= 2))


def _substitution_integrand(t: float) -> float:
    """Integrand of the degree-1 limit after the change of variables c -> t."""
    if t <= 0.0:
        return 1.0
    u = 1.0 - t
    if u < 1e-4:
        return 0.25 + 5.0 * u / 24.0 + u * u / 8.0
    tlogt = t * math.log(t)
    return (2.0 * u + tlogt) * (u + tlogt) / (2.0 * u**3)


def frieze_constant_by_substitution(tol: float = 1e-6) -> float:
    """Second, independent quadrature route to the degree-1 limit constant."""
    panels: list[QuadraturePanel] = []
    val, _ = _adaptive_simpson(_substitution_integrand, 0.0, 1.0, tol / 2.0, panels)
    return 0.75 + val


def zeta(s: int) -> float:
    """Riemann zeta at integer s in {3, 4}: direct series with an
    Euler-Maclaurin tail correction accurate far below 1e-14."""
    if s not in (3, 4):
        raise DomainError("only s in {3, 4} supported")
    N = 2000
    total = sum(n ** (-float(s)) for n in range(1, N))
    nf = float(N)
    total += nf ** (1 - s) / (s - 1)
    total += 0.5 * nf ** (-s)
    total += s * nf ** (-s - 1) / 12.0
    total -= s * (s + 1) * (s + 2) * nf ** (-s - 3) / 720.0
    return total


def janson_sigma2() -> float:
    """Limiting variance constant 6*zeta(4) - 4*zeta(3) of the scaled
    degree-0 lifetime sum."""
    return 6.0 * zeta(4) - 4.0 * zeta(3)
