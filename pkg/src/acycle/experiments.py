"""Seeded parallel Monte Carlo trials over random complex processes.

Each trial derives its own stream from (master seed, trial index), so results
are independent of worker scheduling; aggregation reduces over sorted trial
indices.  Every fast trial runs cheap exact cross-checks (greedy basis size,
the pivot-weight/complement identity, the ordered-statistics lower bound); a
deterministic subsample additionally gets the full three-way identity
verification in rational arithmetic.  An identity failure is a bug trap, not
a statistical event: it aborts the experiment with the offending seed.
"""

from __future__ import annotations

import json
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np

from . import kernels
from .acycles import StructuralError, lifetime_via_msa
from .asymptotics import janson_sigma2
from .persistence import (
    betti_curve,
    compute_persistence,
    integrate_betti,
    lifetime_sum,
)
from .processes import ProcessSpec, SeedSpec
from .simplicial import DomainError, Filtration, write_filtration

log = logging.getLogger("acycle")

VERIFY_SUBSAMPLE = 20  # every 20th trial, i.e. 5%
DEFAULT_VERIFY_CAP = 2000  # exact verification only below this many d-columns


class IdentityViolationError(RuntimeError):
    """The three lifetime routes disagreed; carries the offending seed."""

    def __init__(
        self,
        message: str,
        seed: SeedSpec | None = None,
        report: "IdentityReport | None" = None,
    ):
        super().__init__(message)
        self.seed = seed
        self.report = report
        self.process_spec: ProcessSpec | None = None

    def __reduce__(self):
        return (self.__class__, (str(self), self.seed, self.report))


@dataclass
class IdentityReport:
    """Three-way lifetime computation with timings; exact rational values."""

    degree: int
    by_persistence: Fraction | float
    by_msa: Fraction | float
    by_betti_integral: Fraction | float
    seconds: dict = field(default_factory=dict)

    @property
    def equal(self) -> bool:
        return self.by_persistence == self.by_msa == self.by_betti_integral

    def to_json_obj(self) -> dict:
        def fmt(x):
            if isinstance(x, Fraction):
                return {"exact": f"{x.numerator}/{x.denominator}", "decimal": float(x)}
            return {"exact": "inf", "decimal": x}

        return {
            "degree": self.degree,
            "lifetime_by_persistence": fmt(self.by_persistence),
            "lifetime_by_msa": fmt(self.by_msa),
            "lifetime_by_betti_integral": fmt(self.by_betti_integral),
            "equal": self.equal,
            "seconds": self.seconds,
        }


def verify_identity(F: Filtration, d: int, domain: str = "fraction") -> IdentityReport:
    """Compute the degree-(d-1) lifetime sum three independent ways.

    Persistence pairing, the spanning-acycle weight formula, and the
    integrated Betti curve (rank route) must agree exactly.
    """
    t0 = time.perf_counter()
    D = compute_persistence(F, d - 1, domain)
    l_ph = lifetime_sum(D)
    t1 = time.perf_counter()
    l_msa = lifetime_via_msa(F, d, domain)
    t2 = time.perf_counter()
    curve = betti_curve(F, d - 1, domain)
    if curve.final_value != 0:
        l_int: Fraction | float = math.inf
    else:
        l_int = integrate_betti(curve, F.saturation_time)
    t3 = time.perf_counter()
    return IdentityReport(
        d - 1,
        l_ph,
        l_msa,
        l_int,
        {"persistence": t1 - t0, "msa": t2 - t1, "betti_integral": t3 - t2},
    )


@dataclass(frozen=True)
class ExperimentConfig:
    process: ProcessSpec
    trials: int
    master_seed: int
    degree: int = -1  # persistence degree; defaults to process.d - 1
    identity_check: bool = True
    verify_all: bool = False
    verify_cap: int = DEFAULT_VERIFY_CAP
    histogram_bins: int = 32
    histogram_range: float = 1.0
    horizon: Fraction | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise DomainError("need at least one trial")
        if self.histogram_bins < 1:
            raise DomainError("need at least one histogram bin")
        deg = self.process.d - 1 if self.degree < 0 else self.degree
        if deg != self.process.d - 1:
            raise DomainError(
                f"degree {deg} inconsistent with process degree {self.process.d}"
            )
        object.__setattr__(self, "degree", deg)

    @classmethod
    def from_json_obj(cls, obj: dict) -> "ExperimentConfig":
        proc = obj["process"]
        spec = ProcessSpec(
            kind=proc["kind"],
            n=int(proc["n"]),
            d=int(proc["d"]),
            birth_law=proc.get("birth_law", "uniform"),
            max_dim=proc.get("max_dim"),
            m=proc.get("m"),
        )
        hist = obj.get("histogram", {})
        horizon = obj.get("horizon")
        return cls(
            process=spec,
            trials=int(obj["trials"]),
            master_seed=int(obj.get("master_seed", obj.get("seed", 0))),
            degree=int(obj.get("degree", -1)),
            identity_check=bool(obj.get("identity_check", True)),
            verify_all=bool(obj.get("verify_all", False)),
            verify_cap=int(obj.get("verify_cap", DEFAULT_VERIFY_CAP)),
            histogram_bins=int(hist.get("bins", 32)),
            histogram_range=float(hist.get("range", 1.0)),
            horizon=None if horizon is None else Fraction(horizon),
        )


@dataclass
class TrialRecord:
    trial: int
    lifetime: Fraction
    n_pairs: int
    seconds: float
    verified: bool


@dataclass
class MeanDiagramHistogram:
    bins: int
    t_max: float
    counts: np.ndarray  # bins x bins, per-trial average
    infinite_per_trial: float = 0.0

    @property
    def total_mass(self) -> float:
        return float(self.counts.sum())


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    records: list[TrialRecord]
    mean: Fraction
    stderr: float
    histogram: MeanDiagramHistogram
    elapsed: float

    @property
    def n(self) -> int:
        return self.config.process.n

    @property
    def degree(self) -> int:
        return self.config.degree

    def lifetimes(self) -> list[Fraction]:
        return [r.lifetime for r in self.records]

    def variance(self) -> float:
        xs = [float(r.lifetime) for r in self.records]
        if len(xs) < 2:
            return 0.0
        mu = sum(xs) / len(xs)
        return sum((x - mu) ** 2 for x in xs) / (len(xs) - 1)

    def summary_json_obj(self) -> dict:
        mean = self.mean
        return {
            "process": {
                "kind": self.config.process.kind,
                "n": self.config.process.n,
                "d": self.config.process.d,
                "birth_law": self.config.process.birth_law,
                "max_dim": self.config.process.max_dim,
            },
            "degree": self.degree,
            "trials": len(self.records),
            "master_seed": self.config.master_seed,
            "mean": float(mean),
            "mean_exact": f"{mean.numerator}/{mean.denominator}",
            "stderr": self.stderr,
            "band_3sigma": [float(mean) - 3 * self.stderr, float(mean) + 3 * self.stderr],
            "histogram_mass": self.histogram.total_mass,
            "elapsed_seconds": self.elapsed,
        }


def _maxcomp_weight(F: Filtration, d: int) -> Fraction:
    """Max complement weight one degree down, by the cheapest exact route."""
    X = F.complex
    total = F.weight(X.simplices(d - 1))
    if d - 1 == 0:
        return total - min(F.births[s] for s in X.simplices(0))
    if d - 1 == 1:
        _, cycle_edges = kernels.kruskal_split(F)
        return sum((t for t, _ in cycle_edges), Fraction(0))
    res = kernels.greedy_pairing(F, d - 1, comb(X.n_vertices - 1, d - 1))
    if int(res.accepted.sum()) != comb(X.n_vertices - 1, d - 1):
        raise StructuralError("rank deficit in the complement greedy")
    return total - res.accepted_weight()


def _truncate(pairs: list[tuple[Fraction, Fraction]], horizon: Fraction | None):
    if horizon is None:
        return pairs
    out = []
    for b, d in pairs:
        if b >= horizon:
            continue
        out.append((b, min(d, horizon)))
    return out


def run_single_trial(cfg: ExperimentConfig, trial: int) -> tuple[int, dict]:
    """One seeded trial: sample, compute the lifetime sum, run cross-checks."""
    seed = SeedSpec(cfg.master_seed, trial)
    t_start = time.perf_counter()
    F = cfg.process.sample(seed)
    d = cfg.process.d
    n = cfg.process.n

    if d == 1:
        # vertices are born together in both process kinds, so every class
        # killed by a merging edge was born at the common vertex time
        tree, _ = kernels.kruskal_split(F)
        vertex_min = min(F.births[s] for s in F.complex.simplices(0))
        pairs = [(vertex_min, t) for t, _ in tree if t > vertex_min]
        maxcomp = F.weight(F.complex.simplices(0)) - vertex_min
        lifetime = sum((t for t, _ in tree), Fraction(0)) - maxcomp
        d_times = sorted(F.births[s] for s in F.complex.simplices(1))[: len(tree)]
    else:
        target = comb(n - 1, d)
        res = kernels.greedy_pairing(F, d, target)
        if int(res.accepted.sum()) != target:
            raise StructuralError(
                f"greedy found {int(res.accepted.sum())} independent columns, "
                f"need {target} (seed {seed})"
            )
        maxcomp = _maxcomp_weight(F, d)
        # internal identity trap: the killed rows must weigh exactly as much
        # as the complement of the minimum acycle one degree down
        if res.pivot_row_weight() != maxcomp:
            raise IdentityViolationError(
                f"pivot weight != complement weight at seed {seed}", seed
            )
        lifetime = res.accepted_weight() - maxcomp
        pairs = res.pairs()
        d_times = sorted(res.col_times)[:target]

    # ordered-statistics lower bound, asserted per trial
    lower = sum(d_times, Fraction(0)) - maxcomp
    if lifetime < lower:
        raise IdentityViolationError(
            f"lifetime below the ordered-statistics bound at seed {seed}", seed
        )

    pairs = _truncate(pairs, cfg.horizon)
    if cfg.horizon is not None:
        lifetime = sum((dd - b for b, dd in pairs), Fraction(0))

    verified = False
    want_verify = cfg.verify_all or (
        cfg.identity_check and trial % VERIFY_SUBSAMPLE == 0
    )
    if want_verify and F.complex.f(d) <= cfg.verify_cap and cfg.horizon is None:
        report = verify_identity(F, d)
        if not report.equal or report.by_persistence != lifetime:
            raise IdentityViolationError(
                f"lifetime identity failed at seed {seed}", seed, report
            )
        verified = True

    births = np.array([float(b) for b, _ in pairs])
    deaths = np.array([float(dd) for _, dd in pairs])
    payload = {
        "lifetime_num": lifetime.numerator,
        "lifetime_den": lifetime.denominator,
        "births": births,
        "deaths": deaths,
        "seconds": time.perf_counter() - t_start,
        "verified": verified,
    }
    return trial, payload


def _worker(args: tuple) -> tuple[int, dict]:
    cfg, trial = args
    return run_single_trial(cfg, trial)


def _n_workers() -> int:
    env = os.environ.get("ACYCLE_THREADS", "").strip()
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_trials(cfg: ExperimentConfig) -> ExperimentResult:
    """Run all trials (in parallel when allowed) and aggregate deterministically."""
    t_start = time.perf_counter()
    workers = min(_n_workers(), cfg.trials)
    results: dict[int, dict] = {}
    try:
        if workers <= 1:
            for trial in range(cfg.trials):
                i, payload = run_single_trial(cfg, trial)
                results[i] = payload
        else:
            kernels.warmup()  # populate the jit cache before forking
            with ProcessPoolExecutor(max_workers=workers) as pool:
                for i, payload in pool.map(
                    _worker, ((cfg, t) for t in range(cfg.trials)), chunksize=4
                ):
                    results[i] = payload
    except IdentityViolationError as exc:
        exc.process_spec = cfg.process
        raise

    records: list[TrialRecord] = []
    edges = np.linspace(0.0, cfg.histogram_range, cfg.histogram_bins + 1)
    counts = np.zeros((cfg.histogram_bins, cfg.histogram_bins))
    total = Fraction(0)
    for trial in sorted(results):
        p = results[trial]
        lt = Fraction(p["lifetime_num"], p["lifetime_den"])
        total += lt
        records.append(
            TrialRecord(trial, lt, len(p["births"]), p["seconds"], p["verified"])
        )
        if len(p["births"]):
            hist, _, _ = np.histogram2d(p["births"], p["deaths"], bins=(edges, edges))
            counts += hist
    mean = total / len(records)
    xs = [float(r.lifetime) for r in records]
    if len(xs) > 1:
        mu = sum(xs) / len(xs)
        stderr = math.sqrt(sum((x - mu) ** 2 for x in xs) / (len(xs) - 1) / len(xs))
    else:
        stderr = 0.0
    histogram = MeanDiagramHistogram(
        cfg.histogram_bins,
        cfg.histogram_range,
        counts / len(records),
        infinite_per_trial=0.0,
    )
    return ExperimentResult(
        cfg, records, mean, stderr, histogram, time.perf_counter() - t_start
    )


@dataclass
class RhoEstimate:
    n: int
    d: int
    m: int
    trials: int
    value: float
    half_width: float


def estimate_rho(
    n: int, d: int, m: int, trials: int, seed: int, z: float = 3.0
) -> RhoEstimate:
    """Empirical probability that a fixed d-simplex is an adder for the
    uniform complex with m random d-simplices, with a z-sigma half-width."""
    from .linalg import RankOracle
    from .processes import uniform_complex
    from .simplicial import boundary_faces, boundary_matrix

    if trials < 1:
        raise DomainError("need at least one trial")
    sigma = tuple(range(d + 1))  # the lexicographically first d-simplex
    hits = 0
    for trial in range(trials):
        Y = uniform_complex(n, d, m, SeedSpec(seed, trial))
        row_index = {s: i for i, s in enumerate(Y.simplices(d - 1))}
        oracle = RankOracle(len(row_index), "fraction")
        if d <= Y.dim:
            for col in boundary_matrix(Y, d).columns:
                oracle.try_add(col)
        if sigma in Y:
            continue
        col = sorted((row_index[f], s) for f, s in boundary_faces(sigma))
        if oracle.would_accept(col):
            hits += 1
    p = hits / trials
    hw = z * math.sqrt(max(p * (1 - p), 1.0 / trials) / trials)
    return RhoEstimate(n, d, m, trials, p, hw)


@dataclass
class ScalingRow:
    n: int
    trials: int
    mean: float
    stderr: float
    mean_over_power: float  # mean / n^(d-1)
    lower_ref: float
    upper_ref: float
    mean_over_n: float
    mean_over_nlogn: float


@dataclass
class ScalingTable:
    process: str
    d: int
    rows: list[ScalingRow]

    def to_json_obj(self) -> dict:
        return {
            "process": self.process,
            "d": self.d,
            "rows": [row.__dict__ for row in self.rows],
        }


def scaling_study(
    process: str,
    d: int,
    n_list: Sequence[int],
    trials: int,
    master_seed: int,
    identity_check: bool = False,
) -> ScalingTable:
    """Per-n mean and stderr of the lifetime sum, with reference bound columns.

    The reference columns carry the proof bounds for the skeleton process
    ((d+1)/(2 d!) and 8(d+1)/d! times n^(d-1)); for the clique process the
    mean is also scaled by n and n log n since the true order is open.
    """
    rows = []
    fd = math.factorial(d)
    for n in n_list:
        spec = ProcessSpec(kind=process, n=n, d=d, max_dim=d if process == "clique" else None)
        cfg = ExperimentConfig(
            process=spec,
            trials=trials,
            master_seed=master_seed,
            identity_check=identity_check,
        )
        res = run_trials(cfg)
        mean = float(res.mean)
        rows.append(
            ScalingRow(
                n=n,
                trials=trials,
                mean=mean,
                stderr=res.stderr,
                mean_over_power=mean / n ** (d - 1),
                lower_ref=(d + 1) / (2 * fd) * n ** (d - 1),
                upper_ref=8 * (d + 1) / fd * n ** (d - 1),
                mean_over_n=mean / n,
                mean_over_nlogn=mean / (n * math.log(n)),
            )
        )
    return ScalingTable(process, d, rows)


def janson_check(result: ExperimentResult) -> tuple[float, float, bool]:
    """Soft check of n * Var(L_0) against the limiting variance constant.

    Returns (observed, reference, within 30 percent); logs a warning outside
    the band, never fails.
    """
    n = result.config.process.n
    observed = n * result.variance()
    ref = janson_sigma2()
    ok = abs(observed - ref) <= 0.3 * ref
    if not ok:
        log.warning(
            "scaled variance %.4f outside the 30%% band around %.4f", observed, ref
        )
    return observed, ref, ok


def write_trials_csv(result: ExperimentResult, path: str) -> None:
    import csv

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["trial", "lifetime_exact", "lifetime", "n_pairs", "seconds", "verified"])
        for r in result.records:
            w.writerow(
                [
                    r.trial,
                    f"{r.lifetime.numerator}/{r.lifetime.denominator}",
                    f"{float(r.lifetime):.17g}",
                    r.n_pairs,
                    f"{r.seconds:.6f}",
                    int(r.verified),
                ]
            )


def write_histogram_csv(result: ExperimentResult, path: str) -> None:
    np.savetxt(path, result.histogram.counts, delimiter=",", fmt="%.10g")


def write_summary_json(result: ExperimentResult, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(result.summary_json_obj(), fh, indent=2)
        fh.write("\n")


def dump_offending_filtration(seed: SeedSpec, spec: ProcessSpec, directory: str) -> str:
    """Serialize the filtration of a failed identity check for reproduction."""
    path = os.path.join(
        directory, f"identity-failure-{spec.kind}-n{spec.n}-d{spec.d}-"
        f"{seed.master}-{seed.trial}.txt"
    )
    write_filtration(spec.sample(seed), path)
    return path
