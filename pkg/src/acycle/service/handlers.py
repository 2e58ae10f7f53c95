"""Service handlers: pydantic request in, pydantic response out.

The FastAPI routes and the CLI both call these, so local and remote execution
share one code path.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .. import acycles, asymptotics, experiments, persistence
from ..processes import ProcessSpec, SeedSpec
from ..simplicial import filtration_from_text, filtration_to_text
from . import models


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _spec(p: models.ProcessModel) -> ProcessSpec:
    return ProcessSpec(
        kind=p.kind, n=p.n, d=p.d, birth_law=p.birth_law, max_dim=p.max_dim, m=p.m
    )


def sample(req: models.SampleRequest) -> models.SampleResponse:
    spec = _spec(req.process)
    F = spec.sample(SeedSpec(req.master_seed, req.trial))
    return models.SampleResponse(
        filtration=filtration_to_text(F),
        n_simplices=len(F.complex),
        saturation_time=_frac(F.saturation_time),
    )


def ph(req: models.PersistenceRequest) -> models.PersistenceResponse:
    F = filtration_from_text(req.filtration)
    D = persistence.compute_persistence(F, req.degree, req.domain)
    ls = persistence.lifetime_sum(D)
    exact = "inf" if not isinstance(ls, Fraction) else _frac(ls)
    return models.PersistenceResponse(
        degree=req.degree,
        pairs=[models.DiagramPoint(**p) for p in persistence.diagram_to_json_obj(D)],
        lifetime_sum=exact,
        lifetime_sum_decimal=float(ls),
    )


def msa(req: models.MsaRequest) -> models.MsaResponse:
    F = filtration_from_text(req.filtration)
    result = acycles.min_spanning_acycle(F, req.degree, req.domain)
    comp = acycles.max_complement_weight(F, req.degree, req.domain)
    lifetime = result.weight - comp
    obj = result.to_json_obj()
    return models.MsaResponse(
        degree=obj["degree"],
        gamma=obj["gamma"],
        weight=obj["weight"],
        simplices=obj["simplices"],
        certified=obj["certified"],
        max_complement_weight=_frac(comp),
        lifetime=_frac(lifetime),
        lifetime_decimal=float(lifetime),
    )


def verify(req: models.VerifyRequest) -> models.VerifyResponse:
    F = filtration_from_text(req.filtration)
    report = experiments.verify_identity(F, req.degree)
    obj = report.to_json_obj()
    return models.VerifyResponse(
        degree=report.degree,
        lifetime_by_persistence=models.RouteValue(**obj["lifetime_by_persistence"]),
        lifetime_by_msa=models.RouteValue(**obj["lifetime_by_msa"]),
        lifetime_by_betti_integral=models.RouteValue(**obj["lifetime_by_betti_integral"]),
        equal=report.equal,
        seconds=report.seconds,
    )


def limit(req: models.LimitRequest) -> models.LimitResponse:
    ev = asymptotics.limit_constant(req.d, req.tol)
    return models.LimitResponse(
        d=ev.d,
        value=ev.value,
        error_estimate=ev.error_estimate,
        c_star=ev.c_star,
        t_star=ev.t_star,
        conjectural=ev.conjectural,
        panels=len(ev.panels),
    )


def rho(req: models.RhoRequest) -> models.RhoResponse:
    est = experiments.estimate_rho(req.n, req.d, req.m, req.trials, req.seed)
    return models.RhoResponse(
        n=est.n, d=est.d, m=est.m, trials=est.trials,
        value=est.value, half_width=est.half_width,
    )


def kalai(req: models.KalaiRequest) -> models.KalaiResponse:
    census = acycles.kalai_census(req.n, req.d, req.cap)
    total = sum(t * t * c for t, c in census.items())
    expected = req.n ** comb(req.n - 2, req.d)
    return models.KalaiResponse(
        n=req.n,
        d=req.d,
        total=total,
        expected=expected,
        matches=total == expected,
        census={int(k): v for k, v in census.items()},
        max_torsion=max(census) if census else 0,
    )


def morse(req: models.MorseRequest) -> models.MorseResponse:
    from ..morse import critical_count, expected_critical, lex_matching, verify_acyclic

    F = filtration_from_text(req.filtration)
    X = F.complex if req.at_time is None else F.subcomplex_at(Fraction(req.at_time))
    matching = lex_matching(X, req.d)
    counts = {k: critical_count(matching, k) for k in range(X.dim + 1)}
    expected_value = expected_upper = None
    if req.at_time is not None:
        est = expected_critical(X.n_vertices, req.d, float(Fraction(req.at_time)))
        expected_value, expected_upper = est.value, est.upper_bound
    return models.MorseResponse(
        d=req.d,
        paired=len(matching.paired),
        critical_by_dim=counts,
        acyclic=verify_acyclic(matching),
        expected_value=expected_value,
        expected_upper_bound=expected_upper,
    )


def experiment(req: models.ExperimentRequest) -> models.ExperimentResponse:
    cfg = experiments.ExperimentConfig(
        process=_spec(req.process),
        trials=req.trials,
        master_seed=req.master_seed,
        degree=req.degree,
        identity_check=req.identity_check,
        verify_all=req.verify_all,
        histogram_bins=req.histogram.bins,
        histogram_range=req.histogram.range,
        horizon=None if req.horizon is None else Fraction(req.horizon),
    )
    res = experiments.run_trials(cfg)
    return models.ExperimentResponse(
        n=res.n,
        d=cfg.process.d,
        degree=res.degree,
        trials=len(res.records),
        mean=float(res.mean),
        mean_exact=_frac(res.mean),
        stderr=res.stderr,
        band_3sigma=[float(res.mean) - 3 * res.stderr, float(res.mean) + 3 * res.stderr],
        histogram_mass=res.histogram.total_mass,
        histogram=res.histogram.counts.tolist(),
        histogram_range=res.histogram.t_max,
        elapsed_seconds=res.elapsed,
        records=[
            models.TrialModel(
                trial=r.trial,
                lifetime=_frac(r.lifetime),
                lifetime_decimal=float(r.lifetime),
                n_pairs=r.n_pairs,
                seconds=r.seconds,
                verified=r.verified,
            )
            for r in res.records
        ],
    )


def scaling(req: models.ScalingRequest) -> models.ScalingResponse:
    table = experiments.scaling_study(
        req.process, req.d, req.n_list, req.trials, req.master_seed
    )
    return models.ScalingResponse(
        process=table.process,
        d=table.d,
        rows=[models.ScalingRowModel(**row.__dict__) for row in table.rows],
    )
