"""FastAPI application exposing the compute operations."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from ..acycles import PreconditionError, StructuralError
from ..experiments import IdentityViolationError
from ..simplicial import DomainError
from . import handlers, models

app = FastAPI(
    title="acycle",
    description=(
        "Minimum spanning acycles, persistence lifetime sums, and Monte Carlo "
        "experiments on random simplicial complex processes."
    ),
)


def _guard(fn, req):
    try:
        return fn(req)
    except (DomainError, PreconditionError) as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    except IdentityViolationError as exc:
        raise HTTPException(
            status_code=500, detail=f"identity violation: {exc} (seed {exc.seed})"
        ) from exc
    except StructuralError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/sample", response_model=models.SampleResponse)
def sample(req: models.SampleRequest):
    return _guard(handlers.sample, req)


@app.post("/ph", response_model=models.PersistenceResponse)
def ph(req: models.PersistenceRequest):
    return _guard(handlers.ph, req)


@app.post("/msa", response_model=models.MsaResponse)
def msa(req: models.MsaRequest):
    return _guard(handlers.msa, req)


@app.post("/verify", response_model=models.VerifyResponse)
def verify(req: models.VerifyRequest):
    return _guard(handlers.verify, req)


@app.post("/limit", response_model=models.LimitResponse)
def limit(req: models.LimitRequest):
    return _guard(handlers.limit, req)


@app.post("/rho", response_model=models.RhoResponse)
def rho(req: models.RhoRequest):
    return _guard(handlers.rho, req)


@app.post("/kalai", response_model=models.KalaiResponse)
def kalai(req: models.KalaiRequest):
    return _guard(handlers.kalai, req)


@app.post("/morse", response_model=models.MorseResponse)
def morse(req: models.MorseRequest):
    return _guard(handlers.morse, req)


@app.post("/experiment", response_model=models.ExperimentResponse)
def experiment(req: models.ExperimentRequest):
    return _guard(handlers.experiment, req)


@app.post("/scaling", response_model=models.ScalingResponse)
def scaling(req: models.ScalingRequest):
    return _guard(handlers.scaling, req)
