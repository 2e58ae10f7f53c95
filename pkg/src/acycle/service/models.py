"""Pydantic request/response models for the compute service.

Exact rationals travel as "p/q" strings next to float conveniences; the
filtration wire format is the same newline text the CLI reads and writes.
"""

from __future__ import annotations

from pydantic import BaseModel, Field


class ProcessModel(BaseModel):
    kind: str = Field(description="linial-meshulam | clique | uniform-complex")
    n: int
    d: int
    birth_law: str = "uniform"
    max_dim: int | None = None
    m: int | None = None


class SampleRequest(BaseModel):
    process: ProcessModel
    master_seed: int = 0
    trial: int = 0


class SampleResponse(BaseModel):
    filtration: str
    n_simplices: int
    saturation_time: str


class PersistenceRequest(BaseModel):
    filtration: str
    degree: int
    domain: str = "fraction"


class DiagramPoint(BaseModel):
    degree: int
    birth: str
    death: str


class PersistenceResponse(BaseModel):
    degree: int
    pairs: list[DiagramPoint]
    lifetime_sum: str
    lifetime_sum_decimal: float


class MsaRequest(BaseModel):
    filtration: str
    degree: int
    domain: str = "fraction"


class MsaResponse(BaseModel):
    degree: int
    gamma: int
    weight: str
    simplices: list[list[int]]
    certified: bool
    max_complement_weight: str
    lifetime: str
    lifetime_decimal: float


class VerifyRequest(BaseModel):
    filtration: str
    degree: int


class RouteValue(BaseModel):
    exact: str
    decimal: float


class VerifyResponse(BaseModel):
    degree: int
    lifetime_by_persistence: RouteValue
    lifetime_by_msa: RouteValue
    lifetime_by_betti_integral: RouteValue
    equal: bool
    seconds: dict[str, float]


class LimitRequest(BaseModel):
    d: int
    tol: float = 1e-6


class LimitResponse(BaseModel):
    d: int
    value: float
    error_estimate: float
    c_star: float
    t_star: float
    conjectural: bool
    panels: int


class RhoRequest(BaseModel):
    n: int
    d: int
    m: int
    trials: int = 200
    seed: int = 0


class RhoResponse(BaseModel):
    n: int
    d: int
    m: int
    trials: int
    value: float
    half_width: float


class KalaiRequest(BaseModel):
    n: int
    d: int
    cap: int = 10**7


class KalaiResponse(BaseModel):
    n: int
    d: int
    total: int
    expected: int
    matches: bool
    census: dict[int, int]
    max_torsion: int


class MorseRequest(BaseModel):
    filtration: str
    d: int
    at_time: str | None = None  # "p/q"; default: the saturated complex


class MorseResponse(BaseModel):
    d: int
    paired: int
    critical_by_dim: dict[int, int]
    acyclic: bool
    expected_value: float | None = None
    expected_upper_bound: float | None = None


class HistogramModel(BaseModel):
    bins: int = 32
    range: float = 1.0


class ExperimentRequest(BaseModel):
    process: ProcessModel
    trials: int
    master_seed: int = 0
    degree: int = -1
    identity_check: bool = True
    verify_all: bool = False
    histogram: HistogramModel = HistogramModel()
    horizon: str | None = None  # "p/q"


class TrialModel(BaseModel):
    trial: int
    lifetime: str
    lifetime_decimal: float
    n_pairs: int
    seconds: float
    verified: bool


class ExperimentResponse(BaseModel):
    n: int
    d: int
    degree: int
    trials: int
    mean: float
    mean_exact: str
    stderr: float
    band_3sigma: list[float]
    histogram_mass: float
    histogram: list[list[float]]
    histogram_range: float
    elapsed_seconds: float
    records: list[TrialModel]


class ScalingRequest(BaseModel):
    process: str
    d: int
    n_list: list[int]
    trials: int = 100
    master_seed: int = 0


class ScalingRowModel(BaseModel):
    n: int
    trials: int
    mean: float
    stderr: float
    mean_over_power: float
    lower_ref: float
    upper_ref: float
    mean_over_n: float
    mean_over_nlogn: float


class ScalingResponse(BaseModel):
    process: str
    d: int
    rows: list[ScalingRowModel]
