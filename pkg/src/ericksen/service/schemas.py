"""Request/response models for the service endpoints."""

from __future__ import annotations

from typing import List, Literal, Optional

from pydantic import BaseModel

from ..experiments.config import ConstantsConfig, ExperimentConfig, PotentialConfig


class HealthResponse(BaseModel):
    status: str = "ok"
    version: str


class ValidateRequest(BaseModel):
    constants: ConstantsConfig = ConstantsConfig()
    case: Optional[Literal["A", "B", "C"]] = None


class ValidateResponse(BaseModel):
    accepted: bool
    case: Optional[str] = None
    violated: Optional[str] = None
    message: Optional[str] = None
    coercivity_lambda: Optional[float] = None
    coercivity_Lambda: Optional[float] = None
    reduced_constants: Optional[ConstantsConfig] = None


class OrbitRequest(BaseModel):
    potential: PotentialConfig = PotentialConfig()
    beta: float = 1.0
    window_halfwidth: float = 16.0
    n_samples: int = 4001
    eps: Optional[float] = None
    gamma: float = 0.55
    out_dir: Optional[str] = None


class TruncatedInfo(BaseModel):
    eps: float
    gamma: float
    energy: float
    excess: float
    defect: float
    decay_rate: float


class OrbitResponse(BaseModel):
    alpha0: float
    orbit_energy: float
    equipartition_defect: float
    truncated: Optional[TruncatedInfo] = None
    csv_path: Optional[str] = None


class RunRequest(BaseModel):
    config: ExperimentConfig
    out_dir: str = "out"
    threads: int = 1


class RunResponse(BaseModel):
    rows: List[dict]
    csv_path: str
    summary_path: str


class ReferenceRequest(BaseModel):
    config: ExperimentConfig


class ReferenceResponse(BaseModel):
    d_value: float
    alpha_term: float
    frank_term: float
    iterations: int
    converged: bool
    restart_values: List[float]
    restart_scatter: float
