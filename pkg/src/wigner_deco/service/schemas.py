"""Response models of the HTTP service."""
from __future__ import annotations

from pydantic import BaseModel


class ErrorBody(BaseModel):
    detail: str
    kind: str


class ScalesResponse(BaseModel):
    sigma0: float
    t0: float
    t_d: float


class StateResponse(BaseModel):
    kind: str  # "wavefunction" or "density"
    csv: str


class FieldSummary(BaseModel):
    normalization: float
    min_value: float
    min_x: float
    min_p: float
    relative_floor: float
    purity: float


class FieldResponse(BaseModel):
    csv: str
    pgm_b64: str
    summary: FieldSummary


class ScanResponse(BaseModel):
    first_nonneg_time: float
    t_d: float
    multiple_crossings: bool
    trace_csv: str
