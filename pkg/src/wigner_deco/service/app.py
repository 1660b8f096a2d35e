"""FastAPI service exposing the phase-space laboratory.

Every endpoint is a pure function of its request body, so identical
requests produce identical responses byte for byte.  Validation failures
map to HTTP 400, numerical-contract violations to HTTP 409; the CLI turns
those into exit codes 1 and 2.
"""
from __future__ import annotations

import base64

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import evolution, io, smoothing, wigner
from ..config import (
    EvolveRequest,
    ScalesRequest,
    ScanRequest,
    SmoothRequest,
    StateRequest,
    WignerRequest,
    build_density,
    build_pure,
    MixtureSpec,
)
from ..errors import ContractViolation, ValidationFailure
from ..smoothing import CovarianceMatrix2
from ..wigner import WignerField
from .schemas import (
    FieldResponse,
    FieldSummary,
    ScalesResponse,
    ScanResponse,
    StateResponse,
)

app = FastAPI(title="wigner-deco", version="0.1.0")


@app.exception_handler(ValidationFailure)
async def _validation_failure(request: Request, exc: ValidationFailure) -> JSONResponse:
    return JSONResponse(status_code=400, content={"detail": str(exc), "kind": "validation"})


@app.exception_handler(ContractViolation)
async def _contract_violation(request: Request, exc: ContractViolation) -> JSONResponse:
    return JSONResponse(status_code=409, content={"detail": str(exc), "kind": "contract"})


def _field_response(w: WignerField) -> FieldResponse:
    report = wigner.min_value(w)
    return FieldResponse(
        csv=io.field_csv(w),
        pgm_b64=base64.b64encode(io.field_pgm(w)).decode("ascii"),
        summary=FieldSummary(
            normalization=w.normalization(),
            min_value=report.min_value,
            min_x=report.min_location[0],
            min_p=report.min_location[1],
            relative_floor=report.relative_floor,
            purity=wigner.purity(w),
        ),
    )


def _field_from_request(req: StateRequest) -> WignerField:
    grid, params = req.grid.build(), req.params.build()
    return wigner.wigner_transform(build_density(req.state, grid, params), params)


@app.post("/v1/scales", response_model=ScalesResponse)
def get_scales(req: ScalesRequest) -> ScalesResponse:
    sc = evolution.scales(req.params.build())
    return ScalesResponse(sigma0=sc.sigma0, t0=sc.t0, t_d=sc.tD)


@app.post("/v1/state", response_model=StateResponse)
def make_state(req: StateRequest) -> StateResponse:
    grid, params = req.grid.build(), req.params.build()
    if isinstance(req.state, MixtureSpec):
        rho = build_density(req.state, grid, params)
        return StateResponse(kind="density", csv=io.density_csv(rho))
    psi = build_pure(req.state, grid, params)
    return StateResponse(kind="wavefunction", csv=io.wavefunction_csv(psi))


@app.post("/v1/wigner", response_model=FieldResponse)
def make_wigner(req: WignerRequest) -> FieldResponse:
    return _field_response(_field_from_request(req))


@app.post("/v1/husimi", response_model=FieldResponse)
def make_husimi(req: WignerRequest) -> FieldResponse:
    return _field_response(smoothing.husimi(_field_from_request(req)))


@app.post("/v1/smooth", response_model=FieldResponse)
def make_smooth(req: SmoothRequest) -> FieldResponse:
    cov = CovarianceMatrix2(req.covariance.cxx, req.covariance.cxp, req.covariance.cpp)
    return _field_response(smoothing.coarse_grain(_field_from_request(req), cov))


@app.post("/v1/evolve", response_model=FieldResponse)
def run_evolve(req: EvolveRequest) -> FieldResponse:
    grid, params = req.grid.build(), req.params.build()
    t0 = evolution.scales(params).t0
    if req.engine in ("exact", "fd"):
        w0 = _field_from_request(req)
        if req.engine == "exact":
            out = evolution.evolve_exact(w0, req.time)
        else:
            out = evolution.evolve_fd(w0, req.time, req.dt)
    elif req.engine == "trotter":
        rho0 = build_density(req.state, grid, params)
        dt = req.dt if req.dt is not None else t0 / 1000
        rho = evolution.evolve_density_trotter(rho0, req.time, dt, params)
        out = wigner.wigner_transform(rho, params)
    else:  # mc
        if isinstance(req.state, MixtureSpec):
            raise ValidationFailure("the Monte Carlo engine needs a pure initial state")
        psi = build_pure(req.state, grid, params)
        dt = req.dt if req.dt is not None else t0 / 200
        rho = evolution.evolve_montecarlo(psi, req.time, dt, req.n_samples, req.seed, params)
        out = wigner.wigner_transform(rho, params)
    return _field_response(out)


@app.post("/v1/scan", response_model=ScanResponse)
def run_scan(req: ScanRequest) -> ScanResponse:
    grid, params = req.grid.build(), req.params.build()
    w0 = wigner.wigner_transform(build_density(req.state, grid, params), params)
    result = evolution.decoherence_scan(w0, req.t_max, req.n_steps)
    return ScanResponse(
        first_nonneg_time=result.first_nonneg_time,
        t_d=evolution.scales(params).tD,
        multiple_crossings=result.multiple_crossings,
        trace_csv=io.scan_csv(result.trace),
    )
