"""FastAPI front end over the core workflows.

Run with ``slgl serve`` or ``uvicorn slgl.service:app``.  Every endpoint is a
pure computation on the request body; the service holds no state, so any
number of clients and workers are safe.
"""

from __future__ import annotations

import math

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__
from .core import GridFunction, SpectralData
from .errors import (
    BracketingError,
    DegenerateSpectrumError,
    IllPosedDataError,
    InvalidArgumentError,
    SLGLError,
    SolverOverflowError,
    SpectralDataError,
)
from .schemas import (
    BConvertRequest,
    BConvertResponse,
    ForwardRequest,
    ForwardResponse,
    InverseRequest,
    InverseResponse,
    PotentialSpec,
    RoundtripRequest,
    RoundtripResponse,
    ValidateRequest,
    ValidateResponse,
)
from .workflows import (
    forward_payload,
    inverse_payload,
    resolve_potential,
    run_bconvert,
    run_forward,
    run_inverse,
    run_roundtrip,
    run_validate,
)

app = FastAPI(
    title="slgl",
    version=__version__,
    description="Sturm-Liouville spectral toolkit: forward solve, validation, "
    "Gelfand-Levitan inversion.",
)

_STATUS = {
    InvalidArgumentError: 422,
    SpectralDataError: 422,
    DegenerateSpectrumError: 422,
    BracketingError: 500,
    SolverOverflowError: 500,
    IllPosedDataError: 422,
}


@app.exception_handler(SLGLError)
async def _slgl_error(request: Request, exc: SLGLError):
    status = _STATUS.get(type(exc), 400)
    return JSONResponse(status_code=status, content={"detail": str(exc), "kind": type(exc).__name__})


def _potential(spec: PotentialSpec, m: int) -> GridFunction:
    if spec.kind == "samples":
        if not spec.values:
            raise InvalidArgumentError("potential kind 'samples' needs a values array")
        return GridFunction(0.0, math.pi, np.asarray(spec.values, dtype=float))
    return resolve_potential(spec.as_seed_string(), m)


def _spectral(payload) -> SpectralData:
    lam = np.asarray(payload.lambda_, dtype=float)
    a = np.asarray(payload.a, dtype=float)
    if lam.size != payload.N or a.size != payload.N:
        raise InvalidArgumentError(
            f"spectral data length mismatch: N={payload.N}, "
            f"len(lambda)={lam.size}, len(a)={a.size}"
        )
    return SpectralData(lam, a)


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/forward", response_model=ForwardResponse, response_model_by_alias=True)
def forward_endpoint(req: ForwardRequest):
    q = _potential(req.q, req.m)
    result = run_forward(q, req.alpha, req.beta, req.n_eigen, req.m)
    return forward_payload(result, req.alpha, req.beta)


@app.post("/validate", response_model=ValidateResponse)
def validate_endpoint(req: ValidateRequest):
    lam = np.asarray(req.spectral.lambda_, dtype=float)
    a = np.asarray(req.spectral.a, dtype=float)
    if lam.size != req.spectral.N or a.size != req.spectral.N:
        raise InvalidArgumentError("spectral data length mismatch")
    report = run_validate(lam, a, req.alpha, req.beta, K=req.K)
    return report.as_dict()


@app.post("/inverse", response_model=InverseResponse)
def inverse_endpoint(req: InverseRequest):
    spectral = _spectral(req.spectral)
    result = run_inverse(spectral, req.m, req.expect_alpha, req.expect_beta)
    payload = inverse_payload(result)
    payload.pop("q_csv", None)
    payload["x"] = list(result.q.x)
    payload["q"] = list(result.q.values)
    return payload


@app.post("/roundtrip", response_model=RoundtripResponse)
def roundtrip_endpoint(req: RoundtripRequest):
    q = _potential(req.q, req.m_forward)
    metrics, _ = run_roundtrip(
        q, req.alpha, req.beta, req.n_eigen, req.m_forward, req.m_inverse, req.interior_margin
    )
    return metrics


@app.post("/bconvert", response_model=BConvertResponse)
def bconvert_endpoint(req: BConvertRequest):
    spectral = _spectral(req.spectral)
    return run_bconvert(spectral, req.K)
