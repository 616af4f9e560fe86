"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field


class PotentialSpec(BaseModel):
    """Potential selector: a named seed, a constant, or explicit samples on [0, pi]."""

    kind: Literal["zero", "const", "cos2x", "samples"] = "zero"
    c: float = 0.0
    values: Optional[list[float]] = None

    def as_seed_string(self) -> str:
        if self.kind == "const":
            return f"const:{self.c}"
        return self.kind


class SpectralPayload(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    N: int
    lambda_: list[float] = Field(alias="lambda")
    a: list[float]


class ForwardRequest(BaseModel):
    q: PotentialSpec = PotentialSpec()
    alpha: float
    beta: float
    n_eigen: int = 64
    m: int = 2001


class ForwardResponse(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    N: int
    lambda_: list[float] = Field(alias="lambda")
    a: list[float]
    b: list[float]
    omega: float
    alpha_identity_residual: float
    beta_identity_residual: float


class ValidateRequest(BaseModel):
    spectral: SpectralPayload
    alpha: float
    beta: float
    K: int = 2000


class ConditionPayload(BaseModel):
    model_config = ConfigDict(extra="allow")

    name: str
    status: Literal["pass", "fail", "diagnostic"]


class ValidateResponse(BaseModel):
    overall: Literal["pass", "fail"]
    omega: Optional[float]
    conditions: list[ConditionPayload]


class InverseRequest(BaseModel):
    spectral: SpectralPayload
    m: int = 401
    expect_alpha: Optional[float] = None
    expect_beta: Optional[float] = None


class InverseResponse(BaseModel):
    alpha: float
    beta: float
    residual: float
    beta_spread: float
    condition: float
    a0_series_settled: bool
    x: list[float]
    q: list[float]
    alpha_deviation: Optional[float] = None
    beta_deviation: Optional[float] = None


class RoundtripRequest(BaseModel):
    q: PotentialSpec = PotentialSpec()
    alpha: float
    beta: float
    n_eigen: int = 64
    m_forward: int = 2001
    m_inverse: int = 401
    interior_margin: float = 0.1


class RoundtripResponse(BaseModel):
    N: int
    m_forward: int
    m_inverse: int
    interior: list[float]
    q_max_error: float
    q_l1_error: float
    alpha_error: float
    beta_error: float
    gl_residual: float
    beta_spread: float


class BConvertRequest(BaseModel):
    spectral: SpectralPayload
    K: int = 2000


class BConvertResponse(BaseModel):
    N: int
    b: list[float]
    rel_err_bounds: list[float]
