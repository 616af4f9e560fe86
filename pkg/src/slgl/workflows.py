"""Orchestration shared by the CLI and the HTTP service.

Every workflow takes plain domain objects and returns a JSON-ready dict,
so the two front ends stay thin and produce identical payloads.
"""

from __future__ import annotations

import math

import numpy as np

from .core import GridFunction, SpectralData, uniform_grid
from .errors import InvalidArgumentError
from .fileio import load_grid_csv
from .forward import (
    DEFAULT_M,
    ForwardResult,
    alpha_identity_residual,
    beta_identity_residual,
    forward,
)
from .inverse import InverseResult, b_from_a, inverse_solve
from .series import estimate_omega
from .validate import ValidationReport, validate

__all__ = [
    "resolve_potential",
    "run_forward",
    "forward_payload",
    "run_inverse",
    "inverse_payload",
    "run_validate",
    "run_bconvert",
    "run_roundtrip",
]

DEFAULT_N = 64
DEFAULT_INVERSE_M = 401
DEFAULT_K = 2000
DEFAULT_INTERIOR_MARGIN = 0.1


def resolve_potential(spec: str, m: int = DEFAULT_M) -> GridFunction:
    """Build q from a seed name: zero | const:c | cos2x | file:path."""
    xs = uniform_grid(0.0, math.pi, m)
    if spec == "zero":
        return GridFunction(0.0, math.pi, np.zeros(m))
    if spec == "cos2x":
        return GridFunction(0.0, math.pi, np.cos(2.0 * xs))
    if spec.startswith("const:"):
        try:
            c = float(spec.split(":", 1)[1])
        except ValueError as exc:
            raise InvalidArgumentError(f"bad constant potential {spec!r}") from exc
        return GridFunction(0.0, math.pi, np.full(m, c))
    if spec.startswith("file:"):
        return load_grid_csv(spec.split(":", 1)[1])
    raise InvalidArgumentError(
        f"unknown potential {spec!r}: expected zero, const:c, cos2x or file:path"
    )


def run_forward(
    q: GridFunction, alpha: float, beta: float, count: int = DEFAULT_N, m: int = DEFAULT_M
) -> ForwardResult:
    return forward(q, alpha, beta, count, m)


def forward_payload(result: ForwardResult, alpha: float, beta: float) -> dict:
    spectral = result.spectral
    return {
        "N": spectral.N,
        "lambda": list(spectral.lam),
        "a": list(spectral.a),
        "b": list(result.b.b),
        "omega": estimate_omega(spectral),
        "alpha_identity_residual": alpha_identity_residual(spectral.a, alpha),
        "beta_identity_residual": beta_identity_residual(result.b.b, beta),
    }


def run_inverse(
    spectral: SpectralData,
    m: int = DEFAULT_INVERSE_M,
    expect_alpha: float | None = None,
    expect_beta: float | None = None,
) -> InverseResult:
    return inverse_solve(spectral, expect_alpha=expect_alpha, expect_beta=expect_beta, m=m)


def inverse_payload(result: InverseResult, q_csv: str | None = None) -> dict:
    out = {
        "alpha": result.alpha_tilde,
        "beta": result.beta_tilde,
        "q_csv": q_csv,
        "residual": result.residual_max,
        "beta_spread": result.beta_ratio_spread,
        "condition": result.condition_max,
        "a0_series_settled": result.a0_settled,
    }
    if result.alpha_deviation is not None:
        out["alpha_deviation"] = result.alpha_deviation
    if result.beta_deviation is not None:
        out["beta_deviation"] = result.beta_deviation
    return out


def run_validate(lam, a, alpha: float, beta: float, K: int = DEFAULT_K) -> ValidationReport:
    return validate(lam, a, alpha, beta, K=K)


def run_bconvert(spectral: SpectralData, K: int = DEFAULT_K) -> dict:
    b, rel = b_from_a(spectral, K=K)
    return {"N": spectral.N, "b": list(b.b), "rel_err_bounds": list(rel)}


def _interior_errors(
    recovered: GridFunction, q_true: GridFunction, margin: float
) -> tuple[float, float]:
    xs = recovered.x
    mask = (xs >= margin) & (xs <= math.pi - margin)
    diff = np.abs(recovered.values[mask] - q_true(xs[mask]))
    max_err = float(np.max(diff))
    l1 = float(np.trapezoid(diff, dx=recovered.h))
    return max_err, l1


def run_roundtrip(
    q: GridFunction,
    alpha: float,
    beta: float,
    count: int = DEFAULT_N,
    m_forward: int = DEFAULT_M,
    m_inverse: int = DEFAULT_INVERSE_M,
    interior_margin: float = DEFAULT_INTERIOR_MARGIN,
) -> tuple[dict, InverseResult]:
    """forward -> inverse -> error metrics (max and L1 over the interior window)."""
    fwd = forward(q, alpha, beta, count, m_forward)
    inv = inverse_solve(fwd.spectral, expect_alpha=alpha, expect_beta=beta, m=m_inverse)
    max_err, l1_err = _interior_errors(inv.q, q, interior_margin)
    metrics = {
        "N": count,
        "m_forward": m_forward,
        "m_inverse": m_inverse,
        "interior": [interior_margin, math.pi - interior_margin],
        "q_max_error": max_err,
        "q_l1_error": l1_err,
        "alpha_error": abs(inv.alpha_tilde - alpha),
        "beta_error": abs(inv.beta_tilde - beta),
        "gl_residual": inv.residual_max,
        "beta_spread": inv.beta_ratio_spread,
    }
    return metrics, inv
