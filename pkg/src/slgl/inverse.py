"""Gelfand-Levitan reconstruction of (q, alpha, beta) from spectral data.

The kernel G(x, .) solves, row by row on the triangle 0 <= t <= x,

    G(x, t) + F(x, t) + int_0^x G(x, s) F(s, t) ds = 0,

discretized by the Nystrom method with the same composite trapezoid rule
used everywhere else.  The potential is q = 2 d/dx G(x, x), the left angle
comes from G(0, 0) = -cot(alpha), and the right angle from the n-independent
ratio phi_n'(pi) / phi_n(pi) = -cot(beta) of the reconstructed eigenfunctions.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from scipy.sparse.linalg import LinearOperator, onenormest

from .core import (
    GridFunction,
    NormingB,
    SpectralData,
    arccot,
    cos_signed,
    extended_mu,
    regularized_product,
    trapezoid_weights,
    uniform_grid,
)
from .errors import IllPosedDataError, InvalidArgumentError, SpectralDataError
from .forward import SolutionTrace
from .series import (
    AsymptoticDecomposition,
    TriangularKernel,
    build_F,
    decompose,
    estimate_omega,
)

__all__ = [
    "InverseResult",
    "solve_gl_row",
    "solve_gl",
    "recover_potential",
    "recover_alpha",
    "build_phi",
    "recover_beta",
    "b_from_a",
    "inverse_solve",
]

CONDITION_LIMIT = 1e12
DEFAULT_BETA_WINDOW = 10


@dataclass(frozen=True)
class InverseResult:
    q: GridFunction
    alpha_tilde: float
    beta_tilde: float
    G: TriangularKernel
    residual_max: float
    condition_max: float
    beta_ratio_spread: float
    beta_ratios: np.ndarray
    a0_settled: bool
    alpha_deviation: float | None = None
    beta_deviation: float | None = None

    def __post_init__(self):
        if not (0.0 < self.alpha_tilde < math.pi and 0.0 < self.beta_tilde < math.pi):
            raise InvalidArgumentError("recovered angles must lie in (0, pi)")
        if not math.isfinite(self.beta_ratio_spread):
            raise InvalidArgumentError("beta ratio spread must be finite")


def _worker_count() -> int:
    cap = os.environ.get("SLGL_THREADS")
    workers = min(4, os.cpu_count() or 1)
    if cap is not None:
        try:
            workers = max(1, min(workers, int(cap)))
        except ValueError:
            pass
    return workers


def _row_system(F: TriangularKernel, i: int) -> tuple[np.ndarray, np.ndarray]:
    w = trapezoid_weights(i + 1, F.h)
    A = np.eye(i + 1) + F.values[: i + 1, : i + 1] * w[None, :]
    rhs = -F.values[i, : i + 1]
    return A, rhs


def _solve_row(F: TriangularKernel, i: int) -> tuple[np.ndarray, float, float]:
    A, rhs = _row_system(F, i)
    if i == 0:
        return rhs.copy(), 0.0, 1.0
    lu, piv = sla.lu_factor(A, check_finite=False)
    diag = np.abs(np.diag(lu))
    if not np.all(diag > 0.0):
        raise IllPosedDataError(f"row {i}: singular Gelfand-Levitan system")
    g = sla.lu_solve((lu, piv), rhs, check_finite=False)
    residual = float(np.max(np.abs(A @ g - rhs)))
    anorm = float(np.max(np.sum(np.abs(A), axis=0)))
    inv_op = LinearOperator(
        A.shape,
        matvec=lambda v: sla.lu_solve((lu, piv), v, check_finite=False),
        rmatvec=lambda v: sla.lu_solve((lu, piv), v, trans=1, check_finite=False),
    )
    cond = anorm * float(onenormest(inv_op))
    if cond > CONDITION_LIMIT:
        raise IllPosedDataError(
            f"row {i}: condition estimate {cond:.3e} exceeds {CONDITION_LIMIT:.0e}; "
            "spectral data is inconsistent or the truncation too coarse"
        )
    return g, residual, cond


def solve_gl_row(F: TriangularKernel, i: int) -> tuple[np.ndarray, float]:
    """G(x_i, t_j) for j <= i, plus the row's discrete-equation residual."""
    if not 0 <= i < F.m:
        raise InvalidArgumentError(f"row index {i} outside 0..{F.m - 1}")
    g, residual, _ = _solve_row(F, i)
    return g, residual


def solve_gl(F: TriangularKernel) -> tuple[TriangularKernel, float, float]:
    """All rows of the Gelfand-Levitan kernel; rows are independent and solved
    in parallel (capped by the SLGL_THREADS environment variable)."""
    m = F.m
    values = np.zeros((m, m))
    workers = _worker_count()

    def run(i: int) -> tuple[int, np.ndarray, float, float]:
        g, residual, cond = _solve_row(F, i)
        return i, g, residual, cond

    residual_max = 0.0
    cond_max = 1.0
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = pool.map(run, range(m))
            for i, g, residual, cond in results:
                values[i, : i + 1] = g
                residual_max = max(residual_max, residual)
                cond_max = max(cond_max, cond)
    else:
        for i in range(m):
            _, g, residual, cond = run(i)
            values[i, : i + 1] = g
            residual_max = max(residual_max, residual)
            cond_max = max(cond_max, cond)
    lower = np.tril(values)
    full = lower + lower.T - np.diag(np.diag(lower))
    return TriangularKernel(full, F.h, F.a0_settled), residual_max, cond_max


def recover_potential(G: TriangularKernel) -> GridFunction:
    """q(x) = 2 d/dx G(x, x) by differences of the kernel diagonal.

    Central differences inside, second-order one-sided at the endpoints;
    endpoint values are low-confidence by construction.
    """
    from .series import _differentiate

    return GridFunction(0.0, math.pi, 2.0 * _differentiate(G.diagonal, G.h))


def recover_alpha(g00: float) -> float:
    """alpha with G(0,0) = -cot(alpha), mapped into (0, pi)."""
    if not math.isfinite(g00):
        raise InvalidArgumentError(f"G(0,0) must be finite, got {g00!r}")
    return arccot(-g00)


def _differentiate_trace(vals: np.ndarray, h: float) -> np.ndarray:
    """Central differences inside; fourth-order one-sided at the endpoints.

    The endpoint accuracy matters because the beta recovery reads the
    derivative exactly at x = pi.
    """
    d = np.empty_like(vals)
    d[1:-1] = (vals[2:] - vals[:-2]) / (2.0 * h)
    if vals.size >= 5:
        d[0] = (-25.0 * vals[0] + 48.0 * vals[1] - 36.0 * vals[2] + 16.0 * vals[3] - 3.0 * vals[4]) / (12.0 * h)
        d[-1] = (25.0 * vals[-1] - 48.0 * vals[-2] + 36.0 * vals[-3] - 16.0 * vals[-4] + 3.0 * vals[-5]) / (12.0 * h)
    else:
        d[0] = (vals[1] - vals[0]) / h
        d[-1] = (vals[-1] - vals[-2]) / h
    return d


def build_phi(G: TriangularKernel, lam: float) -> SolutionTrace:
    """phi(x, lam^2) = cos(lam x) + int_0^x G(x, t) cos(lam t) dt on the kernel grid.

    The derivative trace comes from differentiating the tabulated phi."""
    m = G.m
    x = uniform_grid(0.0, math.pi, m)
    ct = np.asarray(cos_signed(lam, x))
    phi = ct.copy()
    for i in range(1, m):
        w = trapezoid_weights(i + 1, G.h)
        phi[i] += float(np.dot(w, G.values[i, : i + 1] * ct[: i + 1]))
    mu = lam * abs(lam)
    return SolutionTrace(x, phi, _differentiate_trace(phi, G.h), mu)


def recover_beta(
    G: TriangularKernel, spectral: SpectralData, window: int = DEFAULT_BETA_WINDOW
) -> tuple[float, float, np.ndarray]:
    """beta from the constant ratio phi_n'(pi)/phi_n(pi) over an index window.

    Returns (beta, spread, ratios); the spread (max - min of the ratios) is
    the constancy diagnostic.  Indices with |phi_n(pi)| < 1e-8 are excluded.
    """
    n_hi = min(window, spectral.N - 1)
    if n_hi < 1:
        raise InvalidArgumentError("need at least two spectral entries to recover beta")
    ratios = []
    for n in range(1, n_hi + 1):
        trace = build_phi(G, float(spectral.lam[n]))
        if abs(trace.y[-1]) < 1e-8:
            continue
        ratios.append(trace.yprime[-1] / trace.y[-1])
    if not ratios:
        raise SpectralDataError(
            "every eigenfunction vanished at pi; data inconsistent with beta in (0, pi)"
        )
    ratios = np.asarray(ratios)
    beta = arccot(-float(np.median(ratios)))
    spread = float(np.max(ratios) - np.min(ratios))
    return beta, spread, ratios


def b_from_a(
    spectral: SpectralData, K: int = 2000, omega: float | None = None
) -> tuple[NormingB, np.ndarray]:
    """Convert a_n to b_n through the regularized eigenvalue products.

    1/b_0 = a_0 / (pi^2 P_0^2) and
    1/b_n = a_n n^4 / (pi^2 (mu_0 - mu_n)^2 P_n^2),

    with P_n the regularized product over k != n.  Returns (b, relative
    truncation-error bounds propagated from the products).
    """
    if omega is None:
        omega = estimate_omega(spectral)
    acc = extended_mu(spectral, omega)
    mus = spectral.mus
    b = np.empty(spectral.N)
    rel = np.empty(spectral.N)
    for n in range(spectral.N):
        prod = regularized_product(acc, n, K)
        if n == 0:
            b[0] = math.pi**2 * prod.value**2 / spectral.a[0]
        else:
            b[n] = (
                math.pi**2
                * (mus[0] - mus[n]) ** 2
                * prod.value**2
                / (spectral.a[n] * float(n) ** 4)
            )
        rel[n] = 2.0 * prod.err_bound / abs(prod.value)
    return NormingB(b), rel


def inverse_solve(
    spectral: SpectralData,
    expect_alpha: float | None = None,
    expect_beta: float | None = None,
    m: int = 401,
    beta_window: int = DEFAULT_BETA_WINDOW,
    decay_threshold: float | None = None,
    dec: AsymptoticDecomposition | None = None,
) -> InverseResult:
    """Full reconstruction pipeline: F -> G -> (q, alpha, beta) plus diagnostics."""
    if dec is None:
        kwargs = {} if decay_threshold is None else {"decay_threshold": decay_threshold}
        dec = decompose(spectral, **kwargs)
    if not dec.decay_ok:
        raise SpectralDataError(
            f"spectral data fails the tail-decay check: max|n l_n|={dec.decay_l:.3g}, "
            f"max|n s_n|={dec.decay_s:.3g}, threshold={dec.decay_threshold:.3g}"
        )
    F = build_F(spectral, dec, m)
    G, residual_max, cond_max = solve_gl(F)
    q = recover_potential(G)
    alpha_tilde = recover_alpha(float(G.values[0, 0]))
    beta_tilde, spread, ratios = recover_beta(G, spectral, beta_window)
    return InverseResult(
        q=q,
        alpha_tilde=alpha_tilde,
        beta_tilde=beta_tilde,
        G=G,
        residual_max=residual_max,
        condition_max=cond_max,
        beta_ratio_spread=spread,
        beta_ratios=ratios,
        a0_settled=G.a0_settled,
        alpha_deviation=None if expect_alpha is None else abs(alpha_tilde - expect_alpha),
        beta_deviation=None if expect_beta is None else abs(beta_tilde - expect_beta),
    )
