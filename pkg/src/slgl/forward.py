"""Forward spectral computation: eigenvalues, eigenfunction traces, norming constants.

phi(x, mu) integrates left to right from phi(0) = 1, phi'(0) = -cot(alpha);
psi(x, mu) right to left from psi(pi) = 1, psi'(pi) = -cot(beta).  Eigenvalues
are the zeros of the characteristic function

    Delta(mu) = phi(pi, mu) cot(beta) + phi'(pi, mu)
              = -(psi(0, mu) cot(alpha) + psi'(0, mu)).

Bracketing uses the oscillation count of phi (sign changes on (0, pi)), which
together with the endpoint direction gives a rotation number that increases
monotonically in mu; each eigenvalue is then refined by bisection/secant
(Brent) on Delta inside its bracket.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import _kernels
from .core import GridFunction, NormingB, SpectralData, integrate_trapezoid, uniform_grid
from .errors import BracketingError, InvalidArgumentError, SolverOverflowError

__all__ = [
    "SolutionTrace",
    "ForwardResult",
    "solve_phi",
    "solve_psi",
    "characteristic_delta",
    "characteristic_delta_forms",
    "compute_eigenvalues",
    "norming_constants",
    "forward",
    "alpha_identity_residual",
    "beta_identity_residual",
]

_GAUSS_C1 = 0.5 - math.sqrt(3.0) / 6.0
_GAUSS_C2 = 0.5 + math.sqrt(3.0) / 6.0

DEFAULT_M = 2001


@dataclass(frozen=True)
class SolutionTrace:
    """Solution values y and y' on a uniform grid over [0, pi]."""

    x: np.ndarray
    y: np.ndarray
    yprime: np.ndarray
    mu: float

    @property
    def m(self) -> int:
        return self.x.size


@dataclass(frozen=True)
class ForwardResult:
    spectral: SpectralData
    b: NormingB
    phi_traces: tuple | None = None
    psi_traces: tuple | None = None


def _cot(angle: float, name: str) -> float:
    if not (0.0 < angle < math.pi):
        raise InvalidArgumentError(f"{name}={angle!r} must lie strictly inside (0, pi)")
    return math.cos(angle) / math.sin(angle)


def _check_q(q: GridFunction) -> None:
    if abs(q.a) > 1e-12 or abs(q.b - math.pi) > 1e-9:
        raise InvalidArgumentError(f"q must be sampled on [0, pi], got [{q.a}, {q.b}]")


def _gauss_nodes(q: GridFunction, m: int) -> tuple[np.ndarray, np.ndarray, float]:
    """q at the two Gauss points of every cell of the m-point solver grid."""
    if m < 3:
        raise InvalidArgumentError(f"solver grid needs m >= 3, got {m}")
    h = math.pi / (m - 1)
    left = np.arange(m - 1) * h
    qx = q.x
    qg1 = np.interp(left + _GAUSS_C1 * h, qx, q.values)
    qg2 = np.interp(left + _GAUSS_C2 * h, qx, q.values)
    return qg1, qg2, h


def _reflected(q: GridFunction) -> GridFunction:
    return GridFunction(q.a, q.b, q.values[::-1])


def solve_phi(q: GridFunction, alpha: float, mu: float, m: int = DEFAULT_M) -> SolutionTrace:
    """Trace of the solution with phi(0) = 1, phi'(0) = -cot(alpha)."""
    _check_q(q)
    qg1, qg2, h = _gauss_nodes(q, m)
    y, v = _kernels.propagate_trace(float(mu), qg1, qg2, h, 1.0, -_cot(alpha, "alpha"))
    if not (np.isfinite(y[-1]) and np.isfinite(v[-1])):
        raise SolverOverflowError(mu)
    return SolutionTrace(uniform_grid(0.0, math.pi, m), y, v, float(mu))


def solve_psi(q: GridFunction, beta: float, mu: float, m: int = DEFAULT_M) -> SolutionTrace:
    """Trace of the solution with psi(pi) = 1, psi'(pi) = -cot(beta).

    Integrated right to left via the reflection u = pi - x, which maps the
    problem onto a left-to-right run with initial slope +cot(beta).
    """
    _check_q(q)
    qg1, qg2, h = _gauss_nodes(_reflected(q), m)
    y, v = _kernels.propagate_trace(float(mu), qg1, qg2, h, 1.0, _cot(beta, "beta"))
    if not (np.isfinite(y[-1]) and np.isfinite(v[-1])):
        raise SolverOverflowError(mu)
    return SolutionTrace(uniform_grid(0.0, math.pi, m), y[::-1], -v[::-1], float(mu))


def characteristic_delta_forms(
    q: GridFunction, alpha: float, beta: float, mu: float, m: int = DEFAULT_M
) -> tuple[float, float]:
    """Both expressions for Delta(mu): via phi at pi and via psi at 0."""
    _check_q(q)
    cot_a = _cot(alpha, "alpha")
    cot_b = _cot(beta, "beta")
    qg1, qg2, h = _gauss_nodes(q, m)
    y_end, v_end, _ = _kernels.propagate_endpoint(float(mu), qg1, qg2, h, 1.0, -cot_a)
    rg1, rg2, _ = _gauss_nodes(_reflected(q), m)
    ry_end, rv_end, _ = _kernels.propagate_endpoint(float(mu), rg1, rg2, h, 1.0, cot_b)
    if not all(map(math.isfinite, (y_end, v_end, ry_end, rv_end))):
        raise SolverOverflowError(mu)
    # psi(0) = reflected y(pi), psi'(0) = -reflected y'(pi)
    return y_end * cot_b + v_end, -(ry_end * cot_a - rv_end)


def characteristic_delta(
    q: GridFunction, alpha: float, beta: float, mu: float, m: int = DEFAULT_M
) -> float:
    return characteristic_delta_forms(q, alpha, beta, mu, m)[0]


class _Shooter:
    """Cached phi-endpoint evaluations for one (q, alpha, beta, m)."""

    def __init__(self, q: GridFunction, alpha: float, beta: float, m: int):
        _check_q(q)
        self.cot_a = _cot(alpha, "alpha")
        self.cot_b = _cot(beta, "beta")
        self.qg1, self.qg2, self.h = _gauss_nodes(q, m)
        self.q_l1 = integrate_trapezoid(GridFunction(q.a, q.b, np.abs(q.values)))

    def endpoint(self, mu: float) -> tuple[float, float, int]:
        return _kernels.propagate_endpoint(float(mu), self.qg1, self.qg2, self.h, 1.0, -self.cot_a)

    def rotation(self, mu: float) -> float:
        """pi * (oscillation count) + residual angle of (y, y') at x = pi.

        Increases monotonically in mu; the n-th eigenvalue solves
        rotation(mu) = (n + 1) pi - beta.
        """
        y, v, crossings = self.endpoint(mu)
        if not (math.isfinite(y) and math.isfinite(v)):
            if mu < 0.0:
                return 0.0  # deep cosh growth: the angle is flat near zero
            raise SolverOverflowError(mu)
        rem = math.atan2(y, v)
        if rem <= 0.0:
            rem += math.pi
        return math.pi * crossings + rem

    def delta(self, mu: float) -> float:
        y, v, _ = self.endpoint(mu)
        if not (math.isfinite(y) and math.isfinite(v)):
            raise SolverOverflowError(mu)
        return y * self.cot_b + v


def compute_eigenvalues(
    q: GridFunction, alpha: float, beta: float, count: int, m: int = DEFAULT_M
) -> np.ndarray:
    """The `count` smallest eigenvalues, strictly increasing."""
    if count < 1:
        raise InvalidArgumentError(f"need count >= 1, got {count}")
    shooter = _Shooter(q, alpha, beta, m)
    beta_angle = math.atan2(1.0, shooter.cot_b)

    lo = -((shooter.q_l1 + abs(shooter.cot_a) + abs(shooter.cot_b) + 1.0) ** 2)
    target0 = math.pi - beta_angle
    for _ in range(80):
        if shooter.rotation(lo) < target0:
            break
        lo = 4.0 * lo - 1.0
    else:
        raise BracketingError(f"no lower bound below mu={lo!r} for the first eigenvalue")

    mus = np.empty(count)
    for n in range(count):
        target = (n + 1) * math.pi - beta_angle
        mus[n] = _locate(shooter, lo, target, n)
        lo = mus[n] + 1e-9 * max(1.0, abs(mus[n]))
    return mus


def _locate(shooter: _Shooter, lo: float, target: float, n: int) -> float:
    """Isolate the rotation-number crossing above `lo`, then refine on Delta."""
    r_lo = shooter.rotation(lo)
    if r_lo >= target:
        raise BracketingError(f"eigenvalue {n}: search floor mu={lo!r} already past the target")
    step = max(3.0, 2.0 * n + 1.0)
    hi = lo + step
    for _ in range(200):
        r_hi = shooter.rotation(hi)
        if r_hi > target:
            break
        hi += step
        step *= 1.6
    else:
        raise BracketingError(f"eigenvalue {n}: rotation target {target!r} not reached by mu={hi!r}")

    for _ in range(200):
        if hi - lo < 1e-11 * max(1.0, abs(hi), abs(lo)):
            break
        # refine on Delta once the bracket holds exactly one of its zeros
        if r_hi - target < 0.999 * math.pi and target - r_lo < 0.999 * math.pi:
            if shooter.delta(lo) * shooter.delta(hi) < 0.0:
                # absolute floor far below the bracket-width requirement: the
                # lowest eigenvalue may sit at mu ~ 0 where lam = sqrt(mu)
                # amplifies any slack in mu
                return brentq(shooter.delta, lo, hi, xtol=1e-17 + 1e-14 * abs(hi), rtol=9e-16)
        mid = 0.5 * (lo + hi)
        r_mid = shooter.rotation(mid)
        if r_mid > target:
            hi, r_hi = mid, r_mid
        else:
            lo, r_lo = mid, r_mid
    return 0.5 * (lo + hi)


def norming_constants(
    q: GridFunction, alpha: float, beta: float, mus, m: int = DEFAULT_M, check: bool = True
) -> tuple[np.ndarray, np.ndarray]:
    """a_n and b_n: trapezoid quadrature of the squared phi and psi traces."""
    mus = np.asarray(mus, dtype=float)
    shooter = _Shooter(q, alpha, beta, m)
    if check:
        for n, mu in enumerate(mus):
            tol = 1e-3 * max(1.0, math.sqrt(abs(mu))) * (1.0 + abs(shooter.cot_a) + abs(shooter.cot_b))
            d = shooter.delta(mu)
            if abs(d) > tol:
                raise InvalidArgumentError(
                    f"mu[{n}]={mu!r} is not an eigenvalue to solver tolerance: |Delta|={abs(d)!r}"
                )
    a = np.empty(mus.size)
    b = np.empty(mus.size)
    for n, mu in enumerate(mus):
        phi = solve_phi(q, alpha, mu, m)
        psi = solve_psi(q, beta, mu, m)
        a[n] = integrate_trapezoid(GridFunction(0.0, math.pi, phi.y**2))
        b[n] = integrate_trapezoid(GridFunction(0.0, math.pi, psi.y**2))
    return a, b


def _signed_sqrt(mu: np.ndarray) -> np.ndarray:
    return np.sign(mu) * np.sqrt(np.abs(mu))


def forward(
    q: GridFunction,
    alpha: float,
    beta: float,
    count: int,
    m: int = DEFAULT_M,
    keep_traces: bool = False,
) -> ForwardResult:
    """Full forward run: eigenvalues plus both families of norming constants."""
    mus = compute_eigenvalues(q, alpha, beta, count, m)
    a, b = norming_constants(q, alpha, beta, mus, m, check=False)
    spectral = SpectralData(_signed_sqrt(mus), a)
    phi_traces = psi_traces = None
    if keep_traces:
        phi_traces = tuple(solve_phi(q, alpha, mu, m) for mu in mus)
        psi_traces = tuple(solve_psi(q, beta, mu, m) for mu in mus)
    return ForwardResult(spectral, NormingB(b), phi_traces, psi_traces)


def alpha_identity_residual(a, alpha: float) -> float:
    """|1/a_0 - 1/pi + sum_{n>=1} (1/a_n - 2/pi) - cot(alpha)| for the given truncation."""
    a = np.asarray(a, dtype=float)
    total = 1.0 / a[0] - 1.0 / math.pi + np.sum(1.0 / a[1:] - 2.0 / math.pi)
    return float(abs(total - _cot(alpha, "alpha")))


def beta_identity_residual(b, beta: float) -> float:
    """|1/b_0 - 1/pi + sum_{n>=1} (1/b_n - 2/pi) + cot(beta)| for the given truncation."""
    b = np.asarray(b, dtype=float)
    total = 1.0 / b[0] - 1.0 / math.pi + np.sum(1.0 / b[1:] - 2.0 / math.pi)
    return float(abs(total + _cot(beta, "beta")))
