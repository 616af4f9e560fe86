"""Domain types, uniform grids, quadrature and regularized eigenvalue products.

The sign convention for eigenvalues: ``SpectralData.lam[n]`` stores the
square root of the n-th eigenvalue, recorded as a *signed* value t with
mu = -t**2 when the eigenvalue is negative.  The accessor ``mu(n)``
therefore returns ``lam * |lam|``.  Downstream trigonometric evaluations
replace cos(lam*x) by cosh(|lam|*x) whenever mu < 0 (cos(iz) = cosh z),
which keeps every formula real.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import DegenerateSpectrumError, InvalidArgumentError

__all__ = [
    "GridFunction",
    "BoundaryAngles",
    "SpectralData",
    "NormingB",
    "uniform_grid",
    "integrate_trapezoid",
    "trapezoid_weights",
    "regularized_product",
    "ProductValue",
    "extended_mu",
    "norm_constant_reference",
    "cos_signed",
    "arccot",
]


def _readonly(a) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True)
    out.flags.writeable = False
    return out


def uniform_grid(a: float, b: float, m: int) -> np.ndarray:
    """Return m equispaced abscissae on [a, b] including both endpoints."""
    if m < 2:
        raise InvalidArgumentError(f"grid needs at least 2 points, got m={m}")
    if not b > a:
        raise InvalidArgumentError(f"grid interval is empty: [{a}, {b}]")
    return np.linspace(a, b, m)


@dataclass(frozen=True)
class GridFunction:
    """Samples of a real function on a uniform grid over [a, b]."""

    a: float
    b: float
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _readonly(self.values))
        if self.values.ndim != 1 or self.values.size < 2:
            raise InvalidArgumentError("GridFunction needs a 1-d array of at least 2 samples")
        if not self.b > self.a:
            raise InvalidArgumentError(f"GridFunction interval is empty: [{self.a}, {self.b}]")
        if not np.all(np.isfinite(self.values)):
            raise InvalidArgumentError("GridFunction samples must all be finite")

    @property
    def m(self) -> int:
        return self.values.size

    @property
    def h(self) -> float:
        return (self.b - self.a) / (self.m - 1)

    @property
    def x(self) -> np.ndarray:
        return uniform_grid(self.a, self.b, self.m)

    @classmethod
    def from_callable(cls, f, a: float, b: float, m: int) -> "GridFunction":
        xs = uniform_grid(a, b, m)
        return cls(a, b, np.asarray([f(t) for t in xs], dtype=float))

    def __call__(self, t):
        """Linear interpolation between samples (constant beyond the ends)."""
        return np.interp(t, self.x, self.values)


@dataclass(frozen=True)
class BoundaryAngles:
    """Boundary-condition angles, each strictly inside (0, pi), radians."""

    alpha: float
    beta: float

    def __post_init__(self):
        for name, v in (("alpha", self.alpha), ("beta", self.beta)):
            if not (0.0 < v < math.pi):
                raise InvalidArgumentError(f"{name}={v!r} must lie strictly inside (0, pi)")

    @property
    def cot_alpha(self) -> float:
        return math.cos(self.alpha) / math.sin(self.alpha)

    @property
    def cot_beta(self) -> float:
        return math.cos(self.beta) / math.sin(self.beta)


def arccot(y: float) -> float:
    """Inverse cotangent mapped into (0, pi); total on the reals."""
    return math.atan2(1.0, y)


@dataclass(frozen=True)
class SpectralData:
    """Paired sequences lam[n] (signed square roots of eigenvalues) and a[n] > 0."""

    lam: np.ndarray
    a: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lam", _readonly(self.lam))
        object.__setattr__(self, "a", _readonly(self.a))
        if self.lam.ndim != 1 or self.a.ndim != 1:
            raise InvalidArgumentError("lam and a must be 1-d arrays")
        if self.lam.size != self.a.size or self.lam.size < 1:
            raise InvalidArgumentError(
                f"lam and a must have equal nonzero length, got {self.lam.size} and {self.a.size}"
            )
        if not (np.all(np.isfinite(self.lam)) and np.all(np.isfinite(self.a))):
            raise InvalidArgumentError("spectral data must be finite")
        mus = self.mus
        if np.any(np.diff(mus) <= 0):
            bad = int(np.argmax(np.diff(mus) <= 0))
            raise InvalidArgumentError(
                f"eigenvalues must increase strictly: mu[{bad}]={mus[bad]!r} vs mu[{bad + 1}]={mus[bad + 1]!r}"
            )
        if np.any(self.a <= 0):
            bad = int(np.argmax(self.a <= 0))
            raise InvalidArgumentError(f"norming constants must be positive: a[{bad}]={self.a[bad]!r}")

    @property
    def N(self) -> int:
        return self.lam.size

    @property
    def mus(self) -> np.ndarray:
        return self.lam * np.abs(self.lam)

    def mu(self, n: int) -> float:
        lam = self.lam[n]
        return float(lam * abs(lam))


@dataclass(frozen=True)
class NormingB:
    """Right-endpoint norming constants b[n] > 0."""

    b: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "b", _readonly(self.b))
        if self.b.ndim != 1 or self.b.size < 1:
            raise InvalidArgumentError("b must be a nonempty 1-d array")
        if not np.all(np.isfinite(self.b)) or np.any(self.b <= 0):
            raise InvalidArgumentError("norming constants b must be finite and positive")

    @property
    def N(self) -> int:
        return self.b.size


def norm_constant_reference(n: int) -> float:
    """Unperturbed norming constant: pi for n = 0, pi/2 otherwise."""
    return math.pi if n == 0 else math.pi / 2.0


def integrate_trapezoid(f: GridFunction) -> float:
    """Composite trapezoid value of the integral of f over [a, b]."""
    return float(np.trapezoid(f.values, dx=f.h))


def trapezoid_weights(m: int, h: float) -> np.ndarray:
    """Composite trapezoid weights h*[1/2, 1, ..., 1, 1/2] on an m-point grid."""
    w = np.full(m, h)
    w[0] = 0.5 * h
    w[-1] = 0.5 * h
    return w


def cos_signed(lam: float, x) -> np.ndarray | float:
    """cos(lam*x), read through the signed-root convention.

    lam < 0 encodes mu = -lam**2 < 0, for which cos(sqrt(mu)*x) = cosh(|lam|*x).
    """
    if lam < 0.0:
        return np.cosh(lam * np.asarray(x) * -1.0) if np.ndim(x) else math.cosh(-lam * x)
    return np.cos(lam * np.asarray(x)) if np.ndim(x) else math.cos(lam * x)


def extended_mu(spectral: SpectralData, omega: float) -> Callable[[int], float]:
    """Eigenvalue accessor extending the data by the tail model mu_k = k**2 + 2*omega."""
    mus = spectral.mus
    n_data = spectral.N
    two_omega = 2.0 * float(omega)

    def mu(k: int) -> float:
        if k < n_data:
            return float(mus[k])
        return float(k) * float(k) + two_omega

    return mu


class ProductValue(NamedTuple):
    """Regularized-product value together with its truncation error bound."""

    value: float
    err_bound: float


def _sinc_pi_sqrt(mu: float) -> float:
    """sin(pi*sqrt(mu)) / (pi*sqrt(mu)) continued through mu <= 0 (sinh branch)."""
    if mu > 0.0:
        z = math.pi * math.sqrt(mu)
        return math.sin(z) / z
    if mu == 0.0:
        return 1.0
    z = math.pi * math.sqrt(-mu)
    return math.sinh(z) / z


def _log_tail_factor(mu_n: float, K: int) -> float:
    """log of prod_{k>K} (1 - mu_n/k**2), which is positive for K**2 > mu_n.

    Evaluated through the closed form sin(pi z)/(pi z) = prod (1 - z**2/k**2)
    with the nearest-integer factor extracted analytically so the ratio stays
    well conditioned when sqrt(mu_n) sits close to an integer <= K.
    """
    if mu_n <= 0.0:
        # all factors exceed 1; plain ratio, no zero crossings anywhere
        log_partial = float(np.sum(np.log1p(-mu_n / np.arange(1.0, K + 1.0) ** 2)))
        return math.log(_sinc_pi_sqrt(mu_n)) - log_partial
    z = math.sqrt(mu_n)
    m_star = int(round(z))
    ks = np.arange(1.0, K + 1.0)
    if 1 <= m_star <= K:
        d = z - m_star
        # sinc(z) / (1 - z**2/m**2) = (-1)**(m+1) * sinc(pi d) * m**2 / (z (m + z))
        sinc_d = math.sin(math.pi * d) / (math.pi * d) if d != 0.0 else 1.0
        head = sinc_d * m_star * m_star / (z * (m_star + z))
        if m_star % 2 == 0:
            head = -head
        factors = 1.0 - (z / ks) ** 2
        factors[m_star - 1] = 1.0
    else:
        head = _sinc_pi_sqrt(mu_n)
        factors = 1.0 - (z / ks) ** 2
    if np.any(factors == 0.0):
        raise DegenerateSpectrumError(f"tail factor degenerate at mu={mu_n!r}, K={K}")
    # sign bookkeeping: head carries (-1)**(m*+1) and the remaining factors
    # flip sign once per integer below z, so the tail itself is positive
    return math.log(abs(head)) - float(np.sum(np.log(np.abs(factors))))


def regularized_product(mu: Callable[[int], float], n: int, K: int) -> ProductValue:
    """prod_{k=1, k != n}^inf (mu_k - mu_n) / k**2, truncated at K with analytic tail.

    The accessor must extend the data by mu_k = k**2 + 2*omega beyond the
    known terms; the tail beyond K is taken as prod (1 - mu_n/k**2) in closed
    form, and the dropped O(omega/k**2) correction is covered by the reported
    error bound, which scales like 1/K.
    """
    if K <= max(n, 10):
        raise InvalidArgumentError(f"K={K} too small: need K > max(n, 10) = {max(n, 10)}")
    mu_n = float(mu(n))
    if mu_n >= K * K:
        raise InvalidArgumentError(f"K={K} too small for mu_n={mu_n!r}: need K**2 > mu_n")

    mus = np.fromiter((mu(k) for k in range(0, K + 1)), dtype=float, count=K + 1)
    if np.any(np.diff(mus) <= 0):
        bad = int(np.argmax(np.diff(mus) <= 0))
        if mus[bad] == mus[bad + 1]:
            raise DegenerateSpectrumError(f"repeated eigenvalue at indices {bad}, {bad + 1}")
        raise InvalidArgumentError(f"eigenvalue accessor not strictly increasing at index {bad}")

    ks = np.arange(1.0, K + 1.0)
    diffs = mus[1:] - mu_n
    if n >= 1:
        diffs = np.delete(diffs, n - 1)
        ks_used = np.delete(ks, n - 1)
    else:
        ks_used = ks
    if np.any(diffs == 0.0):
        raise DegenerateSpectrumError(f"eigenvalue repeated relative to mu[{n}]={mu_n!r}")

    sign = -1.0 if (np.sum(diffs < 0) % 2) else 1.0
    log_mag = float(np.sum(np.log(np.abs(diffs))) - 2.0 * np.sum(np.log(ks_used)))
    log_mag += _log_tail_factor(mu_n, K)
    value = sign * math.exp(log_mag)

    omega_est = 0.5 * (float(mu(K)) - float(K) * float(K))
    err_bound = abs(value) * (2.0 * abs(omega_est) + 1.0) / K
    return ProductValue(value, err_bound)
