"""Asymptotic decomposition of spectral data and the kernel series built from it.

The central object is the spectral shift function

    a(x) = sum_n ( cos(lam_n x)/a_n - cos(n x)/a0_n ),    a0_0 = pi, a0_n = pi/2,

whose direct partial sums converge only conditionally.  The accelerated
evaluation splits every term exactly into

  * a slowly convergent part resummed in closed form: the rotation-rate sum
    sum sin(nx)/n = (pi - x)/2 on (0, 2pi), plus the l- and s-coefficient
    series evaluated with a smooth taper to suppress truncation ringing, and
  * absolutely convergent corrections (the sin(rho x) - rho x and
    sin^2(rho x / 2) terms, plus the exact quadratic remainder of the
    1/a_n linearization), summable term by term and extendable past the data
    range with the tail model lam_n = n + omega/n.

No O(1/n^2) remainder is dropped: with tapering disabled and no tail
extension the split reproduces the direct partial sum to machine precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import SpectralData, GridFunction, cos_signed, norm_constant_reference
from .errors import InvalidArgumentError

__all__ = [
    "AsymptoticDecomposition",
    "SeriesValue",
    "TriangularKernel",
    "estimate_omega",
    "decompose",
    "taper_weights",
    "eval_l",
    "eval_s",
    "eval_a_direct",
    "eval_a_accelerated",
    "tabulate_a",
    "eval_F_direct",
    "build_F",
    "f_diagonal",
    "a_zero_partial_sum",
    "DEFAULT_DECAY_THRESHOLD",
]

TWO_PI = 2.0 * math.pi
DEFAULT_DECAY_THRESHOLD = 0.05
DEFAULT_TAPER_FRACTION = 0.1


@dataclass(frozen=True)
class AsymptoticDecomposition:
    """Sequences extracted from spectral data: lam_n = n + omega/n + l_n, a_n = pi/2 + s_n."""

    omega: float
    rho: np.ndarray  # lam_n - n, all n
    l: np.ndarray  # rho_n - omega/n for n >= 1; entry 0 unused (zero)
    s: np.ndarray  # a_n - pi/2 for n >= 1; entry 0 unused (zero)
    s0: float  # a_0 - pi
    decay_l: float  # max |n l_n| over the top quartile of indices
    decay_s: float  # max |n s_n| over the top quartile of indices
    decay_ok: bool
    decay_threshold: float

    @property
    def N(self) -> int:
        return self.rho.size

    @staticmethod
    def a0norm(n: int) -> float:
        """Reference norming constants the s_n are measured against."""
        return norm_constant_reference(n)


@dataclass(frozen=True)
class SeriesValue:
    """Partial-sum value plus the taper policy that produced it."""

    value: float
    n_terms: int
    taper_start: int  # first tapered index; n_terms + 1 means no term was tapered

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class TriangularKernel:
    """Kernel values on the triangle 0 <= t <= x <= pi of a uniform m-grid.

    Stored as the full symmetric square (the extension K(t, x) = K(x, t)),
    which is what the Gelfand-Levitan rows consume.
    """

    values: np.ndarray
    h: float
    a0_settled: bool = True

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", v)
        if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[0] < 2:
            raise InvalidArgumentError("kernel needs a square matrix of size >= 2")
        if not np.all(np.isfinite(v)):
            raise InvalidArgumentError("kernel entries must all be finite")

    @property
    def m(self) -> int:
        return self.values.shape[0]

    @property
    def diagonal(self) -> np.ndarray:
        return np.diag(self.values)


def estimate_omega(spectral: SpectralData) -> float:
    """Median of n*(lam_n - n) over the top half of indices (robust to o(1/n) noise)."""
    n_total = spectral.N
    if n_total < 2:
        return 0.0
    lo = max(1, n_total // 2)
    n = np.arange(lo, n_total, dtype=float)
    return float(np.median(n * (spectral.lam[lo:] - n)))


def decompose(
    spectral: SpectralData, decay_threshold: float = DEFAULT_DECAY_THRESHOLD
) -> AsymptoticDecomposition:
    """Extract omega, l_n, s_n and the tail-decay verdict from spectral data."""
    n_total = spectral.N
    if n_total < 16:
        raise InvalidArgumentError(f"decompose needs N >= 16 terms, got {n_total}")
    omega = estimate_omega(spectral)
    n = np.arange(n_total, dtype=float)
    rho = spectral.lam - n
    l = np.zeros(n_total)
    l[1:] = rho[1:] - omega / n[1:]
    s = np.zeros(n_total)
    s[1:] = spectral.a[1:] - math.pi / 2.0
    s0 = float(spectral.a[0] - math.pi)
    qlo = max(1, (3 * n_total) // 4)
    decay_l = float(np.max(np.abs(n[qlo:] * l[qlo:])))
    decay_s = float(np.max(np.abs(n[qlo:] * s[qlo:])))
    decay_ok = decay_l < decay_threshold and decay_s < decay_threshold
    return AsymptoticDecomposition(
        omega, rho, l, s, s0, decay_l, decay_s, decay_ok, decay_threshold
    )


def taper_weights(n_terms: int, fraction: float = DEFAULT_TAPER_FRACTION) -> tuple[np.ndarray, int]:
    """Cosine rolloff over the last `fraction` of the indices 1..n_terms.

    Returns (weights indexed by n-1, first tapered index).  Fewer than 10
    terms, or fraction 0, leave everything untapered.
    """
    w = np.ones(n_terms)
    n_tapered = int(math.floor(n_terms * fraction))
    if n_tapered <= 0:
        return w, n_terms + 1
    start = n_terms - n_tapered + 1
    t = np.arange(1, n_tapered + 1) / (n_tapered + 1.0)
    w[start - 1 :] = 0.5 * (1.0 + np.cos(math.pi * t))
    return w, start


def _tapered_sum(coeffs: np.ndarray, kernel_vals: np.ndarray, fraction: float) -> SeriesValue:
    n_terms = coeffs.size
    w, start = taper_weights(n_terms, fraction)
    return SeriesValue(float(np.sum(w * coeffs * kernel_vals)), n_terms, start)


def eval_l(
    x: float,
    dec: AsymptoticDecomposition,
    taper_fraction: float = DEFAULT_TAPER_FRACTION,
    detail: bool = False,
):
    """l(x) = sum l_n sin(nx), tapered partial sum over the available terms."""
    n = np.arange(1, dec.N, dtype=float)
    out = _tapered_sum(dec.l[1:], np.sin(n * x), taper_fraction)
    return out if detail else out.value


def eval_s(
    x: float,
    dec: AsymptoticDecomposition,
    taper_fraction: float = DEFAULT_TAPER_FRACTION,
    detail: bool = False,
):
    """s(x) = sum s_n cos(nx), tapered partial sum over the available terms."""
    n = np.arange(1, dec.N, dtype=float)
    out = _tapered_sum(dec.s[1:], np.cos(n * x), taper_fraction)
    return out if detail else out.value


def eval_a_direct(spectral: SpectralData, x: float, n_terms: int | None = None) -> float:
    """Plain partial sum of the a(x) series over the first n_terms entries."""
    if n_terms is None:
        n_terms = spectral.N
    if not 1 <= n_terms <= spectral.N:
        raise InvalidArgumentError(f"n_terms={n_terms} outside 1..{spectral.N}")
    total = cos_signed(float(spectral.lam[0]), x) / spectral.a[0] - 1.0 / math.pi
    if n_terms > 1:
        n = np.arange(1, n_terms, dtype=float)
        lam = spectral.lam[1:n_terms]
        total += float(
            np.sum(np.cos(lam * x) / spectral.a[1:n_terms] - np.cos(n * x) * (2.0 / math.pi))
        )
    return float(total)


def a_zero_partial_sum(spectral: SpectralData, settle_tol: float = 1e-2) -> tuple[float, bool]:
    """a(0) = sum (1/a_n - 1/a0_n) as a plain partial sum, with a settling flag.

    The flag reports whether the last quarter of partial sums moved by less
    than `settle_tol`; when it did not, the value is still the last partial
    sum, flagged non-convergent.
    """
    terms = 1.0 / spectral.a - 2.0 / math.pi
    terms[0] = 1.0 / spectral.a[0] - 1.0 / math.pi
    partial = np.cumsum(terms)
    checkpoint = max(0, (3 * spectral.N) // 4 - 1)
    settled = bool(abs(partial[-1] - partial[checkpoint]) <= settle_tol)
    return float(partial[-1]), settled


def _model_rho(omega: float, n: np.ndarray) -> np.ndarray:
    return omega / n


_X_CHUNK = 256


def _a_accelerated_chunk(
    spectral: SpectralData,
    dec: AsymptoticDecomposition,
    xs: np.ndarray,
    taper_fraction: float,
    n_extend: int,
) -> np.ndarray:
    inner = (xs > 0.0) & (xs < TWO_PI)
    closed = np.where(inner, 0.5 * (math.pi - xs), 0.0)

    out = np.zeros_like(xs)
    # closed-form rotation-rate part
    out -= (2.0 * dec.omega / math.pi) * xs * closed

    n_data = spectral.N
    if n_data > 1:
        n = np.arange(1, n_data, dtype=float)
        w, _ = taper_weights(n_data - 1, taper_fraction)
        sin_nx = np.sin(np.outer(xs, n))
        cos_nx = np.cos(np.outer(xs, n))
        # tapered conditionally-convergent series
        out -= (2.0 / math.pi) * xs * (sin_nx @ (w * dec.l[1:]))
        out -= (4.0 / math.pi**2) * (cos_nx @ (w * dec.s[1:]))
        # absolutely convergent corrections, exact coefficients
        inv_a = 1.0 / spectral.a[1:]
        rx = np.outer(xs, dec.rho[1:])
        q_rem = inv_a - 2.0 / math.pi + (4.0 / math.pi**2) * dec.s[1:]
        out -= (2.0 * np.sin(0.5 * rx) ** 2 * cos_nx) @ inv_a
        out -= ((np.sin(rx) - rx) * sin_nx) @ inv_a
        out -= (rx * sin_nx) @ (inv_a - 2.0 / math.pi)
        out += cos_nx @ q_rem

    # tail model beyond the data: lam_n = n + omega/n, a_n = pi/2
    if n_extend >= n_data and abs(dec.omega) > 1e-8:
        n = np.arange(n_data, n_extend + 1, dtype=float)
        rx = np.outer(xs, _model_rho(dec.omega, n))
        sin_nx = np.sin(np.outer(xs, n))
        cos_nx = np.cos(np.outer(xs, n))
        out -= (2.0 / math.pi) * np.sum(2.0 * np.sin(0.5 * rx) ** 2 * cos_nx, axis=1)
        out -= (2.0 / math.pi) * np.sum((np.sin(rx) - rx) * sin_nx, axis=1)

    # exact n = 0 term
    lam0 = float(spectral.lam[0])
    out += np.asarray(cos_signed(lam0, xs)) / spectral.a[0] - 1.0 / math.pi
    return out


def _a_accelerated_batch(
    spectral: SpectralData,
    dec: AsymptoticDecomposition,
    xs: np.ndarray,
    taper_fraction: float = DEFAULT_TAPER_FRACTION,
    n_extend: int | None = None,
) -> np.ndarray:
    """Accelerated a(x) on an array of abscissae in [0, 2pi].

    At x = 0 and x = 2pi the closed form (pi - x)/2 is replaced by the true
    series value 0 (the resummed sine series jumps there).  Work proceeds in
    chunks of abscissae to bound the outer-product memory.
    """
    xs = np.asarray(xs, dtype=float)
    if n_extend is None:
        n_extend = max(4096, 4 * spectral.N)
    out = np.empty_like(xs)
    for lo in range(0, xs.size, _X_CHUNK):
        hi = min(lo + _X_CHUNK, xs.size)
        out[lo:hi] = _a_accelerated_chunk(spectral, dec, xs[lo:hi], taper_fraction, n_extend)
    return out


def eval_a_accelerated(
    spectral: SpectralData,
    dec: AsymptoticDecomposition,
    x: float,
    taper_fraction: float = DEFAULT_TAPER_FRACTION,
    n_extend: int | None = None,
) -> float:
    """Accelerated evaluation of a(x) for x in (0, 2pi); equals the series limit."""
    return float(
        _a_accelerated_batch(spectral, dec, np.asarray([x]), taper_fraction, n_extend)[0]
    )


@dataclass(frozen=True)
class ATabulation:
    """a(.) sampled on a uniform grid over [0, 2pi] with spacing h/2."""

    values: np.ndarray
    h_half: float
    a0_settled: bool

    @property
    def x(self) -> np.ndarray:
        return np.arange(self.values.size) * self.h_half


def tabulate_a(
    spectral: SpectralData,
    dec: AsymptoticDecomposition,
    m: int,
    taper_fraction: float = DEFAULT_TAPER_FRACTION,
    n_extend: int | None = None,
) -> ATabulation:
    """Tabulate a(.) at spacing h/2 = pi/(2(m-1)) so x + t and x - t of the
    m-point kernel grid land exactly on tabulated nodes."""
    if m < 2:
        raise InvalidArgumentError(f"kernel grid needs m >= 2, got {m}")
    n_nodes = 4 * (m - 1) + 1
    h_half = math.pi / (2.0 * (m - 1))
    xs = np.arange(n_nodes) * h_half
    vals = _a_accelerated_batch(spectral, dec, xs, taper_fraction, n_extend)
    a0, settled = a_zero_partial_sum(spectral)
    vals[0] = a0
    return ATabulation(vals, h_half, settled)


def eval_F_direct(spectral: SpectralData, x: float, t: float, n_terms: int | None = None) -> float:
    """Direct double-cosine sum for F(x, t) at the given truncation."""
    if n_terms is None:
        n_terms = spectral.N
    if not 1 <= n_terms <= spectral.N:
        raise InvalidArgumentError(f"n_terms={n_terms} outside 1..{spectral.N}")
    lam0 = float(spectral.lam[0])
    total = cos_signed(lam0, x) * cos_signed(lam0, t) / spectral.a[0] - 1.0 / math.pi
    if n_terms > 1:
        n = np.arange(1, n_terms, dtype=float)
        lam = spectral.lam[1:n_terms]
        total += float(
            np.sum(
                np.cos(lam * x) * np.cos(lam * t) / spectral.a[1:n_terms]
                - np.cos(n * x) * np.cos(n * t) * (2.0 / math.pi)
            )
        )
    return float(total)


def build_F(
    spectral: SpectralData,
    dec: AsymptoticDecomposition,
    m: int,
    taper_fraction: float = DEFAULT_TAPER_FRACTION,
    n_extend: int | None = None,
) -> TriangularKernel:
    """F(x, t) = (a(x + t) + a(x - t)) / 2 on the m-grid triangle (and its
    symmetric square extension), from one tabulation of a(.)."""
    atab = tabulate_a(spectral, dec, m, taper_fraction, n_extend)
    idx = np.arange(m)
    plus = 2 * (idx[:, None] + idx[None, :])
    minus = 2 * np.abs(idx[:, None] - idx[None, :])
    values = 0.5 * (atab.values[plus] + atab.values[minus])
    return TriangularKernel(values, math.pi / (m - 1), atab.a0_settled)


def f_diagonal(
    spectral: SpectralData,
    dec: AsymptoticDecomposition,
    m: int,
    taper_fraction: float = DEFAULT_TAPER_FRACTION,
    n_extend: int | None = None,
) -> GridFunction:
    """f(x) = d/dx F(x, x) = (1/2) d/dx a(2x), by finite differences of the
    a(2x) tabulation (central inside, one-sided at the endpoints)."""
    atab = tabulate_a(spectral, dec, m, taper_fraction, n_extend)
    diag_half = 0.5 * atab.values[4 * np.arange(m)]  # (1/2) a(2 x_i)
    f = GridFunction(0.0, math.pi, _differentiate(diag_half, math.pi / (m - 1)))
    return f


def _differentiate(vals: np.ndarray, h: float) -> np.ndarray:
    """Second-order differences: central inside, one-sided at the endpoints."""
    d = np.empty_like(vals)
    d[1:-1] = (vals[2:] - vals[:-2]) / (2.0 * h)
    if vals.size >= 3:
        d[0] = (-3.0 * vals[0] + 4.0 * vals[1] - vals[2]) / (2.0 * h)
        d[-1] = (3.0 * vals[-1] - 4.0 * vals[-2] + vals[-3]) / (2.0 * h)
    else:
        d[0] = d[-1] = (vals[-1] - vals[0]) / h
    return d
