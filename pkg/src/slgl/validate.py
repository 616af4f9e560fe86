"""Screening of candidate spectral data against the solvability conditions.

Hard checks (eigenvalue ordering, positivity of the norming constants) are
pass/fail.  The asymptotic-decay checks and the two endpoint identities

    1/a_0 - 1/pi + sum (1/a_n - 2/pi) = cot(alpha)
    1/b_0 - 1/pi + sum (1/b_n - 2/pi) = -cot(beta)   (b_n via the product conversion)

are residual tests with tolerances calibrated from the measured tail decay:
an o(1/n) tail cannot be bounded a priori, so the pass threshold is

    10 * max_{top quartile} |n s_n| / N  +  1e-3  +  tail estimate,

where the tail estimate is the decay metric itself (a 1/n^2-model bound with
a safety factor), plus the propagated product-truncation bounds for the beta
identity.  The absolute-continuity requirements on the l- and s-series are
not decidable from finitely many terms; they are reported as diagnostics
(tail decay plus bounded variation of the tabulated partial sums) and never
fail the data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import SpectralData
from .errors import InvalidArgumentError
from .inverse import b_from_a
from .series import (
    DEFAULT_DECAY_THRESHOLD,
    AsymptoticDecomposition,
    decompose,
    eval_l,
    eval_s,
)

__all__ = [
    "ConditionReport",
    "ValidationReport",
    "check_hard",
    "check_asymptotics",
    "check_alpha_identity",
    "check_beta_identity",
    "ac_proxy_reports",
    "validate",
]

PASS = "pass"
FAIL = "fail"
DIAGNOSTIC = "diagnostic"


@dataclass(frozen=True)
class ConditionReport:
    name: str
    status: str
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def as_dict(self) -> dict:
        return {"name": self.name, "status": self.status, **self.details}


@dataclass(frozen=True)
class ValidationReport:
    conditions: tuple
    omega: float | None
    overall_pass: bool

    def condition(self, name: str) -> ConditionReport:
        for c in self.conditions:
            if c.name == name:
                return c
        raise KeyError(name)

    def as_dict(self) -> dict:
        return {
            "overall": PASS if self.overall_pass else FAIL,
            "omega": self.omega,
            "conditions": [c.as_dict() for c in self.conditions],
        }


def check_hard(lam, a) -> list[ConditionReport]:
    """Strict eigenvalue ordering and positivity of the norming constants."""
    lam = np.asarray(lam, dtype=float)
    a = np.asarray(a, dtype=float)
    reports = []

    mus = lam * np.abs(lam)
    bad = np.nonzero(np.diff(mus) <= 0)[0]
    if lam.size != a.size or lam.size == 0:
        reports.append(
            ConditionReport(
                "eigenvalues_increasing",
                FAIL,
                {"reason": f"length mismatch: {lam.size} lambdas vs {a.size} norming constants"},
            )
        )
    elif not np.all(np.isfinite(mus)):
        reports.append(ConditionReport("eigenvalues_increasing", FAIL, {"reason": "non-finite"}))
    elif bad.size:
        reports.append(
            ConditionReport(
                "eigenvalues_increasing",
                FAIL,
                {"violations": [int(i) for i in bad], "reason": "mu must increase strictly"},
            )
        )
    else:
        reports.append(ConditionReport("eigenvalues_increasing", PASS))

    nonpos = np.nonzero(~(a > 0) | ~np.isfinite(a))[0]
    if nonpos.size:
        reports.append(
            ConditionReport(
                "norming_constants_positive",
                FAIL,
                {"violations": [int(i) for i in nonpos]},
            )
        )
    else:
        reports.append(ConditionReport("norming_constants_positive", PASS))
    return reports


def check_asymptotics(
    spectral: SpectralData, decay_threshold: float = DEFAULT_DECAY_THRESHOLD
) -> tuple[list[ConditionReport], AsymptoticDecomposition]:
    """Tail-decay verdicts for the eigenvalue and norming-constant sequences."""
    dec = decompose(spectral, decay_threshold)
    reports = [
        ConditionReport(
            "lambda_tail_decay",
            PASS if dec.decay_l < decay_threshold else FAIL,
            {"max_n_l_n": dec.decay_l, "threshold": decay_threshold, "omega": dec.omega},
        ),
        ConditionReport(
            "a_tail_decay",
            PASS if dec.decay_s < decay_threshold else FAIL,
            {"max_n_s_n": dec.decay_s, "threshold": decay_threshold},
        ),
    ]
    return reports, dec


def _identity_tolerance(decay: float, n_total: int) -> float:
    return 10.0 * decay / n_total + 1e-3 + decay


def check_alpha_identity(
    spectral: SpectralData, alpha: float, dec: AsymptoticDecomposition
) -> ConditionReport:
    """Residual of the left-endpoint sum rule at this truncation."""
    if not 0.0 < alpha < math.pi:
        raise InvalidArgumentError(f"alpha={alpha!r} outside (0, pi)")
    total = 1.0 / spectral.a[0] - 1.0 / math.pi + np.sum(1.0 / spectral.a[1:] - 2.0 / math.pi)
    residual = float(abs(total - math.cos(alpha) / math.sin(alpha)))
    tolerance = _identity_tolerance(dec.decay_s, spectral.N)
    return ConditionReport(
        "alpha_identity",
        PASS if residual < tolerance else FAIL,
        {"residual": residual, "tolerance": tolerance},
    )


def check_beta_identity(
    spectral: SpectralData,
    beta: float,
    dec: AsymptoticDecomposition,
    K: int = 2000,
) -> ConditionReport:
    """Residual of the right-endpoint sum rule, with b_n from the product conversion."""
    if not 0.0 < beta < math.pi:
        raise InvalidArgumentError(f"beta={beta!r} outside (0, pi)")
    b, rel = b_from_a(spectral, K=K, omega=dec.omega)
    total = 1.0 / b.b[0] - 1.0 / math.pi + np.sum(1.0 / b.b[1:] - 2.0 / math.pi)
    residual = float(abs(total + math.cos(beta) / math.sin(beta)))
    n = np.arange(1, spectral.N, dtype=float)
    qlo = max(1, (3 * spectral.N) // 4)
    decay_b = float(np.max(np.abs(n[qlo - 1 :] * (b.b[qlo:] - math.pi / 2.0))))
    product_err = float(np.sum(rel / b.b))
    tolerance = _identity_tolerance(decay_b, spectral.N) + product_err
    return ConditionReport(
        "beta_identity",
        PASS if residual < tolerance else FAIL,
        {
            "residual": residual,
            "tolerance": tolerance,
            "product_truncation": product_err,
            "K": K,
        },
    )


def _total_variation(values: np.ndarray) -> float:
    return float(np.sum(np.abs(np.diff(values))))


def ac_proxy_reports(
    dec: AsymptoticDecomposition, margin: float = 0.1, samples: int = 512
) -> list[ConditionReport]:
    """Diagnostic-only smoothness proxies for the l- and s-series.

    Genuine absolute continuity on (0, 2pi) is not decidable from finitely
    many coefficients; reported instead: the tail-decay metric and the total
    variation of the tapered partial sums on [margin, 2pi - margin].
    """
    xs = np.linspace(margin, 2.0 * math.pi - margin, samples)
    l_tab = np.asarray([eval_l(x, dec) for x in xs])
    s_tab = np.asarray([eval_s(x, dec) for x in xs])
    return [
        ConditionReport(
            "l_series_smoothness_proxy",
            DIAGNOSTIC,
            {
                "total_variation": _total_variation(l_tab),
                "tail_decay": dec.decay_l,
                "window": [margin, 2.0 * math.pi - margin],
            },
        ),
        ConditionReport(
            "s_series_smoothness_proxy",
            DIAGNOSTIC,
            {
                "total_variation": _total_variation(s_tab),
                "tail_decay": dec.decay_s,
                "window": [margin, 2.0 * math.pi - margin],
            },
        ),
    ]


def validate(
    lam,
    a,
    alpha: float,
    beta: float,
    K: int = 2000,
    decay_threshold: float = DEFAULT_DECAY_THRESHOLD,
) -> ValidationReport:
    """Run every check; hard failures short-circuit the later stages."""
    reports = check_hard(lam, a)
    if not all(r.passed for r in reports):
        return ValidationReport(tuple(reports), None, False)

    spectral = SpectralData(np.asarray(lam, dtype=float), np.asarray(a, dtype=float))
    asym, dec = check_asymptotics(spectral, decay_threshold)
    reports.extend(asym)
    reports.extend(ac_proxy_reports(dec))
    reports.append(check_alpha_identity(spectral, alpha, dec))
    reports.append(check_beta_identity(spectral, beta, dec, K))
    overall = all(r.passed for r in reports)
    return ValidationReport(tuple(reports), dec.omega, overall)
