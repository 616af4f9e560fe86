"""Acceptance suite: one test per criterion, one printed verdict line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the verdict lines
as they appear; each line carries the measured figure next to its bound.
Later criteria reuse results stashed by earlier ones (the Gelfand-Levitan
residual audit covers every inverse run of the session), so the module is
meant to run in file order.
"""

import math
import time

import numpy as np
import pytest

from fd_oracle import fd_eigenvalues_richardson
from slgl.core import GridFunction, SpectralData
from slgl.forward import (
    alpha_identity_residual,
    beta_identity_residual,
    compute_eigenvalues,
    forward,
)
from slgl.inverse import b_from_a, inverse_solve
from slgl.series import eval_F_direct, eval_a_direct
from slgl.validate import validate

PI = math.pi

_gl_residuals: dict[str, float] = {}


def _report(num: int, name: str, ok: bool, detail: str) -> None:
    verdict = "PASS" if ok else "FAIL"
    print(f"criterion {num:02d} [{name}]: {verdict}  ({detail})", flush=True)


def _q_zero(m=2001):
    return GridFunction(0.0, PI, np.zeros(m))


def _q_cos2x(m=2001):
    xs = np.linspace(0.0, PI, m)
    return GridFunction(0.0, PI, np.cos(2.0 * xs))


def _a0_perturbed(N, c):
    lam = np.arange(N, dtype=float)
    a = np.concatenate([[PI / (1.0 + PI * c)], np.full(N - 1, PI / 2)])
    return SpectralData(lam, a)


def test_criterion_01_neumann_closed_form():
    t0 = time.monotonic()
    res = forward(_q_zero(), PI / 2, PI / 2, 30, m=2001)
    elapsed = time.monotonic() - t0
    lam_err = float(np.max(np.abs(res.spectral.lam - np.arange(30.0))))
    expected_a = np.concatenate([[PI], np.full(29, PI / 2)])
    a_err = float(np.max(np.abs(res.spectral.a - expected_a)))
    ok = lam_err < 1e-8 and a_err < 1e-8 and elapsed < 5.0
    _report(1, "neumann closed form", ok, f"lam {lam_err:.2e}, a {a_err:.2e}, {elapsed:.2f}s")
    assert lam_err < 1e-8
    assert a_err < 1e-8
    assert elapsed < 5.0


@pytest.mark.parametrize("c", [-1.0, 1.0, 5.0])
def test_criterion_02_constant_shift_covariance(c):
    n_eigs = 12
    base = forward(_q_zero(), PI / 2, PI / 2, n_eigs)
    shifted = forward(GridFunction(0.0, PI, np.full(2001, c)), PI / 2, PI / 2, n_eigs)
    mu_err = float(np.max(np.abs(shifted.spectral.mus - base.spectral.mus - c)))
    a_err = float(np.max(np.abs(shifted.spectral.a - base.spectral.a)))
    b_err = float(np.max(np.abs(shifted.b.b - base.b.b)))
    ok = mu_err < 1e-8 and a_err < 1e-8 and b_err < 1e-8
    _report(2, f"constant shift c={c:+g}", ok, f"mu {mu_err:.2e}, a {a_err:.2e}, b {b_err:.2e}")
    assert mu_err < 1e-8
    assert a_err < 1e-8
    assert b_err < 1e-8


def test_criterion_03_fd_oracle_equivalence():
    mus = compute_eigenvalues(_q_cos2x(), PI / 2, PI / 2, 8)
    oracle = fd_eigenvalues_richardson(lambda x: math.cos(2.0 * x), PI / 2, PI / 2, 8, m=4001)
    err = float(np.max(np.abs(mus - oracle)))
    ok = err < 1e-5
    _report(3, "finite-difference oracle", ok, f"max eigenvalue deviation {err:.2e}")
    assert err < 1e-5


def test_criterion_04_endpoint_identities_trend():
    alpha, beta = PI / 3, 2.0 * PI / 3
    res = forward(_q_cos2x(), alpha, beta, 200)
    checkpoints = (50, 100, 150, 200)
    ra = [alpha_identity_residual(res.spectral.a[:n], alpha) for n in checkpoints]
    rb = [beta_identity_residual(res.b.b[:n], beta) for n in checkpoints]
    final_ok = ra[-1] < 5e-2 and rb[-1] < 5e-2
    trend_ok = all(x > y for x, y in zip(ra, ra[1:])) and all(
        x > y for x, y in zip(rb, rb[1:])
    )
    ok = final_ok and trend_ok
    _report(
        4,
        "endpoint identities",
        ok,
        f"alpha residuals {['%.1e' % r for r in ra]}, beta {['%.1e' % r for r in rb]}",
    )
    assert final_ok
    assert trend_ok


def test_criterion_05_product_conversion():
    fwd = forward(_q_cos2x(), PI / 2, PI / 2, 16)
    b_conv, _ = b_from_a(fwd.spectral, K=2000)
    rel = float(np.max(np.abs(b_conv.b[:9] - fwd.b.b[:9]) / fwd.b.b[:9]))

    neumann = SpectralData(
        np.arange(20, dtype=float), np.concatenate([[PI], np.full(19, PI / 2)])
    )
    b_neu, _ = b_from_a(neumann, K=2000)
    neu_err = max(
        abs(b_neu.b[0] - PI), float(np.max(np.abs(b_neu.b[1:] - PI / 2)))
    )
    ok = rel < 1e-3 and neu_err < 1e-3
    _report(5, "b from a conversion", ok, f"cos2x rel {rel:.2e}, neumann abs {neu_err:.2e}")
    assert rel < 1e-3
    assert neu_err < 1e-3


def test_criterion_06_kernel_identity():
    fwd = forward(_q_cos2x(), PI / 3, 2.0 * PI / 3, 32)
    sp = fwd.spectral
    m = 201
    xs = np.linspace(0.0, PI, m)
    worst = 0.0
    for i in range(m):
        for j in range(0, i + 1, 4):  # every 4th column; all rows
            lhs = eval_F_direct(sp, xs[i], xs[j])
            rhs = 0.5 * (eval_a_direct(sp, xs[i] + xs[j]) + eval_a_direct(sp, xs[i] - xs[j]))
            worst = max(worst, abs(lhs - rhs))
        lhs = eval_F_direct(sp, xs[i], xs[i])
        rhs = 0.5 * (eval_a_direct(sp, 2.0 * xs[i]) + eval_a_direct(sp, 0.0))
        worst = max(worst, abs(lhs - rhs))
    ok = worst < 1e-12
    _report(6, "kernel product-to-sum identity", ok, f"max deviation {worst:.2e}")
    assert worst < 1e-12


def test_criterion_07_degenerate_kernel_inverse():
    c = 0.5
    sp = _a0_perturbed(64, c)
    t0 = time.monotonic()
    res = inverse_solve(sp, m=801)
    elapsed = time.monotonic() - t0
    _gl_residuals["degenerate_m801"] = res.residual_max
    x = res.q.x
    q_expected = 2.0 * c**2 / (1.0 + c * x) ** 2
    q_err = float(np.max(np.abs(res.q.values - q_expected)[2:-2]))
    alpha_err = abs(res.alpha_tilde - math.atan2(1.0, c))
    beta_err = abs(res.beta_tilde - math.atan2(1.0, c / (1.0 + c * PI)))
    ok = q_err < 5e-4 and alpha_err < 1e-6 and beta_err < 1e-3 and elapsed < 60.0
    _report(
        7,
        "degenerate-kernel closed form",
        ok,
        f"q {q_err:.2e}, alpha {alpha_err:.2e}, beta {beta_err:.2e}, {elapsed:.1f}s",
    )
    assert q_err < 5e-4
    assert alpha_err < 1e-6
    assert beta_err < 1e-3
    assert elapsed < 60.0


def test_criterion_08_roundtrip_with_truncation_trend():
    q = _q_cos2x()
    t0 = time.monotonic()
    errors = {}
    for count in (100, 50):
        fwd = forward(q, PI / 2, PI / 2, count)
        inv = inverse_solve(fwd.spectral, m=401)
        _gl_residuals[f"roundtrip_N{count}"] = inv.residual_max
        xg = inv.q.x
        mask = (xg >= 0.1) & (xg <= PI - 0.1)
        errors[count] = (
            float(np.max(np.abs(inv.q.values - np.cos(2.0 * xg))[mask])),
            abs(inv.alpha_tilde - PI / 2),
            abs(inv.beta_tilde - PI / 2),
        )
    elapsed = time.monotonic() - t0
    q100, a100, b100 = errors[100]
    q50, a50, b50 = errors[50]
    bounds_ok = q100 < 0.05 and a100 < 1e-2 and b100 < 1e-2
    # more data must not make any error worse (non-increasing convergence trend)
    trend_ok = q100 <= q50 * 1.1 + 1e-6 and a100 <= a50 + 2e-3 and b100 <= b50 + 2e-3
    ok = bounds_ok and trend_ok and elapsed < 120.0
    _report(
        8,
        "cos2x round trip",
        ok,
        f"N=100: q {q100:.3f}, alpha {a100:.1e}, beta {b100:.1e}; "
        f"N=50: q {q50:.3f}; {elapsed:.1f}s",
    )
    assert bounds_ok
    assert trend_ok
    assert elapsed < 120.0


def test_criterion_09_validator_necessity_regression():
    xs = np.linspace(0.0, PI, 2001)
    corpus = {
        "zero": np.zeros(2001),
        "const1": np.ones(2001),
        "cos2x": np.cos(2.0 * xs),
    }
    angle_pairs = [(PI / 2, PI / 2), (PI / 3, 2.0 * PI / 3)]
    all_pass = True
    failures = []
    worst_bad_residual = math.inf
    for name, vals in corpus.items():
        q = GridFunction(0.0, PI, vals)
        for alpha, beta in angle_pairs:
            fwd = forward(q, alpha, beta, 64)
            report = validate(fwd.spectral.lam, fwd.spectral.a, alpha, beta)
            if not report.overall_pass:
                all_pass = False
                failures.append((name, alpha, beta))
            bad = validate(fwd.spectral.lam, fwd.spectral.a, alpha, beta + 0.3)
            bad_res = bad.condition("beta_identity").details["residual"]
            worst_bad_residual = min(worst_bad_residual, bad_res)
            if bad.overall_pass:
                all_pass = False
                failures.append((name, alpha, beta, "perturbed beta accepted"))
    ok = all_pass and worst_bad_residual > 0.1
    _report(
        9,
        "validator necessity regression",
        ok,
        f"corpus clean: {not failures}, min perturbed-beta residual {worst_bad_residual:.3f}",
    )
    assert all_pass, failures
    assert worst_bad_residual > 0.1


def test_criterion_10_gl_residual_audit():
    # cover a fresh run plus every inverse run recorded by earlier criteria
    neumann = forward(_q_zero(), PI / 2, PI / 2, 32)
    res = inverse_solve(neumann.spectral, m=201)
    _gl_residuals["neumann_m201"] = res.residual_max
    worst = max(_gl_residuals.values())
    ok = worst < 1e-8
    _report(
        10,
        "gelfand-levitan residual",
        ok,
        f"max over {len(_gl_residuals)} accepted runs {worst:.2e}",
    )
    assert worst < 1e-8
