import math

import numpy as np
import pytest

from fd_oracle import fd_eigenvalues_richardson, fd_norming_a
from slgl.core import GridFunction
from slgl.errors import InvalidArgumentError, SolverOverflowError
from slgl.forward import (
    alpha_identity_residual,
    beta_identity_residual,
    characteristic_delta,
    characteristic_delta_forms,
    compute_eigenvalues,
    forward,
    norming_constants,
    solve_phi,
    solve_psi,
)

PI = math.pi


def _const(c, m=2001):
    return GridFunction(0.0, PI, np.full(m, float(c)))


class TestSolvePhi:
    def test_zero_potential_cos(self, q_zero):
        tr = solve_phi(q_zero, PI / 2, 4.0)
        assert abs(tr.y[-1] - math.cos(2 * PI)) < 1e-8
        assert np.max(np.abs(tr.y - np.cos(2 * tr.x))) < 1e-8

    def test_zero_potential_constant(self, q_zero):
        tr = solve_phi(q_zero, PI / 2, 0.0)
        assert np.max(np.abs(tr.y - 1.0)) < 1e-12
        assert np.max(np.abs(tr.yprime)) < 1e-12

    def test_q_equals_mu_reduces_to_linear(self):
        tr = solve_phi(_const(1.0), PI / 2, 1.0)
        assert np.max(np.abs(tr.y - 1.0)) < 1e-12

    def test_initial_conditions_exact(self, q_cos2x):
        alpha = 1.0
        tr = solve_phi(q_cos2x, alpha, 3.7)
        assert tr.y[0] == 1.0
        assert tr.yprime[0] == -math.cos(alpha) / math.sin(alpha)

    def test_overflow_reports_mu(self, q_zero):
        with pytest.raises(SolverOverflowError) as err:
            solve_phi(q_zero, PI / 2, -1e6)
        assert err.value.mu == -1e6


class TestSolvePsi:
    def test_zero_potential_shifted_cos(self, q_zero):
        tr = solve_psi(q_zero, PI / 2, 4.0)
        assert np.max(np.abs(tr.y - np.cos(2 * (tr.x - PI)))) < 1e-8
        assert abs(tr.y[0] - 1.0) < 1e-8

    def test_zero_potential_constant(self, q_zero):
        tr = solve_psi(q_zero, PI / 2, 0.0)
        assert np.max(np.abs(tr.y - 1.0)) < 1e-12

    def test_q_equals_mu(self):
        tr = solve_psi(_const(1.0), PI / 2, 1.0)
        assert np.max(np.abs(tr.y - 1.0)) < 1e-12

    def test_terminal_conditions_exact(self, q_cos2x):
        beta = 2.0
        tr = solve_psi(q_cos2x, beta, 2.3)
        assert tr.y[-1] == 1.0
        assert tr.yprime[-1] == pytest.approx(-math.cos(beta) / math.sin(beta), abs=1e-14)


class TestCharacteristicDelta:
    def test_zero_at_eigenvalue(self, q_zero):
        assert abs(characteristic_delta(q_zero, PI / 2, PI / 2, 1.0)) < 1e-9

    def test_closed_form_value(self, q_zero):
        # Delta(mu) = -sqrt(mu) sin(sqrt(mu) pi) for the Neumann case
        assert characteristic_delta(q_zero, PI / 2, PI / 2, 2.25) == pytest.approx(1.5, abs=1e-6)

    def test_two_forms_agree(self, q_zero, q_cos2x):
        for q in (q_zero, q_cos2x):
            for mu in (-0.7, 1.0, 3.3, 17.2):
                d1, d2 = characteristic_delta_forms(q, 1.1, 2.0, mu)
                assert d1 == pytest.approx(d2, rel=1e-7, abs=1e-9)

    def test_wronskian_constant(self, q_cos2x):
        # phi psi' - phi' psi is x-independent for non-eigenvalue mu
        mu = 2.7
        phi = solve_phi(q_cos2x, 1.1, mu)
        psi = solve_psi(q_cos2x, 2.0, mu)
        w = phi.y * psi.yprime - phi.yprime * psi.y
        assert np.max(np.abs(w - w[0])) < 1e-7 * max(1.0, np.max(np.abs(w)))


class TestComputeEigenvalues:
    def test_neumann_spectrum(self, q_zero):
        mus = compute_eigenvalues(q_zero, PI / 2, PI / 2, 5)
        assert np.max(np.abs(mus - np.array([0.0, 1.0, 4.0, 9.0, 16.0]))) < 1e-8

    @pytest.mark.parametrize("c", [-1.0, 1.0, 5.0])
    def test_constant_shift(self, q_zero, c):
        base = compute_eigenvalues(q_zero, PI / 2, PI / 2, 8)
        shifted = compute_eigenvalues(_const(c), PI / 2, PI / 2, 8)
        assert np.max(np.abs(shifted - base - c)) < 1e-8

    def test_cos2x_against_fd_oracle(self, q_cos2x):
        mus = compute_eigenvalues(q_cos2x, PI / 2, PI / 2, 8)
        oracle = fd_eigenvalues_richardson(lambda x: math.cos(2 * x), PI / 2, PI / 2, 8, m=4001)
        assert np.max(np.abs(mus - oracle)) < 1e-5

    def test_mixed_angles_against_fd_oracle(self, q_cos2x):
        mus = compute_eigenvalues(q_cos2x, PI / 3, 2 * PI / 3, 6)
        oracle = fd_eigenvalues_richardson(
            lambda x: math.cos(2 * x), PI / 3, 2 * PI / 3, 6, m=4001
        )
        assert np.max(np.abs(mus - oracle)) < 1e-5

    def test_strictly_increasing(self, q_cos2x):
        for alpha, beta in [(PI / 2, PI / 2), (0.3, 2.8), (2.8, 0.3)]:
            mus = compute_eigenvalues(q_cos2x, alpha, beta, 12)
            assert np.all(np.diff(mus) > 0)

    def test_strong_negative_potential(self):
        mus = compute_eigenvalues(_const(-20.0), PI / 2, PI / 2, 4)
        assert np.max(np.abs(mus - (np.arange(4.0) ** 2 - 20.0))) < 1e-7


class TestNormingConstants:
    def test_neumann_values(self, q_zero):
        mus = compute_eigenvalues(q_zero, PI / 2, PI / 2, 6)
        a, b = norming_constants(q_zero, PI / 2, PI / 2, mus)
        expected = np.array([PI] + [PI / 2] * 5)
        assert np.max(np.abs(a - expected)) < 1e-8
        assert np.max(np.abs(b - expected)) < 1e-8

    def test_constant_shift_invariance(self, q_zero):
        mus0 = compute_eigenvalues(q_zero, PI / 2, PI / 2, 6)
        a0, b0 = norming_constants(q_zero, PI / 2, PI / 2, mus0)
        mus1 = compute_eigenvalues(_const(1.0), PI / 2, PI / 2, 6)
        a1, b1 = norming_constants(_const(1.0), PI / 2, PI / 2, mus1)
        assert np.max(np.abs(a1 - a0)) < 1e-8
        assert np.max(np.abs(b1 - b0)) < 1e-8

    def test_cos2x_against_fd_eigenvector_oracle(self, cos2x_forward_neumann):
        a = cos2x_forward_neumann.spectral.a[:8]
        oracle = fd_norming_a(lambda x: math.cos(2 * x), PI / 2, PI / 2, 8, m=8001)
        assert np.max(np.abs(a - oracle)) < 5e-5
        # |a_n - pi/2| decreases in n for this smooth potential
        dev = np.abs(a[1:] - PI / 2)
        assert np.all(np.diff(dev) < 0)

    def test_rejects_non_eigenvalue(self, q_zero):
        with pytest.raises(InvalidArgumentError):
            norming_constants(q_zero, PI / 2, PI / 2, [0.0, 1.7])


class TestIdentityResiduals:
    def test_partial_sum_residual_decreases(self, q_cos2x):
        res = forward(q_cos2x, PI / 3, PI / 2, 96)
        r = [alpha_identity_residual(res.spectral.a[:n], PI / 3) for n in (24, 48, 96)]
        assert r[2] < r[1] < r[0]

    def test_beta_identity_residual_decreases(self, q_cos2x):
        res = forward(q_cos2x, PI / 2, PI / 3, 96)
        r = [beta_identity_residual(res.b.b[:n], PI / 3) for n in (24, 48, 96)]
        assert r[2] < r[1] < r[0]

    def test_neumann_residual_zero(self, neumann_forward):
        assert alpha_identity_residual(neumann_forward.spectral.a, PI / 2) < 1e-12
        assert beta_identity_residual(neumann_forward.b.b, PI / 2) < 1e-12


class TestForwardResult:
    def test_negative_ground_state_signed_lambda(self, cos2x_forward_mixed):
        sp = cos2x_forward_mixed.spectral
        assert sp.mu(0) < 0
        assert sp.lam[0] < 0
        assert np.all(np.diff(sp.mus) > 0)

    def test_traces_retained_on_request(self, q_zero):
        res = forward(q_zero, PI / 2, PI / 2, 3, keep_traces=True)
        assert len(res.phi_traces) == 3
        assert res.phi_traces[1].y[0] == 1.0
        assert res.psi_traces[2].y[-1] == 1.0
