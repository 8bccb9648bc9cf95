"""
Unit tests for the AMP baseline
"""

import numpy as np
import pytest

from config.settings import settings
from denoisers.base import DenoiserKind, DenoiserSpec
from denoisers.separable import BernoulliGaussianMmse
from operators.spectral import iid_gaussian_operator
from solvers.amp import amp_run
from solvers.problem import SignalSpec, make_instance
from utils.exceptions import InvalidDenoiserError
from utils.metrics import nmse_db


class _Rejecting(DenoiserSpec):
    """Refuses every input"""

    kind = DenoiserKind.FIR_CONVOLUTION
    has_analytic_divergence = True

    def _apply(self, r, gamma):
        raise InvalidDenoiserError("weights do not fit this input")

    def _analytic_divergence(self, r, gamma):
        return 0.0


class _Amplifier(DenoiserSpec):
    """g(r) = 10·r, a map AMP cannot survive"""

    kind = DenoiserKind.FIR_CONVOLUTION
    has_analytic_divergence = True

    def _apply(self, r, gamma):
        return 10.0 * r

    def _analytic_divergence(self, r, gamma):
        return 10.0


@pytest.fixture
def iid_instance():
    op = iid_gaussian_operator(256, 512, seed=5)
    return make_instance(SignalSpec(n=512, rho=0.1), op, gamma_w0=1e3, seed=6)


class TestAmpRun:
    """Test suite for amp_run"""

    def test_converges_on_iid(self, iid_instance):
        """Test AMP recovers a sparse signal with an i.i.d. operator"""
        traj = amp_run(iid_instance, BernoulliGaussianMmse(rho=0.1), iterations=25)

        assert not traj.diverged
        assert nmse_db(traj.final_xhat, iid_instance.x0) < -10.0

    def test_initialization(self, iid_instance):
        """Test r₀ = Aᵀy and γ₀ = M/‖y‖²"""
        traj = amp_run(iid_instance, BernoulliGaussianMmse(rho=0.1), iterations=1)
        first = traj.states[0]
        y = iid_instance.y
        assert np.allclose(first.r, iid_instance.operator.adjoint(y))
        assert first.gamma == pytest.approx(256 / float(y @ y))
        assert np.all(first.onsager == 0)

    def test_divergence_flagged(self, iid_instance):
        """Test an expanding denoiser is caught and the run halts"""
        traj = amp_run(iid_instance, _Amplifier(), iterations=40)

        assert traj.diverged
        assert traj.diverged_at is not None
        assert len(traj.states) < 40
        assert any(row["diverged_flag"] for row in traj.rows())

    def test_without_onsager(self, iid_instance):
        """Test onsager=False drops the memory term"""
        traj = amp_run(iid_instance, BernoulliGaussianMmse(rho=0.1), iterations=5, onsager=False)
        assert all(np.all(s.onsager == 0) for s in traj.states)

    def test_deterministic(self, iid_instance):
        """Test repeat runs match"""
        a = amp_run(iid_instance, BernoulliGaussianMmse(rho=0.1), iterations=8, seed=2)
        b = amp_run(iid_instance, BernoulliGaussianMmse(rho=0.1), iterations=8, seed=2)
        assert np.array_equal(a.final_xhat, b.final_xhat)

    def test_rejected_first_iterate(self, iid_instance):
        """Test a denoiser that refuses r₀ leaves an empty, diverged trajectory"""
        traj = amp_run(iid_instance, _Rejecting(), iterations=5)

        assert traj.diverged
        assert traj.diverged_at == 0
        assert traj.states == []
        assert traj.final_xhat is None
        assert np.isnan(traj.final_mse())

    def test_precision_clamp_from_settings(self, iid_instance, monkeypatch):
        """Test γ_k stays inside the configured clamp"""
        monkeypatch.setattr(settings, "gamma_max", 1.0)
        traj = amp_run(iid_instance, BernoulliGaussianMmse(rho=0.1), iterations=6)

        assert traj.states[0].gamma == pytest.approx(1.0)
        assert all(s.gamma <= 1.0 for s in traj.states)
