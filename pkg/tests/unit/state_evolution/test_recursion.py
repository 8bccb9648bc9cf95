"""
Unit tests for state evolution, the generalized recursion and the
Gaussianity diagnostics
"""

import numpy as np
import pytest

from denoisers.separable import BernoulliGaussianMmse, SoftThreshold
from operators.spectral import build_operator, geometric_spectrum
from solvers.problem import SignalSpec, make_instance
from solvers.vamp import InitMode, VampConfig, vamp_run
from state_evolution.diagnostics import gaussianity_diagnostics
from state_evolution.general import (
    GenRecursionSpec,
    general_recursion_run,
    vamp_recursion_spec,
    vamp_se_run,
)
from state_evolution.recursion import se_run
from utils.exceptions import InvalidDimensionError

ORACLE = dict(init_mode=InitMode.SE_ORACLE, tau10=1.0)


@pytest.fixture
def tiny_instance():
    """32×64 problem for exact iterate comparisons"""
    op = build_operator(geometric_spectrum(32, 64, 5.0), u_seed=21, v_seed=22)
    return make_instance(SignalSpec(n=64, rho=0.2), op, gamma_w0=100.0, seed=23)


@pytest.fixture(scope="module")
def large_instance():
    """500×1000 problem where SE predictions are tight"""
    op = build_operator(geometric_spectrum(500, 1000, 10.0), u_seed=31, v_seed=32)
    return make_instance(SignalSpec(n=1000, rho=0.1), op, gamma_w0=1e3, seed=33)


def _se_kwargs(instance, iterations=5, trials=50):
    return dict(
        gamma_w=instance.gamma_w,
        gamma_w0=instance.gamma_w0,
        tau10=1.0,
        gbar10=1.0,
        iterations=iterations,
        mc_trials=trials,
        seed=4,
    )


class TestSeRun:
    """Test suite for se_run"""

    def test_identity_denoiser_violates(self, bg_instance):
        """Test A₁ = 1 stops SE before its first state"""
        se = se_run(SoftThreshold(threshold=0.0), bg_instance.x0, bg_instance.operator.spectrum, **_se_kwargs(bg_instance))
        assert not se.valid
        assert se.violated_at == 0
        assert se.states == []

    def test_bg_trajectory(self, bg_instance):
        """Test a valid run keeps positive variances and sensitivities in (0, 1)"""
        se = se_run(BernoulliGaussianMmse(rho=0.1), bg_instance.x0, bg_instance.operator.spectrum, **_se_kwargs(bg_instance))
        assert se.valid
        assert len(se.states) == 5
        for s in se.states:
            assert s.tau1 > 0 and s.tau2 > 0
            assert 0 < s.abar1 < 1 and 0 < s.abar2 < 1
        assert se.mse1()[-1] < se.mse1()[0]
        assert [row["k"] for row in se.rows()] == list(range(5))

    def test_rejects_bad_tau(self, bg_instance):
        """Test τ₁₀ ≤ 0"""
        kwargs = {**_se_kwargs(bg_instance), "tau10": 0.0}
        with pytest.raises(InvalidDimensionError):
            se_run(BernoulliGaussianMmse(rho=0.1), bg_instance.x0, bg_instance.operator.spectrum, **kwargs)

    @pytest.mark.slow
    def test_predicts_vamp(self, large_instance):
        """Test E₁ from SE tracks the empirical MSE of an oracle-initialized run"""
        d = BernoulliGaussianMmse(rho=0.1)
        traj = vamp_run(large_instance, d, VampConfig(iterations=5, seed=4, **ORACLE))
        se = se_run(d, large_instance.x0, large_instance.operator.spectrum, **_se_kwargs(large_instance, trials=100))
        for empirical, state in zip(traj.mse1(), se.states):
            assert empirical == pytest.approx(state.e1_direct, rel=0.25)


class TestGeneralizedSe:
    """Test suite for general_se_run via vamp_se_run"""

    def test_reproduces_se_run(self, bg_instance):
        """Test the generalized SE matches se_run on identical MC streams"""
        d = BernoulliGaussianMmse(rho=0.1)
        spectrum = bg_instance.operator.spectrum
        direct = se_run(d, bg_instance.x0, spectrum, **_se_kwargs(bg_instance))
        general = vamp_se_run(d, bg_instance.x0, spectrum, **_se_kwargs(bg_instance))

        assert len(general.states) == len(direct.states)
        for a, b in zip(direct.states, general.states):
            assert b.tau1 == pytest.approx(a.tau1, rel=1e-9)
            assert b.tau2 == pytest.approx(a.tau2, rel=1e-9)
            assert b.gbar2 == pytest.approx(a.gbar2, rel=1e-9)
            assert b.abar1 == pytest.approx(a.abar1, rel=1e-9)


class TestGeneralRecursion:
    """Test suite for general_recursion_run"""

    def test_matches_vamp_iterates(self, tiny_instance):
        """Test p = r₁ − x0 and q = Vᵀ(r₂ − x0) at every iteration"""
        d = BernoulliGaussianMmse(rho=0.2)
        cfg = VampConfig(iterations=6, seed=5, **ORACLE)
        traj = vamp_run(tiny_instance, d, cfg)
        states = general_recursion_run(vamp_recursion_spec(tiny_instance, d, cfg), len(traj.states))

        x0 = tiny_instance.x0
        for vs, gs in zip(traj.states, states):
            assert np.allclose(gs.p, vs.r1 - x0, atol=1e-8)
            assert np.allclose(gs.q, tiny_instance.operator.v_adjoint(vs.r2 - x0), atol=1e-8)
            assert gs.gamma1 == pytest.approx(vs.gamma1, rel=1e-8)
            assert gs.alpha2 == pytest.approx(vs.alpha2, rel=1e-8)

    def test_rejects_wrong_u0(self, tiny_instance):
        """Test u0 must live in the V domain"""
        spec = vamp_recursion_spec(tiny_instance, BernoulliGaussianMmse(rho=0.2), VampConfig(**ORACLE))
        with pytest.raises(InvalidDimensionError):
            GenRecursionSpec(**{**spec.__dict__, "u0": np.zeros(3)})


class TestGaussianity:
    """Test suite for gaussianity_diagnostics"""

    @pytest.mark.slow
    def test_error_vectors_look_gaussian(self, large_instance):
        """Test p_k and q_k match SE variances with small excess kurtosis"""
        d = BernoulliGaussianMmse(rho=0.1)
        traj = vamp_run(large_instance, d, VampConfig(iterations=4, seed=4, **ORACLE))
        se = se_run(d, large_instance.x0, large_instance.operator.spectrum, **_se_kwargs(large_instance, 4, 100))

        report = gaussianity_diagnostics(traj, large_instance, se)

        assert len(report.rows) == 4
        assert report.max_variance_gap() < 0.3
        assert report.max_abs_kurtosis() < 1.0
        assert set(report.rows[0].to_row()) >= {"ratio_p", "ratio_q", "normality_p"}
