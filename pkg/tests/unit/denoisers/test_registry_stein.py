"""
Unit tests for the denoiser registry and the Stein-identity check
"""

import numpy as np
import pytest

from denoisers.base import DenoiserKind
from denoisers.convolution import FirConvolution
from denoisers.divergence import DivergenceKind, monte_carlo_divergence
from denoisers.group import GroupSoftThreshold
from denoisers.registry import build_denoiser, unknown_params
from denoisers.separable import BernoulliGaussianMmse, SoftThreshold
from denoisers.stein import stein_identity_check
from denoisers.svt import SingularValueThreshold
from utils.exceptions import InvalidDenoiserError


class TestBuildDenoiser:
    """Test suite for build_denoiser"""

    def test_by_name(self):
        """Test a kind string builds the right class"""
        d = build_denoiser("bernoulli-gaussian-mmse", rho=0.2, sigma_x2=2.0)
        assert isinstance(d, BernoulliGaussianMmse)
        assert d.params() == {"rho": 0.2, "sigma_x2": 2.0}

    def test_monte_carlo_mode(self):
        """Test divergence/probes parameters select Monte Carlo"""
        d = build_denoiser("soft-threshold", threshold=1.0, divergence="monte-carlo", probes=3)
        assert isinstance(d, SoftThreshold)
        assert d.divergence_mode.kind == DivergenceKind.MONTE_CARLO
        assert d.divergence_mode.probes == 3

    def test_unknown_kind(self):
        """Test an unknown kind lists the valid ones"""
        with pytest.raises(InvalidDenoiserError, match="soft-threshold"):
            build_denoiser("median")

    def test_missing_parameter(self):
        """Test a missing required parameter"""
        with pytest.raises(InvalidDenoiserError):
            build_denoiser("group-soft-threshold", threshold=1.0)

    def test_svt_needs_shape(self):
        """Test svt without a shape"""
        with pytest.raises(InvalidDenoiserError):
            build_denoiser("svt")

    def test_unknown_parameter_rejected(self):
        """Test a misspelled parameter raises instead of falling back to defaults"""
        with pytest.raises(InvalidDenoiserError, match="threshhold"):
            build_denoiser("soft-threshold", threshold=1.0, threshhold=2.0)

    def test_parameter_of_another_kind(self):
        """Test parameters are checked against the requested kind"""
        with pytest.raises(InvalidDenoiserError, match="taps"):
            build_denoiser("svt", shape=[4, 4], taps=[1.0])

    def test_accepted_parameters_listed(self):
        """Test every kind accepts the divergence options"""
        assert unknown_params(DenoiserKind.FIR_CONVOLUTION, ["taps", "probes", "epsilon"]) == []
        assert unknown_params(DenoiserKind.FIR_CONVOLUTION, ["probes"], allow_divergence=False) == ["probes"]

    def test_describe(self):
        """Test describe carries kind and divergence mode"""
        info = build_denoiser("fir-convolution", taps=[0.5]).describe()
        assert info["kind"] == "fir-convolution"
        assert info["divergence"] == "analytic"


class TestMonteCarloDivergence:
    """Test suite for monte_carlo_divergence"""

    def test_linear_map(self, rng):
        """Test a scaled identity has divergence equal to the scale"""
        value, _ = monte_carlo_divergence(lambda v: 0.7 * v, rng.standard_normal(2048), probes=8, seed=1)
        assert value == pytest.approx(0.7, abs=0.03)

    def test_seeded(self, rng):
        """Test the same seed gives the same estimate"""
        r = rng.standard_normal(64)
        fn = lambda v: np.tanh(v)  # noqa: E731
        assert monte_carlo_divergence(fn, r, 4, seed=9) == monte_carlo_divergence(fn, r, 4, seed=9)

    def test_zero_probes(self, rng):
        """Test at least one probe is required"""
        with pytest.raises(InvalidDenoiserError):
            monte_carlo_divergence(lambda v: v, rng.standard_normal(4), probes=0, seed=0)


STEIN_N = 16384
STEIN_COV = np.array([[0.6, 0.5], [0.5, 0.6]])


def _sparse_truth(seed):
    rng = np.random.default_rng(seed)
    return np.where(rng.random(STEIN_N) < 0.1, rng.standard_normal(STEIN_N), 0.0)


def _rank_one_truth(seed):
    rng = np.random.default_rng(seed)
    return 0.3 * np.outer(rng.standard_normal(128), rng.standard_normal(128)).ravel()


STEIN_CASES = {
    "soft-threshold": (lambda: SoftThreshold(threshold_scale=1.0), _sparse_truth),
    "bg-mmse": (lambda: BernoulliGaussianMmse(rho=0.1), _sparse_truth),
    "group": (lambda: GroupSoftThreshold(group_size=4, threshold_scale=2.0), _sparse_truth),
    "fir": (lambda: FirConvolution([0.25, 0.5, 0.25]), _sparse_truth),
    "svt": (lambda: SingularValueThreshold(shape=(128, 128), threshold_scale=15.0), _rank_one_truth),
}


class TestSteinIdentity:
    """Test suite for stein_identity_check"""

    def test_soft_threshold_satisfies_identity(self, rng):
        """Test the divergence and its Stein cross-estimate agree at large N"""
        x0 = np.where(rng.random(50000) < 0.1, rng.standard_normal(50000), 0.0)
        check = stein_identity_check(
            SoftThreshold(threshold=0.5), x0, np.array([[0.25, 0.1], [0.1, 0.3]]), gamma=4.0, seed=2
        )
        assert check.gap < 0.05

    @pytest.mark.slow
    @pytest.mark.parametrize("case", sorted(STEIN_CASES))
    def test_identity_holds_across_kinds(self, case):
        """Test |⟨∇g⟩ − gᵀz₂/(N·S₁₂)| ≤ 0.03 in at least 18 of 20 seeds at N = 16384"""
        make, truth = STEIN_CASES[case]
        denoiser = make()
        x0 = truth(11)
        gamma = 1.0 / STEIN_COV[0, 0]

        gaps = [stein_identity_check(denoiser, x0, STEIN_COV, gamma, seed).gap for seed in range(20)]

        assert sum(gap <= 0.03 for gap in gaps) >= 18, f"{case}: gaps {np.round(gaps, 4).tolist()}"

    def test_zero_cross_covariance(self, rng):
        """Test S12 = 0 is rejected"""
        with pytest.raises(InvalidDenoiserError):
            stein_identity_check(SoftThreshold(threshold=1.0), np.zeros(10), np.eye(2), 1.0, 0)

    def test_not_positive_definite(self):
        """Test an indefinite covariance is rejected"""
        with pytest.raises(InvalidDenoiserError):
            stein_identity_check(
                SoftThreshold(threshold=1.0), np.zeros(10), np.array([[1.0, 2.0], [2.0, 1.0]]), 1.0, 0
            )
