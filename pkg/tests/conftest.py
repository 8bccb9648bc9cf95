"""
Pytest configuration and shared fixtures
"""

import math

import numpy as np
import pytest

from operators.spectral import build_operator, geometric_spectrum
from solvers.problem import SignalKind, SignalSpec, make_instance

# Configure async test support
pytest_plugins = ("pytest_asyncio",)


@pytest.fixture
def rng():
    """Seeded generator for test data"""
    return np.random.default_rng(1234)


@pytest.fixture
def bg_spec():
    """Bernoulli-Gaussian signal, rho=0.1, unit active variance"""
    return SignalSpec(kind=SignalKind.BERNOULLI_GAUSSIAN, n=256, rho=0.1, sigma2=1.0)


@pytest.fixture
def small_operator():
    """128×256 dense Haar operator with cond 10"""
    return build_operator(geometric_spectrum(128, 256, 10.0), u_seed=1, v_seed=2)


@pytest.fixture
def well_conditioned_operator():
    """128×256 dense Haar operator with flat spectrum"""
    return build_operator(geometric_spectrum(128, 256, 1.0), u_seed=3, v_seed=4)


@pytest.fixture
def bg_instance(bg_spec, small_operator):
    """BG problem at 40 dB-ish noise precision"""
    return make_instance(bg_spec, small_operator, gamma_w0=1e3, seed=7)


@pytest.fixture
def noiseless_instance(bg_spec, well_conditioned_operator):
    return make_instance(bg_spec, well_conditioned_operator, gamma_w0=math.inf, seed=11)


@pytest.fixture
def output_dir(tmp_path):
    """Fresh output directory per test"""
    path = tmp_path / "out"
    path.mkdir()
    return path
