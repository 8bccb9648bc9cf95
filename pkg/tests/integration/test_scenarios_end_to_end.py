"""
End-to-end checks at moderate sizes: VAMP against SE and AMP, image
recovery through both routes, and lifted VAMP on bilinear problems
"""

import math

import numpy as np
import pytest

from config.scenario_config import ImageRoute, parse_scenario_config
from denoisers.separable import SoftThreshold
from operators.spectral import identity_operator
from scenarios.image_pipeline import image_pipeline
from scenarios.runner import run_scenario
from scenarios.sweeps import median_by
from solvers.problem import piecewise_constant_image
from solvers.vamp import VampConfig

pytestmark = [pytest.mark.integration, pytest.mark.slow]


def test_se_tracks_vamp(tmp_path):
    """VAMP's per-iteration MSE stays within a dB of the SE prediction"""
    config = parse_scenario_config(
        {
            "scenario": "se-validate",
            "n": 1024,
            "iterations": 8,
            "trials": 3,
            "operator": {"cond": 10.0},
            "vamp": {"init_mode": "se-oracle"},
            "state_evolution": {"mc_trials": 20},
        }
    )
    run = run_scenario(config, out_dir=tmp_path)

    gaps = [abs(row["gap_db"]) for row in run.results if row.get("gap_db") is not None]
    assert gaps
    assert float(np.median(gaps)) < 1.0


def test_vamp_beats_amp_when_ill_conditioned(tmp_path):
    """AMP falls apart at cond 1000 while VAMP still recovers"""
    config = parse_scenario_config(
        {
            "scenario": "cond-sweep",
            "n": 512,
            "iterations": 20,
            "trials": 2,
            "operator": {"conds": [1.0, 1000.0]},
        }
    )
    run = run_scenario(config, out_dir=tmp_path)

    vamp = median_by(run.results, "cond", "nmse_db", method="vamp")
    assert vamp[1000.0] < -10.0
    for row in run.results:
        if row["method"] == "amp" and row["cond"] == 1000.0:
            assert row["diverged_flag"] or row["nmse_db"] is None or row["nmse_db"] > vamp[1000.0] + 5.0


def test_wavelet_route_recovers_image(tmp_path):
    """A piecewise-constant image comes back above 20 dB PSNR at M/N = 0.5"""
    config = parse_scenario_config(
        {
            "scenario": "image-recovery",
            "iterations": 15,
            "trials": 1,
            "signal": {"kind": "piecewise-image", "side": 32},
            "image": {"route": "wavelet"},
        }
    )
    run = run_scenario(config, out_dir=tmp_path)
    assert run.results[0]["psnr_db"] > 20.0


def test_identity_noiseless_direct_route():
    """Noiseless identity measurements with an identity denoiser hit the PSNR ceiling region"""
    image = piecewise_constant_image(16, seed=3)
    recovery = image_pipeline(
        image,
        identity_operator(256),
        ImageRoute.DIRECT,
        VampConfig(iterations=5),
        gamma_w0=math.inf,
        denoiser=SoftThreshold(threshold=0.0),
    )
    assert recovery.psnr_db > 60.0


def test_lifted_csmu_recovers_outer_product(tmp_path):
    """Lifted VAMP reaches −30 dB outer-product NMSE in at least 80% of seeds at M/P = 0.6"""
    config = parse_scenario_config(
        {
            "scenario": "csmu-sweep",
            "iterations": 30,
            "trials": 10,
            "master_seed": 21,
            "lifting": {
                "subspace_dim": 11,
                "factor_len": 64,
                "sparsity": 4,
                "rates": [0.6],
                "operator_style": "iid-gaussian",
            },
            "noise": {"snr_db": 40.0},
        }
    )
    run = run_scenario(config, out_dir=tmp_path)

    outer = [row["nmse_outer_db"] for row in run.results]
    assert len(outer) == 10
    assert sum(value <= -30.0 for value in outer) >= 8, f"outer NMSE per seed: {np.round(outer, 1).tolist()}"


def test_selfcal_success_monotone_in_sparsity_and_dimension(tmp_path):
    """Success falls (never rises) with K and L at M = P = 128; the K = L = 2 corner succeeds"""
    trials = 10
    config = parse_scenario_config(
        {
            "scenario": "selfcal-grid",
            "iterations": 50,
            "trials": trials,
            "master_seed": 4,
            "lifting": {"factor_len": 128, "m": 128, "sparsities": [2, 8], "subspace_dims": [2, 8]},
            "noise": {"snr_db": math.inf},
        }
    )
    run = run_scenario(config, out_dir=tmp_path)

    rate = {}
    for row in run.results:
        key = (row["sparsity"], row["subspace_dim"])
        rate[key] = rate.get(key, 0.0) + bool(row["success"]) / trials

    slack = 1.0 / trials
    for dim in (2, 8):
        assert rate[(2, dim)] >= rate[(8, dim)] - slack, rate
    for sparsity in (2, 8):
        assert rate[(sparsity, 2)] >= rate[(sparsity, 8)] - slack, rate
    assert rate[(2, 2)] >= 0.9, rate
