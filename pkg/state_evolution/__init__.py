"""State evolution: closed-form and Monte Carlo error functions, SE recursions and diagnostics"""

from state_evolution.denoiser_functions import (
    MonteCarloEstimate,
    denoiser_error_E1,
    denoiser_sensitivity_A1,
    error_and_sensitivity,
    stein_sensitivity_A1,
)
from state_evolution.diagnostics import GaussianityReport, gaussianity_diagnostics
from state_evolution.general import (
    GenRecursionSpec,
    general_recursion_run,
    general_se_run,
    vamp_recursion_spec,
    vamp_se_run,
)
from state_evolution.lmmse_functions import lmmse_error_E2, lmmse_sensitivity_A2
from state_evolution.recursion import SE_COLUMNS, SeState, SeTrajectory, se_run

__all__ = [
    "GaussianityReport",
    "GenRecursionSpec",
    "MonteCarloEstimate",
    "SE_COLUMNS",
    "SeState",
    "SeTrajectory",
    "denoiser_error_E1",
    "denoiser_sensitivity_A1",
    "error_and_sensitivity",
    "gaussianity_diagnostics",
    "general_recursion_run",
    "general_se_run",
    "lmmse_error_E2",
    "lmmse_sensitivity_A2",
    "se_run",
    "stein_sensitivity_A1",
    "vamp_recursion_spec",
    "vamp_se_run",
]
