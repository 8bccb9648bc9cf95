"""VAMP and AMP solvers for y = A·x0 + w"""

from solvers.amp import AMP_COLUMNS, AmpState, AmpTrajectory, amp_run
from solvers.lmmse import lmmse_estimate
from solvers.problem import (
    ProblemInstance,
    SignalKind,
    SignalSpec,
    draw_signal,
    gamma_w0_for_snr,
    make_instance,
)
from solvers.vamp import VAMP_COLUMNS, InitMode, VampConfig, VampState, VampTrajectory, vamp_run

__all__ = [
    "AMP_COLUMNS",
    "AmpState",
    "AmpTrajectory",
    "InitMode",
    "ProblemInstance",
    "SignalKind",
    "SignalSpec",
    "VAMP_COLUMNS",
    "VampConfig",
    "VampState",
    "VampTrajectory",
    "amp_run",
    "draw_signal",
    "gamma_w0_for_snr",
    "lmmse_estimate",
    "make_instance",
    "vamp_run",
]
