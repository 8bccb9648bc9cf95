"""Lifted bilinear problems: instance builders, oracle estimates and recovery scoring"""

from lifting.instances import (
    LiftedInstance,
    OperatorStyle,
    build_lifted_operator,
    lifted_denoiser,
    make_csmu_instance,
    make_selfcal_instance,
)
from lifting.oracles import oracle_b_estimate, oracle_c_estimate, oracle_nmse_db
from lifting.scoring import LIFT_COLUMNS, RecoveryScore, score_recovery

__all__ = [
    "LIFT_COLUMNS",
    "LiftedInstance",
    "OperatorStyle",
    "RecoveryScore",
    "build_lifted_operator",
    "lifted_denoiser",
    "make_csmu_instance",
    "make_selfcal_instance",
    "oracle_b_estimate",
    "oracle_c_estimate",
    "oracle_nmse_db",
    "score_recovery",
]
