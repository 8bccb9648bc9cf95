"""
Gaussianity diagnostics for VAMP error vectors

For a run with the oracle initialization, p_k = r₁ₖ − x0 and
q_k = Vᵀ(r₂ₖ − x0) should look like i.i.d. Gaussians with variances τ₁ₖ
and τ₂ₖ from state evolution.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List

import numpy as np
from scipy import stats

from solvers.problem import ProblemInstance
from solvers.vamp import VampTrajectory
from state_evolution.recursion import SeTrajectory
from utils.exceptions import InvalidDimensionError

GAUSSIANITY_COLUMNS = (
    "k",
    "var_p",
    "tau1",
    "ratio_p",
    "kurtosis_p",
    "normality_p",
    "var_q",
    "tau2",
    "ratio_q",
    "kurtosis_q",
    "normality_q",
)


@dataclass
class ErrorVectorStats:
    variance: float
    excess_kurtosis: float
    normality_pvalue: float

    @classmethod
    def of(cls, e: np.ndarray) -> "ErrorVectorStats":
        # D'Agostino-Pearson needs at least 8 samples
        pvalue = float(stats.normaltest(e).pvalue) if e.size >= 8 else float("nan")
        return cls(
            variance=float(np.mean(e**2)),
            excess_kurtosis=float(stats.kurtosis(e, fisher=True)),
            normality_pvalue=pvalue,
        )


@dataclass
class GaussianityRow:
    k: int
    p: ErrorVectorStats
    q: ErrorVectorStats
    tau1: float
    tau2: float

    @property
    def ratio_p(self) -> float:
        return self.p.variance / self.tau1

    @property
    def ratio_q(self) -> float:
        return self.q.variance / self.tau2

    def to_row(self) -> Dict[str, Any]:
        return {
            "k": self.k,
            "var_p": self.p.variance,
            "tau1": self.tau1,
            "ratio_p": self.ratio_p,
            "kurtosis_p": self.p.excess_kurtosis,
            "normality_p": self.p.normality_pvalue,
            "var_q": self.q.variance,
            "tau2": self.tau2,
            "ratio_q": self.ratio_q,
            "kurtosis_q": self.q.excess_kurtosis,
            "normality_q": self.q.normality_pvalue,
        }


@dataclass
class GaussianityReport:
    rows: List[GaussianityRow] = field(default_factory=list)

    def max_variance_gap(self) -> float:
        gaps = [abs(r.ratio_p - 1) for r in self.rows] + [abs(r.ratio_q - 1) for r in self.rows]
        return max(gaps) if gaps else 0.0

    def max_abs_kurtosis(self) -> float:
        values = [abs(r.p.excess_kurtosis) for r in self.rows] + [abs(r.q.excess_kurtosis) for r in self.rows]
        return max(values) if values else 0.0


def gaussianity_diagnostics(
    trajectory: VampTrajectory,
    instance: ProblemInstance,
    se: SeTrajectory,
) -> GaussianityReport:
    """Per-iteration variance, excess kurtosis and normality p-value of p_k and q_k"""
    x0 = trajectory.x0 if trajectory.x0 is not None else instance.x0
    if x0 is None:
        raise InvalidDimensionError("gaussianity diagnostics need the truth x0")

    report = GaussianityReport()
    for state, se_state in zip(trajectory.states, se.states):
        p = state.r1 - x0
        q = instance.operator.v_adjoint(state.r2 - x0)
        report.rows.append(
            GaussianityRow(
                k=state.k,
                p=ErrorVectorStats.of(p),
                q=ErrorVectorStats.of(q),
                tau1=se_state.tau1,
                tau2=se_state.tau2,
            )
        )
    return report
