"""
Experiment configuration for `pnpvamp run`
Strict TOML schema: every field has a default and unknown keys are rejected
"""

import math
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from denoisers.base import DenoiserKind
from denoisers.divergence import DivergenceKind
from denoisers.registry import unknown_params
from lifting.instances import OperatorStyle
from solvers.problem import SignalKind
from solvers.vamp import InitMode
from utils.constants import (
    DEFAULT_ITERATIONS,
    DEFAULT_TAU10,
    DEFAULT_TRIALS,
    LIFTED_INNER_ITERS,
    SE_TRIALS,
)
from utils.exceptions import ConfigError


class ScenarioName(str, Enum):
    SE_VALIDATE = "se-validate"
    IMAGE_RECOVERY = "image-recovery"
    COND_SWEEP = "cond-sweep"
    RATE_SWEEP = "rate-sweep"
    CSMU_SWEEP = "csmu-sweep"
    CSMU_COND_SWEEP = "csmu-cond-sweep"
    SELFCAL_GRID = "selfcal-grid"
    GEN_RECURSION_CHECK = "gen-recursion-check"


class OperatorChoice(str, Enum):
    DENSE_HAAR = "dense-haar"
    FAST_JPHD = "fast-jphd"
    IID_GAUSSIAN = "iid-gaussian"
    IDENTITY = "identity"


class ImageRoute(str, Enum):
    WAVELET = "wavelet"
    DIRECT = "direct"
    BOTH = "both"


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", use_enum_values=False)


class OperatorSection(_Section):
    kind: OperatorChoice = OperatorChoice.DENSE_HAAR
    cond: float = Field(default=1.0, ge=1.0, description="Condition number s₁/s_M")
    conds: List[float] = Field(default_factory=lambda: [1.0, 10.0, 100.0, 1000.0])

    @field_validator("conds")
    @classmethod
    def _conds_at_least_one(cls, value: List[float]) -> List[float]:
        if not value or any(c < 1 for c in value):
            raise ValueError("conds must be a non-empty list of values ≥ 1")
        return value


class DenoiserSection(_Section):
    kind: DenoiserKind = DenoiserKind.BG_MMSE
    params: Dict[str, Any] = Field(default_factory=dict, description="Kind-specific parameters")
    divergence: Optional[DivergenceKind] = None
    probes: Optional[int] = Field(default=None, ge=1)
    epsilon: Optional[float] = Field(default=None, gt=0.0)

    @model_validator(mode="after")
    def _known_params(self) -> "DenoiserSection":
        unknown = unknown_params(self.kind, self.params, allow_divergence=False)
        if unknown:
            raise ValueError(
                f"unknown {self.kind.value} params: {', '.join(unknown)}"
                " (divergence, probes and epsilon belong to the [denoiser] section itself)"
            )
        return self

    def build_params(self) -> Dict[str, Any]:
        params = dict(self.params)
        if self.divergence is not None:
            params["divergence"] = self.divergence.value
        if self.probes is not None:
            params["probes"] = self.probes
        if self.epsilon is not None:
            params["epsilon"] = self.epsilon
        return params


class SignalSection(_Section):
    kind: SignalKind = SignalKind.BERNOULLI_GAUSSIAN
    rho: float = Field(default=0.1, gt=0.0, lt=1.0)
    sigma2: float = Field(default=1.0, gt=0.0)
    group_size: int = Field(default=4, ge=1)
    ar_coeff: float = Field(default=0.9, gt=-1.0, lt=1.0)
    image_path: Optional[str] = None
    side: int = Field(default=64, ge=2)
    regions: int = Field(default=8, ge=0)


class NoiseSection(_Section):
    snr_db: float = Field(default=40.0, description="inf for noiseless measurements")
    gamma_w0: Optional[float] = Field(default=None, gt=0.0)
    gamma_w: Optional[float] = Field(default=None, gt=0.0)

    @property
    def noiseless(self) -> bool:
        return self.gamma_w0 is None and math.isinf(self.snr_db) and self.snr_db > 0


class VampSection(_Section):
    init_mode: InitMode = InitMode.ZERO_R
    tau10: float = Field(default=DEFAULT_TAU10, gt=0.0)
    gamma10: Optional[float] = Field(default=None, ge=0.0)
    damping: float = Field(default=1.0, gt=0.0, le=1.0)
    tol: float = Field(default=0.0, ge=0.0)


class StateEvolutionSection(_Section):
    mc_trials: int = Field(default=SE_TRIALS, ge=1)


class ImageSection(_Section):
    route: ImageRoute = ImageRoute.BOTH
    levels: Optional[int] = Field(default=None, ge=0, description="Haar depth, log2(side) by default")
    threshold_scale: float = Field(default=1.0, ge=0.0)
    write_images: bool = True


class LiftingSection(_Section):
    subspace_dim: int = Field(default=11, ge=1, description="L")
    factor_len: int = Field(default=64, ge=1, description="P")
    sparsity: int = Field(default=4, ge=1, description="K")
    b1_known: float = Field(default=math.sqrt(20.0))
    operator_style: OperatorStyle = OperatorStyle.IID_GAUSSIAN
    rates: List[float] = Field(default_factory=lambda: [0.4, 0.6, 0.8], description="M/P values")
    rate: float = Field(default=0.6, gt=0.0, description="M/P for csmu-cond-sweep")
    m: int = Field(default=128, ge=1, description="M for the self-calibration grid")
    sparsities: List[int] = Field(default_factory=lambda: [2, 4, 8])
    subspace_dims: List[int] = Field(default_factory=lambda: [2, 4, 8])
    inner_iters: int = Field(default=LIFTED_INNER_ITERS, ge=1)


class ScenarioConfig(_Section):
    """
    One experiment: scenario name, problem size, sections for each component

    `n` is ignored by image scenarios (the image fixes N) and by lifting
    scenarios (N = L·P).
    """

    scenario: ScenarioName = ScenarioName.SE_VALIDATE
    n: int = Field(default=4096, ge=1)
    rate: float = Field(default=0.5, gt=0.0, description="M/N")
    rates: List[float] = Field(default_factory=lambda: [0.1, 0.2, 0.3, 0.4, 0.5])
    iterations: int = Field(default=DEFAULT_ITERATIONS, ge=1)
    trials: int = Field(default=DEFAULT_TRIALS, ge=1)
    master_seed: int = Field(default=0, ge=0, lt=2**64)
    output_dir: Optional[str] = None
    threads: Optional[int] = Field(default=None, ge=1)
    run_amp: bool = Field(default=True, description="Also run the AMP baseline in sweeps")

    operator: OperatorSection = Field(default_factory=OperatorSection)
    denoiser: DenoiserSection = Field(default_factory=DenoiserSection)
    signal: SignalSection = Field(default_factory=SignalSection)
    noise: NoiseSection = Field(default_factory=NoiseSection)
    vamp: VampSection = Field(default_factory=VampSection)
    state_evolution: StateEvolutionSection = Field(default_factory=StateEvolutionSection)
    image: ImageSection = Field(default_factory=ImageSection)
    lifting: LiftingSection = Field(default_factory=LiftingSection)

    @field_validator("rates")
    @classmethod
    def _rates_positive(cls, value: List[float]) -> List[float]:
        if not value or any(r <= 0 for r in value):
            raise ValueError("rates must be a non-empty list of positive values")
        return value

    @model_validator(mode="after")
    def _lifting_dims(self) -> "ScenarioConfig":
        lift = self.lifting
        if lift.sparsity > lift.factor_len:
            raise ValueError(f"lifting.sparsity {lift.sparsity} exceeds factor_len {lift.factor_len}")
        return self

    def resolved(self) -> Dict[str, Any]:
        """Plain JSON-ready dict of every field, defaults included"""
        return self.model_dump(mode="json")


def parse_scenario_config(data: Dict[str, Any]) -> ScenarioConfig:
    try:
        return ScenarioConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"invalid scenario config:\n{e}") from e


def load_scenario_config(path: Path) -> ScenarioConfig:
    """
    Parse a TOML experiment file into a ScenarioConfig

    Raises:
        ConfigError: unreadable file, bad TOML, unknown keys or invalid values
    """
    path = Path(path)
    try:
        with open(path, "rb") as f:
            data = tomllib.load(f)
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"{path} is not valid TOML: {e}") from e
    return parse_scenario_config(data)
