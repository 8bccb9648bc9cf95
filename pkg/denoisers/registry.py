"""
Build denoisers from plain parameter mappings (config sections, CLI)
"""

from pathlib import Path
from typing import Any, Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional

from loguru import logger

from denoisers.base import DenoiserKind, DenoiserSpec, DivergenceMode
from denoisers.cnn import CnnStack
from denoisers.convolution import FirConvolution
from denoisers.divergence import DivergenceKind
from denoisers.group import GroupSoftThreshold
from denoisers.lifted import LiftedRankOne
from denoisers.separable import BernoulliGaussianMmse, SoftThreshold, WaveletSoftThreshold
from denoisers.svt import SingularValueThreshold
from utils.exceptions import InvalidDenoiserError


# Options every kind accepts; they choose the divergence estimator
DIVERGENCE_OPTIONS = frozenset({"divergence", "probes", "epsilon"})

KIND_PARAMS: Dict[DenoiserKind, FrozenSet[str]] = {
    DenoiserKind.SOFT_THRESHOLD: frozenset({"threshold", "threshold_scale"}),
    DenoiserKind.BG_MMSE: frozenset({"rho", "sigma_x2"}),
    DenoiserKind.GROUP_SOFT_THRESHOLD: frozenset({"group_size", "threshold", "threshold_scale"}),
    DenoiserKind.FIR_CONVOLUTION: frozenset({"taps"}),
    DenoiserKind.CNN_STACK: frozenset({"weights_file"}),
    DenoiserKind.SVT: frozenset({"shape", "threshold_scale"}),
    DenoiserKind.LIFTED_RANK_ONE: frozenset(
        {"subspace_dim", "factor_len", "rho", "sigma_c2", "sigma_b2", "inner_iters", "clamp"}
    ),
    DenoiserKind.WAVELET_SOFT_THRESHOLD: frozenset({"side", "levels", "threshold", "threshold_scale"}),
}


def unknown_params(kind: DenoiserKind, names: Iterable[str], allow_divergence: bool = True) -> List[str]:
    """Parameter names `kind` does not accept, sorted"""
    allowed = KIND_PARAMS[kind] | (DIVERGENCE_OPTIONS if allow_divergence else frozenset())
    return sorted(set(names) - allowed)


def _pick(params: Mapping[str, Any], *names: str) -> Dict[str, Any]:
    return {name: params[name] for name in names if params.get(name) is not None}


def _soft(params, mode):
    return SoftThreshold(**_pick(params, "threshold", "threshold_scale"), divergence_mode=mode)


def _bg(params, mode):
    return BernoulliGaussianMmse(**_pick(params, "rho", "sigma_x2"), divergence_mode=mode)


def _group(params, mode):
    return GroupSoftThreshold(
        **_pick(params, "group_size", "threshold", "threshold_scale"), divergence_mode=mode
    )


def _fir(params, mode):
    return FirConvolution(params.get("taps") or [], divergence_mode=mode)


def _cnn(params, mode):
    weights = params.get("weights_file")
    if not weights:
        raise InvalidDenoiserError("cnn-stack needs a weights_file")
    return CnnStack.from_file(Path(weights), divergence_mode=mode)


def _svt(params, mode):
    if not params.get("shape"):
        raise InvalidDenoiserError("svt needs a shape [N1, N2]")
    return SingularValueThreshold(tuple(params["shape"]), params.get("threshold_scale"), divergence_mode=mode)


def _lifted(params, mode):
    clamp = params.get("clamp") or {}
    return LiftedRankOne(
        subspace_dim=params["subspace_dim"],
        factor_len=params["factor_len"],
        **_pick(params, "rho", "sigma_c2", "sigma_b2", "inner_iters"),
        clamp={int(k): float(v) for k, v in clamp.items()},
        divergence_mode=mode,
    )


def _wavelet(params, mode):
    return WaveletSoftThreshold(
        **_pick(params, "side", "levels", "threshold", "threshold_scale"), divergence_mode=mode
    )


BUILDERS: Dict[DenoiserKind, Callable[[Mapping[str, Any], Optional[DivergenceMode]], DenoiserSpec]] = {
    DenoiserKind.SOFT_THRESHOLD: _soft,
    DenoiserKind.BG_MMSE: _bg,
    DenoiserKind.GROUP_SOFT_THRESHOLD: _group,
    DenoiserKind.FIR_CONVOLUTION: _fir,
    DenoiserKind.CNN_STACK: _cnn,
    DenoiserKind.SVT: _svt,
    DenoiserKind.LIFTED_RANK_ONE: _lifted,
    DenoiserKind.WAVELET_SOFT_THRESHOLD: _wavelet,
}


def build_denoiser(kind: str, **params: Any) -> DenoiserSpec:
    """
    Construct a denoiser by kind name

    Args:
        kind: A DenoiserKind value, e.g. "soft-threshold"
        **params: Kind-specific parameters plus optional `divergence`
            ("analytic" | "monte-carlo"), `probes` and `epsilon`

    Returns:
        A validated DenoiserSpec
    """
    try:
        denoiser_kind = DenoiserKind(kind)
    except ValueError as e:
        known = ", ".join(k.value for k in DenoiserKind)
        raise InvalidDenoiserError(f"unknown denoiser kind {kind!r}; expected one of {known}") from e

    unknown = unknown_params(denoiser_kind, params)
    if unknown:
        accepted = ", ".join(sorted(KIND_PARAMS[denoiser_kind] | DIVERGENCE_OPTIONS))
        raise InvalidDenoiserError(
            f"unknown parameter(s) for {kind}: {', '.join(unknown)}; accepted: {accepted}"
        )

    mode = None
    divergence = params.get("divergence")
    if divergence is not None:
        if DivergenceKind(divergence) == DivergenceKind.MONTE_CARLO:
            mode = DivergenceMode.monte_carlo(params.get("probes"), params.get("epsilon"))
        else:
            mode = DivergenceMode.analytic()

    try:
        spec = BUILDERS[denoiser_kind](params, mode)
    except (KeyError, TypeError) as e:
        raise InvalidDenoiserError(f"bad parameters for {kind}: {e}") from e
    logger.debug(f"Built denoiser {spec!r}")
    return spec
