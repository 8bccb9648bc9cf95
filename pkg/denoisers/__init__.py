"""Plug-in denoisers with analytic or Monte Carlo divergences"""

from denoisers.base import DenoiserKind, DenoiserSpec, DivergenceMode
from denoisers.cnn import Activation, CnnStack, ConvLayer
from denoisers.convolution import FirConvolution
from denoisers.divergence import DivergenceEstimate, DivergenceKind
from denoisers.group import GroupSoftThreshold
from denoisers.lifted import LiftedRankOne
from denoisers.registry import build_denoiser
from denoisers.separable import (
    BernoulliGaussianMmse,
    SoftThreshold,
    WaveletSoftThreshold,
    bg_mmse_scalar,
)
from denoisers.stein import stein_identity_check
from denoisers.svt import SingularValueThreshold

__all__ = [
    "Activation",
    "BernoulliGaussianMmse",
    "CnnStack",
    "ConvLayer",
    "DenoiserKind",
    "DenoiserSpec",
    "DivergenceEstimate",
    "DivergenceKind",
    "DivergenceMode",
    "FirConvolution",
    "GroupSoftThreshold",
    "LiftedRankOne",
    "SingularValueThreshold",
    "SoftThreshold",
    "WaveletSoftThreshold",
    "bg_mmse_scalar",
    "build_denoiser",
    "stein_identity_check",
]
