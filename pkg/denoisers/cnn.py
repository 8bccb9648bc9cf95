"""
Untrained convolutional denoiser built from file-loaded weights

The input N-vector is read as a length-T sequence of d₀-channel samples
(row-major, sample by sample). Each convolutional layer computes the
causal multichannel convolution z'_n = Σ_k H_k·z_{n−k}, truncated to T
samples; activation layers act elementwise.

Weight file layout (little-endian):

    4 bytes   magic b"PNPW"
    4 bytes   uint32 header length H
    H bytes   UTF-8 JSON header:
              {"version": 1, "channels": d0,
               "layers": [{"type": "conv", "taps": K, "out": d_out, "in": d_in},
                          {"type": "relu"} | {"type": "sigmoid"}, ...]}
    rest      float64 kernels of the conv layers in order, each in C order
              with shape (taps, out, in)
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
from loguru import logger
from scipy.special import expit

from denoisers.base import DenoiserKind, DenoiserSpec, DivergenceMode
from utils.constants import CNN_WEIGHTS_MAGIC, FREQUENCY_GRID
from utils.exceptions import InvalidDenoiserError, InvalidDimensionError

ACTIVATIONS = ("relu", "sigmoid")


@dataclass(frozen=True)
class ConvLayer:
    """Multichannel FIR layer with kernel shape (taps, out, in)"""

    kernel: np.ndarray

    def __post_init__(self):
        kernel = np.asarray(self.kernel, dtype=float)
        if kernel.ndim != 3 or 0 in kernel.shape:
            raise InvalidDenoiserError(f"conv kernel must have shape (taps, out, in), got {kernel.shape}")
        if not np.all(np.isfinite(kernel)):
            raise InvalidDenoiserError("conv kernel contains non-finite weights")
        object.__setattr__(self, "kernel", kernel)

    @property
    def in_channels(self) -> int:
        return self.kernel.shape[2]

    @property
    def out_channels(self) -> int:
        return self.kernel.shape[1]

    def apply(self, z: np.ndarray) -> np.ndarray:
        length = z.shape[0]
        out = np.zeros((length, self.out_channels))
        for k in range(min(self.kernel.shape[0], length)):
            out[k:] += z[: length - k] @ self.kernel[k].T
        return out

    def gain(self) -> float:
        """max over frequency of σ_max(Σ_k H_k e^{−ikθ})"""
        response = np.fft.fft(self.kernel, n=max(FREQUENCY_GRID, self.kernel.shape[0]), axis=0)
        return float(np.max(np.linalg.svd(response, compute_uv=False)))


@dataclass(frozen=True)
class Activation:
    tag: str

    def __post_init__(self):
        if self.tag not in ACTIVATIONS:
            raise InvalidDenoiserError(f"unknown activation {self.tag!r}; expected one of {ACTIVATIONS}")

    def apply(self, z: np.ndarray) -> np.ndarray:
        if self.tag == "relu":
            return np.maximum(z, 0.0)
        return expit(z)

    def gain(self) -> float:
        return 1.0


Layer = Union[ConvLayer, Activation]


class CnnStack(DenoiserSpec):
    """g = F_L ∘ ⋯ ∘ F_1, divergence by Monte Carlo only"""

    kind = DenoiserKind.CNN_STACK
    has_analytic_divergence = False

    def __init__(
        self,
        layers: Sequence[Layer],
        channels: int = 1,
        divergence_mode: Optional[DivergenceMode] = None,
    ):
        if not layers:
            raise InvalidDenoiserError("CNN stack needs at least one layer")
        current = int(channels)
        if current < 1:
            raise InvalidDenoiserError(f"channel count must be positive, got {channels}")
        for i, layer in enumerate(layers):
            if isinstance(layer, ConvLayer):
                if layer.in_channels != current:
                    raise InvalidDenoiserError(
                        f"layer {i} expects {layer.in_channels} channels, receives {current}"
                    )
                current = layer.out_channels
            elif not isinstance(layer, Activation):
                raise InvalidDenoiserError(f"layer {i} is neither a conv layer nor an activation")
        if current != channels:
            raise InvalidDenoiserError(f"stack maps {channels} channels to {current}; a denoiser must preserve them")
        self.layers = tuple(layers)
        self.channels = int(channels)
        super().__init__(divergence_mode)

    @classmethod
    def from_file(cls, path: Path, divergence_mode: Optional[DivergenceMode] = None) -> "CnnStack":
        channels, layers = load_cnn_weights(path)
        return cls(layers, channels=channels, divergence_mode=divergence_mode)

    def _check_length(self, n: int) -> None:
        if n % self.channels:
            raise InvalidDimensionError(f"length {n} is not a multiple of {self.channels} channels")

    def _apply(self, r: np.ndarray, gamma: float) -> np.ndarray:
        z = r.reshape(-1, self.channels)
        for layer in self.layers:
            z = layer.apply(z)
        return z.ravel()

    def lipschitz_bound(self, gamma: Optional[float] = None) -> float:
        return float(np.prod([layer.gain() for layer in self.layers]))

    def params(self) -> Dict[str, Any]:
        return {"channels": self.channels, "layers": _layer_header(self.layers)}


def _layer_header(layers: Sequence[Layer]) -> List[Dict[str, Any]]:
    header = []
    for layer in layers:
        if isinstance(layer, ConvLayer):
            taps, out, inp = layer.kernel.shape
            header.append({"type": "conv", "taps": taps, "out": out, "in": inp})
        else:
            header.append({"type": layer.tag})
    return header


def save_cnn_weights(path: Path, layers: Sequence[Layer], channels: int) -> Path:
    path = Path(path)
    header = json.dumps(
        {"version": 1, "channels": int(channels), "layers": _layer_header(layers)}
    ).encode("utf-8")
    kernels = [layer.kernel.astype("<f8").tobytes() for layer in layers if isinstance(layer, ConvLayer)]
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(CNN_WEIGHTS_MAGIC)
        f.write(np.array([len(header)], dtype="<u4").tobytes())
        f.write(header)
        for blob in kernels:
            f.write(blob)
    return path


def load_cnn_weights(path: Path):
    """
    Parse a weight file

    Returns:
        (input channel count, list of layers)
    """
    path = Path(path)
    data = path.read_bytes()
    magic_len = len(CNN_WEIGHTS_MAGIC)
    if data[:magic_len] != CNN_WEIGHTS_MAGIC:
        raise InvalidDenoiserError(f"{path} is not a CNN weight file")
    (header_len,) = np.frombuffer(data, dtype="<u4", count=1, offset=magic_len)
    start = magic_len + 4
    try:
        header = json.loads(data[start : start + int(header_len)].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise InvalidDenoiserError(f"bad CNN weight header in {path}: {e}") from e

    payload = data[start + int(header_len) :]
    if len(payload) % 8:
        raise InvalidDenoiserError(f"weight payload in {path} is not a whole number of float64 values")
    weights = np.frombuffer(payload, dtype="<f8")
    offset = 0
    layers: List[Layer] = []
    for entry in header.get("layers", []):
        kind = entry.get("type")
        if kind == "conv":
            shape = (int(entry["taps"]), int(entry["out"]), int(entry["in"]))
            size = int(np.prod(shape))
            if offset + size > weights.size:
                raise InvalidDenoiserError(f"weight file {path} is truncated")
            layers.append(ConvLayer(weights[offset : offset + size].reshape(shape).astype(float)))
            offset += size
        else:
            layers.append(Activation(str(kind)))
    if offset != weights.size:
        raise InvalidDenoiserError(f"weight file {path} has {weights.size - offset} unused values")

    logger.debug(f"Loaded {len(layers)} CNN layers from {path}")
    return int(header.get("channels", 1)), layers
