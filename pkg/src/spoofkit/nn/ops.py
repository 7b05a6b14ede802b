"""Forward-pass primitives over rank-4 tensors [batch, channel, freq, time].

All tensors are float32, C-order; reductions and convolutions accumulate in
float64. Convolution is cross-correlation (no kernel flip) with zero
padding. Every primitive is pure and deterministic given (input, params,
seed).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import expit

from ..errors import ConfigError, DegenerateBatchError, DimensionError
from . import backend


def as_tensor4(data) -> np.ndarray:
    """Validate and coerce to a float32 C-order [N, C, F, T] array."""
    x = np.ascontiguousarray(data, dtype=np.float32)
    if x.ndim != 4:
        raise DimensionError(f"expected rank-4 tensor, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise DimensionError("tensor entries must be finite")
    return x


def same_padding(kernel: int, dilation: int = 1) -> int:
    """Padding that keeps the axis length under stride 1 (odd kernels only)."""
    if kernel % 2 == 0:
        raise ConfigError(f"same-padding requires an odd kernel, got {kernel}")
    return dilation * (kernel - 1) // 2


@dataclass
class ConvParams:
    """Weights [C_out, C_in/groups, k_f, k_t] plus geometry."""

    weights: np.ndarray
    bias: np.ndarray | None = None
    stride: tuple[int, int] = (1, 1)
    padding: tuple[int, int] = (0, 0)
    dilation: tuple[int, int] = (1, 1)
    groups: int = 1

    def __post_init__(self):
        self.weights = np.ascontiguousarray(self.weights, dtype=np.float32)
        if self.weights.ndim != 4:
            raise DimensionError("conv weights must be rank 4")
        if self.weights.shape[2] < 1 or self.weights.shape[3] < 1:
            raise DimensionError("kernel dims must be >= 1")
        if self.bias is not None:
            self.bias = np.ascontiguousarray(self.bias, dtype=np.float32)
            if self.bias.shape != (self.weights.shape[0],):
                raise DimensionError("bias must have one entry per output channel")
        if self.groups < 1:
            raise ConfigError("groups must be >= 1")
        if self.weights.shape[0] % self.groups != 0:
            raise DimensionError("C_out must be divisible by groups")
        if any(s < 1 for s in self.stride) or any(d < 1 for d in self.dilation):
            raise ConfigError("stride and dilation must be >= 1")
        if any(p < 0 for p in self.padding):
            raise ConfigError("padding must be >= 0")


def conv_output_shape(size: int, kernel: int, stride: int, padding: int,
                      dilation: int) -> int:
    return (size + 2 * padding - dilation * (kernel - 1) - 1) // stride + 1


def conv2d(x: np.ndarray, params: ConvParams) -> np.ndarray:
    """General 2-D cross-correlation with zero padding."""
    if x.ndim != 4:
        raise DimensionError(f"conv2d input must be rank 4, got {x.shape}")
    c_in = x.shape[1]
    if c_in % params.groups != 0:
        raise DimensionError(
            f"C_in={c_in} not divisible by groups={params.groups}")
    if params.weights.shape[1] != c_in // params.groups:
        raise DimensionError(
            f"weights expect C_in/groups={params.weights.shape[1]}, "
            f"got C_in={c_in} with groups={params.groups}")
    f_out = conv_output_shape(x.shape[2], params.weights.shape[2],
                              params.stride[0], params.padding[0],
                              params.dilation[0])
    t_out = conv_output_shape(x.shape[3], params.weights.shape[3],
                              params.stride[1], params.padding[1],
                              params.dilation[1])
    if f_out < 1 or t_out < 1:
        raise DimensionError(
            f"conv output would be empty ({f_out} x {t_out}) for input "
            f"{x.shape} and kernel {params.weights.shape}")
    x = np.ascontiguousarray(x, dtype=np.float32)
    return backend.conv2d_raw(
        x, params.weights, params.bias,
        params.stride[0], params.stride[1],
        params.padding[0], params.padding[1],
        params.dilation[0], params.dilation[1], params.groups)


def depthwise_conv(x: np.ndarray, params: ConvParams) -> np.ndarray:
    """conv2d specialized to groups == C_in (one filter per channel)."""
    if params.groups != x.shape[1]:
        raise DimensionError(
            f"depthwise conv requires groups == C_in ({x.shape[1]}), "
            f"got groups={params.groups}")
    return conv2d(x, params)


def pointwise_conv(x: np.ndarray, params: ConvParams) -> np.ndarray:
    """conv2d specialized to a 1x1 kernel (pure channel mixing)."""
    if params.weights.shape[2:] != (1, 1):
        raise DimensionError("pointwise conv requires a 1x1 kernel")
    if params.groups != 1 or params.stride != (1, 1) \
            or params.padding != (0, 0) or params.dilation != (1, 1):
        raise ConfigError("pointwise conv must be plain (no stride/pad/dil/groups)")
    return conv2d(x, params)


BATCH_STAT = "batch-stat"
RUNNING_STAT = "running-stat"


@dataclass
class NormParams:
    """Per-channel scale/shift and running statistics for batch norm."""

    gamma: np.ndarray
    beta: np.ndarray
    running_mean: np.ndarray
    running_var: np.ndarray
    epsilon: float = 1e-5
    mode: str = RUNNING_STAT

    def __post_init__(self):
        for name in ("gamma", "beta", "running_mean", "running_var"):
            setattr(self, name, np.asarray(getattr(self, name), dtype=np.float64))
        if self.epsilon <= 0:
            raise ConfigError("epsilon must be > 0")
        if np.any(self.running_var < 0):
            raise ConfigError("running_var must be non-negative")
        if self.mode not in (BATCH_STAT, RUNNING_STAT):
            raise ConfigError(f"unknown norm mode {self.mode!r}")

    @classmethod
    def identity(cls, channels: int, mode: str = RUNNING_STAT) -> "NormParams":
        return cls(gamma=np.ones(channels), beta=np.zeros(channels),
                   running_mean=np.zeros(channels), running_var=np.ones(channels),
                   mode=mode)


def _normalize(x64: np.ndarray, norm: NormParams) -> np.ndarray:
    """Core of batch norm on a float64 [N, C, F, T] block."""
    if norm.mode == BATCH_STAT:
        n_stat = x64.shape[0] * x64.shape[2] * x64.shape[3]
        if n_stat <= 1:
            raise DegenerateBatchError(
                "batch-stat normalization needs more than one value per channel")
        mean = x64.mean(axis=(0, 2, 3))
        var = x64.var(axis=(0, 2, 3))
    else:
        mean = norm.running_mean
        var = norm.running_var
    scale = norm.gamma / np.sqrt(var + norm.epsilon)
    shift = norm.beta - mean * scale
    return x64 * scale[None, :, None, None] + shift[None, :, None, None]


def batch_norm(x: np.ndarray, norm: NormParams) -> np.ndarray:
    """Normalize per channel over (N, F, T), then scale and shift."""
    if x.ndim != 4:
        raise DimensionError("batch_norm input must be rank 4")
    if norm.gamma.shape[0] != x.shape[1]:
        raise DimensionError(
            f"norm has {norm.gamma.shape[0]} channels, input has {x.shape[1]}")
    return _normalize(x.astype(np.float64), norm).astype(np.float32)


def subspectral_norm(x: np.ndarray, n_subbands: int,
                     norm_per_band: Sequence[NormParams]) -> np.ndarray:
    """Batch norm applied independently to contiguous frequency sub-bands.

    F is zero-padded up to a multiple of n_subbands, normalized band by
    band, then cropped back.
    """
    if n_subbands < 1:
        raise ConfigError("n_subbands must be >= 1")
    if len(norm_per_band) != n_subbands:
        raise DimensionError(
            f"expected {n_subbands} NormParams, got {len(norm_per_band)}")
    if x.ndim != 4:
        raise DimensionError("subspectral_norm input must be rank 4")
    f = x.shape[2]
    pad = (-f) % n_subbands
    x64 = x.astype(np.float64)
    if pad:
        x64 = np.pad(x64, ((0, 0), (0, 0), (0, pad), (0, 0)))
    band = x64.shape[2] // n_subbands
    out = np.empty_like(x64)
    for b in range(n_subbands):
        sl = slice(b * band, (b + 1) * band)
        out[:, :, sl, :] = _normalize(x64[:, :, sl, :], norm_per_band[b])
    return out[:, :, :f, :].astype(np.float32)


def mfm(x: np.ndarray) -> np.ndarray:
    """Max feature map: element-wise max across channel halves, C -> C/2."""
    c = x.shape[1]
    if c % 2 != 0:
        raise DimensionError(f"mfm needs an even channel count, got {c}")
    return np.maximum(x[:, :c // 2], x[:, c // 2:])


def swish(x: np.ndarray) -> np.ndarray:
    return (x * expit(x)).astype(np.float32)


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, np.float32(0.0))


def max_pool2(x: np.ndarray) -> np.ndarray:
    """2x2 max pooling, stride 2, floor semantics (odd edges dropped)."""
    n, c, f, t = x.shape
    f2, t2 = f // 2, t // 2
    if f2 < 1 or t2 < 1:
        raise DimensionError(f"input {x.shape} too small for 2x2 pooling")
    blocks = x[:, :, :f2 * 2, :t2 * 2].reshape(n, c, f2, 2, t2, 2)
    return blocks.max(axis=(3, 5))


def global_avg_pool(x: np.ndarray) -> np.ndarray:
    """Mean over (F, T) per channel -> [N, C]."""
    return x.mean(axis=(2, 3), dtype=np.float64).astype(np.float32)


def spatial_dropout(x: np.ndarray, rate: float, rng: np.random.Generator | None,
                    training: bool) -> np.ndarray:
    """Zero whole channels with probability ``rate`` during training.

    Survivors are scaled by 1/(1-rate) so inference is an exact identity.
    """
    if not 0.0 <= rate < 1.0:
        raise ConfigError(f"dropout rate must be in [0, 1), got {rate}")
    if not training or rate == 0.0:
        return x
    if rng is None:
        raise ConfigError("training-mode dropout needs an rng")
    keep = (rng.random((x.shape[0], x.shape[1])) >= rate)
    scale = (keep / (1.0 - rate)).astype(np.float32)
    return x * scale[:, :, None, None]


def freq_avg(x: np.ndarray) -> np.ndarray:
    """Average over the frequency axis -> [N, C, 1, T]."""
    return x.mean(axis=2, keepdims=True, dtype=np.float64).astype(np.float32)


def broadcast_freq(x: np.ndarray, n_freq: int) -> np.ndarray:
    """Expand [N, C, 1, T] along the frequency axis to [N, C, F, T]."""
    if x.ndim != 4 or x.shape[2] != 1:
        raise DimensionError(
            f"broadcast_freq expects [N, C, 1, T], got {x.shape}")
    return np.ascontiguousarray(
        np.broadcast_to(x, (x.shape[0], x.shape[1], n_freq, x.shape[3])))
