"""Spectrogram augmentation: mixup and frequency feature masking (FFM).

Every transform is pure: inputs are never mutated, randomness comes from a
caller-supplied ``numpy.random.Generator``, and identical (input, config,
seed) triples produce identical outputs and reports.

FFM zeroes frequency bands of a log spectrogram. Three policies exist:
low-frequency masking (rows [0, c)), high-frequency masking (rows
[s, n_freq)) and random band masking (one or more bands anywhere, overlaps
allowed). ``apply_ffm`` gates each policy with an independent Bernoulli
draw and applies the active ones in the fixed order low -> high -> random.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DimensionError
from .features import Spectrogram

RowRange = tuple[int, int]  # half-open [start, end) over frequency rows


@dataclass(frozen=True)
class MixupParams:
    """Beta-distribution shape parameter for mixup."""

    alpha: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise ConfigError("mixup alpha must be > 0")
        if not 0.4 <= self.alpha <= 0.9:
            warnings.warn(
                f"mixup alpha {self.alpha} is outside the usual 0.4-0.9 range",
                stacklevel=2)


@dataclass(frozen=True)
class Label:
    """Soft class label in [0, 1]; 1 = bonafide, 0 = fake."""

    value: float

    def __post_init__(self):
        if not np.isfinite(self.value) or not 0.0 <= self.value <= 1.0:
            raise ConfigError(f"label must be finite and in [0, 1], got {self.value}")


@dataclass(frozen=True)
class FFMConfig:
    p_low: float = 0.5
    p_high: float = 0.5
    p_rand: float = 0.5
    low_max_extent: float = 0.15
    high_max_extent: float = 0.15
    rand_max_bands: int = 3
    rand_max_band_width: float = 0.15

    def __post_init__(self):
        for name in ("p_low", "p_high", "p_rand"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1], got {p}")
        for name in ("low_max_extent", "high_max_extent", "rand_max_band_width"):
            e = getattr(self, name)
            if not 0.0 < e < 1.0:
                raise ConfigError(f"{name} must be in (0, 1), got {e}")
        if self.rand_max_bands < 1:
            raise ConfigError("rand_max_bands must be >= 1")


@dataclass
class MaskReport:
    """What apply_ffm did: row ranges for each policy, None when skipped."""

    applied_low: RowRange | None = None
    applied_high: RowRange | None = None
    applied_rand: list[RowRange] | None = None

    def to_json_dict(self) -> dict:
        return {
            "applied_low": list(self.applied_low) if self.applied_low else None,
            "applied_high": list(self.applied_high) if self.applied_high else None,
            "applied_rand": ([list(r) for r in self.applied_rand]
                             if self.applied_rand is not None else None),
        }


def sample_lambda(params: MixupParams, rng: np.random.Generator) -> float:
    """Draw the mixup weight from Beta(alpha, alpha)."""
    return float(rng.beta(params.alpha, params.alpha))


def mixup(x_i: Spectrogram, x_j: Spectrogram, y_i: Label, y_j: Label,
          lam: float) -> tuple[Spectrogram, Label]:
    """Convex combination lam*x_i + (1-lam)*x_j of samples and labels."""
    if x_i.data.shape != x_j.data.shape:
        raise DimensionError(
            f"mixup inputs differ in shape: {x_i.data.shape} vs {x_j.data.shape}")
    if not 0.0 <= lam <= 1.0:
        raise ConfigError(f"lambda must be in [0, 1], got {lam}")
    if lam == 1.0:
        return x_i, y_i
    if lam == 0.0:
        return x_j, y_j
    mixed = lam * x_i.data.astype(np.float64) + (1.0 - lam) * x_j.data.astype(np.float64)
    label = Label(lam * y_i.value + (1.0 - lam) * y_j.value)
    return Spectrogram(mixed.astype(np.float32)), label


def _max_rows(extent: float, n_freq: int) -> int:
    return max(1, int(extent * n_freq))


def mask_low_freq(spec: Spectrogram, max_extent: float,
                  rng: np.random.Generator) -> tuple[Spectrogram, RowRange]:
    """Zero rows [0, c) with c drawn uniformly from 1..floor(extent*n_freq)."""
    if spec.n_freq < 2:
        raise ConfigError("need at least 2 frequency bins to mask")
    cutoff = int(rng.integers(1, _max_rows(max_extent, spec.n_freq) + 1))
    out = spec.data.copy()
    out[:cutoff, :] = 0.0
    return Spectrogram(out), (0, cutoff)


def mask_high_freq(spec: Spectrogram, max_extent: float,
                   rng: np.random.Generator) -> tuple[Spectrogram, RowRange]:
    """Zero rows [s, n_freq) with s drawn from the top extent of the axis."""
    if spec.n_freq < 2:
        raise ConfigError("need at least 2 frequency bins to mask")
    lowest_start = spec.n_freq - _max_rows(max_extent, spec.n_freq)
    start = int(rng.integers(lowest_start, spec.n_freq))
    out = spec.data.copy()
    out[start:, :] = 0.0
    return Spectrogram(out), (start, spec.n_freq)


def mask_random_bands(spec: Spectrogram, max_bands: int, max_band_width: float,
                      rng: np.random.Generator) -> tuple[Spectrogram, list[RowRange]]:
    """Zero 1..max_bands random-width bands at random rows (overlap allowed)."""
    if spec.n_freq < 2:
        raise ConfigError("need at least 2 frequency bins to mask")
    n_bands = int(rng.integers(1, max_bands + 1))
    width_cap = _max_rows(max_band_width, spec.n_freq)
    out = spec.data.copy()
    ranges: list[RowRange] = []
    for _ in range(n_bands):
        width = int(rng.integers(1, width_cap + 1))
        start = int(rng.integers(0, spec.n_freq - width + 1))
        out[start:start + width, :] = 0.0
        ranges.append((start, start + width))
    return Spectrogram(out), ranges


def apply_ffm(spec: Spectrogram, config: FFMConfig,
              rng: np.random.Generator) -> tuple[Spectrogram, MaskReport]:
    """Gate the three masking policies independently and run the active ones.

    Draw order is fixed (gate, then that policy's own draws, for low, high,
    random in turn) so a given seed always yields the same augmentation.
    """
    report = MaskReport()
    out = spec
    if rng.random() < config.p_low:
        out, report.applied_low = mask_low_freq(out, config.low_max_extent, rng)
    if rng.random() < config.p_high:
        out, report.applied_high = mask_high_freq(out, config.high_max_extent, rng)
    if rng.random() < config.p_rand:
        out, report.applied_rand = mask_random_bands(
            out, config.rand_max_bands, config.rand_max_band_width, rng)
    if out is spec:
        out = Spectrogram(spec.data.copy())
    return out, report
