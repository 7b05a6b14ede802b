"""Spectrogram features: STFT power, mel-spectrogram and constant-Q transform.

Conventions (shared by every feature so outputs stay comparable):

* Hann window (periodic form), frames centered via reflect padding.
* Frame count is always ``1 + len(samples) // hop``.
* Log compression is ``log10(value + 1e-10)`` applied to mel *power* and
  to CQT *magnitude*.
* All math runs in float64; spectrogram payloads are stored as float32.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse

from .audio import AudioClip
from .errors import ConfigError, DegenerateFilterError, InputTooShortError

LOG_EPS = 1e-10

#: The two mel configurations and the CQT configuration used throughout:
#: mel-1 = 100 bins / 1024 window / 512 hop, mel-2 = 120 / 2048 / 1024,
#: CQT = fmin 5 Hz, 100 bins, filter scale 1.
DEFAULT_SAMPLE_RATE = 16000


@dataclass(frozen=True)
class Spectrogram:
    """2-D feature matrix, frequency bins x time frames, log-scaled."""

    data: np.ndarray

    def __post_init__(self):
        data = np.ascontiguousarray(self.data, dtype=np.float32)
        if data.ndim != 2 or data.shape[0] < 1 or data.shape[1] < 1:
            raise ConfigError("Spectrogram data must be a non-empty 2-D matrix")
        if not np.all(np.isfinite(data)):
            raise ConfigError("Spectrogram entries must be finite")
        object.__setattr__(self, "data", data)

    @property
    def n_freq(self) -> int:
        return self.data.shape[0]

    @property
    def n_frames(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class MelConfig:
    """Mel-spectrogram extraction parameters.

    fmax=None means the Nyquist frequency of the clip being processed.
    """

    n_mels: int
    window_len: int
    hop: int
    fmin: float = 0.0
    fmax: float | None = None

    def __post_init__(self):
        if self.n_mels < 1:
            raise ConfigError("n_mels must be >= 1")
        if self.window_len < 2 or self.window_len % 2 != 0:
            raise ConfigError("window_len must be a positive even number")
        if not 0 < self.hop <= self.window_len:
            raise ConfigError("hop must satisfy 0 < hop <= window_len")
        if self.fmin < 0:
            raise ConfigError("fmin must be >= 0")

    def resolve_fmax(self, sample_rate: int) -> float:
        fmax = sample_rate / 2 if self.fmax is None else self.fmax
        if not self.fmin < fmax <= sample_rate / 2:
            raise ConfigError(
                f"need fmin < fmax <= sample_rate/2, got fmin={self.fmin}, "
                f"fmax={fmax}, sample_rate={sample_rate}")
        return fmax


@dataclass(frozen=True)
class CqtConfig:
    """Constant-Q transform parameters (direct kernel method)."""

    fmin: float = 5.0
    n_bins: int = 100
    filter_scale: float = 1.0
    bins_per_octave: int = 12
    hop: int = 512

    def __post_init__(self):
        if self.fmin <= 0:
            raise ConfigError("fmin must be > 0")
        if self.n_bins < 1:
            raise ConfigError("n_bins must be >= 1")
        if self.filter_scale <= 0:
            raise ConfigError("filter_scale must be > 0")
        if self.bins_per_octave < 1:
            raise ConfigError("bins_per_octave must be >= 1")
        if self.hop < 1:
            raise ConfigError("hop must be >= 1")

    @property
    def q_factor(self) -> float:
        return self.filter_scale / (2.0 ** (1.0 / self.bins_per_octave) - 1.0)

    def bin_frequencies(self) -> np.ndarray:
        k = np.arange(self.n_bins)
        return self.fmin * 2.0 ** (k / self.bins_per_octave)

    def validate_for(self, sample_rate: int) -> None:
        top = float(self.bin_frequencies()[-1])
        if top >= sample_rate / 2:
            raise ConfigError(
                f"top CQT bin at {top:.1f} Hz is not below Nyquist "
                f"({sample_rate / 2:.1f} Hz)")


MEL_CONFIG_1 = MelConfig(n_mels=100, window_len=1024, hop=512)
MEL_CONFIG_2 = MelConfig(n_mels=120, window_len=2048, hop=1024)
CQT_CONFIG = CqtConfig(fmin=5.0, n_bins=100, filter_scale=1.0)


def hz_to_mel(hz):
    """Mel scale: m = 2595 * log10(1 + f / 700)."""
    return 2595.0 * np.log10(1.0 + np.asarray(hz, dtype=np.float64) / 700.0)


def mel_to_hz(mel):
    return 700.0 * (10.0 ** (np.asarray(mel, dtype=np.float64) / 2595.0) - 1.0)


def _hann_periodic(n: int) -> np.ndarray:
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(n) / n)


def _frame_signal(samples: np.ndarray, frame_len: int, hop: int) -> np.ndarray:
    """Centered frames of a reflect-padded signal, [n_frames, frame_len]."""
    pad = frame_len // 2
    padded = np.pad(samples, pad, mode="reflect")
    n_frames = 1 + len(samples) // hop
    windows = np.lib.stride_tricks.sliding_window_view(padded, frame_len)
    return windows[::hop][:n_frames]


def stft_power(clip: AudioClip, window_len: int, hop: int) -> np.ndarray:
    """Hann-windowed squared-magnitude STFT, [window_len/2 + 1, n_frames]."""
    if window_len % 2 != 0:
        raise ConfigError("window_len must be even")
    if len(clip) < 1:
        raise InputTooShortError("clip is empty")
    if window_len > len(clip) + 2 * (window_len // 2):
        raise InputTooShortError(
            f"window_len {window_len} exceeds padded signal length")
    frames = _frame_signal(clip.samples, window_len, hop)
    spectrum = np.fft.rfft(frames * _hann_periodic(window_len), axis=1)
    power = np.abs(spectrum) ** 2
    return np.ascontiguousarray(power.T)


def mel_filterbank(sample_rate: int, n_fft: int, n_mels: int,
                   fmin: float, fmax: float) -> np.ndarray:
    """Triangular mel filterbank, [n_mels, n_fft/2 + 1].

    Centers are equally spaced on the mel scale between fmin and fmax;
    each filter is area-normalized by 2 / (upper edge - lower edge).
    """
    if not fmin < fmax <= sample_rate / 2:
        raise ConfigError(
            f"need fmin < fmax <= sample_rate/2, got {fmin}, {fmax}")
    edges_hz = mel_to_hz(np.linspace(hz_to_mel(fmin), hz_to_mel(fmax),
                                     n_mels + 2))
    fft_hz = np.arange(n_fft // 2 + 1) * (sample_rate / n_fft)

    lower = edges_hz[:-2, None]
    center = edges_hz[1:-1, None]
    upper = edges_hz[2:, None]
    rising = (fft_hz[None, :] - lower) / (center - lower)
    falling = (upper - fft_hz[None, :]) / (upper - center)
    fb = np.maximum(0.0, np.minimum(rising, falling))
    fb *= 2.0 / (upper - lower)

    empty = np.flatnonzero(~fb.any(axis=1))
    if empty.size:
        raise DegenerateFilterError(
            f"{empty.size} mel filters cover zero FFT bins "
            f"(first: filter {empty[0]}); reduce n_mels or increase n_fft")
    return fb


def melspectrogram(clip: AudioClip, config: MelConfig) -> Spectrogram:
    """Log-compressed mel power spectrogram, [n_mels, 1 + len/hop]."""
    fmax = config.resolve_fmax(clip.sample_rate)
    power = stft_power(clip, config.window_len, config.hop)
    fb = mel_filterbank(clip.sample_rate, config.window_len, config.n_mels,
                        config.fmin, fmax)
    mel_power = fb @ power
    return Spectrogram(np.log10(mel_power + LOG_EPS))


# --- constant-Q transform -------------------------------------------------
#
# Direct kernel method: bin k gets a complex kernel of length
# N_k = ceil(Q * sr / f_k) with Q = filter_scale / (2^(1/bpo) - 1),
#
#     a_k[n] = hann_periodic(N_k)[n] * exp(2j*pi*f_k*n/sr) / N_k,
#
# centered in a power-of-two analysis window. Per frame the correlation
# <frame, a_k> is evaluated in the frequency domain via Parseval:
# sum_n x[n]*conj(a[n]) = (1/N) * sum_b FFT(x)[b] * conj(FFT(a)[b]).

_KERNEL_SPARSITY = 1e-10


def _next_pow2(n: int) -> int:
    p = 1
    while p < n:
        p *= 2
    return p


def cqt_kernel_lengths(config: CqtConfig, sample_rate: int) -> np.ndarray:
    return np.ceil(config.q_factor * sample_rate
                   / config.bin_frequencies()).astype(np.int64)


def cqt_time_kernel(config: CqtConfig, sample_rate: int, k: int) -> np.ndarray:
    """Complex time-domain kernel for bin k (length N_k, not yet centered)."""
    f_k = float(config.bin_frequencies()[k])
    n_k = int(cqt_kernel_lengths(config, sample_rate)[k])
    n = np.arange(n_k)
    return (_hann_periodic(n_k)
            * np.exp(2j * np.pi * f_k * n / sample_rate) / n_k)


@lru_cache(maxsize=8)
def _cqt_spectral_kernels(config: CqtConfig, sample_rate: int):
    """Sparse [n_bins, n_fft] matrix of conj(FFT(kernel))/n_fft rows."""
    lengths = cqt_kernel_lengths(config, sample_rate)
    n_fft = _next_pow2(int(lengths.max()))
    rows = []
    for k in range(config.n_bins):
        padded = np.zeros(n_fft, dtype=np.complex128)
        start = (n_fft - lengths[k]) // 2
        padded[start:start + lengths[k]] = cqt_time_kernel(config, sample_rate, k)
        rows.append(np.conj(np.fft.fft(padded)) / n_fft)
    dense = np.vstack(rows)
    dense[np.abs(dense) < _KERNEL_SPARSITY * np.abs(dense).max()] = 0.0
    return scipy.sparse.csr_matrix(dense), n_fft


def cqt_magnitude(clip: AudioClip, config: CqtConfig) -> np.ndarray:
    """CQT magnitudes before log compression, [n_bins, n_frames]."""
    config.validate_for(clip.sample_rate)
    if len(clip) < 1:
        raise InputTooShortError("clip is empty")
    kernels, n_fft = _cqt_spectral_kernels(config, clip.sample_rate)
    frames = _frame_signal(clip.samples, n_fft, config.hop)
    out = np.empty((config.n_bins, frames.shape[0]), dtype=np.float64)
    chunk = max(1, (1 << 24) // n_fft)  # bound the FFT workspace
    for lo in range(0, frames.shape[0], chunk):
        spectra = np.fft.fft(frames[lo:lo + chunk], axis=1)
        out[:, lo:lo + chunk] = np.abs(kernels @ spectra.T)
    return out


def cqt(clip: AudioClip, config: CqtConfig) -> Spectrogram:
    """Log-compressed CQT magnitude spectrogram, [n_bins, 1 + len/hop]."""
    return Spectrogram(np.log10(cqt_magnitude(clip, config) + LOG_EPS))
