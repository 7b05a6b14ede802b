"""WAV decoding into mono float clips.

Only RIFF/WAVE with 16-bit PCM (1 or 2 channels) is accepted; everything
the pipeline consumes downstream starts here.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import UnsupportedWavError, WavFormatError

_PCM_FORMAT = 1
_INT16_FULL_SCALE = 32768.0


@dataclass(frozen=True)
class AudioClip:
    """Mono audio samples in [-1, 1] plus their sample rate in Hz."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise WavFormatError("AudioClip samples must be one-dimensional (mono)")
        if not np.all(np.isfinite(samples)):
            raise WavFormatError("AudioClip samples must be finite")
        if int(self.sample_rate) <= 0:
            raise WavFormatError("sample_rate must be a positive integer")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "sample_rate", int(self.sample_rate))

    def __len__(self) -> int:
        return self.samples.shape[0]

    @property
    def duration(self) -> float:
        return len(self) / self.sample_rate


def load_wav(path) -> AudioClip:
    """Decode a RIFF/WAVE PCM-16 file into a mono AudioClip.

    Samples are scaled to [-1, 1] by dividing by 32768; stereo files are
    averaged down to mono.

    Raises WavFormatError for malformed containers and UnsupportedWavError
    for encodings other than 16-bit integer PCM with 1 or 2 channels.
    """
    raw = Path(path).read_bytes()
    if len(raw) < 12:
        raise WavFormatError(f"{path}: truncated RIFF header")
    if raw[0:4] != b"RIFF" or raw[8:12] != b"WAVE":
        raise WavFormatError(f"{path}: not a RIFF/WAVE file")

    fmt = None
    data = None
    pos = 12
    while pos + 8 <= len(raw):
        chunk_id = raw[pos:pos + 4]
        (chunk_size,) = struct.unpack_from("<I", raw, pos + 4)
        body = raw[pos + 8:pos + 8 + chunk_size]
        if chunk_id == b"fmt ":
            if len(body) < 16:
                raise WavFormatError(f"{path}: fmt chunk truncated")
            fmt = struct.unpack_from("<HHIIHH", body, 0)
        elif chunk_id == b"data":
            if len(body) < chunk_size:
                raise WavFormatError(f"{path}: data chunk truncated")
            data = body
        # chunks are word-aligned
        pos += 8 + chunk_size + (chunk_size & 1)

    if fmt is None:
        raise WavFormatError(f"{path}: missing fmt chunk")
    if data is None:
        raise WavFormatError(f"{path}: missing data chunk")

    audio_format, n_channels, sample_rate, _, _, bits_per_sample = fmt
    if audio_format != _PCM_FORMAT:
        raise UnsupportedWavError(
            f"{path}: unsupported audio format code {audio_format} (PCM only)")
    if bits_per_sample != 16:
        raise UnsupportedWavError(
            f"{path}: unsupported sample width {bits_per_sample} bits (16 only)")
    if n_channels not in (1, 2):
        raise UnsupportedWavError(
            f"{path}: unsupported channel count {n_channels} (1 or 2 only)")

    n_values = len(data) // 2
    pcm = np.frombuffer(data[:n_values * 2], dtype="<i2").astype(np.float64)
    if n_channels == 2:
        pcm = pcm[:(n_values // 2) * 2].reshape(-1, 2).mean(axis=1)
    samples = pcm / _INT16_FULL_SCALE
    return AudioClip(samples=samples, sample_rate=sample_rate)


def write_wav(path, samples: np.ndarray, sample_rate: int) -> None:
    """Write mono float samples in [-1, 1] as a PCM-16 WAV file."""
    samples = np.asarray(samples, dtype=np.float64)
    pcm = np.clip(np.round(samples * _INT16_FULL_SCALE), -32768, 32767)
    body = pcm.astype("<i2").tobytes()
    fmt = struct.pack("<HHIIHH", _PCM_FORMAT, 1, sample_rate,
                      sample_rate * 2, 2, 16)
    payload = (b"WAVE"
               + b"fmt " + struct.pack("<I", len(fmt)) + fmt
               + b"data" + struct.pack("<I", len(body)) + body)
    blob = b"RIFF" + struct.pack("<I", len(payload)) + payload
    Path(path).write_bytes(blob)
