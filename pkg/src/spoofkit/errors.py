"""Exception types shared across the package."""


class SpoofkitError(Exception):
    """Base class for all errors raised by spoofkit."""


class WavFormatError(SpoofkitError):
    """The file is not a well-formed RIFF/WAVE container."""


class UnsupportedWavError(SpoofkitError):
    """The WAV file is valid but uses an encoding we do not decode."""


class InputTooShortError(SpoofkitError):
    """The signal is too short for the requested analysis window."""


class ConfigError(SpoofkitError):
    """A feature/model configuration violates its invariants."""


class DimensionError(SpoofkitError):
    """Array shapes are incompatible with the requested operation."""


class DegenerateFilterError(SpoofkitError):
    """A mel filter covers zero FFT bins at this resolution."""


class DegenerateBatchError(SpoofkitError):
    """Batch statistics requested over a single element."""


class AlignmentError(SpoofkitError):
    """Score sets do not cover the same utterance ids."""

    def __init__(self, message, missing_ids=()):
        super().__init__(message)
        self.missing_ids = list(missing_ids)


class MetricUndefinedError(SpoofkitError):
    """The metric is undefined for the given inputs (e.g. one class only)."""


class WeightFormatError(SpoofkitError):
    """A weight container file is corrupt or inconsistent."""


class ValidationError(SpoofkitError):
    """A model spec failed validation."""
