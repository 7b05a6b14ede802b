"""Convolution backend selection.

The compiled Cython kernel is preferred when importable; otherwise the
NumPy im2col implementation is used. SPOOFKIT_CONV_BACKEND=numpy|compiled
forces a choice (``compiled`` fails loudly if the extension is missing).
"""

from __future__ import annotations

import os

from ..errors import ConfigError
from . import _conv_numpy

try:
    from . import _convkernel
except ImportError:
    _convkernel = None

_BACKENDS = {"numpy": _conv_numpy.conv2d_raw}
if _convkernel is not None:
    _BACKENDS["compiled"] = _convkernel.conv2d_raw


def _select() -> str:
    forced = os.environ.get("SPOOFKIT_CONV_BACKEND", "").strip().lower()
    if forced:
        if forced not in ("numpy", "compiled"):
            raise ConfigError(
                f"SPOOFKIT_CONV_BACKEND must be 'numpy' or 'compiled', got {forced!r}")
        if forced not in _BACKENDS:
            raise ConfigError(
                "SPOOFKIT_CONV_BACKEND=compiled but the extension is not built; "
                "reinstall with a C compiler available")
        return forced
    return "compiled" if "compiled" in _BACKENDS else "numpy"


_ACTIVE = _select()


def conv_backend_name() -> str:
    """Name of the backend serving conv2d calls ('compiled' or 'numpy')."""
    return _ACTIVE


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def get_backend(name: str | None = None):
    """Raw conv kernel for ``name`` (default: the active backend)."""
    if name is None:
        name = _ACTIVE
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ConfigError(f"unknown or unbuilt conv backend {name!r}") from None


def conv2d_raw(*args):
    return _BACKENDS[_ACTIVE](*args)
