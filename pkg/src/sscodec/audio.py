"""WAV ingestion and emission.

Reads PCM 16-bit and IEEE float 32-bit WAV files; multichannel input is
reduced to channel 0 with a warning. Samples are normalized to [-1, 1].
Output is written as float 32-bit to preserve reconstruction precision.
"""

from __future__ import annotations

import warnings

import numpy as np
from scipy.io import wavfile

__all__ = ["UnsupportedWavError", "read_wav", "write_wav"]


class UnsupportedWavError(ValueError):
    """WAV sample format outside the supported PCM16 / float32 set."""


def read_wav(path):
    """Return ``(signal, sample_rate)`` with the signal as float64 in [-1, 1]."""
    sample_rate, data = wavfile.read(path)
    if data.ndim == 2:
        warnings.warn(
            f"{path}: {data.shape[1]} channels found, using channel 0", stacklevel=2
        )
        data = data[:, 0]
    if data.dtype == np.int16:
        signal = data.astype(np.float64) / 32768.0
    elif data.dtype == np.float32:
        signal = data.astype(np.float64)
    else:
        raise UnsupportedWavError(
            f"{path}: unsupported sample format {data.dtype}; expected int16 or float32"
        )
    return signal, int(sample_rate)


def write_wav(path, signal, sample_rate: int) -> None:
    wavfile.write(path, int(sample_rate), np.asarray(signal, dtype=np.float32))
