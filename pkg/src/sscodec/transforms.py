"""Inner products with trigonometric atoms computed via zero-padded FFTs.

The workhorse identity: padding a length-N real block to length 2M and
taking its DFT yields, after a per-bin phase rotation, the correlations
with every cosine atom (real part) and every sine atom (negated imaginary
part) in a single fast transform. Fourier-family correlations come from a
length-M padded DFT directly. No atom is ever materialized.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ._validation import as_1d_float
from .dictionary import Case, DictionarySpec, _cosine_weights, _sine_weights

__all__ = ["padded_dft", "inner_products"]


def padded_dft(y, size: int) -> np.ndarray:
    """Length-``size`` DFT of ``y`` zero-padded on the right.

    Bin ``n`` (1-based) holds sum_j y(j) * exp(-2i*pi*(n-1)*(j-1)/size) for
    j over the original samples. Requires ``size`` >= len(y).
    """
    y = np.asarray(y)
    if y.ndim != 1:
        raise ValueError("padded_dft expects a one-dimensional vector")
    if size < y.size:
        raise ValueError(f"transform size {size} is smaller than the input length {y.size}")
    return np.fft.fft(y, n=size)


class Analyzer:
    """Precomputed correlation tables for one dictionary.

    For the real families, atom n's correlation is Re(rot[n] * F[bin[n]])
    * scale[n] where F is the rfft of the block padded to ``pad_len``; the
    sine families fold their -Im(...) into the rotation by a factor of 1j.
    The Fourier family correlates through a full length-M DFT instead.
    """

    def __init__(self, spec: DictionarySpec):
        self.spec = spec
        m, n = spec.num_atoms, spec.block_len
        self.is_fourier = spec.case is Case.FOURIER
        if self.is_fourier:
            self.pad_len = m
            self.scale = 1.0 / np.sqrt(n)
            return
        if spec.case is Case.COSINE:
            k = np.arange(m)
            self.bin = k
            self.rot = np.exp(-1j * np.pi * k / (2.0 * m))
            self.scale = 1.0 / _cosine_weights(m, n)
        elif spec.case is Case.SINE:
            k = np.arange(1, m + 1)
            self.bin = k
            self.rot = 1j * np.exp(-1j * np.pi * k / (2.0 * m))
            self.scale = 1.0 / _sine_weights(m, n)
        else:
            half = spec.half
            kc = np.arange(half)
            ks = np.arange(1, half + 1)
            self.bin = np.concatenate([kc, ks])
            self.rot = np.concatenate(
                [
                    np.exp(-1j * np.pi * kc / (2.0 * half)),
                    1j * np.exp(-1j * np.pi * ks / (2.0 * half)),
                ]
            )
            self.scale = np.concatenate(
                [1.0 / _cosine_weights(half, n), 1.0 / _sine_weights(half, n)]
            )
        self.pad_len = 2 * (spec.half if spec.case is Case.MIXED else m)

    def spectrum(self, block: np.ndarray) -> np.ndarray:
        """The padded transform the correlations are read from."""
        if self.is_fourier:
            return np.fft.fft(block, n=self.pad_len)
        return np.fft.rfft(block, n=self.pad_len)

    def all_products(self, block: np.ndarray) -> np.ndarray:
        spectrum = self.spectrum(block)
        if self.is_fourier:
            return spectrum * self.scale
        return (self.rot * spectrum[self.bin]).real * self.scale

    def gather(self, spectrum: np.ndarray, positions: np.ndarray) -> np.ndarray:
        """Correlations of the atoms at 0-based ``positions`` only."""
        if self.is_fourier:
            return spectrum[positions] * self.scale
        return (self.rot[positions] * spectrum[self.bin[positions]]).real * self.scale[positions]


@lru_cache(maxsize=32)
def analyzer_for(spec: DictionarySpec) -> Analyzer:
    return Analyzer(spec)


def inner_products(block, spec: DictionarySpec) -> np.ndarray:
    """Correlations <d_n, R> of a real block with every dictionary atom.

    Entry k (0-based) of the result is the inner product with atom k+1.
    The result is complex for ``Case.FOURIER`` and real otherwise; for
    ``Case.MIXED`` the first M/2 entries are the cosine correlations and
    the last M/2 the sine correlations, matching the joint atom indexing.
    """
    r = as_1d_float(block, "block", length=spec.block_len)
    return analyzer_for(spec).all_products(r)
