"""Synthetic test-signal generators.

Four families, mirroring what the codec is exercised on: sinusoids aligned
to the cosine-basis analysis grid, non-grid sinusoid mixtures with decaying
envelopes (a crude melodic surrogate), white noise, and exact sparse
combinations of dictionary atoms.
"""

from __future__ import annotations

import numpy as np

from .dictionary import Case, DictionarySpec, conjugate_partner, make_atom

__all__ = [
    "decaying_mixture",
    "grid_sinusoids",
    "sparse_atoms",
    "white_noise",
]


def grid_sinusoids(length: int, block_len: int, rng, components: int = 2,
                   amplitude: float = 0.4) -> np.ndarray:
    """Sum of cosines sitting exactly on the length-``block_len`` cosine
    analysis grid, so each one hits a single orthonormal-basis bin."""
    j = np.arange(1, length + 1, dtype=np.float64)
    bins = rng.choice(np.arange(2, block_len // 2), size=components, replace=False)
    out = np.zeros(length)
    for n in bins:
        out += amplitude / components * np.cos(np.pi * (2 * j - 1) * (n - 1) / (2 * block_len))
    return out


def decaying_mixture(length: int, sample_rate: int, rng, notes: int = 10) -> np.ndarray:
    """Random off-grid sinusoids with exponentially decaying envelopes.

    Each note gets a random onset, decay time and frequency drawn
    continuously (so it falls between analysis bins almost surely).
    """
    t = np.arange(length, dtype=np.float64) / sample_rate
    out = np.zeros(length)
    for _ in range(notes):
        freq = rng.uniform(60.0, 0.4 * sample_rate / 2.0)
        onset = rng.uniform(0.0, 0.7) * length / sample_rate
        decay = rng.uniform(0.05, 0.5)
        phase = rng.uniform(0.0, 2.0 * np.pi)
        amp = rng.uniform(0.05, 0.3)
        live = t >= onset
        out[live] += amp * np.exp(-(t[live] - onset) / decay) * np.cos(
            2.0 * np.pi * freq * t[live] + phase
        )
    peak = np.max(np.abs(out))
    if peak > 0:
        out *= 0.9 / max(peak, 1.0)
    return out


def white_noise(length: int, rng, scale: float = 0.3) -> np.ndarray:
    noise = rng.standard_normal(length)
    return scale * noise / np.max(np.abs(noise))


def _separated_indices(rng, count: int, lo: int, hi: int, min_gap: int) -> np.ndarray:
    """Distinct indices in [lo, hi] pairwise at least ``min_gap`` apart,
    sampled uniformly over the valid configurations by the offset trick."""
    slots = (hi - lo + 1) - (count - 1) * (min_gap - 1)
    if slots < count:
        raise ValueError("cannot place that many indices with the requested gap")
    base = np.sort(rng.choice(slots, size=count, replace=False))
    return lo + base + np.arange(count) * (min_gap - 1)


def sparse_atoms(spec: DictionarySpec, count: int, rng, min_gap: int | None = None):
    """Exact sparse combination of ``count`` well-separated dictionary atoms.

    Coefficient magnitudes are drawn from [0.1, 1]. Fourier atoms come in
    conjugate pairs with random phase so the signal is real; the returned
    coefficient map then holds both pair members. Returns
    ``(signal, coefficients)``.
    """
    if min_gap is None:
        # keep supports incoherent enough for greedy recovery
        min_gap = max(4, int(round(3 * spec.redundancy)))
    # stay clear of the index-range edges as well: the trigonometric
    # correlation kernels have reflected lobes there (a Fourier pair near
    # DC/Nyquist sits bins away from its own mirror, and cosine/sine
    # kernels fold at n = 1 and n = M), which defeats greedy recovery
    margin = -(-min_gap // 2)
    signal = np.zeros(spec.block_len)
    coefficients: dict[int, float | complex] = {}
    if spec.case is Case.FOURIER:
        # a pair at index l sits 2(l-1) frequency bins from its own mirror,
        # so keep a full min_gap margin to both fixed points
        upper = spec.num_atoms // 2 + 1
        picks = _separated_indices(rng, count, 1 + min_gap, upper - min_gap, min_gap)
        for index in picks:
            index = int(index)
            magnitude = rng.uniform(0.1, 1.0)
            partner = conjugate_partner(index, spec.num_atoms)
            if partner is None:
                coeff = complex(magnitude)
                signal += magnitude * make_atom(index, spec).real
                coefficients[index] = coeff
            else:
                coeff = magnitude * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
                signal += 2.0 * (coeff * make_atom(index, spec)).real
                coefficients[index] = coeff
                coefficients[partner] = coeff.conjugate()
        return signal, coefficients
    if spec.case is Case.MIXED:
        # separate by frequency across both halves so a cosine and a sine
        # atom never sit on adjacent frequencies
        half = spec.half
        freqs = _separated_indices(rng, count, 1 + margin, half - margin, min_gap)
        sides = rng.integers(0, 2, size=count)
        picks = [int(f) if s == 0 else int(f) + half for f, s in zip(freqs, sides)]
    else:
        picks = [
            int(i)
            for i in _separated_indices(
                rng, count, 1 + margin, spec.num_atoms - margin, min_gap
            )
        ]
    for index in picks:
        coeff = float(rng.uniform(0.1, 1.0))
        signal += coeff * make_atom(index, spec)
        coefficients[index] = coeff
    return signal, coefficients
