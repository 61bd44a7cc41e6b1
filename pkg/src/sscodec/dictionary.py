"""Implicit trigonometric dictionaries.

A dictionary here is a set of M unit-norm vectors of length N (M >= N),
described by a :class:`DictionarySpec` and never materialized: atoms are
generated on demand from their 1-based index. Four families are supported:

* ``Case.FOURIER`` -- sampled complex exponentials (redundant DFT),
* ``Case.COSINE``  -- sampled cosines (redundant DCT),
* ``Case.SINE``    -- sampled sines (redundant DST),
* ``Case.MIXED``   -- cosine and sine sub-dictionaries of M/2 atoms each,
  with cosine atoms at indices 1..M/2 and sine atoms at M/2+1..M.

At M == N each family is an orthonormal basis.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._validation import check_index

__all__ = [
    "Case",
    "DictionarySpec",
    "atom_count_for_redundancy",
    "conjugate_partner",
    "make_atom",
    "weight_cos",
    "weight_sin",
]

_CASE_CODES = {"dft": 1, "dct": 2, "dst": 3, "mixed": 4}


class Case(enum.Enum):
    """Dictionary family selector."""

    FOURIER = "dft"
    COSINE = "dct"
    SINE = "dst"
    MIXED = "mixed"

    @property
    def code(self) -> int:
        """Stable 1..4 code used in the serialized stream header."""
        return _CASE_CODES[self.value]

    @classmethod
    def from_code(cls, code: int) -> "Case":
        for case in cls:
            if case.code == code:
                return case
        raise ValueError(f"unknown dictionary case code {code}")

    @classmethod
    def from_string(cls, name: str) -> "Case":
        try:
            return cls(name.lower())
        except ValueError:
            valid = ", ".join(c.value for c in cls)
            raise ValueError(f"unknown dictionary case {name!r} (expected one of {valid})") from None


@dataclass(frozen=True)
class DictionarySpec:
    """Shape of an implicit dictionary: family, atom count M and atom length N."""

    case: Case
    num_atoms: int
    block_len: int

    def __post_init__(self):
        if not isinstance(self.case, Case):
            object.__setattr__(self, "case", Case.from_string(self.case))
        if self.block_len < 1:
            raise ValueError("block_len must be a positive integer")
        if self.num_atoms < self.block_len:
            raise ValueError(
                f"num_atoms ({self.num_atoms}) must be >= block_len ({self.block_len})"
            )
        if self.case is Case.MIXED and self.num_atoms % 2 != 0:
            raise ValueError("mixed dictionaries need an even num_atoms")

    @property
    def redundancy(self) -> float:
        return self.num_atoms / self.block_len

    @property
    def half(self) -> int:
        """Sub-dictionary size M/2 (mixed case only)."""
        if self.case is not Case.MIXED:
            raise ValueError("half is only defined for mixed dictionaries")
        return self.num_atoms // 2

    @property
    def is_orthonormal_point(self) -> bool:
        return self.num_atoms == self.block_len


def atom_count_for_redundancy(case: Case, redundancy: float, block_len: int) -> int:
    """Round ``redundancy * block_len`` to an admissible atom count M.

    Mixed dictionaries round to the nearest even value so that the two
    sub-dictionaries have equal size.
    """
    if redundancy < 1.0:
        raise ValueError("redundancy must be >= 1")
    m = int(round(redundancy * block_len))
    if case is Case.MIXED:
        m = 2 * int(round(m / 2.0))
    return max(m, block_len if case is not Case.MIXED else block_len + block_len % 2)


@lru_cache(maxsize=64)
def _cosine_weights(num_atoms: int, block_len: int) -> np.ndarray:
    """Norms of the unnormalized cosine atoms, indices 1..M.

    The closed form is singular (0/0, removable) at n = 1 where the atom is
    the constant vector of norm sqrt(N). The denominator 2(1 - cos(2a)) is
    evaluated as 4 sin^2(a), which cancels against the sin(a) factor in the
    numerator; this avoids catastrophic cancellation near the singular point.
    """
    m, n = num_atoms, block_len
    w2 = np.full(m, float(n))
    ang = np.pi * np.arange(1, m, dtype=np.float64) / m
    w2[1:] = n / 2.0 + np.sin(2.0 * n * ang) / (4.0 * np.sin(ang))
    return np.sqrt(w2)


@lru_cache(maxsize=64)
def _sine_weights(num_atoms: int, block_len: int) -> np.ndarray:
    """Norms of the unnormalized sine atoms, indices 1..M.

    The closed form is singular at n = M, where the unnormalized atom is the
    alternating +/-1 vector; its norm is obtained by direct summation there.
    """
    m, n = num_atoms, block_len
    w2 = np.empty(m)
    ang = np.pi * np.arange(1, m, dtype=np.float64) / m
    w2[: m - 1] = n / 2.0 - np.sin(2.0 * n * ang[: m - 1]) / (4.0 * np.sin(ang[: m - 1]))
    j = np.arange(1, n + 1, dtype=np.float64)
    last = np.sin(np.pi * (2.0 * j - 1.0) / 2.0)
    w2[m - 1] = float(np.dot(last, last))
    return np.sqrt(w2)


def weight_cos(n: int, num_atoms: int, block_len: int) -> float:
    """Normalization weight of cosine atom ``n`` (its unnormalized norm)."""
    n = check_index(n, num_atoms, "n")
    return float(_cosine_weights(num_atoms, block_len)[n - 1])


def weight_sin(n: int, num_atoms: int, block_len: int) -> float:
    """Normalization weight of sine atom ``n`` (its unnormalized norm)."""
    n = check_index(n, num_atoms, "n")
    return float(_sine_weights(num_atoms, block_len)[n - 1])


def _fourier_atom(index: int, num_atoms: int, block_len: int) -> np.ndarray:
    j = np.arange(block_len, dtype=np.float64)
    return np.exp(2j * np.pi * j * (index - 1) / num_atoms) / np.sqrt(block_len)


def _cosine_atom(index: int, num_atoms: int, block_len: int) -> np.ndarray:
    j = np.arange(1, block_len + 1, dtype=np.float64)
    atom = np.cos(np.pi * (2.0 * j - 1.0) * (index - 1) / (2.0 * num_atoms))
    return atom / _cosine_weights(num_atoms, block_len)[index - 1]


def _sine_atom(index: int, num_atoms: int, block_len: int) -> np.ndarray:
    j = np.arange(1, block_len + 1, dtype=np.float64)
    atom = np.sin(np.pi * (2.0 * j - 1.0) * index / (2.0 * num_atoms))
    return atom / _sine_weights(num_atoms, block_len)[index - 1]


def make_atom(index: int, spec: DictionarySpec) -> np.ndarray:
    """Generate the unit-norm atom with 1-based ``index``.

    Returns a complex vector for ``Case.FOURIER`` and a real vector
    otherwise. For ``Case.MIXED``, indices 1..M/2 select cosine atoms and
    indices M/2+1..M select sine atoms, both over sub-dictionaries of
    size M/2.
    """
    index = check_index(index, spec.num_atoms, "index")
    m, n = spec.num_atoms, spec.block_len
    if spec.case is Case.FOURIER:
        return _fourier_atom(index, m, n)
    if spec.case is Case.COSINE:
        return _cosine_atom(index, m, n)
    if spec.case is Case.SINE:
        return _sine_atom(index, m, n)
    half = spec.half
    if index <= half:
        return _cosine_atom(index, half, n)
    return _sine_atom(index - half, half, n)


def conjugate_partner(index: int, num_atoms: int):
    """Index of the complex-conjugate Fourier atom, or None if self-conjugate.

    Atom ``index`` and ``num_atoms - index + 2`` are elementwise conjugates;
    index 1 (DC) and, for even M, index M/2 + 1 (Nyquist) are real atoms with
    no distinct partner.
    """
    index = check_index(index, num_atoms, "index")
    partner = num_atoms - index + 2
    if partner == index or partner > num_atoms:
        return None
    return partner
