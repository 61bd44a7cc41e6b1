"""Scikit-learn front end for block sparse spectral coding.

Wraps the functional core in the familiar transformer protocol so block
coding composes with pipelines and model-selection tooling. Rows of X are
signal blocks; ``transform`` returns one dense coefficient row per block
(complex for the Fourier family), and ``inverse_transform`` rebuilds the
blocks from such rows.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .codec import block_tolerance
from .dictionary import Case, DictionarySpec, atom_count_for_redundancy, make_atom
from .pursuit import mp, spmp

__all__ = ["SparseSpectralCoder"]


class SparseSpectralCoder(TransformerMixin, BaseEstimator):
    """Greedy sparse coder over an implicit trigonometric dictionary.

    Parameters
    ----------
    case : str, default "mixed"
        Dictionary family: "dft", "dct", "dst" or "mixed".
    redundancy : float, default 4.0
        Atom count relative to the block length (M = redundancy * N).
    target_snr : float, default 35.0
        Per-block reconstruction quality in dB; sets the pursuit stopping
        threshold for every block.
    method : str, default "spmp"
        "spmp" for self-projected matching pursuit (orthogonal-projection
        coefficients) or "mp" for plain matching pursuit.
    epsilon : float or None, default None
        Self-projection tolerance; None derives it from the block threshold.
    """

    def __init__(self, case: str = "mixed", redundancy: float = 4.0,
                 target_snr: float = 35.0, method: str = "spmp",
                 epsilon: float | None = None):
        self.case = case
        self.redundancy = redundancy
        self.target_snr = target_snr
        self.method = method
        self.epsilon = epsilon

    def _check_blocks(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X[np.newaxis, :]
        if X.ndim != 2 or X.shape[1] < 2:
            raise ValueError("X must be a 2-D array of signal blocks")
        return X

    def fit(self, X, y=None):
        """Derive the dictionary from the block length; no data is learned."""
        X = self._check_blocks(X)
        if self.method not in ("mp", "spmp"):
            raise ValueError("method must be 'mp' or 'spmp'")
        case = Case.from_string(self.case)
        num_atoms = atom_count_for_redundancy(case, self.redundancy, X.shape[1])
        self.spec_ = DictionarySpec(case, num_atoms, X.shape[1])
        self.n_features_in_ = X.shape[1]
        return self

    def _require_fitted(self):
        if not hasattr(self, "spec_"):
            raise NotFittedError("call fit before transform / inverse_transform")

    def transform(self, X) -> np.ndarray:
        """Sparse codes, one dense length-M row per block."""
        self._require_fitted()
        X = self._check_blocks(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"blocks have length {X.shape[1]}, expected {self.n_features_in_}"
            )
        fourier = self.spec_.case is Case.FOURIER
        codes = np.zeros(
            (X.shape[0], self.spec_.num_atoms),
            dtype=np.complex128 if fourier else np.float64,
        )
        for row, block in enumerate(X):
            rho = block_tolerance(block, self.target_snr)
            if rho == 0.0:
                continue
            if self.method == "spmp":
                run = spmp(block, self.spec_, rho, self.epsilon)
            else:
                run = mp(block, self.spec_, rho)
            for index, coeff in run.coefficients.items():
                codes[row, index - 1] = coeff
        return codes

    def inverse_transform(self, codes) -> np.ndarray:
        """Rebuild blocks as the coded atom superpositions."""
        self._require_fitted()
        codes = np.asarray(codes)
        if codes.ndim != 2 or codes.shape[1] != self.spec_.num_atoms:
            raise ValueError(f"codes must have {self.spec_.num_atoms} columns")
        out = np.zeros((codes.shape[0], self.spec_.block_len))
        for row in range(codes.shape[0]):
            active = np.nonzero(codes[row])[0]
            block = np.zeros(
                self.spec_.block_len,
                dtype=np.complex128 if self.spec_.case is Case.FOURIER else np.float64,
            )
            for pos in active:
                block += codes[row, pos] * make_atom(int(pos) + 1, self.spec_)
            out[row] = block.real
        return out
