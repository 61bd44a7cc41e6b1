"""Slow reference implementations used to arbitrate the fast paths.

Everything here materializes the dictionary and uses naive summation or
dense linear algebra. These are the ground truth in tests: any fast-path
disagreement beyond tolerance is a fast-path bug.
"""

from __future__ import annotations

import numpy as np

from ._validation import as_1d_float, check_positive
from .dictionary import Case, DictionarySpec, conjugate_partner, make_atom
from .pursuit import ConvergenceError, SparseApproximation

__all__ = [
    "DegenerateSelectionError",
    "ExplicitDictionary",
    "direct_inner_products",
    "least_squares_projection",
    "omp_reference",
]

_MAX_EXPLICIT_LEN = 1024
_CONDITION_LIMIT = 1e12


class DegenerateSelectionError(ValueError):
    """Selected atoms are numerically rank deficient."""


class ExplicitDictionary:
    """All M atoms stored as rows of a dense matrix. Test scale only."""

    def __init__(self, spec: DictionarySpec):
        if spec.block_len > _MAX_EXPLICIT_LEN:
            raise ValueError(
                f"explicit dictionaries are capped at block_len {_MAX_EXPLICIT_LEN}; "
                "use the implicit FFT path at scale"
            )
        self.spec = spec
        self.atoms = np.stack([make_atom(i, spec) for i in range(1, spec.num_atoms + 1)])

    def atom(self, index: int) -> np.ndarray:
        return self.atoms[index - 1]

    def subset(self, indices) -> np.ndarray:
        """Selected atoms as columns of an (N, k) matrix."""
        return self.atoms[np.asarray(indices, dtype=int) - 1].T


def direct_inner_products(block, dictionary: ExplicitDictionary) -> np.ndarray:
    """<d_n, R> for every atom by naive summation (conjugated for complex atoms)."""
    r = as_1d_float(block, "block", length=dictionary.spec.block_len)
    return dictionary.atoms.conj() @ r


def least_squares_projection(signal, indices, dictionary: ExplicitDictionary) -> dict:
    """Coefficients of the orthogonal projection of ``signal`` onto the span
    of the selected atoms.

    Solved through an SVD least-squares factorization; raises
    :class:`DegenerateSelectionError` when the selected-atom matrix has a
    condition estimate above 1e12. Returns ``{index: coefficient}``.
    """
    f = as_1d_float(signal, "signal", length=dictionary.spec.block_len)
    indices = list(indices)
    if not indices:
        raise ValueError("indices must be nonempty")
    a = dictionary.subset(indices)
    solution, _, rank, singular_values = np.linalg.lstsq(a, f.astype(a.dtype), rcond=None)
    if rank < len(indices) or singular_values[0] / singular_values[-1] > _CONDITION_LIMIT:
        raise DegenerateSelectionError(
            f"selected atoms are rank deficient (condition > {_CONDITION_LIMIT:g})"
        )
    return {index: coeff for index, coeff in zip(indices, solution)}


def _reconstruct(active, coefficients, dictionary):
    a = dictionary.subset(active)
    weights = np.array([coefficients[i] for i in active])
    return (a @ weights).real


def omp_reference(signal, dictionary: ExplicitDictionary, rho: float,
                  max_selections: int | None = None) -> SparseApproximation:
    """Explicit-dictionary orthogonal matching pursuit.

    Greedy selection by maximal |<d_n, R>| over all atoms (lowest index on
    ties, Fourier picks canonicalized to the lower conjugate-pair member,
    with the partner activated alongside), followed by a full least-squares
    re-solve so the residual is the orthogonal-projection residual at every
    step. Stops when ||R|| <= rho.
    """
    spec = dictionary.spec
    f = as_1d_float(signal, "signal", length=spec.block_len)
    rho = check_positive(rho, "rho")
    if max_selections is None:
        max_selections = spec.block_len

    residual = f.copy()
    active: list[int] = []
    selections: list[tuple[int, float | complex]] = []
    coefficients: dict[int, float | complex] = {}
    norms = [float(np.linalg.norm(residual))]

    while norms[-1] > rho:
        if len(selections) >= max_selections:
            raise ConvergenceError(
                f"OMP oracle did not reach rho={rho:g} within {max_selections} selections"
            )
        ip = dictionary.atoms.conj() @ residual
        pick = int(np.argmax(np.abs(ip))) + 1
        if spec.case is Case.FOURIER:
            partner = conjugate_partner(pick, spec.num_atoms)
            if partner is not None and partner < pick:
                pick = partner
        selections.append((pick, ip[pick - 1]))
        if pick not in coefficients:
            active.append(pick)
            coefficients[pick] = 0.0
            if spec.case is Case.FOURIER:
                partner = conjugate_partner(pick, spec.num_atoms)
                if partner is not None:
                    active.append(partner)
                    coefficients[partner] = 0.0
        coefficients = least_squares_projection(f, active, dictionary)
        residual = f - _reconstruct(active, coefficients, dictionary)
        norms.append(float(np.linalg.norm(residual)))

    return SparseApproximation(
        indices=active,
        coefficients=coefficients,
        approx=f - residual,
        residual=residual,
        residual_norm=norms[-1],
        iteration_log=[0] * len(selections),
        selections=selections,
        residual_norms=norms,
    )
