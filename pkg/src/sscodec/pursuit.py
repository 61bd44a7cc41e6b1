"""Greedy pursuit engines driven by FFT inner products.

``mp`` is plain matching pursuit: select the atom best correlated with the
residual, subtract its rank-one contribution, repeat until the residual
norm reaches the target. ``spmp`` additionally re-runs the same selection
loop restricted to the already-selected atoms after every selection
(self-projection), which drives the residual orthogonal to the selected
span and makes the coefficients converge to the orthogonal-projection
(OMP) coefficients without storing any dual vectors.

Fourier-family atoms are processed in conjugate pairs so residuals and
reconstructions stay real; the paired coefficient is pinned to the complex
conjugate of its mate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import as_1d_float, check_positive
from .dictionary import Case, DictionarySpec, conjugate_partner, make_atom
from .transforms import analyzer_for, inner_products

__all__ = [
    "ConvergenceError",
    "SparseApproximation",
    "mp",
    "spmp",
    "select_atom",
    "reselect_atom",
    "project_mp",
]

#: projection iterations allowed per selected atom before aborting
DEFAULT_PROJECTION_CAP = 10_000
#: selection steps over which the residual must shrink measurably
STAGNATION_WINDOW = 50
STAGNATION_RTOL = 1e-12


class ConvergenceError(RuntimeError):
    """A pursuit loop could not reach its stopping target."""


@dataclass
class SparseApproximation:
    """Result of a pursuit run on one block.

    ``indices`` lists the distinct active atom indices in the order they
    became active (conjugate partners immediately follow their mate);
    ``coefficients`` maps each of them to its final coefficient.
    ``selections`` records the main-loop picks as (index, correlation at
    selection time), and ``residual_norms[k]`` is ||R|| after k selection
    steps (entry 0 is the input norm). ``iteration_log[k]`` counts the
    self-projection iterations spent after selection k+1 (all zeros for
    plain matching pursuit).
    """

    indices: list[int]
    coefficients: dict[int, float | complex]
    approx: np.ndarray
    residual: np.ndarray
    residual_norm: float
    iteration_log: list[int] = field(default_factory=list)
    selections: list[tuple[int, float | complex]] = field(default_factory=list)
    residual_norms: list[float] = field(default_factory=list)

    @property
    def num_selections(self) -> int:
        return len(self.selections)

    def reconstruct(self, spec: DictionarySpec) -> np.ndarray:
        """Rebuild sum_n c(n) d_n from the stored coefficients."""
        out = np.zeros(spec.block_len, dtype=complex if spec.case is Case.FOURIER else float)
        for index, coeff in self.coefficients.items():
            out += coeff * make_atom(index, spec)
        return out


def select_atom(residual, spec: DictionarySpec):
    """MP selection: the atom index maximizing |<d_n, R>|, with its correlation.

    Ties resolve to the lowest index. Fourier picks are canonicalized to the
    lower member of the conjugate pair. Raises ``ValueError`` on an exactly
    zero residual (the approximation is already exact).
    """
    r = as_1d_float(residual, "residual", length=spec.block_len)
    if not np.any(r):
        raise ValueError("residual is zero: approximation is already exact")
    ip = inner_products(r, spec)
    pick = int(np.argmax(np.abs(ip))) + 1
    if spec.case is Case.FOURIER:
        partner = conjugate_partner(pick, spec.num_atoms)
        if partner is not None and partner < pick:
            pick = partner
    return pick, ip[pick - 1]


def reselect_atom(residual, spec: DictionarySpec, indices):
    """Restricted MP selection over the active set, via the FFT path."""
    r = as_1d_float(residual, "residual", length=spec.block_len)
    active = sorted(set(indices))
    if not active:
        raise ValueError("indices must be nonempty")
    if active[0] < 1 or active[-1] > spec.num_atoms:
        raise ValueError("indices out of dictionary range")
    ip = inner_products(r, spec)
    sub = np.abs(ip[np.asarray(active) - 1])
    pick = active[int(np.argmax(sub))]
    return pick, ip[pick - 1]


class _Engine:
    """Per-run state: atom cache and the direct/FFT reselection switch."""

    def __init__(self, spec: DictionarySpec, direct_reselect: bool = True):
        self.spec = spec
        self.is_fourier = spec.case is Case.FOURIER
        self.analyzer = analyzer_for(spec)
        # below this active-set size, direct correlations beat a full FFT
        self.direct_limit = (
            (spec.num_atoms / spec.block_len) * math.log2(spec.num_atoms)
            if direct_reselect
            else 0.0
        )
        self._atoms: dict[int, np.ndarray] = {}

    def atom(self, index: int) -> np.ndarray:
        cached = self._atoms.get(index)
        if cached is None:
            cached = make_atom(index, self.spec)
            self._atoms[index] = cached
        return cached

    def subtract(self, residual: np.ndarray, index: int, coeff):
        """Remove coeff * d_index (plus the conjugate term for Fourier pairs)
        from the residual, in place, keeping it real."""
        atom = self.atom(index)
        if not self.is_fourier:
            residual -= coeff * atom
            return
        if conjugate_partner(index, self.spec.num_atoms) is None:
            residual -= coeff.real * atom.real
        else:
            residual -= 2.0 * (coeff * atom).real

    def accumulate(self, coefficients: dict, index: int, coeff):
        """Fold a new correlation into the coefficient map (pair-aware)."""
        if not self.is_fourier:
            coefficients[index] = coefficients.get(index, 0.0) + float(coeff)
            return
        partner = conjugate_partner(index, self.spec.num_atoms)
        if partner is None:
            coefficients[index] = complex(coefficients.get(index, 0.0)).real + complex(coeff).real
        else:
            total = coefficients.get(index, 0.0) + complex(coeff)
            coefficients[index] = total
            coefficients[partner] = total.conjugate()

    def reselect_matrix(self, active_sorted: list[int]) -> np.ndarray | None:
        """Conjugated atom rows for direct correlations, or None above the
        crossover size where the FFT path wins."""
        if len(active_sorted) > self.direct_limit:
            return None
        rows = np.stack([self.atom(i) for i in active_sorted])
        return rows.conj() if self.is_fourier else rows

    def project(self, residual: np.ndarray, coefficients: dict,
                active_sorted: list[int], epsilon: float, cap: int) -> int:
        """Self-projection: MP restricted to the active set until the best
        remaining correlation falls to ``epsilon``. Returns the iteration
        count; mutates ``residual`` and ``coefficients`` in place."""
        matrix = self.reselect_matrix(active_sorted)
        positions = np.asarray(active_sorted, dtype=np.intp) - 1
        iterations = 0
        mu = 2.0 * epsilon
        while mu > epsilon:
            if iterations >= cap:
                raise ConvergenceError(
                    f"self-projection exceeded {cap} iterations over "
                    f"{len(active_sorted)} atoms (epsilon={epsilon:g}, mu={mu:g}); "
                    "the selected atoms are numerically degenerate"
                )
            if matrix is not None:
                ip = matrix @ residual
            else:
                ip = self.analyzer.gather(self.analyzer.spectrum(residual), positions)
            j = int(np.argmax(np.abs(ip)))
            pick, coeff = active_sorted[j], ip[j]
            if self.is_fourier:
                partner = conjugate_partner(pick, self.spec.num_atoms)
                if partner is not None and partner < pick:
                    pick, coeff = partner, coeff.conjugate()
            self.subtract(residual, pick, coeff)
            self.accumulate(coefficients, pick, coeff)
            mu = abs(coeff)
            iterations += 1
        return iterations


def project_mp(residual, coefficients, indices, spec: DictionarySpec, epsilon: float,
               *, max_iterations: int | None = None, direct_reselect: bool = True):
    """Project the residual off the span of the active atoms by restricted MP.

    ``residual`` must equal the block minus the current reconstruction from
    ``coefficients``. Loops reselect-and-subtract until the largest
    remaining correlation over ``indices`` is at most ``epsilon``. Returns
    ``(residual, coefficients, iterations)`` with fresh copies.
    """
    epsilon = check_positive(epsilon, "epsilon")
    active = sorted(set(indices))
    if not active:
        raise ValueError("indices must be nonempty")
    engine = _Engine(spec, direct_reselect)
    r = as_1d_float(residual, "residual", length=spec.block_len).copy()
    coeffs = dict(coefficients)
    cap = max_iterations if max_iterations is not None else DEFAULT_PROJECTION_CAP * len(active)
    iterations = engine.project(r, coeffs, active, epsilon, cap)
    return r, coeffs, iterations


def _run(signal, spec, rho, epsilon, *, direct_reselect, max_projection_iterations,
         stagnation_window, stagnation_rtol):
    f = as_1d_float(signal, "signal", length=spec.block_len)
    rho = check_positive(rho, "rho")
    project = epsilon is not None
    if project:
        epsilon = check_positive(epsilon, "epsilon")

    engine = _Engine(spec, direct_reselect)
    residual = f.copy()
    coefficients: dict[int, float | complex] = {}
    active: list[int] = []
    active_set: set[int] = set()
    selections: list[tuple[int, float | complex]] = []
    iteration_log: list[int] = []
    norms = [float(np.linalg.norm(residual))]

    mu = 2.0 * rho
    while mu > rho:
        if norms[-1] == 0.0:
            break
        ip = engine.analyzer.all_products(residual)
        pick = int(np.argmax(np.abs(ip))) + 1
        if engine.is_fourier:
            partner = conjugate_partner(pick, spec.num_atoms)
            if partner is not None and partner < pick:
                pick = partner
        coeff = ip[pick - 1]
        if pick not in active_set:
            active.append(pick)
            active_set.add(pick)
            if engine.is_fourier:
                partner = conjugate_partner(pick, spec.num_atoms)
                if partner is not None:
                    active.append(partner)
                    active_set.add(partner)
        engine.subtract(residual, pick, coeff)
        engine.accumulate(coefficients, pick, coeff)
        selections.append((pick, coeff))

        if project:
            cap = (
                max_projection_iterations
                if max_projection_iterations is not None
                else DEFAULT_PROJECTION_CAP * len(active)
            )
            iteration_log.append(
                engine.project(residual, coefficients, sorted(active), epsilon, cap)
            )
        else:
            iteration_log.append(0)

        mu = float(np.linalg.norm(residual))
        norms.append(mu)
        if len(norms) > stagnation_window:
            then = norms[-1 - stagnation_window]
            if then - mu < stagnation_rtol * then:
                raise ConvergenceError(
                    f"residual stagnated at {mu:g} over {stagnation_window} selection "
                    f"steps without reaching rho={rho:g}; the target appears unreachable"
                )

    return SparseApproximation(
        indices=active,
        coefficients=coefficients,
        approx=f - residual,
        residual=residual,
        residual_norm=norms[-1],
        iteration_log=iteration_log,
        selections=selections,
        residual_norms=norms,
    )


def spmp(signal, spec: DictionarySpec, rho: float, epsilon: float | None = None, *,
         direct_reselect: bool = True, max_projection_iterations: int | None = None,
         stagnation_window: int = STAGNATION_WINDOW,
         stagnation_rtol: float = STAGNATION_RTOL) -> SparseApproximation:
    """Self-projected matching pursuit: run until ||R|| <= rho.

    ``epsilon`` bounds the correlation left over the active set after each
    self-projection; it defaults to 1e-4 * rho so projection error is
    negligible against the stopping target. The final coefficients agree
    with the orthogonal projection onto the selected span to within the
    projection tolerance.
    """
    if epsilon is None:
        epsilon = 1e-4 * check_positive(rho, "rho")
    return _run(
        signal, spec, rho, epsilon,
        direct_reselect=direct_reselect,
        max_projection_iterations=max_projection_iterations,
        stagnation_window=stagnation_window,
        stagnation_rtol=stagnation_rtol,
    )


def mp(signal, spec: DictionarySpec, rho: float, *,
       stagnation_window: int = STAGNATION_WINDOW,
       stagnation_rtol: float = STAGNATION_RTOL) -> SparseApproximation:
    """Plain matching pursuit (no self-projection): run until ||R|| <= rho.

    Re-selecting an already-active index folds the new correlation into its
    existing coefficient, so the active set stays duplicate-free.
    """
    return _run(
        signal, spec, rho, None,
        direct_reselect=True,
        max_projection_iterations=None,
        stagnation_window=stagnation_window,
        stagnation_rtol=stagnation_rtol,
    )
