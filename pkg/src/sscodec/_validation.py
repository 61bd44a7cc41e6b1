"""Small input-validation helpers shared across the package."""

from __future__ import annotations

import numbers

import numpy as np


def as_1d_float(x, name="signal", length=None):
    """Coerce ``x`` to a contiguous 1-D float64 array.

    Raises ``ValueError`` for empty or wrongly-shaped input and
    ``TypeError`` for complex input (all signals here are real).
    """
    arr = np.asarray(x)
    if np.iscomplexobj(arr):
        raise TypeError(f"{name} must be real-valued")
    arr = np.ascontiguousarray(arr, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} must be nonempty")
    if length is not None and arr.size != length:
        raise ValueError(f"{name} must have length {length}, got {arr.size}")
    return arr


def check_positive(value, name):
    """Require a finite, strictly positive real number."""
    if not isinstance(value, numbers.Real) or not np.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")
    return float(value)


def check_index(index, upper, name="index"):
    """Require an integer in the 1-based range [1, upper]."""
    if not isinstance(index, numbers.Integral):
        raise ValueError(f"{name} must be an integer, got {index!r}")
    index = int(index)
    if not 1 <= index <= upper:
        raise ValueError(f"{name} must lie in [1, {upper}], got {index}")
    return index
