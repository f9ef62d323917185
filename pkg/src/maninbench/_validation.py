"""Input validation helpers shared by the public functions and estimators."""

from __future__ import annotations

import numbers

import numpy as np
from sklearn.utils.validation import check_array, check_consistent_length


def check_positive_int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    if value < 1:
        raise ValueError(f"{name} must be >= 1, got {value}")
    return int(value)


def check_seed(seed) -> int:
    if seed is None:
        raise ValueError("a seed is mandatory for sampled computations")
    if isinstance(seed, bool) or not isinstance(seed, numbers.Integral) or seed < 0:
        raise ValueError(f"seed must be a nonnegative integer, got {seed!r}")
    return int(seed)


def check_thresholds(T, name: str = "T") -> np.ndarray:
    """1-D float array of thresholds ``> 1`` (accepts a single-column 2-D array)."""
    arr = check_array(T, ensure_2d=False, dtype=np.float64, input_name=name)
    if arr.ndim == 2:
        if arr.shape[1] != 1:
            raise ValueError(f"{name} must be one column, got shape {arr.shape}")
        arr = arr[:, 0]
    if np.any(arr <= 1):
        raise ValueError(f"{name} must be > 1 so that log log {name} is defined")
    return arr


def check_counts(T: np.ndarray, N) -> np.ndarray:
    arr = check_array(N, ensure_2d=False, dtype=np.float64, input_name="N")
    arr = np.ravel(arr)
    check_consistent_length(T, arr)
    if np.any(arr <= 0):
        raise ValueError("counts must be positive for a log-scale fit")
    return arr


def check_grid(thresholds, min_points: int = 6, min_decades: float = 2.0) -> np.ndarray:
    arr = check_thresholds(thresholds, "grid")
    if len(arr) < min_points:
        raise ValueError(f"need >= {min_points} grid points, got {len(arr)}")
    if np.any(np.diff(arr) <= 0):
        raise ValueError("grid must be strictly increasing")
    span = np.log10(arr[-1] / arr[0])
    if span < min_decades - 1e-12:
        raise ValueError(f"grid spans {span:.2f} decades, need >= {min_decades}")
    return arr
