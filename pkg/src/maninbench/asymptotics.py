"""Numerical shadows of the asymptotic claims.

The regressor follows the scikit-learn estimator protocol so it works
with ``clone`` and the model-selection tools. The functional wrappers
(``exponent_probe``, ``fit_constant``, ...) work directly on
:class:`~maninbench.enumeration.CountCurve` objects.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_counts, check_grid, check_thresholds
from .enumeration import (
    CountCurve,
    HeightHistogram,
    count_on_small_diagonal,
    count_points,
    count_with_clamp,
)
from .model import ModelConfig, boundary_geometry, restriction_table
from .picard import is_balanced

#: Empirical envelope ``h(n) <= 41 n^3``, re-asserted on every histogram used.
SHELL_CONSTANT = 41


class LeadingTermRegressor(RegressorMixin, BaseEstimator):
    """Fit ``N(T) = c T^a (log T)^(b-1)`` by weighted least squares in log space.

    Parameters
    ----------
    a, b : float or None
        Fix an exponent instead of estimating it.
    weighting : {"log", "uniform"}
        ``"log"`` weights each grid point by ``log T`` so that a geometric
        grid does not over-weight its small-``T`` end.
    """

    def __init__(self, a=None, b=None, weighting="log"):
        self.a = a
        self.b = b
        self.weighting = weighting

    def _weights(self, T):
        if self.weighting == "log":
            return np.log(T)
        if self.weighting == "uniform":
            return np.ones_like(T)
        raise ValueError(f"unknown weighting {self.weighting!r}")

    def fit(self, X, y):
        T = check_thresholds(X)
        N = check_counts(T, y)
        logT = np.log(T)
        loglogT = np.log(logT)
        target = np.log(N)
        columns = []
        if self.a is None:
            columns.append(logT)
        else:
            target = target - float(self.a) * logT
        if self.b is None:
            columns.append(loglogT)
        else:
            target = target - (float(self.b) - 1) * loglogT
        columns.append(np.ones_like(T))
        design = np.stack(columns, axis=1)
        if len(T) < design.shape[1]:
            raise ValueError(f"need at least {design.shape[1]} points, got {len(T)}")
        sw = np.sqrt(self._weights(T))
        coef, *_ = np.linalg.lstsq(design * sw[:, None], target * sw, rcond=None)
        k = 0
        if self.a is None:
            self.a_ = float(coef[k])
            k += 1
        else:
            self.a_ = float(self.a)
        if self.b is None:
            self.b_ = float(coef[k]) + 1
            k += 1
        else:
            self.b_ = float(self.b)
        self.c_ = float(math.exp(coef[k]))
        resid = np.log(N) - np.log(self._leading(T))
        self.residual_norm_ = float(np.sqrt(np.sum(sw**2 * resid**2) / np.sum(sw**2)))
        self.n_features_in_ = 1
        return self

    def _leading(self, T):
        return self.c_ * T**self.a_ * np.log(T) ** (self.b_ - 1)

    def predict(self, X):
        check_is_fitted(self, "c_")
        return self._leading(check_thresholds(X))


@dataclass(frozen=True)
class FitReport:
    a_hat: float
    b_hat: float
    c_hat: float
    residual_norm: float
    grid: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        if self.residual_norm < 0:
            raise ValueError("residual norm must be nonnegative")
        ts = [t for t, _ in self.grid]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("grid must be strictly increasing")


def _curve_arrays(curve: CountCurve):
    T = check_grid(curve.thresholds)
    if any(v == 0 for v in curve.values):
        raise ValueError("N(T) = 0 on the grid; raise t_min")
    return T, np.array([float(v) for v in curve.values])


def exponent_probe(curve: CountCurve) -> FitReport:
    """Free fit of ``(a, b, c)``; needs >= 6 points over >= 2 decades."""
    T, N = _curve_arrays(curve)
    est = LeadingTermRegressor().fit(T, N)
    return FitReport(est.a_, est.b_, est.c_, est.residual_norm_, tuple(zip(curve.thresholds, curve.values)))


def fit_log_power(curve: CountCurve, a) -> FitReport:
    """Fit ``(b, c)`` with the exponent ``a`` fixed to its exact value.

    The ``log log T`` column is nearly collinear with ``log T`` and the
    intercept over a few decades, so freeing ``a`` makes ``b`` unreliable.
    """
    T, N = _curve_arrays(curve)
    est = LeadingTermRegressor(a=float(Fraction(a))).fit(T, N)
    return FitReport(est.a_, est.b_, est.c_, est.residual_norm_, tuple(zip(curve.thresholds, curve.values)))


def fit_constant(curve: CountCurve, a, b: int):
    """Best ``c`` for fixed exponents, with relative residuals ``N / prediction - 1``."""
    T, N = _curve_arrays(curve)
    est = LeadingTermRegressor(a=float(Fraction(a)), b=int(b)).fit(T, N)
    return est.c_, N / est.predict(T) - 1


def linear_log_fit(curve: CountCurve, a=1):
    """Regress ``N / T^a`` on ``log T``; returns ``(slope, intercept, relative residuals)``."""
    T, N = _curve_arrays(curve)
    y = N / T ** float(Fraction(a))
    design = np.stack([np.log(T), np.ones_like(T)], axis=1)
    (slope, intercept), *_ = np.linalg.lstsq(design, y, rcond=None)
    return float(slope), float(intercept), (design @ [slope, intercept] - y) / y


@dataclass(frozen=True)
class WellRoundedness:
    kappa: float
    thresholds: Tuple[float, ...]
    ratios: Tuple[float, ...]

    @property
    def top_half_sup(self) -> float:
        return max(self.ratios[len(self.ratios) // 2 :])


def well_roundedness(producer: Callable[[float], float], thresholds: Sequence[float], kappa: float) -> WellRoundedness:
    """``(N(kappa T) - N(T / kappa)) / N(T)`` along the grid.

    ``producer`` receives real thresholds; wrap integer counters with ``floor``.
    """
    if not kappa > 1:
        raise ValueError(f"kappa must exceed 1, got {kappa}")
    ratios = []
    for T in thresholds:
        ratios.append((producer(kappa * T) - producer(T / kappa)) / producer(T))
    return WellRoundedness(float(kappa), tuple(float(t) for t in thresholds), tuple(float(x) for x in ratios))


def count_producer(hist: HeightHistogram, cfg: ModelConfig) -> Callable[[float], int]:
    return lambda T: count_points(hist, cfg, math.floor(T))


@dataclass(frozen=True)
class PoleProbe:
    s: Tuple[float, ...]
    values: Tuple[float, ...]
    tail_bounds: Tuple[float, ...]

    @property
    def spread(self) -> float:
        """``max / min - 1`` of the compensated values."""
        return max(self.values) / min(self.values) - 1


def check_shell_envelope(hist: HeightHistogram, constant: int = SHELL_CONSTANT) -> None:
    bad = [n for n in range(1, hist.bound + 1) if hist[n] > constant * n**3]
    if bad:
        raise AssertionError(f"h(n) <= {constant} n^3 fails at n = {bad[:5]}")


def dirichlet_pole_probe(hist: HeightHistogram, s_grid: Sequence[float], abscissa: float = 4.0) -> PoleProbe:
    """Compensated partial sums ``(s - 4) sum_{n <= B} h(n) n^{-s}``.

    ``tail_bounds`` bound the neglected ``(s - 4) sum_{n > B}`` through the
    envelope ``h(n) <= 41 n^3``: ``41 B^{4-s}`` after the integral test.
    """
    check_shell_envelope(hist)
    s_arr = np.asarray(s_grid, dtype=float)
    if np.any(s_arr <= abscissa):
        raise ValueError(f"grid must lie strictly right of the abscissa {abscissa}")
    n = np.arange(1, hist.bound + 1, dtype=float)
    h = np.asarray(hist.counts[1:], dtype=float)
    values, tails = [], []
    for s in s_arr:
        values.append(float((s - abscissa) * np.sum(h * n ** (-s))))
        tails.append(float(SHELL_CONSTANT * hist.bound ** (abscissa - s)))
    return PoleProbe(tuple(float(x) for x in s_arr), tuple(values), tuple(tails))


@dataclass(frozen=True)
class SaturationProfile:
    witness: Tuple[int, int]
    thresholds: Tuple[int, ...]
    fractions: Dict[Optional[int], Tuple[float, ...]] = field(default_factory=dict)


def saturation_profile(
    hist: HeightHistogram,
    cfg: ModelConfig,
    thresholds: Sequence[int],
    Ks: Sequence[Optional[int]] = (1, 2, 4),
) -> SaturationProfile:
    """Share of ``N(T)`` with ``height(x_j) <= K`` for the unbalanced witness ``(1, j)``.

    ``K=None`` stands for no clamp and gives 1.
    """
    geom, L = boundary_geometry(cfg)
    balanced, witness = is_balanced(geom, L, restriction_table(cfg))
    if balanced:
        raise ValueError("configuration is balanced; use near_diagonal_fraction instead")
    i, j = witness
    if i != 1:
        raise ValueError(f"saturation profile expects a witness (1, j), got {witness}")
    fractions = {}
    totals = [count_points(hist, cfg, T) for T in thresholds]
    for K in Ks:
        if K is None:
            fractions[K] = tuple(1.0 for _ in thresholds)
            continue
        fractions[K] = tuple(
            float(Fraction(count_with_clamp(hist, cfg, T, j, K), tot)) for T, tot in zip(thresholds, totals)
        )
    return SaturationProfile(witness, tuple(int(t) for t in thresholds), fractions)


def small_diagonal_fractions(hist: HeightHistogram, cfg: ModelConfig, thresholds: Sequence[int]):
    """``count_on_small_diagonal / count_points`` per pair, as floats."""
    out = {}
    totals = [count_points(hist, cfg, T) for T in thresholds]
    for i in range(1, cfg.r + 1):
        for j in range(i + 1, cfg.r + 1):
            out[(i, j)] = tuple(
                float(Fraction(count_on_small_diagonal(hist, cfg, T, i, j), tot))
                for T, tot in zip(thresholds, totals)
            )
    return out
