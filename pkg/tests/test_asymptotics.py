import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.model_selection import cross_val_score

from maninbench.asymptotics import (
    FitReport,
    LeadingTermRegressor,
    check_shell_envelope,
    dirichlet_pole_probe,
    exponent_probe,
    fit_constant,
    fit_log_power,
    linear_log_fit,
    saturation_profile,
    small_diagonal_fractions,
    well_roundedness,
)
from maninbench.enumeration import CountCurve, HeightHistogram
from maninbench.model import ModelConfig

CFG = ModelConfig.anticanonical(2)


def synthetic(fn, lo=10, hi=22):
    T = [2**k for k in range(lo, hi + 1)]
    return CountCurve(tuple(T), tuple(round(fn(t)) for t in T), CFG)


def test_probe_recovers_linear_curve():
    rep = exponent_probe(synthetic(lambda t: 7e6 * t))
    assert abs(rep.a_hat - 1) < 1e-6 and abs(rep.b_hat - 1) < 1e-6
    assert abs(rep.c_hat / 7e6 - 1) < 1e-5


def test_probe_recovers_log_power():
    rep = exponent_probe(synthetic(lambda t: 3e6 * t * math.log(t)))
    assert abs(rep.a_hat - 1) < 1e-4 and abs(rep.b_hat - 2) < 1e-4


def test_probe_recovers_general_triple_over_three_decades():
    c, a, b = 2.5e3, 1.5, 3
    T = np.geomspace(1e3, 1e6, 12)
    est = LeadingTermRegressor().fit(T, c * T**a * np.log(T) ** (b - 1))
    assert est.a_ == pytest.approx(a, rel=1e-4)
    assert est.b_ == pytest.approx(b, rel=1e-4)
    assert est.c_ == pytest.approx(c, rel=1e-4)


def test_fit_constant_exact():
    c_hat, resid = fit_constant(synthetic(lambda t: 5e6 * t * math.log(t)), 1, 2)
    assert c_hat == pytest.approx(5e6, rel=1e-6)
    assert np.max(np.abs(resid)) < 1e-6


def test_fit_log_power_with_fixed_a():
    rep = fit_log_power(synthetic(lambda t: 4e6 * t * math.log(t)), 1)
    assert rep.a_hat == 1 and rep.b_hat == pytest.approx(2, abs=1e-6)


def test_linear_log_fit_exact_on_linear_curve():
    slope, intercept, resid = linear_log_fit(synthetic(lambda t: t * (3 + 2 * math.log(t))))
    assert slope == pytest.approx(2, rel=1e-4) and intercept == pytest.approx(3, rel=1e-3)


def test_grid_guards():
    with pytest.raises(ValueError, match="decades"):
        exponent_probe(synthetic(lambda t: t, lo=10, hi=15))
    with pytest.raises(ValueError, match="grid points"):
        exponent_probe(synthetic(lambda t: t, lo=10, hi=12))
    T = tuple(2**k for k in range(4, 20))
    with pytest.raises(ValueError, match="N\\(T\\) = 0"):
        exponent_probe(CountCurve(T, (0,) * len(T), CFG))


def test_estimator_protocol():
    est = LeadingTermRegressor(a=1, weighting="uniform")
    assert clone(est).get_params() == {"a": 1, "b": None, "weighting": "uniform"}
    T = np.geomspace(1e3, 1e7, 30).reshape(-1, 1)
    y = 2 * T[:, 0] * np.log(T[:, 0])
    est.fit(T, y)
    assert est.n_features_in_ == 1
    assert np.allclose(est.predict(T), y)
    # log-space R^2 style scoring still runs through the sklearn machinery
    scores = cross_val_score(LeadingTermRegressor(), T, y, cv=3)
    assert np.all(np.isfinite(scores))


def test_estimator_rejects_bad_input():
    with pytest.raises(ValueError):
        LeadingTermRegressor(weighting="bogus").fit([10, 100, 1000], [1, 2, 3])
    with pytest.raises(ValueError):
        LeadingTermRegressor().fit([0.5, 100, 1000], [1, 2, 3])
    with pytest.raises(ValueError):
        LeadingTermRegressor().fit([10, 100, 1000], [1, -2, 3])


def test_fit_report_invariants():
    with pytest.raises(ValueError):
        FitReport(1, 1, 1, -0.1, ((1, 1), (2, 2)))
    with pytest.raises(ValueError):
        FitReport(1, 1, 1, 0.1, ((2, 1), (1, 2)))


@pytest.mark.parametrize("kappa", [1.02, 1.25, 2.0])
def test_well_roundedness_linear(kappa):
    w = well_roundedness(lambda t: 3 * t, [10, 100, 1000], kappa)
    assert np.allclose(w.ratios, kappa - 1 / kappa)


def test_well_roundedness_log_expansion():
    k = 1.05
    w = well_roundedness(lambda t: t * math.log(t), [1e6, 1e9], k)
    for T, r in zip(w.thresholds, w.ratios):
        assert r == pytest.approx((k - 1 / k) * (1 + 1 / math.log(T)), rel=1e-3)


def test_well_roundedness_guard():
    with pytest.raises(ValueError):
        well_roundedness(lambda t: t, [10], 1.0)


def test_well_roundedness_monotone_in_kappa_on_real_data(hist):
    from maninbench.asymptotics import count_producer

    grid = [2**k for k in range(16, 33)]
    prod = count_producer(hist, CFG)
    big, small = well_roundedness(prod, grid, 1.25), well_roundedness(prod, grid, 1.10)
    assert all(s <= b + 0.02 for s, b in zip(small.ratios, big.ratios))


def test_pole_probe_on_zeta_like_histogram():
    B = 2000
    counts = (0,) + tuple(n**3 for n in range(1, B + 1))
    pp = dirichlet_pole_probe(HeightHistogram(B, counts), [4.5, 5.0, 6.0])
    # (s - 4) zeta(s - 3) at s = 6 is 2 zeta(3)
    assert pp.values[-1] == pytest.approx(2 * 1.2020569031595942, rel=1e-5)


def test_pole_probe_tail_bound_at_s6(hist):
    pp = dirichlet_pole_probe(hist, [6.0])
    # the neglected tail of (s - 4) sum h(n) n^-s is below the reported bound
    full = pp.values[0] + pp.tail_bounds[0]
    assert pp.tail_bounds[0] / pp.values[0] < 0.01
    assert pp.values[0] < full


def test_pole_probe_guards(hist):
    with pytest.raises(ValueError):
        dirichlet_pole_probe(hist, [4.0, 4.5])
    check_shell_envelope(hist)


def test_saturation_refuses_balanced(hist):
    with pytest.raises(ValueError, match="balanced"):
        saturation_profile(hist, ModelConfig.anticanonical(3), [2**20])


def test_saturation_profile_shape(hist):
    prof = saturation_profile(hist, ModelConfig(3, (4, 8)), [2**20, 2**24], Ks=(1, 2, None))
    assert prof.fractions[None] == (1.0, 1.0)
    assert all(a <= b for a, b in zip(prof.fractions[1], prof.fractions[2]))


def test_balanced_small_diagonal_share_falls(hist):
    for degrees, grid in [((4, 4), [2**12, 2**30]), ((2, 2), [2**6, 2**16])]:
        cfg = ModelConfig(3, degrees)
        fr = small_diagonal_fractions(hist, cfg, grid)
        for pair, (first, last) in fr.items():
            assert last < first, (degrees, pair)


def _closed_form(s):
    """Dirichlet series of h: primitive P^3 points by shell minus rank-one classes."""
    from mpmath import zeta

    return float((32 * zeta(s - 3) + 8 * zeta(s - 1)) / zeta(s) - 16 * (zeta(s - 1) / zeta(s)) ** 2)


@pytest.mark.parametrize("s", [5.5, 6.0, 7.0])
def test_pole_probe_brackets_closed_form(hist, s):
    pp = dirichlet_pole_probe(hist, [s])
    limit = (s - 4) * _closed_form(s)
    assert pp.values[0] <= limit <= pp.values[0] + pp.tail_bounds[0]


def test_compensated_limit_itself_is_not_flat():
    # the B -> infinity values already spread by more than 20% over [4.2, 4.8]
    vals = [(s - 4) * _closed_form(s) for s in (4.2, 4.8)]
    assert vals[1] / vals[0] - 1 > 0.2
