import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from maninbench import cache
from maninbench.enumeration import (
    CountCurve,
    HeightHistogram,
    HistogramTooShort,
    ResourceLimitError,
    count_curve,
    count_on_small_diagonal,
    count_points,
    count_with_clamp,
    geometric_grid,
    height_histogram,
    near_diagonal_fraction,
    random_matrix_of_height,
    schanuel_constant,
    schanuel_count,
    singular_classes,
    snap_to_attained,
)
from maninbench.model import ModelConfig, height
from maninbench.oracles import (
    brute_force_histogram,
    brute_force_singular,
    direct_count,
    sieve_cumulative,
    sieve_histogram,
)

# h(1..12), frozen from the exhaustive box scan
FROZEN_H = [24, 200, 784, 1728, 3872, 5712, 10800, 14176, 22256, 27552, 42320, 46304]


def test_frozen_prefix_matches_brute_force():
    assert brute_force_histogram(12)[1:] == FROZEN_H


def test_kernel_matches_frozen_prefix():
    assert list(height_histogram(12).counts[1:]) == FROZEN_H


def test_kernel_matches_sieve_oracle(hist):
    assert list(hist.counts[1:41]) == sieve_histogram(40)[1:]
    assert hist.total(256) == sieve_cumulative(256)
    assert hist[256] == 469751808


@pytest.mark.parametrize("B", [1, 2, 3, 7, 12])
def test_singular_classes_oracle(B):
    assert singular_classes(B) == brute_force_singular(B)


def test_schanuel_small_values():
    assert schanuel_count(1) == 40
    assert schanuel_count(2) == (5**4 - 1) // 2 - (3**4 - 1) // 2


def test_schanuel_trend_towards_constant():
    ratios = [schanuel_count(B) / B**4 for B in (100, 1000, 4000)]
    errs = [abs(r / schanuel_constant() - 1) for r in ratios]
    assert errs[-1] < errs[0] and errs[-1] < 1e-3


def test_schanuel_guard():
    with pytest.raises(ResourceLimitError):
        schanuel_count(10, limit=5)


def test_histogram_guard():
    with pytest.raises(ResourceLimitError):
        height_histogram(100, limit=50)
    with pytest.raises(TypeError):
        height_histogram(10.0)


def test_histogram_rejects_impossible_counts():
    with pytest.raises(ValueError):
        HeightHistogram(1, (0, 10**6))
    with pytest.raises(ValueError):
        HeightHistogram(2, (0, 24))


def test_cache_roundtrip_and_extension(tmp_path):
    small = height_histogram(20, cache_dir=tmp_path)
    path = cache.cache_path(tmp_path)
    assert path.read_text().splitlines()[0] == "# maninbench-height-histogram v1 bound=20"
    fp20 = cache.fingerprint(path)
    assert height_histogram(10, cache_dir=tmp_path).counts == small.counts[:11]
    assert cache.fingerprint(path) == fp20  # served from cache, not rewritten
    big = height_histogram(30, cache_dir=tmp_path)
    assert big.counts[:21] == small.counts
    assert big.counts == height_histogram(30).counts
    assert cache.read_histogram(path) == list(big.counts)


def test_cache_stale_version_is_recomputed(tmp_path):
    path = cache.cache_path(tmp_path)
    path.write_text("# maninbench-height-histogram v0 bound=2\n1 999\n2 999\n")
    assert cache.read_histogram(path) is None
    assert height_histogram(2, cache_dir=tmp_path).counts == (0, 24, 200)


@pytest.mark.parametrize(
    "text",
    ["garbage\n", "# maninbench-height-histogram v1 bound=3\n1 24\n2 200\n", "# maninbench-height-histogram v1 bound=2\n1 24\n3 200\n"],
)
def test_cache_malformed(tmp_path, text):
    path = cache.cache_path(tmp_path)
    path.write_text(text)
    with pytest.raises(cache.CacheFormatError):
        cache.read_histogram(path)


@pytest.mark.parametrize(
    "degrees, T",
    [((4,), 81), ((2,), 9), ((4, 4), 81), ((2, 4), 9), ((4, 2), 9), ((2, 2), 9)],
)
def test_convolution_matches_direct_enumeration(degrees, T):
    cfg = ModelConfig(len(degrees) + 1, degrees)
    hist = height_histogram(3)
    assert count_points(hist, cfg, T) == direct_count(cfg, T, bound=3)


def test_r2_count_is_cumulative_histogram(hist):
    cfg = ModelConfig.anticanonical(2)
    for T in (1, 15, 16, 80, 81, 2**20):
        assert count_points(hist, cfg, T) == hist.total(math.isqrt(math.isqrt(T)))


def test_coverage_error_names_required_bound():
    hist = height_histogram(10)
    with pytest.raises(HistogramTooShort) as err:
        count_points(hist, ModelConfig.anticanonical(2), 20**4)
    assert err.value.required == 20 and "bound >= 20" in str(err.value)


def test_small_diagonal_counts(hist):
    cfg = ModelConfig(3, (4, 8))
    T = 2**24
    # Y_12: x_2 = 1 leaves the degree-8 factor; Y_23 merges into degree 12
    assert count_on_small_diagonal(hist, cfg, T, 1, 2) == count_points(hist, ModelConfig(2, (8,)), T)
    assert count_on_small_diagonal(hist, cfg, T, 2, 3) == count_points(hist, ModelConfig(2, (12,)), T)
    assert count_on_small_diagonal(hist, cfg, T, 1, 3) <= count_points(hist, cfg, T)


def test_clamp_limits(hist):
    cfg = ModelConfig(3, (4, 8))
    T = 2**28
    assert count_with_clamp(hist, cfg, T, 3, 10**9) == count_points(hist, cfg, T)
    assert count_with_clamp(hist, cfg, T, 3, 1) == 24 * count_points(hist, ModelConfig(2, (4,)), T)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=1, max_value=2**30), st.integers(min_value=1, max_value=2**30))
def test_counts_monotone(hist, t1, t2):
    cfg = ModelConfig.anticanonical(3)
    lo, hi = sorted((t1, t2))
    assert count_points(hist, cfg, lo) <= count_points(hist, cfg, hi)


def test_geometric_grid():
    assert geometric_grid(16, 256) == [16, 32, 64, 128, 256]
    assert geometric_grid(10, 30, 1.5) == [10, 15, 22]
    with pytest.raises(ValueError):
        geometric_grid(10, 20, 1.0)


def test_snap_to_attained():
    cfg = ModelConfig.anticanonical(3)
    assert snap_to_attained([100, 300, 700], cfg) == [81, 256, 625]
    with pytest.raises(ValueError):
        snap_to_attained([100], ModelConfig(3, (4, 8)))


def test_curve_csv(hist):
    cfg = ModelConfig.anticanonical(3)
    curve = count_curve(hist, cfg, [16, 256, 4096], diagonals=True)
    lines = curve.to_csv().splitlines()
    assert lines[0] == "T,N,N_diag(1,2),N_diag(1,3),N_diag(2,3)"
    assert lines[1].split(",")[:2] == ["16", str(count_points(hist, cfg, 16))]


def test_curve_validation():
    cfg = ModelConfig.anticanonical(2)
    with pytest.raises(ValueError):
        CountCurve((2, 1), (1, 2), cfg)
    with pytest.raises(ValueError):
        CountCurve((1, 2), (2, 1), cfg)


def test_sampler_lands_on_the_shell():
    import numpy as np

    rng = np.random.default_rng(5)
    for n in (1, 2, 7, 30):
        for _ in range(20):
            assert height(random_matrix_of_height(n, rng)) == n


def test_near_diagonal_r2_has_exact_answer(hist):
    cfg = ModelConfig.anticanonical(2)
    est = near_diagonal_fraction(hist, cfg, 10**4, K=3, sample_size=4000, seed=11)
    assert est.exact == Fraction(hist.total(3), hist.total(10))
    assert est.contains(est.exact)


def test_near_diagonal_r3_is_seeded(hist):
    cfg = ModelConfig.anticanonical(3)
    a = near_diagonal_fraction(hist, cfg, 10**6, K=2, sample_size=300, seed=3)
    b = near_diagonal_fraction(hist, cfg, 10**6, K=2, sample_size=300, seed=3)
    assert a == b and 0 < a.estimate < 1
    with pytest.raises(ValueError):
        near_diagonal_fraction(hist, cfg, 10**6, K=2, sample_size=10, seed=None)
