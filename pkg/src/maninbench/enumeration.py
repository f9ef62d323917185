"""Exact counting of rational points of bounded height on the model.

The height histogram ``h(n)`` (PGL2(Q) points of height exactly ``n``) is
the only expensive object; every count ``N(T)`` over ``(P^3)^(r-1)`` is an
iterated convolution of ``h`` under the multiplicative constraint
``prod n_k^{m_k} <= T``, carried out in Python integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import cache as _cache
from ._arith import iroot, mobius_table, totient_table
from ._validation import check_positive_int, check_seed
from .model import (
    ModelConfig,
    PrimitiveMatrix,
    group_op,
    height,
    inverse,
    normalize,
    restricted_degrees,
)

DEFAULT_BOUND_LIMIT = 2048
SCHANUEL_LIMIT = 10**7
Pair = Tuple[int, int]


class ResourceLimitError(ValueError):
    pass


class HistogramTooShort(ValueError):
    def __init__(self, required: int, available: int):
        self.required = required
        self.available = available
        super().__init__(
            f"histogram bound {available} is too short for this threshold; "
            f"rebuild with bound >= {required}"
        )


@dataclass(frozen=True)
class HeightHistogram:
    """``counts[n] = h(n)`` for ``1 <= n <= bound``; ``counts[0]`` is 0."""

    bound: int
    counts: Tuple[int, ...]

    def __post_init__(self):
        counts = tuple(int(x) for x in self.counts)
        if len(counts) != self.bound + 1 or counts[0] != 0:
            raise ValueError("counts must have length bound+1 with counts[0] == 0")
        for n in range(1, self.bound + 1):
            if not 0 <= counts[n] <= (2 * n + 1) ** 4 // 2:
                raise ValueError(f"h({n}) = {counts[n]} violates the shell bound")
        object.__setattr__(self, "counts", counts)

    def __getitem__(self, n: int) -> int:
        return self.counts[n]

    @cached_property
    def cumulative(self) -> Tuple[int, ...]:
        out, s = [], 0
        for x in self.counts:
            s += x
            out.append(s)
        return tuple(out)

    def total(self, n: int) -> int:
        """Number of points of height ``<= n``."""
        if n > self.bound:
            raise HistogramTooShort(n, self.bound)
        return self.cumulative[max(n, 0)]

    def truncate(self, bound: int) -> "HeightHistogram":
        if bound > self.bound:
            raise HistogramTooShort(bound, self.bound)
        return HeightHistogram(bound, self.counts[: bound + 1])

    def as_array(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=np.int64)


def height_histogram(
    bound: int, cache_dir=None, limit: int = DEFAULT_BOUND_LIMIT
) -> HeightHistogram:
    """Exact ``h(1..bound)``, reading and extending the on-disk cache if given."""
    from ._kernels import shell_counts

    bound = check_positive_int(bound, "bound")
    if bound > limit:
        raise ResourceLimitError(f"bound {bound} exceeds the configured limit {limit}")
    path = _cache.cache_path(cache_dir) if cache_dir is not None else None
    cached = _cache.read_histogram(path) if path is not None else None
    if cached is not None and len(cached) - 1 >= bound:
        return HeightHistogram(bound, tuple(cached[: bound + 1]))

    counts = list(cached) if cached else [0]
    lo = len(counts)
    signed = shell_counts(lo, bound)
    for n in range(lo, bound + 1):
        # every class {M, -M} was counted twice
        counts.append(int(signed[n]) // 2)
    if path is not None:
        _cache.write_histogram(path, counts)
    return HeightHistogram(bound, tuple(counts))


def schanuel_count(bound: int, limit: int = SCHANUEL_LIMIT) -> int:
    """Points of ``P^3(Q)`` with max-norm height ``<= bound`` (Moebius sieve over content)."""
    bound = check_positive_int(bound, "bound")
    if bound > limit:
        raise ResourceLimitError(f"bound {bound} exceeds the configured limit {limit}")
    mu = mobius_table(bound)
    total = 0
    for d in range(1, bound + 1):
        if mu[d]:
            total += mu[d] * ((2 * (bound // d) + 1) ** 4 - 1)
    return total // 2


def singular_classes(bound: int) -> int:
    """Primitive singular classes of height ``<= bound``.

    A primitive rank-one matrix is ``u v^T`` with ``u, v`` primitive in
    ``Z^2``, unique up to ``(u, v) -> (-u, -v)``, and its height is
    ``|u|_max |v|_max``. There are ``8 phi(k)`` primitive vectors of
    max-norm ``k``, which gives ``16 sum_{kl <= B} phi(k) phi(l)`` classes.
    """
    bound = check_positive_int(bound, "bound")
    phi = totient_table(bound)
    Phi = np.cumsum(np.asarray(phi, dtype=object))
    return 16 * sum(phi[k] * int(Phi[bound // k]) for k in range(1, bound + 1))


def schanuel_constant() -> float:
    """``lim schanuel_count(B) / B^4 = 2^4 / (2 zeta(4)) = 720 / pi^4``."""
    return 720.0 / math.pi**4


def _convolve(hist: HeightHistogram, exponents: Sequence[int], T: int) -> int:
    """``sum prod h(n_k)`` over ``prod n_k^{e_k} <= T``."""
    if T < 1:
        return 0
    if not exponents:
        return 1
    exps = sorted(exponents, reverse=True)  # prune the threshold lattice earliest
    required = iroot(T, exps[-1])
    if required > hist.bound:
        raise HistogramTooShort(required, hist.bound)
    h, cum, last = hist.counts, hist.cumulative, len(exps) - 1

    @lru_cache(maxsize=None)
    def rec(k: int, X: int) -> int:
        m = exps[k]
        if k == last:
            return cum[iroot(X, m)]
        total, n = 0, 1
        while n**m <= X:
            total += h[n] * rec(k + 1, X // n**m)
            n += 1
        return total

    return rec(0, int(T))


def count_points(hist: HeightHistogram, cfg: ModelConfig, T: int) -> int:
    """``N(T)``: points of the open orbit with ``L``-height ``<= T``."""
    return _convolve(hist, cfg.degrees, int(T))


def count_on_small_diagonal(hist: HeightHistogram, cfg: ModelConfig, T: int, i: int, j: int) -> int:
    """Points of ``B_T`` on ``Y_ij``: ``x_j = 1`` when ``i = 1``, else ``x_i = x_j``."""
    degrees, _ = restricted_degrees(cfg, i, j)
    return _convolve(hist, degrees, int(T))


def count_with_clamp(hist: HeightHistogram, cfg: ModelConfig, T: int, j: int, K: int) -> int:
    """Points of ``B_T`` with ``height(x_j) <= K``."""
    T = int(T)
    m = cfg.degree(j)
    rest = [cfg.degree(k) for k in range(2, cfg.r + 1) if k != j]
    total, n = 0, 1
    while n <= K and n**m <= T:
        if n > hist.bound:
            raise HistogramTooShort(n, hist.bound)
        total += hist[n] * _convolve(hist, rest, T // n**m)
        n += 1
    return total


@dataclass(frozen=True)
class CountCurve:
    thresholds: Tuple[int, ...]
    values: Tuple[int, ...]
    config: ModelConfig
    diagonals: Dict[Pair, Tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self):
        ts = tuple(int(t) for t in self.thresholds)
        vs = tuple(int(v) for v in self.values)
        if len(ts) != len(vs):
            raise ValueError("thresholds and values differ in length")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("thresholds must be strictly increasing")
        if any(b < a for a, b in zip(vs, vs[1:])):
            raise ValueError("counts must be nondecreasing in T")
        object.__setattr__(self, "thresholds", ts)
        object.__setattr__(self, "values", vs)

    def __len__(self):
        return len(self.thresholds)

    def to_csv(self) -> str:
        pairs = sorted(self.diagonals)
        header = ["T", "N"] + [f"N_diag({i},{j})" for i, j in pairs]
        rows = [",".join(header)]
        for k, (t, v) in enumerate(zip(self.thresholds, self.values)):
            rows.append(",".join([str(t), str(v)] + [str(self.diagonals[p][k]) for p in pairs]))
        return "\n".join(rows) + "\n"


def geometric_grid(t_min: int, t_max: int, ratio: float = 2.0) -> List[int]:
    """Integer thresholds ``round(t_min * ratio^k) <= t_max``, deduplicated."""
    t_min = check_positive_int(t_min, "t_min")
    t_max = check_positive_int(t_max, "t_max")
    if ratio <= 1:
        raise ValueError(f"grid ratio must exceed 1, got {ratio}")
    if t_max < t_min:
        raise ValueError("t_max < t_min")
    out, k = [], 0
    while True:
        t = int(round(t_min * ratio**k)) if ratio != int(ratio) else t_min * int(ratio) ** k
        if t > t_max:
            break
        if not out or t > out[-1]:
            out.append(t)
        k += 1
    return out


def snap_to_attained(thresholds: Sequence[int], cfg: ModelConfig) -> List[int]:
    """Round each threshold down to the largest attained ``L``-height.

    Only for equal degrees ``m``, where attained heights are exactly the
    perfect ``m``-th powers; ``N`` is constant between them.
    """
    if len(set(cfg.degrees)) != 1:
        raise ValueError("snapping needs equal degrees")
    m = cfg.degrees[0]
    out = []
    for t in thresholds:
        s = iroot(int(t), m) ** m
        if not out or s > out[-1]:
            out.append(s)
    return out


def count_curve(
    hist: HeightHistogram, cfg: ModelConfig, thresholds: Sequence[int], diagonals: bool = False
) -> CountCurve:
    values = [count_points(hist, cfg, t) for t in thresholds]
    diag = {}
    if diagonals:
        for i in range(1, cfg.r + 1):
            for j in range(i + 1, cfg.r + 1):
                diag[(i, j)] = tuple(count_on_small_diagonal(hist, cfg, t, i, j) for t in thresholds)
    return CountCurve(tuple(thresholds), tuple(values), cfg, diag)


# --- near-diagonal sampling -------------------------------------------------


@dataclass(frozen=True)
class FractionEstimate:
    estimate: float
    radius: float
    hits: int
    sample_size: int
    exact: Optional[Fraction] = None

    def contains(self, value) -> bool:
        return abs(float(value) - self.estimate) <= self.radius


def _wilson_radius(hits: int, n: int, z: float = 1.959963984540054) -> float:
    p = hits / n
    denom = 1 + z * z / n
    centre = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    # radius around the raw estimate that still covers the Wilson interval
    return max(abs(centre + half - p), abs(p - (centre - half)))


def random_matrix_of_height(n: int, rng: np.random.Generator) -> PrimitiveMatrix:
    """Uniform sample from the PGL2(Q) points of height exactly ``n``.

    Draws uniformly on the cube shell ``max |v_i| = n`` by choosing a face
    and thinning by the number of faces the point lies on, then rejects
    imprimitive and singular vectors.
    """
    while True:
        v = rng.integers(-n, n + 1, size=4)
        v[rng.integers(4)] = n if rng.integers(2) else -n
        faces = int(np.count_nonzero(np.abs(v) == n))
        if faces > 1 and rng.integers(faces) != 0:
            continue
        a, b, c, d = (int(x) for x in v)
        if math.gcd(a, b, c, d) == 1 and a * d != b * c:
            return normalize(a, b, c, d)


class _TupleSampler:
    """Draws height tuples with probability proportional to ``prod h(n_k)`` on ``B_T``."""

    def __init__(self, hist: HeightHistogram, degrees: Sequence[int], T: int):
        self.hist = hist
        self.degrees = tuple(degrees)
        self.T = int(T)
        self._weights = {}

    def _table(self, k: int, X: int):
        key = (k, X)
        if key not in self._weights:
            m = self.degrees[k]
            rest = self.degrees[k + 1 :]
            w = []
            n = 1
            while n**m <= X:
                w.append(self.hist[n] * _convolve(self.hist, rest, X // n**m))
                n += 1
            total = sum(w)
            self._weights[key] = np.array([Fraction(x, total) for x in w], dtype=float)
        return self._weights[key]

    def draw(self, rng: np.random.Generator) -> List[int]:
        X, out = self.T, []
        for k, m in enumerate(self.degrees):
            p = self._table(k, X)
            n = int(rng.choice(len(p), p=p / p.sum())) + 1
            out.append(n)
            X //= n**m
        return out


def near_diagonal_hit(points: Sequence[PrimitiveMatrix], K: int) -> bool:
    """Whether ``height(x_i^{-1} x_j) <= K`` for some ``i < j``, with ``x_1 = 1``."""
    if any(height(x) <= K for x in points):
        return True
    for a in range(len(points)):
        inv = inverse(points[a])
        for b in range(a + 1, len(points)):
            if height(group_op(inv, points[b])) <= K:
                return True
    return False


def near_diagonal_fraction(
    hist: HeightHistogram,
    cfg: ModelConfig,
    T: int,
    K: int,
    sample_size: int,
    seed: int,
) -> FractionEstimate:
    """Monte Carlo share of ``B_T`` lying within height ``K`` of some small diagonal."""
    K = check_positive_int(K, "K")
    sample_size = check_positive_int(sample_size, "sample_size")
    seed = check_seed(seed)
    total = count_points(hist, cfg, T)
    if total == 0:
        raise ValueError(f"B_T is empty for T={T}")
    rng = np.random.default_rng(seed)
    sampler = _TupleSampler(hist, cfg.degrees, T)
    hits = 0
    for _ in range(sample_size):
        heights = sampler.draw(rng)
        pts = [random_matrix_of_height(n, rng) for n in heights]
        hits += near_diagonal_hit(pts, K)
    exact = None
    if cfg.r == 2:
        exact = Fraction(hist.total(min(K, iroot(int(T), cfg.degrees[0]))), total)
    return FractionEstimate(hits / sample_size, _wilson_radius(hits, sample_size), hits, sample_size, exact)
