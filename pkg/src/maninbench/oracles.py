"""Independent verification paths.

None of these share code with the production counting path. They are
slow on purpose and meant for cross-checks at small sizes.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Dict, List

import numpy as np

from ._arith import iroot, mobius_table
from .model import ModelConfig, PrimitiveMatrix, height, normalize


def _box(bound: int) -> np.ndarray:
    r = np.arange(-bound, bound + 1, dtype=np.int64)
    return np.stack([g.ravel() for g in np.meshgrid(r, r, r, r, indexing="ij")])


def brute_force_histogram(bound: int) -> List[int]:
    """``[0, h(1), ..., h(bound)]`` by testing every matrix in the box."""
    if bound > 12:
        raise ValueError("brute force is limited to bound <= 12")
    a, b, c, d = _box(bound)
    shell = np.max(np.abs(np.stack([a, b, c, d])), axis=0)
    good = (a * d - b * c != 0) & (np.gcd.reduce(np.stack([a, b, c, d]), axis=0) == 1)
    counts = np.bincount(shell[good], minlength=bound + 1)
    return [int(x) // 2 for x in counts]


def brute_force_singular(bound: int) -> int:
    """Primitive singular classes of height ``<= bound`` by direct scan."""
    if bound > 12:
        raise ValueError("brute force is limited to bound <= 12")
    a, b, c, d = _box(bound)
    good = (a * d - b * c == 0) & (np.gcd.reduce(np.stack([a, b, c, d]), axis=0) == 1)
    return int(np.count_nonzero(good)) // 2


def _singular_raw(N: int) -> int:
    """All (not necessarily primitive) integer matrices in ``[-N, N]^4`` with ``ad = bc``."""
    if N == 0:
        return 1
    u = np.arange(1, N + 1, dtype=np.int64)
    p = np.bincount(np.outer(u, u).ravel())  # p[k] = #{(x, y) in [1, N]^2 : xy = k}
    # product 0: 4N + 1 pairs on each side; product +-k: 2 p(k) pairs each
    return (4 * N + 1) ** 2 + 8 * int(np.sum(p.astype(object) ** 2))


def sieve_cumulative(bound: int) -> int:
    """Primitive nonsingular sign classes with height ``<= bound``.

    Moebius inversion over the content: nonsingularity is scale invariant,
    so primitive counts are ``sum_d mu(d) R(floor(B / d))`` with ``R`` the
    raw nonsingular count in the box.
    """
    mu = mobius_table(bound)
    total = 0
    for d in range(1, bound + 1):
        if mu[d]:
            N = bound // d
            total += mu[d] * ((2 * N + 1) ** 4 - _singular_raw(N))
    return total // 2


def sieve_histogram(bound: int) -> List[int]:
    cum = [0] + [sieve_cumulative(n) for n in range(1, bound + 1)]
    return [0] + [cum[n] - cum[n - 1] for n in range(1, bound + 1)]


def explicit_points(bound: int) -> List[PrimitiveMatrix]:
    """Every PGL2(Q) point of height ``<= bound`` as a normalized matrix."""
    if bound > 8:
        raise ValueError("explicit listing is limited to bound <= 8")
    seen = set()
    for v in product(range(-bound, bound + 1), repeat=4):
        if v[0] * v[3] - v[1] * v[2] == 0:
            continue
        try:
            seen.add(normalize(*v))
        except ValueError:
            continue
    return sorted(seen, key=lambda x: x.entries)


def direct_count(cfg: ModelConfig, T: int, bound: int) -> int:
    """``N(T)`` by nested loops over explicit tuples of matrices (``r <= 3``)."""
    if cfg.r > 3:
        raise ValueError("direct enumeration is limited to r <= 3")
    if iroot(int(T), min(cfg.degrees)) > bound:
        raise ValueError("bound does not cover the threshold")
    pts = explicit_points(bound)
    hs = [height(x) for x in pts]
    count = 0
    if cfg.r == 2:
        (m,) = cfg.degrees
        for x in hs:
            count += x**m <= T
        return count
    m2, m3 = cfg.degrees
    for x in hs:
        wx = x**m2
        if wx > T:
            continue
        for y in hs:
            count += wx * y**m3 <= T
    return count


def projective_points_mod(p: int, m: int):
    """Canonical representatives of ``P^3(Z / p^m)``: first unit coordinate equal to 1."""
    q = p**m
    if q**3 * 4 > 5 * 10**6:
        raise ValueError("projective enumeration limited to small p^m")
    reps = []
    for pos in range(4):
        # coordinates before pos are non-units, pos is 1, the rest arbitrary
        nonunits = range(0, q, p)
        for head in product(nonunits, repeat=pos):
            for tail in product(range(q), repeat=3 - pos):
                reps.append(head + (1,) + tail)
    return reps


def brute_force_density(p: int, m: int) -> Dict[int, Fraction]:
    """Valuation strata of ``det`` on ``P^3(Z/p^m)``; key ``m`` is the tail ``det = 0``."""
    q = p**m
    counts: Dict[int, int] = {}
    reps = projective_points_mod(p, m)
    for a, b, c, d in reps:
        det = (a * d - b * c) % q
        v = 0
        while v < m and det % p**(v + 1) == 0:
            v += 1
        counts[v] = counts.get(v, 0) + 1
    return {k: Fraction(n, len(reps)) for k, n in sorted(counts.items())}
