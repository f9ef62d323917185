"""p-adic strata of the boundary quadric and the local Euler factor.

For a prime ``p`` and depth ``m`` the points of ``P^3(Z/p^m)`` are split by
``v_p(det)``. Under the uniform measure these are the boundary-measure
strata ``mu_k``; the group Haar measure differs by ``|det|_p^{-kappa}``,
so the local height integral at ``s`` is ``vol * sum_k mu_k p^{k(kappa - s)}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from ._arith import is_prime
from .model import KAPPA

MODULUS_LIMIT = 10**4


@dataclass(frozen=True)
class LocalDensityProfile:
    """``mu[k]`` is the share of ``P^3(Z/p^m)`` with ``v_p(det) = k``; ``tail`` has ``det = 0 mod p^m``."""

    p: int
    depth: int
    mu: Tuple[Fraction, ...]
    tail: Fraction

    def __post_init__(self):
        mu = tuple(Fraction(x) for x in self.mu)
        if len(mu) != self.depth:
            raise ValueError(f"need {self.depth} strata, got {len(mu)}")
        if any(not 0 <= x <= 1 for x in mu + (Fraction(self.tail),)):
            raise ValueError("strata masses must lie in [0, 1]")
        if sum(mu) + Fraction(self.tail) != 1:
            raise ValueError("strata masses and tail must sum to 1")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "tail", Fraction(self.tail))


def _product_counts(q: int, step: int) -> np.ndarray:
    """``P[x] = #{(u, v) : u, v multiples of step mod q, uv = x mod q}``."""
    r = np.arange(0, q, step, dtype=np.int64)
    return np.bincount((np.outer(r, r) % q).ravel(), minlength=q).astype(np.int64)


def _det_counts(q: int, step: int) -> np.ndarray:
    """``D[y] = #{(a, b, c, d) in (step Z/q)^4 : ad - bc = y}`` as a cyclic correlation."""
    P = _product_counts(q, step)
    D = np.empty(q, dtype=object)
    for y in range(q):
        # bc = ad - y
        D[y] = int(np.dot(P, np.roll(P, y)))
    return D


def _valuation(y: int, p: int, m: int) -> int:
    v = 0
    while v < m and y % p ** (v + 1) == 0:
        v += 1
    return v


def local_density(p: int, depth: int) -> LocalDensityProfile:
    """Exact strata masses over all primitive 4-tuples mod ``p^depth``.

    Every projective point has the same number of unit representatives, so
    counting primitive tuples gives the uniform measure on ``P^3(Z/p^m)``.
    Tuples are counted through the determinant's value distribution; the
    imprimitive ones (all entries divisible by ``p``) are subtracted.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if depth < 2:
        raise ValueError(f"depth must be >= 2, got {depth}")
    q = p**depth
    if q > MODULUS_LIMIT:
        raise ValueError(f"p^depth = {q} exceeds the modulus limit {MODULUS_LIMIT}")
    D = _det_counts(q, 1) - _det_counts(q, p)
    total = q**4 - (q // p) ** 4
    strata = [0] * (depth + 1)
    for y in range(q):
        strata[_valuation(y, p, depth)] += int(D[y])
    assert sum(strata) == total
    return LocalDensityProfile(
        p, depth, tuple(Fraction(n, total) for n in strata[:depth]), Fraction(strata[depth], total)
    )


def projective_volume(p: int) -> Fraction:
    """Measure of ``P^3(Z_p)``: ``#P^3(F_p) / p^3``."""
    return Fraction(p**3 + p**2 + p + 1, p**3)


@dataclass(frozen=True)
class LocalFactor:
    p: int
    s: float
    factor: float
    regularized: float

    @property
    def deviation(self) -> float:
        return abs(self.regularized - 1.0)


def local_factor_check(
    profile: LocalDensityProfile,
    s: float,
    kappa: int = KAPPA,
    volume: Optional[Fraction] = None,
    tail: str = "geometric",
) -> LocalFactor:
    """Local height integral at ``s`` and its value after removing ``zeta_p(s - kappa + 1)``.

    ``nu_k = mu_k p^{kappa k}`` converts boundary strata to Haar strata.
    ``tail='geometric'`` continues the strata beyond the depth with ratio
    ``1/p`` (the smooth-quadric law); ``tail='truncate'`` drops them.
    ``volume`` defaults to the measure of ``P^3(Z_p)``; pass 1 for a
    probability-normalized profile.
    """
    p, m = profile.p, profile.depth
    ratio = float(p) ** (kappa - 1 - s)  # decay of successive Haar strata terms
    if ratio >= 1:
        raise ValueError(f"strata sum diverges at s={s} (needs s > {kappa - 1})")
    vol = float(projective_volume(p) if volume is None else volume)
    terms = [float(mu) * float(p) ** (k * (kappa - s)) for k, mu in enumerate(profile.mu)]
    total = sum(terms)
    if tail == "geometric":
        # tail mass spread as (1 - 1/p) p^{-(k - m)} over strata k >= m
        total += float(profile.tail) * (1 - 1 / p) * float(p) ** (m * (kappa - s)) / (1 - ratio)
    elif tail != "truncate":
        raise ValueError(f"unknown tail mode {tail!r}")
    factor = vol * total
    regularized = factor * (1 - float(p) ** (-(s - kappa + 1)))
    return LocalFactor(p, float(s), factor, regularized)


def quadric_share(p: int) -> Fraction:
    """Share of ``P^3(F_p)`` on the quadric ``det = 0``: ``(p+1)^2 / #P^3(F_p)``."""
    return Fraction((p + 1) ** 2, p**3 + p**2 + p + 1)
