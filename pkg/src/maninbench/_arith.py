"""Small exact-arithmetic helpers shared by the counting code."""

from __future__ import annotations

from functools import lru_cache

from sympy import sieve


def iroot(x: int, m: int) -> int:
    """Largest integer ``n >= 0`` with ``n**m <= x``."""
    x, m = int(x), int(m)
    if x < 0 or m < 1:
        raise ValueError(f"iroot needs x >= 0 and m >= 1, got ({x}, {m})")
    if x < 2 or m == 1:
        return x
    try:
        n = int(round(x ** (1.0 / m)))
    except OverflowError:
        n = 1 << -(-x.bit_length() // m)
        while True:  # integer Newton from above
            nxt = ((m - 1) * n + x // n ** (m - 1)) // m
            if nxt >= n:
                break
            n = nxt
    while n ** m > x:
        n -= 1
    while (n + 1) ** m <= x:
        n += 1
    return n


@lru_cache(maxsize=8)
def mobius_table(n: int) -> tuple:
    """``mu(0..n)`` with ``mu(0) = 0``."""
    return (0,) + tuple(sieve.mobiusrange(1, n + 1))


@lru_cache(maxsize=8)
def totient_table(n: int) -> tuple:
    """``phi(0..n)`` with ``phi(0) = 0``."""
    return (0,) + tuple(sieve.totientrange(1, n + 1))


def is_prime(p: int) -> bool:
    from sympy import isprime

    return bool(isprime(p))
