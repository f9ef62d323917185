"""Compiled inner loop for the height histogram.

Counts sign-unreduced primitive nonsingular integer 2x2 matrices by shell
``max(|a|, |b|, |c|, |d|) = n``. The loop runs over the first three
entries; the fourth is resolved in closed form: the admissible ``d`` are
those coprime to ``g3 = gcd(a, b, c)``, minus the single root ``d0 = bc/a``
of the determinant (when it exists), and the whole fibre when ``a = 0`` and
``bc = 0``.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _gcd_table(n):
    G = np.zeros((n + 1, n + 1), np.int64)
    for x in range(n + 1):
        for y in range(x, n + 1):
            a, b = x, y
            while b:
                a, b = b, a % b
            G[x, y] = a
            G[y, x] = a
    return G


@njit(cache=True)
def shell_counts(lo, hi):
    """Signed counts for shells ``lo..hi`` (index ``n`` of the returned array).

    Entries below ``lo`` are left at zero, so a cached histogram can be
    extended upward without redoing its lower shells.
    """
    B = hi
    G = _gcd_table(B)
    # cop[g, n] = #{d in [-n, n] : gcd(g, |d|) = 1}
    cop = np.zeros((B + 1, B + 1), np.int64)
    for g in range(B + 1):
        c = 1 if g == 1 else 0
        cop[g, 0] = c
        for n in range(1, B + 1):
            if G[g, n] == 1:
                c += 2
            cop[g, n] = c

    fibres = np.zeros((B + 1, B + 1), np.int64)  # triples by (max, content)
    out = np.zeros(B + 1, np.int64)
    for a in range(-B, B + 1):
        aa = abs(a)
        for b in range(-B, B + 1):
            ab = abs(b)
            gab = G[aa, ab]
            mab = max(aa, ab)
            for c in range(-B, B + 1):
                ac = abs(c)
                bc = b * c
                if a == 0 and bc == 0:
                    continue  # det = -bc vanishes for every d
                g3 = G[gab, ac]
                m3 = max(mab, ac)
                fibres[m3, g3] += 1
                if a != 0 and bc % a == 0:
                    d0 = bc // a
                    ad0 = abs(d0)
                    if ad0 <= B and G[g3, ad0] == 1:
                        s = max(m3, ad0)
                        if s >= lo:
                            out[s] -= 1
    for m3 in range(B + 1):
        for g3 in range(B + 1):
            t = fibres[m3, g3]
            if t == 0:
                continue
            if m3 >= lo:
                out[m3] += t * cop[g3, m3]
            for n in range(max(m3 + 1, lo), B + 1):
                if G[g3, n] == 1:
                    out[n] += 2 * t
    return out
