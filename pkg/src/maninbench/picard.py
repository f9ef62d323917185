"""Exact Picard-lattice combinatorics: Manin invariants and the balance test.

Everything here works on the boundary basis ``-K_X = sum kappa_a D_a`` and
``L = sum lambda_a D_a`` with exact :class:`fractions.Fraction` arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Optional, Sequence, Tuple

Pair = Tuple[int, int]


def _as_fractions(values: Iterable, name: str) -> Tuple[Fraction, ...]:
    out = []
    for v in values:
        if isinstance(v, float):
            raise TypeError(f"{name} must be exact (int, Fraction or str), got float {v!r}")
        out.append(Fraction(v))
    return tuple(out)


@dataclass(frozen=True)
class DivisorGeometry:
    """Boundary divisors with their anticanonical coefficients."""

    labels: Tuple[str, ...]
    kappa: Tuple[Fraction, ...]

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        kappa = _as_fractions(self.kappa, "kappa")
        if len(labels) != len(kappa):
            raise ValueError(f"{len(labels)} labels but {len(kappa)} kappa values")
        if len(set(labels)) != len(labels):
            raise ValueError(f"boundary labels must be distinct: {labels}")
        if any(k < 1 for k in kappa):
            raise ValueError(f"every kappa must be >= 1, got {kappa}")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "kappa", kappa)

    def __len__(self):
        return len(self.labels)


@dataclass(frozen=True)
class LineBundleClass:
    """Coefficients of ``L`` on the boundary basis (``lam`` since ``lambda`` is reserved)."""

    lam: Tuple[Fraction, ...]

    def __post_init__(self):
        lam = _as_fractions(self.lam, "lambda")
        if any(x <= 0 for x in lam):
            raise ValueError(f"L must lie in the interior of the effective cone, got lambda={lam}")
        object.__setattr__(self, "lam", lam)

    def __len__(self):
        return len(self.lam)

    def scaled(self, t) -> "LineBundleClass":
        t = Fraction(t)
        if t <= 0:
            raise ValueError("scale must be positive")
        return LineBundleClass(tuple(t * x for x in self.lam))


@dataclass(frozen=True, order=True)
class ManinInvariants:
    """The pair ``(a, b)``; dataclass ordering is exactly the lexicographic order.

    ``a == 0`` is reserved for the zero-dimensional sentinel returned by
    :meth:`point`, which sits below every genuine pair.
    """

    a: Fraction
    b: int

    def __post_init__(self):
        a = Fraction(self.a)
        b = int(self.b)
        if b < 1:
            raise ValueError(f"b must be >= 1, got {b}")
        if a < 0:
            raise ValueError(f"a must be nonnegative, got {a}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def point(cls) -> "ManinInvariants":
        return cls(Fraction(0), 1)

    @property
    def is_point(self) -> bool:
        return self.a == 0

    def __str__(self):
        return f"({self.a}, {self.b})"


def _ratios(geom: DivisorGeometry, L: LineBundleClass) -> Tuple[Fraction, ...]:
    if len(geom) != len(L):
        raise ValueError(f"dimension mismatch: {len(geom)} divisors, {len(L)} coefficients")
    if len(geom) == 0:
        raise ValueError("no boundary divisors; use manin_invariants for the point case")
    return tuple(k / lam for k, lam in zip(geom.kappa, L.lam))


def manin_a(geom: DivisorGeometry, L: LineBundleClass) -> Fraction:
    """``max kappa_a / lambda_a`` as an exact rational."""
    return max(_ratios(geom, L))


def manin_b(geom: DivisorGeometry, L: LineBundleClass) -> int:
    """Number of boundary divisors attaining the maximal ratio."""
    ratios = _ratios(geom, L)
    top = max(ratios)
    return sum(1 for x in ratios if x == top)


def manin_invariants(geom: DivisorGeometry, L: LineBundleClass) -> ManinInvariants:
    if len(geom) == 0 and len(L) == 0:
        return ManinInvariants.point()
    return ManinInvariants(manin_a(geom, L), manin_b(geom, L))


def lex_less(p: ManinInvariants, q: ManinInvariants) -> bool:
    """Strict lexicographic comparison of ``(a, b)`` pairs."""
    return (p.a, p.b) < (q.a, q.b)


@dataclass(frozen=True)
class RestrictionTable:
    """``L`` restricted to each small diagonal ``Y_ij`` (1-based, ``i < j <= r``)."""

    r: int
    entries: Dict[Pair, Tuple[DivisorGeometry, LineBundleClass]] = field(default_factory=dict)

    def __post_init__(self):
        missing = [p for p in self.required_pairs() if p not in self.entries]
        if missing:
            raise ValueError(f"restriction table incomplete, missing pairs {missing}")
        extra = [p for p in self.entries if p not in set(self.required_pairs())]
        if extra:
            raise ValueError(f"restriction table has out-of-range pairs {extra}")

    def required_pairs(self):
        return [(i, j) for i in range(1, self.r + 1) for j in range(i + 1, self.r + 1)]

    def invariants(self) -> Dict[Pair, ManinInvariants]:
        return {p: manin_invariants(*self.entries[p]) for p in self.required_pairs()}


def is_balanced(
    geom: DivisorGeometry, L: LineBundleClass, restrictions: RestrictionTable
) -> Tuple[bool, Optional[Pair]]:
    """Return ``(True, None)`` or ``(False, first violating pair)``.

    Equal invariant pairs count as a violation: balance needs strict inequality.
    """
    top = manin_invariants(geom, L)
    for pair, inv in restrictions.invariants().items():
        if not lex_less(inv, top):
            return False, pair
    return True, None


def permuted(geom: DivisorGeometry, L: LineBundleClass, order: Sequence[int]):
    """Apply the same index permutation to a geometry and a bundle."""
    return (
        DivisorGeometry(tuple(geom.labels[i] for i in order), tuple(geom.kappa[i] for i in order)),
        LineBundleClass(tuple(L.lam[i] for i in order)),
    )
