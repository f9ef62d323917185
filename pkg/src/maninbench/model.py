"""The concrete model ``X = (P^3)^(r-1)`` compactifying ``PGL2^(r-1) = H \\ H^r``.

A coset ``H(h_1, ..., h_r)`` is represented by ``(x_2, ..., x_r)`` with
``x_k = h_1^{-1} h_k``; each ``x_k`` is a primitive integer 2x2 matrix,
i.e. a rational point of PGL2 sitting in ``P^3`` off the quadric ``det = 0``.
Indices of the ``r`` group factors are 1-based throughout, matching the
small diagonals ``Y_ij``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod
from typing import Sequence, Tuple

from .picard import DivisorGeometry, LineBundleClass, RestrictionTable

#: Anticanonical coefficient of the det-quadric in each factor: -K_{P^3} = O(4) = 2 * O(2).
KAPPA = 2
#: Degree of the det-quadric boundary divisor inside its P^3 factor.
BOUNDARY_DEGREE = 2


@dataclass(frozen=True)
class PrimitiveMatrix:
    """Sign-normalized primitive integer matrix ``[[a, b], [c, d]]`` with ``ad - bc != 0``."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        e = self.entries
        if any(not isinstance(x, int) for x in e):
            raise TypeError(f"entries must be int, got {e!r}")
        if gcd(*e) != 1:
            raise ValueError(f"{e} is not primitive; use normalize()")
        if self.a * self.d - self.b * self.c == 0:
            raise ValueError(f"{e} is singular")
        if next(x for x in e if x != 0) < 0:
            raise ValueError(f"{e} is not sign-normalized; use normalize()")

    @property
    def entries(self) -> Tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def __iter__(self):
        return iter(self.entries)


IDENTITY = PrimitiveMatrix(1, 0, 0, 1)


def normalize(a, b=None, c=None, d=None) -> PrimitiveMatrix:
    """Canonical representative of the projective class of a nonsingular integer matrix.

    Accepts four integers or a single 4-sequence.
    """
    raw = tuple(a) if b is None else (a, b, c, d)
    if len(raw) != 4:
        raise ValueError(f"expected four entries, got {raw!r}")
    raw = tuple(int(x) for x in raw)
    g = gcd(*raw)
    if g == 0:
        raise ValueError("zero matrix has no projective class")
    if raw[0] * raw[3] - raw[1] * raw[2] == 0:
        raise ValueError(f"singular matrix {raw}")
    if next(x for x in raw if x != 0) < 0:
        g = -g
    return PrimitiveMatrix(*(x // g for x in raw))


def height(x: PrimitiveMatrix) -> int:
    """Max-norm height; primitivity makes every finite local height trivial."""
    return max(abs(v) for v in x.entries)


def group_op(x: PrimitiveMatrix, y: PrimitiveMatrix) -> PrimitiveMatrix:
    a, b, c, d = x.entries
    e, f, g, h = y.entries
    return normalize(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def inverse(x: PrimitiveMatrix) -> PrimitiveMatrix:
    a, b, c, d = x.entries
    return normalize(d, -b, -c, a)


@dataclass(frozen=True)
class ModelConfig:
    """``r`` group factors and even degrees ``m_2..m_r`` of ``L = O(m_2, ..., m_r)``."""

    r: int
    degrees: Tuple[int, ...]

    def __post_init__(self):
        degrees = tuple(int(m) for m in self.degrees)
        if int(self.r) < 2:
            raise ValueError(f"r must be >= 2, got {self.r}")
        if len(degrees) != self.r - 1:
            raise ValueError(f"need r-1 = {self.r - 1} degrees, got {len(degrees)}")
        bad = [m for m in degrees if m < 2 or m % 2]
        if bad:
            raise ValueError(f"degrees must be even and >= 2, got {degrees}")
        object.__setattr__(self, "r", int(self.r))
        object.__setattr__(self, "degrees", degrees)

    @classmethod
    def anticanonical(cls, r: int) -> "ModelConfig":
        return cls(r, (2 * KAPPA,) * (r - 1))

    def degree(self, k: int) -> int:
        """Degree carried by the 1-based group factor ``k`` (2 <= k <= r)."""
        if not 2 <= k <= self.r:
            raise IndexError(f"factor index {k} outside 2..{self.r}")
        return self.degrees[k - 2]


@dataclass(frozen=True)
class PointTuple:
    points: Tuple[PrimitiveMatrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))

    def __len__(self):
        return len(self.points)


def height_L(t: PointTuple, cfg: ModelConfig) -> int:
    if len(t) != cfg.r - 1:
        raise ValueError(f"tuple has {len(t)} points, model needs {cfg.r - 1}")
    return prod(height(x) ** m for x, m in zip(t.points, cfg.degrees))


def _geometry_for(degrees: Sequence[int], labels: Sequence[str]):
    geom = DivisorGeometry(tuple(labels), (Fraction(KAPPA),) * len(degrees))
    L = LineBundleClass(tuple(Fraction(m, BOUNDARY_DEGREE) for m in degrees))
    return geom, L


def boundary_geometry(cfg: ModelConfig):
    """Boundary divisors ``D_k = {det x_k = 0}`` with kappa = 2 and lambda = m_k / 2."""
    return _geometry_for(cfg.degrees, [f"D{k}" for k in range(2, cfg.r + 1)])


def restricted_degrees(cfg: ModelConfig, i: int, j: int):
    """Factor degrees (with labels) of ``L`` pulled back to ``Y_ij = (P^3)^(r-2)``.

    ``Y_1j`` sets ``x_j`` to the identity, which drops factor ``j``.
    ``Y_ij`` with ``i >= 2`` is the diagonal ``x_i = x_j``, on which the two
    factors merge and ``O(m_i, m_j)`` pulls back to ``O(m_i + m_j)``.
    """
    if not (1 <= i < j <= cfg.r):
        raise IndexError(f"need 1 <= i < j <= {cfg.r}, got ({i}, {j})")
    degrees, labels = [], []
    for k in range(2, cfg.r + 1):
        if k == j:
            continue
        if k == i:
            degrees.append(cfg.degree(i) + cfg.degree(j))
            labels.append(f"D{i}={j}")
        else:
            degrees.append(cfg.degree(k))
            labels.append(f"D{k}")
    return degrees, labels


def small_diagonal_restriction(cfg: ModelConfig, i: int, j: int):
    degrees, labels = restricted_degrees(cfg, i, j)
    return _geometry_for(degrees, labels)


def restriction_table(cfg: ModelConfig) -> RestrictionTable:
    entries = {
        (i, j): small_diagonal_restriction(cfg, i, j)
        for i in range(1, cfg.r + 1)
        for j in range(i + 1, cfg.r + 1)
    }
    return RestrictionTable(cfg.r, entries)
