"""Subgroups of ``H^n`` that contain the diagonal, for a finite group ``H``.

An element of ``H^n`` is packed into one integer ``sum_k x_k |H|^k``.
Subgroups are sets of packed codes built by breadth-first closure.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import numpy as np
from sympy.utilities.iterables import multiset_partitions

from .groups import FiniteGroup

#: Largest ``|H|^n`` held as a dense membership array.
CLOSURE_BUDGET = 10**8
MAX_PARTITION_SIZE = 8


class BudgetExceeded(ValueError):
    pass


@dataclass(frozen=True)
class GroupTuple:
    """An element ``(x_1, ..., x_n)`` of ``H^n`` by element indices."""

    coords: Tuple[int, ...]

    def __post_init__(self):
        coords = tuple(int(x) for x in self.coords)
        if not coords:
            raise ValueError("a tuple needs n >= 1 coordinates")
        if min(coords) < 0:
            raise ValueError("element indices must be nonnegative")
        object.__setattr__(self, "coords", coords)

    def __len__(self):
        return len(self.coords)

    def check(self, group: FiniteGroup) -> "GroupTuple":
        if max(self.coords) >= group.order:
            raise ValueError(f"index {max(self.coords)} out of range for order {group.order}")
        return self

    def right_translate(self, group: FiniteGroup, delta: int) -> "GroupTuple":
        return GroupTuple(tuple(int(group.mul[x, delta]) for x in self.coords))

    def permute(self, order: Sequence[int]) -> "GroupTuple":
        return GroupTuple(tuple(self.coords[i] for i in order))


@dataclass(frozen=True)
class Partition:
    """Set partition of ``{0, ..., n-1}``; blocks are stored sorted."""

    blocks: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(sorted(tuple(sorted(int(i) for i in b)) for b in self.blocks))
        if any(len(b) == 0 for b in blocks):
            raise ValueError("blocks must be nonempty")
        flat = [i for b in blocks for i in b]
        if sorted(flat) != list(range(len(flat))):
            raise ValueError(f"blocks must be disjoint and cover 0..n-1, got {blocks}")
        object.__setattr__(self, "blocks", blocks)

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    def __len__(self):
        return len(self.blocks)

    def labels(self) -> np.ndarray:
        """Block index of every coordinate."""
        lab = np.empty(self.n, dtype=np.int64)
        for k, b in enumerate(self.blocks):
            lab[list(b)] = k
        return lab

    @classmethod
    def of_tuple(cls, t: GroupTuple) -> "Partition":
        """Coordinate-equality partition of a tuple."""
        groups = {}
        for i, x in enumerate(t.coords):
            groups.setdefault(x, []).append(i)
        return cls(tuple(tuple(b) for b in groups.values()))


def admissible_subgroups(n: int) -> List[Partition]:
    """Every set partition of ``{0..n-1}``; there are Bell(n) of them."""
    if not 1 <= n <= MAX_PARTITION_SIZE:
        raise ValueError(f"n must lie in 1..{MAX_PARTITION_SIZE}, got {n}")
    return sorted(
        (Partition(tuple(tuple(b) for b in p)) for p in multiset_partitions(list(range(n)))),
        key=lambda p: (len(p), p.blocks),
    )


def rank(t: GroupTuple) -> int:
    return len(set(t.coords))


def tuple_validity(group: FiniteGroup, t: GroupTuple) -> bool:
    """Noncentral coordinates with noncentral pairwise quotients."""
    t.check(group)
    center = set(group.center)
    if any(x in center for x in t.coords):
        return False
    inv = group.inv
    return all(int(group.mul[x, inv[y]]) not in center for x, y in combinations(t.coords, 2))


# --- packed subgroups --------------------------------------------------------


def _powers(order: int, n: int) -> np.ndarray:
    return order ** np.arange(n, dtype=np.int64)


def pack(group: FiniteGroup, coords) -> np.ndarray:
    coords = np.atleast_2d(np.asarray(coords, dtype=np.int64))
    return coords @ _powers(group.order, coords.shape[1])


def unpack(group: FiniteGroup, codes, n: int) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64)
    return (codes[:, None] // _powers(group.order, n)) % group.order


class Subgroup:
    """A subgroup of ``H^n`` as a sorted array of packed codes."""

    def __init__(self, group: FiniteGroup, n: int, codes: np.ndarray, generators):
        self.group = group
        self.n = n
        self.codes = np.asarray(codes, dtype=np.int64)
        self.generators = [tuple(int(x) for x in g) for g in generators]

    def __repr__(self):
        return f"Subgroup(order={self.order}, n={self.n})"

    @property
    def order(self) -> int:
        return len(self.codes)

    @property
    def key(self) -> bytes:
        return self.codes.tobytes()

    def __contains__(self, t) -> bool:
        coords = t.coords if isinstance(t, GroupTuple) else t
        code = int(pack(self.group, coords)[0])
        i = np.searchsorted(self.codes, code)
        return i < len(self.codes) and self.codes[i] == code

    def issubset(self, other: "Subgroup") -> bool:
        return self.order <= other.order and bool(np.all(np.isin(self.codes, other.codes)))

    def elements(self) -> np.ndarray:
        return unpack(self.group, self.codes, self.n)

    def is_closed(self, exhaustive: Optional[bool] = None) -> bool:
        """Check the subgroup axioms on the stored elements.

        The exhaustive test multiplies every pair; otherwise closure under
        right multiplication by the generators is checked, which suffices
        for a set containing the identity and the generators.
        """
        G = self.group
        X = self.elements()
        member = np.zeros(G.order**self.n, dtype=bool)
        member[self.codes] = True
        if not member[pack(G, [G.identity] * self.n)[0]]:
            return False
        if not np.all(member[pack(G, G.inv[X])]):
            return False
        if exhaustive is None:
            exhaustive = self.order <= 5000
        right = X if exhaustive else np.asarray(self.generators, dtype=np.int64).reshape(-1, self.n)
        if not np.all(member[pack(G, right)]):
            return False
        return all(np.all(member[pack(G, G.mul[X, g])]) for g in right)

    def equality_partition(self) -> Partition:
        """Finest partition whose blocks are coordinates equal on every element."""
        X = self.elements()
        labels = [-1] * self.n
        blocks = []
        for i in range(self.n):
            if labels[i] >= 0:
                continue
            labels[i] = len(blocks)
            block = [i]
            for j in range(i + 1, self.n):
                if labels[j] < 0 and np.array_equal(X[:, i], X[:, j]):
                    labels[j] = labels[i]
                    block.append(j)
            blocks.append(tuple(block))
        return Partition(tuple(blocks))

    def is_admissible(self) -> bool:
        """Equal to the block-constant subgroup of its own equality partition."""
        part = self.equality_partition()
        if self.order != self.group.order ** len(part):
            return False
        X = self.elements()
        lab = part.labels()
        return bool(np.all(X == X[:, [b[0] for b in part.blocks]][:, lab]))


def generate(group: FiniteGroup, n: int, generators) -> Subgroup:
    """Subgroup of ``H^n`` generated by the given tuples (work-queue BFS)."""
    size = group.order**n
    if size > CLOSURE_BUDGET:
        raise BudgetExceeded(f"|H|^n = {size} exceeds the closure budget {CLOSURE_BUDGET}")
    gens = np.atleast_2d(np.asarray([g.coords if isinstance(g, GroupTuple) else g for g in generators], dtype=np.int64))
    if gens.size == 0:
        gens = np.zeros((0, n), dtype=np.int64)
    if gens.shape[1] != n:
        raise ValueError(f"generators must have {n} coordinates")
    seen = np.zeros(size, dtype=bool)
    ident = pack(group, [group.identity] * n)
    seen[ident] = True
    frontier = ident
    while frontier.size:
        X = unpack(group, frontier, n)
        fresh = []
        for g in gens:
            codes = pack(group, group.mul[X, g])
            codes = np.unique(codes[~seen[codes]])
            seen[codes] = True
            fresh.append(codes)
        frontier = np.concatenate(fresh) if fresh else np.zeros(0, dtype=np.int64)
    return Subgroup(group, n, np.flatnonzero(seen), gens.tolist())


def conjugation_orbit(group: FiniteGroup, t: GroupTuple) -> np.ndarray:
    """Simultaneous conjugates ``(d x_1 d^-1, ..., d x_n d^-1)`` over all ``d``."""
    deltas = np.arange(group.order)[:, None]
    return np.unique(group.conj(deltas, np.asarray(t.coords)[None, :]), axis=0)


def goursat_closure(group: FiniteGroup, t: GroupTuple) -> Subgroup:
    """Smallest subgroup of ``H^n`` containing the conjugation orbit of ``t``."""
    t.check(group)
    return generate(group, len(t), conjugation_orbit(group, t))


def diagonal(group: FiniteGroup, n: int) -> Subgroup:
    return generate(group, n, [(g,) * n for g in group.generators()])


def admissible_subgroup(group: FiniteGroup, partition: Partition) -> Subgroup:
    """Tuples constant on every block of ``partition``."""
    lab = partition.labels()
    gens = []
    for k in range(len(partition)):
        for g in group.generators():
            gens.append(tuple(g if lab[i] == k else group.identity for i in range(partition.n)))
    return generate(group, partition.n, gens)


def orbit_representatives(group: FiniteGroup, n: int) -> np.ndarray:
    """One tuple per simultaneous-conjugation orbit on ``H^n``."""
    size = group.order**n
    if size > CLOSURE_BUDGET:
        raise BudgetExceeded(f"|H|^n = {size} exceeds the closure budget {CLOSURE_BUDGET}")
    seen = np.zeros(size, dtype=bool)
    deltas = np.arange(group.order)[:, None]
    reps = []
    for code in range(size):
        if seen[code]:
            continue
        x = unpack(group, [code], n)[0]
        seen[pack(group, group.conj(deltas, x[None, :]))] = True
        reps.append(x)
    return np.array(reps, dtype=np.int64).reshape(-1, n)


@dataclass(frozen=True)
class IntermediateSubgroup:
    subgroup: Subgroup
    partition: Partition
    admissible: bool

    @property
    def order(self) -> int:
        return self.subgroup.order


def intermediate_subgroups(group: FiniteGroup, n: int) -> List[IntermediateSubgroup]:
    """Subgroups between the diagonal and ``H^n`` reachable by one extra generator, closed under join.

    Any ``M`` containing the diagonal is the join of the ``<diagonal, g>`` for
    ``g`` in ``M``; right-multiplying ``g`` by a diagonal element lets one
    fix the last coordinate to the identity, and conjugating by the diagonal
    leaves ``<diagonal, g>`` unchanged, so orbit representatives suffice.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if group.order**n > CLOSURE_BUDGET:
        raise BudgetExceeded(f"|H|^n = {group.order ** n} exceeds the closure budget {CLOSURE_BUDGET}")
    delta_gens = [(g,) * n for g in group.generators()]
    family = {}
    if n == 1:
        D = diagonal(group, 1)
        family[D.key] = D
    else:
        for rep in orbit_representatives(group, n - 1):
            g = tuple(int(x) for x in rep) + (group.identity,)
            M = generate(group, n, delta_gens + [g])
            family.setdefault(M.key, M)
    changed = True
    while changed:
        changed = False
        for A, B in combinations(list(family.values()), 2):
            if A.issubset(B) or B.issubset(A):
                continue
            J = generate(group, n, A.generators + B.generators)
            if J.key not in family:
                family[J.key] = J
                changed = True
    out = [IntermediateSubgroup(M, M.equality_partition(), M.is_admissible()) for M in family.values()]
    return sorted(out, key=lambda s: (s.order, s.partition.blocks))


def random_tuple(group: FiniteGroup, n: int, rng: np.random.Generator) -> GroupTuple:
    return GroupTuple(tuple(int(x) for x in rng.integers(0, group.order, size=n)))


@dataclass(frozen=True)
class CentralReport:
    """Closure of a tuple upstairs and in the central quotient."""

    n: int
    order: int
    full_order: int
    quotient_order: int
    quotient_full_order: int
    projection_onto: bool

    @property
    def index(self) -> int:
        return self.full_order // self.order

    @property
    def quotient_index(self) -> int:
        return self.quotient_full_order // self.quotient_order


def central_comparison(group: FiniteGroup, t: GroupTuple, quotient: Optional[tuple] = None) -> CentralReport:
    """Compare the closure of ``t`` in ``H^n`` with that of its image in ``(H/Z)^n``."""
    Hbar, proj = quotient if quotient is not None else group.central_quotient()
    n = len(t)
    L = goursat_closure(group, t)
    tbar = GroupTuple(tuple(int(proj[x]) for x in t.coords))
    Lbar = goursat_closure(Hbar, tbar)
    image = np.unique(pack(Hbar, proj[L.elements()]))
    return CentralReport(
        n=n,
        order=L.order,
        full_order=group.order**n,
        quotient_order=Lbar.order,
        quotient_full_order=Hbar.order**n,
        projection_onto=bool(np.array_equal(image, Lbar.codes)),
    )
