"""Finite groups as multiplication tables.

Elements are the indices ``0..order-1``; ``mul[i, j]`` is the index of the
product ``i * j``. Built-in groups are constructed at load time from
permutation generators or 2x2 matrices over a prime field.
"""

from __future__ import annotations

import re
from itertools import product
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

TABLE_FORMAT = "maninbench-group-table"
TABLE_VERSION = 1


class GroupAxiomError(ValueError):
    pass


class FiniteGroup:
    """Group given by a Cayley table, checked against the group axioms on load."""

    def __init__(self, mul, name: str = "", labels: Sequence = None, check: bool = True):
        mul = np.asarray(mul, dtype=np.int64)
        if mul.ndim != 2 or mul.shape[0] != mul.shape[1]:
            raise GroupAxiomError(f"table must be square, got shape {mul.shape}")
        self.mul = mul
        self.mul.setflags(write=False)
        self.order = mul.shape[0]
        self.name = name
        self.labels = list(labels) if labels is not None else None
        if check:
            self._check_axioms()
        self.identity = self._find_identity()
        inv = np.empty(self.order, dtype=np.int64)
        rows, cols = np.nonzero(mul == self.identity)
        inv[rows] = cols
        self.inv = inv
        self.inv.setflags(write=False)
        self.center = sorted(
            int(z) for z in range(self.order) if np.array_equal(mul[z, :], mul[:, z])
        )

    def __repr__(self):
        return f"FiniteGroup({self.name or '?'}, order={self.order})"

    def _find_identity(self) -> int:
        ids = [e for e in range(self.order) if np.array_equal(self.mul[e], np.arange(self.order))]
        if len(ids) != 1:
            raise GroupAxiomError("no two-sided identity")
        return ids[0]

    def _check_axioms(self):
        n, mul = self.order, self.mul
        if mul.min() < 0 or mul.max() >= n:
            raise GroupAxiomError("table entries out of range")
        idx = np.arange(n)
        # Latin square <=> unique solvability of ax = b and xa = b
        if any(not np.array_equal(np.sort(mul[i]), idx) for i in range(n)):
            raise GroupAxiomError("a row is not a permutation")
        if any(not np.array_equal(np.sort(mul[:, j]), idx) for j in range(n)):
            raise GroupAxiomError("a column is not a permutation")
        e = self._find_identity()
        if not np.array_equal(mul[:, e], idx):
            raise GroupAxiomError("identity is not two-sided")
        for a in range(n):  # (ab)c == a(bc), one row of a at a time
            if not np.array_equal(mul[mul[a]][:, :], mul[a][mul]):
                raise GroupAxiomError("multiplication is not associative")

    def conj(self, delta, x):
        """``delta x delta^-1`` (vectorized in both arguments)."""
        return self.mul[self.mul[delta, x], self.inv[delta]]

    def conjugacy_classes(self) -> List[List[int]]:
        seen = np.zeros(self.order, dtype=bool)
        classes = []
        deltas = np.arange(self.order)
        for x in range(self.order):
            if not seen[x]:
                cls = np.unique(self.conj(deltas, x))
                seen[cls] = True
                classes.append([int(c) for c in cls])
        return classes

    def generated(self, gens: Iterable[int]) -> List[int]:
        gens = list(gens)
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(self.mul[x, g])
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)

    def generators(self) -> List[int]:
        """A small generating set, chosen greedily in index order."""
        gens, span = [], {self.identity}
        for x in range(self.order):
            if x not in span:
                gens.append(x)
                span = set(self.generated(gens))
                if len(span) == self.order:
                    break
        return gens

    def quotient(self, normal: Sequence[int], name: str = ""):
        """Quotient by a normal subgroup; returns ``(group, projection array)``."""
        normal = sorted(set(int(z) for z in normal))
        deltas = np.arange(self.order)
        for z in normal:
            if not set(self.conj(deltas, z).tolist()) <= set(normal):
                raise ValueError("subgroup is not normal")
        proj = -np.ones(self.order, dtype=np.int64)
        reps = []
        for x in range(self.order):
            if proj[x] < 0:
                proj[self.mul[x, normal]] = len(reps)
                reps.append(x)
        k = len(reps)
        table = np.empty((k, k), dtype=np.int64)
        for i, x in enumerate(reps):
            table[i] = proj[self.mul[x, reps]]
        return FiniteGroup(table, name=name or f"{self.name}/N"), proj

    def central_quotient(self):
        return self.quotient(self.center, name=f"{self.name}/Z")


# --- construction ------------------------------------------------------------

_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int) -> Tuple[int, ...]:
    """Permutation of ``{0..degree-1}`` from 1-based cycle notation such as ``(1,2,3)(4,5)``."""
    img = list(range(degree))
    stripped = text.replace(" ", "")
    if stripped in ("", "()"):
        return tuple(img)
    if _CYCLE.sub("", text).strip():
        raise ValueError(f"not cycle notation: {text!r}")
    for body in _CYCLE.findall(text):
        pts = [int(x) - 1 for x in re.split(r"[,\s]+", body.strip()) if x]
        if any(not 0 <= p < degree for p in pts) or len(set(pts)) != len(pts):
            raise ValueError(f"bad cycle ({body}) for degree {degree}")
        for a, b in zip(pts, pts[1:] + pts[:1]):
            img[a] = b
    return tuple(img)


def from_permutations(generators: Sequence, degree: int = None, name: str = "") -> FiniteGroup:
    """Closure of permutation generators (tuples of images or cycle strings).

    Products compose left to right: ``(x * y)(i) = y(x(i))``.
    """
    if degree is None:
        tuples = [g for g in generators if not isinstance(g, str)]
        if not tuples:
            raise ValueError("degree is required for cycle-notation generators")
        degree = len(tuples[0])
    gens = [parse_cycles(g, degree) if isinstance(g, str) else tuple(g) for g in generators]
    ident = tuple(range(degree))
    index: Dict[tuple, int] = {ident: 0}
    elems = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple(g[i] for i in x)
                if y not in index:
                    index[y] = len(elems)
                    elems.append(y)
                    nxt.append(y)
        frontier = nxt
    n = len(elems)
    table = np.empty((n, n), dtype=np.int64)
    for i, x in enumerate(elems):
        table[i] = [index[tuple(y[k] for k in x)] for y in elems]
    return FiniteGroup(table, name=name, labels=elems)


def special_linear(p: int) -> FiniteGroup:
    """SL(2, p)."""
    mats = [m for m in product(range(p), repeat=4) if (m[0] * m[3] - m[1] * m[2]) % p == 1]
    index = {m: i for i, m in enumerate(mats)}
    n = len(mats)
    table = np.empty((n, n), dtype=np.int64)
    for i, (a, b, c, d) in enumerate(mats):
        for j, (e, f, g, h) in enumerate(mats):
            table[i, j] = index[((a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p)]
    return FiniteGroup(table, name=f"SL(2,{p})", labels=mats)


def projective_special_linear(p: int) -> FiniteGroup:
    """PSL(2, p) as the central quotient of SL(2, p)."""
    G, _ = special_linear(p).central_quotient()
    G.name = f"PSL(2,{p})"
    return G


def alternating5() -> FiniteGroup:
    return from_permutations(["(1,2)(3,4)", "(1,3,5)"], degree=5, name="A5")


BUILTIN = {
    "A5": alternating5,
    "PSL27": lambda: projective_special_linear(7),
    "SL25": lambda: special_linear(5),
}


def builtin(name: str) -> FiniteGroup:
    try:
        return BUILTIN[name]()
    except KeyError:
        raise ValueError(f"unknown group {name!r}; choose from {sorted(BUILTIN)}") from None


# --- table files ---------------------------------------------------------------


def save_table(group: FiniteGroup, path) -> None:
    lines = [f"# {TABLE_FORMAT} v{TABLE_VERSION} order={group.order} name={group.name}"]
    lines += [" ".join(str(int(x)) for x in row) for row in group.mul]
    Path(path).write_text("\n".join(lines) + "\n")


def load_table(path) -> FiniteGroup:
    lines = Path(path).read_text().splitlines()
    m = re.match(rf"^# {TABLE_FORMAT} v(\d+) order=(\d+)(?: name=(.*))?$", lines[0] if lines else "")
    if not m:
        raise ValueError(f"{path}: missing or malformed header")
    if int(m.group(1)) != TABLE_VERSION:
        raise ValueError(f"{path}: unsupported table version {m.group(1)}")
    order = int(m.group(2))
    rows = [[int(x) for x in line.split()] for line in lines[1:] if line.strip()]
    if len(rows) != order or any(len(r) != order for r in rows):
        raise ValueError(f"{path}: expected a {order}x{order} table")
    return FiniteGroup(rows, name=m.group(3) or Path(path).stem)
