"""Built-in small groups, addressed by name (``C6``, ``D8``, ``Q8``, ``C2xC4`` ...)."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import UnknownGroup
from .finite import FiniteGroupInput, from_permutations
from .perm import Permutation

DEFAULT_CORPUS = ("trivial", "C2", "C3", "C4", "C2xC2", "C6", "S3", "D8",
                  "Q8", "C2xC4", "D10", "D12", "A4")


def cyclic_table(n: int) -> np.ndarray:
    i = np.arange(n)
    return (i[:, None] + i[None, :]) % n


def abelian(*ns: int) -> FiniteGroupInput:
    """Direct product of cyclic groups, elements in mixed-radix order."""
    ns = [n for n in ns if n > 1]
    label = "x".join(f"C{n}" for n in ns) or "trivial"
    if not ns:
        return FiniteGroupInput(np.zeros((1, 1), dtype=np.int64), label, ("e",))
    grids = np.array(np.unravel_index(np.arange(int(np.prod(ns))), ns)).T
    total = len(grids)
    summed = (grids[:, None, :] + grids[None, :, :]) % np.array(ns)
    tab = np.ravel_multi_index(tuple(summed.reshape(-1, len(ns)).T), ns).reshape(total, total)
    names = tuple("(" + ",".join(map(str, g)) + ")" for g in grids)
    return FiniteGroupInput(tab, label, names)


def dihedral(order: int) -> FiniteGroupInput:
    """Symmetries of a regular (order/2)-gon; ``D8`` has order 8."""
    if order < 2 or order % 2:
        raise UnknownGroup(f"dihedral group needs even order, got {order}")
    n = order // 2
    if n == 1:
        return from_permutations([Permutation([1, 0])], f"D{order}")
    if n == 2:
        return from_permutations([Permutation([1, 0, 3, 2]), Permutation([2, 3, 0, 1])], f"D{order}")
    rot = Permutation([(i + 1) % n for i in range(n)])
    ref = Permutation([(-i) % n for i in range(n)])
    return from_permutations([rot, ref], f"D{order}")


def symmetric(n: int) -> FiniteGroupInput:
    if n < 2:
        return abelian()
    gens = [Permutation([1, 0] + list(range(2, n)))]
    if n > 2:
        gens.append(Permutation(list(range(1, n)) + [0]))
    return from_permutations(gens, f"S{n}")


def alternating(n: int) -> FiniteGroupInput:
    if n < 3:
        return abelian()
    gens = [Permutation.from_cycles([[0, 1, i]], n) for i in range(2, n)]
    return from_permutations(gens, f"A{n}")


def quaternion(order: int = 8) -> FiniteGroupInput:
    """Generalized quaternion group of order ``order`` (a power of two >= 8)."""
    if order < 8 or order & (order - 1):
        raise UnknownGroup(f"quaternion group needs order 2^k >= 8, got {order}")
    m = order // 2
    # elements x^i y^j, i < m, j < 2 with x^m = 1, y^2 = x^(m/2), x^y = x^-1
    def mul(a, b):
        i1, j1 = a
        i2, j2 = b
        if j1 == 0:
            return ((i1 + i2) % m, j2)
        # y x^i2 = x^-i2 y
        i = (i1 - i2) % m
        if j2 == 0:
            return (i, 1)
        return ((i + m // 2) % m, 0)
    elems = [(i, j) for j in range(2) for i in range(m)]
    index = {e: k for k, e in enumerate(elems)}
    tab = np.array([[index[mul(a, b)] for b in elems] for a in elems])
    return FiniteGroupInput(tab, f"Q{order}", tuple(f"x^{i}y^{j}" for i, j in elems))


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    constructor: Callable[[], FiniteGroupInput]

    def build(self) -> FiniteGroupInput:
        g = self.constructor()
        return FiniteGroupInput(g.cayley, self.name, g.elements)


_PATTERNS = [
    (re.compile(r"trivial|1|C1"), lambda m: abelian()),
    (re.compile(r"C(\d+)(?:xC(\d+))*"), None),
    (re.compile(r"D(\d+)"), lambda m: dihedral(int(m.group(1)))),
    (re.compile(r"Q(\d+)"), lambda m: quaternion(int(m.group(1)))),
    (re.compile(r"S(\d)"), lambda m: symmetric(int(m.group(1)))),
    (re.compile(r"A(\d)"), lambda m: alternating(int(m.group(1)))),
]


def lookup(name: str) -> CatalogEntry:
    """Resolve a catalog name; raises :class:`UnknownGroup` otherwise."""
    key = name.strip()
    for pattern, make in _PATTERNS:
        m = pattern.fullmatch(key)
        if not m:
            continue
        if make is None:
            factors = [int(x) for x in re.findall(r"\d+", key)]
            if any(f < 1 for f in factors):
                break
            return CatalogEntry(key, lambda f=factors: abelian(*f))
        return CatalogEntry(key, lambda m=m, make=make: make(m))
    raise UnknownGroup(f"unknown group {name!r}")


def build(name: str) -> FiniteGroupInput:
    return lookup(name).build()


def default_corpus() -> list:
    return [build(name) for name in DEFAULT_CORPUS]
