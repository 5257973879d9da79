"""Finite groups given by multiplication tables."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import GroupTooLarge, InputError, InvalidCayleyTable, NotNormal
from .perm import Permutation

ASSOC_EXHAUSTIVE = 64
ASSOC_SAMPLES = 200_000
CLOSURE_BOUND = 5000


@dataclass(frozen=True, eq=False)
class FiniteGroupInput:
    """A finite group as a Cayley table; index 0 is the identity.

    ``cayley[a, b]`` is the index of ``a*b``.
    """

    cayley: np.ndarray
    label: str = "G"
    elements: tuple = ()
    inverse: np.ndarray = field(default=None)

    def __post_init__(self):
        tab = np.asarray(self.cayley)
        if tab.ndim != 2 or tab.shape[0] != tab.shape[1] or tab.shape[0] == 0:
            raise InvalidCayleyTable("table must be a non-empty square array")
        if not np.issubdtype(tab.dtype, np.integer):
            raise InvalidCayleyTable("table entries must be integers")
        tab = tab.astype(np.int64)
        tab.flags.writeable = False
        object.__setattr__(self, "cayley", tab)
        n = tab.shape[0]
        if not self.elements:
            object.__setattr__(self, "elements", tuple(f"g{i}" for i in range(n)))
        if len(self.elements) != n:
            raise InvalidCayleyTable("element list does not match table size")
        validate_cayley(tab)
        inv = np.argmin(tab, axis=1)  # a*b == 0 exactly at b = a^-1
        inv.flags.writeable = False
        if self.inverse is not None and not np.array_equal(np.asarray(self.inverse), inv):
            raise InvalidCayleyTable("inverse map inconsistent with table")
        object.__setattr__(self, "inverse", inv)

    @property
    def order(self) -> int:
        return self.cayley.shape[0]

    def mul(self, a, b):
        return self.cayley[a, b]

    def inv(self, a):
        return self.inverse[a]

    def conj(self, a, b):
        """``a^b = b^-1 a b``."""
        return self.cayley[self.cayley[self.inverse[b], a], b]

    def comm(self, a, b):
        """``[a, b] = a^-1 b^-1 a b``."""
        return self.cayley[self.cayley[self.inverse[a], self.inverse[b]], self.cayley[a, b]]

    def product(self, seq) -> int:
        x = 0
        for a in seq:
            x = int(self.cayley[x, a])
        return x

    def regular_perms(self) -> list:
        """Right-regular representation: element ``g`` acts by ``x -> x*g``."""
        return [Permutation._trusted(self.cayley[:, g]) for g in range(self.order)]

    def subgroup_closure(self, gens) -> np.ndarray:
        """Sorted indices of the subgroup generated by ``gens``."""
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        frontier = np.array([0])
        gens = np.asarray(list(gens), dtype=np.int64)
        while frontier.size and gens.size:
            new = self.cayley[np.ix_(frontier, gens)].ravel()
            new = np.unique(new[~mask[new]])
            mask[new] = True
            frontier = new
        return np.flatnonzero(mask)

    def is_normal(self, subset) -> bool:
        subset = np.asarray(sorted(set(int(x) for x in subset)))
        if subset.size == 0 or subset[0] != 0:
            return False
        if not np.array_equal(self.subgroup_closure(subset), subset):
            return False
        mask = np.zeros(self.order, dtype=bool)
        mask[subset] = True
        g = np.arange(self.order)
        conj = self.cayley[self.cayley[self.inverse[g][:, None], subset[None, :]], g[:, None]]
        return bool(mask[conj].all())

    def normal_closure(self, subset) -> np.ndarray:
        current = self.subgroup_closure(subset)
        while True:
            g = np.arange(self.order)
            conj = self.cayley[self.cayley[self.inverse[g][:, None], current[None, :]], g[:, None]]
            nxt = self.subgroup_closure(np.unique(conj))
            if nxt.size == current.size:
                return current
            current = nxt

    def derived_subgroup(self) -> np.ndarray:
        g = np.arange(self.order)
        comms = self.comm(g[:, None], g[None, :])
        return self.normal_closure(np.unique(comms))

    def center(self) -> np.ndarray:
        commute = self.cayley == self.cayley.T
        return np.flatnonzero(commute.all(axis=1))

    def normal_subgroups(self) -> list:
        """All normal subgroups as sorted index arrays, ordered by size then content."""
        found = {}
        for g in range(self.order):
            n = self.normal_closure([g])
            found[n.tobytes()] = n
        changed = True
        while changed:
            changed = False
            items = list(found.values())
            for a in items:
                for b in items:
                    j = self.normal_closure(np.union1d(a, b))
                    if j.tobytes() not in found:
                        found[j.tobytes()] = j
                        changed = True
        return sorted(found.values(), key=lambda s: (s.size, s.tolist()))

    def quotient(self, normal, label: str | None = None) -> tuple:
        """Cayley table of ``G/N`` and the map ``G -> G/N`` as an index array."""
        normal = np.asarray(sorted(set(int(x) for x in normal)))
        if not self.is_normal(normal):
            raise NotNormal("subset is not a normal subgroup")
        coset_of = np.full(self.order, -1, dtype=np.int64)
        reps = []
        for g in range(self.order):
            if coset_of[g] < 0:
                coset_of[self.cayley[g, normal]] = len(reps)
                reps.append(g)
        reps = np.asarray(reps)
        tab = coset_of[self.cayley[np.ix_(reps, reps)]]
        q = FiniteGroupInput(tab, label or f"{self.label}/N",
                             tuple(f"{self.elements[r]}N" for r in reps))
        return q, coset_of


def validate_cayley(tab: np.ndarray, seed: int = 0) -> None:
    n = tab.shape[0]
    if tab.min() < 0 or tab.max() >= n:
        raise InvalidCayleyTable("entries out of range")
    full = np.arange(n)
    rows_ok = (np.sort(tab, axis=1) == full).all()
    cols_ok = (np.sort(tab, axis=0) == full[:, None]).all()
    if not (rows_ok and cols_ok):
        raise InvalidCayleyTable("rows and columns must be permutations (Latin square)")
    if not (np.array_equal(tab[0], full) and np.array_equal(tab[:, 0], full)):
        raise InvalidCayleyTable("index 0 must be the identity")
    if n <= ASSOC_EXHAUSTIVE:
        left = tab[tab[:, :, None], full[None, None, :]]
        right = tab[full[:, None, None], tab[None, :, :]]
        bad = np.argwhere(left != right)
    else:
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, n, size=(3, ASSOC_SAMPLES))
        idx = np.flatnonzero(tab[tab[a, b], c] != tab[a, tab[b, c]])
        bad = np.stack([a[idx], b[idx], c[idx]], axis=1)
    if len(bad):
        a, b, c = bad[0]
        raise InvalidCayleyTable(f"not associative at ({a}, {b}, {c})")


def from_permutations(gens: Sequence[Permutation], label: str = "G",
                      bound: int = CLOSURE_BOUND) -> FiniteGroupInput:
    """Close ``gens`` under multiplication (breadth first) and tabulate."""
    if not gens:
        return FiniteGroupInput(np.zeros((1, 1), dtype=np.int64), label, ("()",))
    degree = gens[0].degree
    ident = Permutation.identity(degree)
    elems = [ident]
    index = {ident.key(): 0}
    i = 0
    while i < len(elems):
        for s in gens:
            q = elems[i] * s
            if q.key() not in index:
                if len(elems) >= bound:
                    raise GroupTooLarge(len(elems) + 1, bound)
                index[q.key()] = len(elems)
                elems.append(q)
        i += 1
    mats = np.stack([e.images for e in elems])
    n = len(elems)
    tab = np.empty((n, n), dtype=np.int64)
    for b in range(n):
        prod = mats[b][mats]  # row a: a then b
        tab[:, b] = [index[r.tobytes()] for r in prod]
    return FiniteGroupInput(tab, label, tuple(str(e) for e in elems))


def parse_cayley_text(text: str, label: str = "G") -> FiniteGroupInput:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].lower().startswith("order:"):
        raise InvalidCayleyTable("missing 'order: n' header")
    try:
        n = int(lines[0].split(":", 1)[1])
    except ValueError:
        raise InvalidCayleyTable("bad order header") from None
    if n < 1 or len(lines) - 1 != n:
        raise InvalidCayleyTable(f"expected {n} table rows, found {len(lines) - 1}")
    try:
        rows = [[int(x) for x in ln.split()] for ln in lines[1:]]
    except ValueError:
        raise InvalidCayleyTable("non-integer entry") from None
    if any(len(r) != n for r in rows):
        raise InvalidCayleyTable("every row must have n entries")
    return FiniteGroupInput(np.array(rows, dtype=np.int64), label)


def cayley_text(g: FiniteGroupInput) -> str:
    out = [f"order: {g.order}"]
    out += [" ".join(str(int(x)) for x in row) for row in g.cayley]
    return "\n".join(out) + "\n"


def load_cayley_file(path) -> FiniteGroupInput:
    path = Path(path)
    return parse_cayley_text(path.read_text(), path.stem)


def from_perm_file(path, bound: int = CLOSURE_BOUND) -> FiniteGroupInput:
    from .perm import load_perm_file

    path = Path(path)
    gens, _ = load_perm_file(path)
    return from_permutations(gens, path.stem, bound)


def check_bound(order: int, bound: int):
    if order > bound:
        raise GroupTooLarge(order, bound)


__all__ = [
    "FiniteGroupInput", "validate_cayley", "from_permutations", "parse_cayley_text",
    "cayley_text", "load_cayley_file", "from_perm_file", "InputError",
]
