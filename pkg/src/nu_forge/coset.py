"""Todd-Coxeter coset enumeration over a :class:`Presentation`."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _hlt
from .errors import CosetLimitExceeded, IncompleteTable
from .perm import Permutation
from .words import Presentation, free_reduce

DEFAULT_CAP = 2**20
START_ROWS = 1 << 16


def letter_column(x: int) -> int:
    return 2 * (abs(x) - 1) + (x < 0)


def _flatten(words):
    cols = [letter_column(x) for w in words for x in w]
    offsets = np.zeros(len(words) + 1, dtype=np.int64)
    np.cumsum([len(w) for w in words], out=offsets[1:])
    return np.asarray(cols, dtype=np.int64), offsets


@dataclass(frozen=True)
class CosetTable:
    """A completed coset table.

    ``rows[c, 2*i]`` is the image of coset ``c`` under generator ``i`` and
    ``rows[c, 2*i + 1]`` under its inverse.  Coset 0 is the subgroup coset.
    """

    rows: np.ndarray
    n_gens: int
    cap: int
    peak: int = 0

    @property
    def live_count(self) -> int:
        return self.rows.shape[0]

    def __len__(self):
        return self.live_count

    def is_complete(self) -> bool:
        return bool(self.rows.size == 0 or self.rows.min() >= 0)

    def trace(self, coset: int, word) -> int:
        for x in word:
            coset = int(self.rows[coset, letter_column(x)])
        return coset

    def relator_holds_everywhere(self, word) -> bool:
        """Trace ``word`` from every coset at once; true iff all return home."""
        start = np.arange(self.live_count)
        pts = start
        for x in word:
            pts = self.rows[pts, letter_column(x)]
        return bool(np.array_equal(pts, start))


def todd_coxeter(p: Presentation, subgroup_gens: Sequence = (), cap: int = DEFAULT_CAP) -> CosetTable:
    """Enumerate the cosets of ``<subgroup_gens>`` in the group presented by ``p``.

    Raises :class:`CosetLimitExceeded` if more than ``cap`` cosets would be
    live at once.
    """
    if cap < 1:
        raise ValueError("cap must be positive")
    ncols = 2 * p.n_gens
    if ncols == 0:
        return CosetTable(np.zeros((1, 0), dtype=np.int32), 0, cap, 1)
    rels = [r for r in (free_reduce(r) for r in p.relators) if r]
    subs = [w for w in (free_reduce(w) for w in subgroup_gens) if w]
    rel, roff = _flatten(rels)
    sub, soff = _flatten(subs)
    status, rows, peak = _hlt.enumerate_cosets(rel, roff, sub, soff, ncols, cap, min(cap, START_ROWS))
    if status != _hlt.OK:
        raise CosetLimitExceeded(cap)
    table = CosetTable(rows, p.n_gens, cap, int(peak))
    if not table.is_complete():
        raise IncompleteTable("enumeration finished with undefined entries")
    return table


def table_to_perms(t: CosetTable) -> list:
    """One permutation of the cosets per generator."""
    if not t.is_complete():
        raise IncompleteTable("coset table has undefined entries")
    return [Permutation(t.rows[:, 2 * i]) for i in range(t.n_gens)]
