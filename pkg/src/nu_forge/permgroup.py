"""Permutation groups with a base and strong generating set.

Two stabilizer-chain flavours live behind :class:`PermGroup`:

* a deterministic Schreier-Sims chain with explicit transversals, for
  arbitrary (small-degree) permutation groups;
* a single-level orbit tree for groups flagged ``semiregular``: every
  subgroup of a regular group (such as the coset action of a group on itself)
  has trivial point stabilizers, so the orbit of one point already is a
  complete BSGS and elements correspond one-to-one with orbit points.

Center and quotient computations run on the orbit-tree representation; a
general group is first converted to its right-regular representation.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from math import lcm
from typing import Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import (DegreeMismatch, ElementOutsideGroup, GroupTooLarge, NotAbelian,
                     NotNormal)
from .perm import Permutation

ENUMERATION_BOUND = 10**6
# cap on |H| * degree for materialising every element of a semiregular group
_DENSE_LIMIT = 5 * 10**7


class _SchreierSimsChain:
    """Deterministic Schreier-Sims; base points are smallest moved points."""

    def __init__(self, gens: Sequence[Permutation], degree: int):
        self.degree = degree
        self.base: list[int] = []
        self.strong: list[list[Permutation]] = []
        self.transversals: list[dict] = []
        gens = [g for g in gens if not g.is_identity()]
        if gens:
            self._build(gens)

    @staticmethod
    def _moved_point(p: Permutation) -> int:
        return int(np.flatnonzero(p.images != np.arange(p.degree))[0])

    def _orbit(self, level: int):
        b = self.base[level]
        ident = Permutation.identity(self.degree)
        trans = {b: ident}
        queue = [b]
        for x in queue:
            ux = trans[x]
            for s in self.strong[level]:
                y = int(s.images[x])
                if y not in trans:
                    trans[y] = ux * s
                    queue.append(y)
        self.transversals[level] = trans

    def sift(self, p: Permutation, start: int = 0):
        for level in range(start, len(self.base)):
            x = int(p.images[self.base[level]])
            u = self.transversals[level].get(x)
            if u is None:
                return p, level
            p = p * ~u
        return p, len(self.base)

    def _build(self, gens):
        for g in gens:
            if all(g.images[b] == b for b in self.base):
                self.base.append(self._moved_point(g))
        k = len(self.base)
        self.strong = [[g for g in gens if all(g.images[b] == b for b in self.base[:i])]
                       for i in range(k)]
        self.transversals = [None] * k
        for i in range(k):
            self._orbit(i)
        i = k - 1
        while i >= 0:
            restart = False
            for b, ub in list(self.transversals[i].items()):
                for s in list(self.strong[i]):
                    bs = int(s.images[b])
                    sg = ub * s * ~self.transversals[i][bs]
                    if sg.is_identity():
                        continue
                    h, j = self.sift(sg, i + 1)
                    if j < len(self.base) or not h.is_identity():
                        if j == len(self.base):
                            self.base.append(self._moved_point(h))
                            self.strong.append([])
                            self.transversals.append(None)
                        for level in range(i + 1, j + 1):
                            self.strong[level].append(h)
                            self._orbit(level)
                        i = j
                        restart = True
                        break
                if restart:
                    break
            if not restart:
                i -= 1

    def order(self) -> int:
        n = 1
        for t in self.transversals:
            n *= len(t)
        return n

    def contains(self, p: Permutation) -> bool:
        h, j = self.sift(p)
        return j == len(self.base) and h.is_identity()

    def elements(self):
        elems = [Permutation.identity(self.degree)]
        for level in reversed(range(len(self.base))):
            reps = list(self.transversals[level].values())
            elems = [e * t for e in elems for t in reps]
        return elems

    def strong_generators(self):
        seen = {}
        for level in self.strong:
            for s in level:
                seen.setdefault(s.key(), s)
        return list(seen.values())


class _OrbitTree:
    """Breadth-first Schreier tree of one base point under a semiregular group."""

    def __init__(self, gens: Sequence[Permutation], degree: int):
        gens = list(gens)
        self.degree = degree
        self.gen_index = [i for i, g in enumerate(gens) if not g.is_identity()]
        gens = [gens[i] for i in self.gen_index]
        self.gens = gens
        self.stack = np.stack([g.images for g in gens]) if gens else np.zeros((0, degree), np.int32)
        self.pos = np.full(degree, -1, dtype=np.int64)
        if not gens:
            self.base = []
            self.points = np.zeros(0, dtype=np.int64)
            self.parent = np.zeros(0, dtype=np.int64)
            self.via = np.zeros(0, dtype=np.int64)
            self.levels = []
            return
        b = min(_SchreierSimsChain._moved_point(g) for g in gens)
        self.base = [b]
        points = [np.array([b])]
        parents = [np.array([-1])]
        vias = [np.array([-1])]
        self.pos[b] = 0
        count = 1
        frontier = np.array([b])
        levels = [(0, 1)]
        while frontier.size:
            new_pts, new_par, new_via = [], [], []
            for gi in range(len(gens)):
                img = self.stack[gi][frontier]
                fresh = self.pos[img] < 0
                if not fresh.any():
                    continue
                img, first = np.unique(img[fresh], return_index=True)
                src = frontier[fresh][first]
                self.pos[img] = np.arange(count, count + img.size)
                count += img.size
                new_pts.append(img)
                new_par.append(src)
                new_via.append(np.full(img.size, gi))
            if not new_pts:
                break
            frontier = np.concatenate(new_pts)
            start = levels[-1][1]
            levels.append((start, start + frontier.size))
            points.append(frontier)
            parents.append(np.concatenate(new_par))
            vias.append(np.concatenate(new_via))
        self.points = np.concatenate(points)
        self.parent = np.concatenate(parents)  # parent point of each orbit point
        self.via = np.concatenate(vias)
        self.levels = levels

    def order(self) -> int:
        return max(int(self.points.size), 1)

    def has_point(self, x) -> bool:
        return self.pos[x] >= 0

    def path(self, x: int) -> list:
        gens = []
        i = int(self.pos[x])
        while self.via[i] >= 0:
            gens.append(int(self.via[i]))
            i = int(self.pos[self.parent[i]])
        gens.reverse()
        return gens

    def element(self, x: int) -> Permutation:
        """The unique element sending the base point to ``x``."""
        arr = np.arange(self.degree, dtype=np.int32)
        for gi in self.path(x):
            arr = self.stack[gi][arr]
        return Permutation._trusted(arr)

    def contains(self, p: Permutation) -> bool:
        if not self.base:
            return p.is_identity()
        x = int(p.images[self.base[0]])
        if self.pos[x] < 0:
            return False
        return bool(np.array_equal(self.element(x).images, p.images))

    def propagate(self, start_values: np.ndarray, fn):
        """Evaluate a map along the tree: ``value[child] = fn(gen_index, value[parent])``.

        ``start_values`` is the value at the base point; values are indexed by
        orbit position.
        """
        out = np.empty((self.points.size,) + np.shape(start_values), dtype=np.asarray(start_values).dtype)
        out[0] = start_values
        for lo, hi in self.levels[1:]:
            par = self.pos[self.parent[lo:hi]]
            via = self.via[lo:hi]
            for gi in np.unique(via):
                sel = np.flatnonzero(via == gi)
                out[lo + sel] = fn(int(gi), out[par[sel]])
        return out

    def dense_elements(self) -> np.ndarray:
        """All elements as rows of image arrays, in orbit order."""
        n = self.points.size
        if n * self.degree > _DENSE_LIMIT:
            raise GroupTooLarge(n, _DENSE_LIMIT // self.degree)
        if n == 0:
            return np.arange(self.degree, dtype=np.int32)[None, :]
        return self.propagate(np.arange(self.degree, dtype=np.int32),
                              lambda gi, rows: self.stack[gi][rows])


class PermGroup:
    """A permutation group given by generators; the BSGS is built lazily."""

    def __init__(self, generators: Sequence[Permutation] = (), degree: int | None = None,
                 *, semiregular: bool = False, name: str | None = None):
        gens = list(generators)
        if degree is None:
            degree = gens[0].degree if gens else 1
        for g in gens:
            if g.degree != degree:
                raise DegreeMismatch(f"generator of degree {g.degree} in group of degree {degree}")
        self.generators = tuple(gens)
        self.degree = degree
        self.semiregular = semiregular
        self.name = name
        self._lock = threading.Lock()
        self._chain = None

    def __repr__(self):
        label = self.name or "PermGroup"
        return f"<{label} degree={self.degree} ngens={len(self.generators)}>"

    @property
    def chain(self):
        if self._chain is None:
            with self._lock:
                if self._chain is None:
                    if self.semiregular:
                        self._chain = _OrbitTree(self.generators, self.degree)
                    else:
                        self._chain = _SchreierSimsChain(self.generators, self.degree)
        return self._chain

    @property
    def base(self) -> list:
        return list(self.chain.base)

    def order(self) -> int:
        return self.chain.order()

    def __contains__(self, p):
        return contains(self, p)

    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def subgroup(self, gens, name: str | None = None) -> "PermGroup":
        """Subgroup generated by ``gens`` (assumed to lie in this group)."""
        gens = _dedupe(g for g in gens if not g.is_identity())
        return PermGroup(gens, self.degree, semiregular=self.semiregular, name=name)

    def trivial_subgroup(self) -> "PermGroup":
        return self.subgroup([])

    def is_trivial(self) -> bool:
        return self.order() == 1

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(a * b == b * a for i, a in enumerate(gens) for b in gens[i + 1:])

    def has_member_of_ambient(self, p: Permutation) -> bool:
        """Membership for ``p`` already known to lie in a semiregular overgroup.

        Two elements of a semiregular group agree iff they agree on one point,
        so only the base image is compared.
        """
        if not self.semiregular:
            return contains(self, p)
        ch = self.chain
        if not ch.base:
            return bool(p.images[0] == 0) if p.degree else True
        return bool(ch.has_point(p.images[ch.base[0]]))

    def elements(self, bound: int = ENUMERATION_BOUND) -> list:
        n = self.order()
        if n > bound:
            raise GroupTooLarge(n, bound)
        if self.semiregular:
            return [Permutation._trusted(row) for row in self.chain.dense_elements()]
        return self.chain.elements()

    def strong_generators(self) -> list:
        if self.semiregular:
            return list(self.chain.gens)
        return self.chain.strong_generators()

    def verify_bsgs(self) -> bool:
        """Every generator sifts to the identity through the chain."""
        return all(contains(self, g) for g in self.generators)

    def random_element(self, rng) -> Permutation:
        ch = self.chain
        if self.semiregular:
            if not ch.base:
                return self.identity()
            return ch.element(int(ch.points[rng.integers(ch.points.size)]))
        p = self.identity()
        for level in reversed(range(len(ch.base))):
            reps = list(ch.transversals[level].values())
            p = p * reps[rng.integers(len(reps))]
        return p


def _dedupe(perms) -> list:
    seen = {}
    for p in perms:
        seen.setdefault(p.key(), p)
    return list(seen.values())


def _check_degree(g: PermGroup, p: Permutation):
    if p.degree != g.degree:
        raise DegreeMismatch(f"permutation of degree {p.degree} vs group of degree {g.degree}")


def group_order(g: PermGroup) -> int:
    return g.order()


def contains(g: PermGroup, p: Permutation) -> bool:
    _check_degree(g, p)
    return g.chain.contains(p)


def is_subgroup(h: PermGroup, g: PermGroup) -> bool:
    return all(contains(g, x) for x in h.generators)


def same_subgroup(a: PermGroup, b: PermGroup) -> bool:
    """Equality by mutual generator membership."""
    return a.order() == b.order() and is_subgroup(a, b) and is_subgroup(b, a)


def _require_members(g: PermGroup, perms):
    for p in perms:
        _check_degree(g, p)
        if not contains(g, p):
            raise ElementOutsideGroup(f"{p} is not in the group")


def _closure_under_conjugation(ambient_gens, h: PermGroup, extra=()) -> PermGroup:
    """Smallest subgroup containing h and ``extra`` normalized by ``ambient_gens``."""
    gens = list(h.generators)
    current = h
    for x in extra:
        if not current.has_member_of_ambient(x):
            gens.append(x)
            current = current.subgroup(gens)
    i = 0
    queue = list(gens)
    while i < len(queue):
        n = queue[i]
        i += 1
        for t in ambient_gens:
            c = ~t * n * t
            if not current.has_member_of_ambient(c):
                gens.append(c)
                queue.append(c)
                current = current.subgroup(gens)
    return current


def normal_closure(g: PermGroup, seeds: Sequence[Permutation]) -> PermGroup:
    """Smallest normal subgroup of ``g`` containing ``seeds``."""
    _require_members(g, seeds)
    start = g.subgroup(_dedupe(s for s in seeds if not s.is_identity()))
    return _closure_under_conjugation(g.generators, start)


def commutator_subgroup(g: PermGroup, h_gens: Sequence[Permutation],
                        k_gens: Sequence[Permutation]) -> PermGroup:
    """``[H, K]``: normal closure in ``<H, K>`` of commutators of generator pairs."""
    _require_members(g, list(h_gens) + list(k_gens))
    comms = _dedupe(c for a in h_gens for b in k_gens
                    if not (c := a.commutator(b)).is_identity())
    start = g.subgroup(comms)
    return _closure_under_conjugation(list(h_gens) + list(k_gens), start)


def derived_subgroup(g: PermGroup) -> PermGroup:
    return commutator_subgroup(g, g.generators, g.generators)


def subgroup_product(g: PermGroup, parts: Sequence[PermGroup]) -> PermGroup:
    """Subgroup generated by the union of the parts' generators."""
    return g.subgroup([x for p in parts for x in p.generators])


class _RegularView:
    """A group as a semiregular permutation group on a point set.

    For a semiregular group this is the group itself restricted to nothing;
    otherwise elements are enumerated and the group acts on them by right
    multiplication.  ``element(point)`` maps points back to group elements.
    """

    def __init__(self, g: PermGroup, bound: int = ENUMERATION_BOUND):
        self.group = g
        if g.semiregular:
            self.reg = g
            self._elements = None
        else:
            elems = g.elements(bound)
            self._elements = elems
            self._index = {e.key(): i for i, e in enumerate(elems)}
            self.reg = PermGroup([self.image(s) for s in g.generators], len(elems),
                                 semiregular=True)

    def image(self, p: Permutation) -> Permutation:
        if self._elements is None:
            return p
        idx = self._index
        return Permutation._trusted(np.array([idx[(e * p).key()] for e in self._elements]))

    def element(self, point: int) -> Permutation:
        if self._elements is None:
            return self.reg.chain.element(point)
        return self._elements[point]

    def base_point(self) -> int:
        ch = self.reg.chain
        if ch.base:
            return ch.base[0]
        return 0


def _semiregular_center_points(h: PermGroup) -> np.ndarray:
    ch = h.chain
    if not ch.base:
        return np.zeros(0, dtype=np.int64)
    b = ch.base[0]
    ok = np.ones(ch.points.size, dtype=bool)
    for gi in range(len(ch.gens)):
        s = ch.stack[gi]
        # where each element u_p sends the point b^s
        moved = ch.propagate(np.asarray(s[b]), lambda j, vals: ch.stack[j][vals])
        ok &= s[ch.points] == moved
    return ch.points[ok]


def _generate_from_points(view: _RegularView, target: PermGroup, points) -> list:
    """Greedy generating set, in the original group, for the subgroup of ``view``
    whose base-point orbit is ``points``."""
    gens_reg, gens = [], []
    current = view.reg.subgroup([])
    b = view.base_point()
    for x in points:
        x = int(x)
        if x == b or (current.chain.base and current.chain.has_point(x)):
            continue
        e_reg = view.reg.chain.element(x)
        gens_reg.append(e_reg)
        gens.append(view.element(x))
        current = view.reg.subgroup(gens_reg)
        if current.order() == len(points):
            break
    return gens


def center(g: PermGroup) -> PermGroup:
    view = _RegularView(g)
    pts = _semiregular_center_points(view.reg)
    return g.subgroup(_generate_from_points(view, g, pts), name="center")


@dataclass
class QuotientMap:
    """The action of ``group`` on the cosets of a normal subgroup."""

    group: PermGroup
    normal: PermGroup
    image: PermGroup
    block_of: np.ndarray  # regular-view point -> coset index
    view: _RegularView = field(repr=False)
    block_reps: np.ndarray = field(repr=False)

    def __call__(self, p: Permutation) -> Permutation:
        reg = self.view.image(p).images
        return Permutation._trusted(self.block_of[reg[self.block_reps]])

    def lift(self, q: Permutation) -> Permutation:
        """An element of the group mapping to ``q``."""
        target = int(q.images[0])
        return self.view.element(int(self.block_reps[target]))


def quotient_map(g: PermGroup, n: PermGroup) -> QuotientMap:
    for x in n.generators:
        if not contains(g, x):
            raise NotNormal("subgroup is not contained in the group")
        for t in g.generators:
            if not contains(n, ~t * x * t):
                raise NotNormal("subgroup is not normal")
    view = _RegularView(g)
    reg = view.reg
    ch = reg.chain
    deg = reg.degree
    n_gens = [view.image(x) for x in n.generators]
    pts = ch.points if ch.base else np.array([view.base_point()])
    # orbits of n on the base-point orbit are exactly the cosets
    if n_gens:
        rows = np.concatenate([pts for _ in n_gens])
        cols = np.concatenate([x.images[pts] for x in n_gens])
        graph = coo_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols)), shape=(deg, deg))
        _, labels = connected_components(graph, directed=True, connection="weak")
        lab = labels[pts]
    else:
        lab = np.arange(pts.size)
    # renumber blocks by first appearance along the orbit; base block is 0
    _, first, inv = np.unique(lab, return_index=True, return_inverse=True)
    order = np.argsort(first)
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    block_of = np.full(deg, -1, dtype=np.int64)
    block_of[pts] = rank[inv]
    block_reps = pts[np.sort(first)]
    nblocks = block_reps.size
    images = [Permutation._trusted(block_of[reg_gen.images[block_reps]])
              for reg_gen in reg.generators]
    image = PermGroup(images, nblocks, semiregular=True, name="quotient")
    expected = g.order() // max(n.order(), 1)
    if image.order() != expected or nblocks != expected:
        raise NotNormal("coset action does not have the expected image order")
    return QuotientMap(g, n, image, block_of, view, block_reps)


def quotient_action(g: PermGroup, n: PermGroup) -> PermGroup:
    return quotient_map(g, n).image


@dataclass
class SeriesReport:
    kind: str
    terms: list
    orders: list
    stabilized_at: int

    @property
    def reaches_trivial(self) -> bool:
        return self.orders[-1] == 1

    def as_dict(self) -> dict:
        return {"kind": self.kind, "orders": list(self.orders), "stabilized_at": self.stabilized_at}


def _series(kind, first, step, terminal, max_terms):
    """Iterate ``step`` until the terminal order is reached or a term repeats."""
    if max_terms < 1:
        raise ValueError("max_terms must be >= 1")
    terms = [first]
    orders = [first.order()]
    while len(terms) < max_terms and orders[-1] != terminal:
        nxt = step(terms[-1])
        terms.append(nxt)
        orders.append(nxt.order())
        if orders[-1] == orders[-2]:
            break
    stab = orders.index(orders[-1])
    return SeriesReport(kind, terms, orders, stab)


def lower_central_series(g: PermGroup, max_terms: int = 64) -> SeriesReport:
    """gamma_1 = g, gamma_{i+1} = [gamma_i, g]."""
    return _series("lower-central", g,
                   lambda t: commutator_subgroup(g, t.generators, g.generators), 1, max_terms)


def derived_series(g: PermGroup, max_terms: int = 64) -> SeriesReport:
    return _series("derived", g,
                   lambda t: commutator_subgroup(g, t.generators, t.generators), 1, max_terms)


def _next_center_term(g: PermGroup, prev: PermGroup) -> PermGroup:
    q = quotient_map(g, prev)
    zq = center(q.image)
    return g.subgroup(list(prev.generators) + [q.lift(z) for z in zq.generators])


def upper_central_series(g: PermGroup, max_terms: int = 64) -> SeriesReport:
    """Z_0 = 1, Z_{n+1} = preimage of Z(g / Z_n)."""
    return _series("upper-central", g.trivial_subgroup(),
                   lambda t: _next_center_term(g, t), g.order(), max_terms)


def _element_orders(g: PermGroup, bound: int) -> list:
    n = g.order()
    if n > bound:
        raise GroupTooLarge(n, bound)
    if g.semiregular:
        ch = g.chain
        if not ch.base:
            return [1]
        b = ch.base[0]
        dense = ch.dense_elements()
        orders = []
        for row in dense:
            k, x = 1, int(row[b])
            while x != b:
                x = int(row[x])
                k += 1
            orders.append(k)
        return orders
    return [e.order() for e in g.elements(bound)]


def exponent(g: PermGroup, bound: int = ENUMERATION_BOUND) -> int:
    return lcm(1, *_element_orders(g, bound))


@dataclass(frozen=True)
class AbelianInvariants:
    torsion_factors: tuple

    def __iter__(self):
        return iter(self.torsion_factors)

    def as_list(self) -> list:
        return list(self.torsion_factors)


def abelian_invariants(g: PermGroup, bound: int = ENUMERATION_BOUND) -> AbelianInvariants:
    """Invariant factors d1 | d2 | ..., splitting off a cyclic factor of maximal order."""
    if not g.is_abelian():
        raise NotAbelian("group is not abelian")
    factors = []
    current = g
    while current.order() > 1:
        elems = current.elements(bound)
        orders = _element_orders(current, bound)
        best = max(range(len(elems)), key=lambda i: orders[i])
        factors.append(orders[best])
        cyc = current.subgroup([elems[best]])
        current = quotient_action(current, cyc)
    factors.reverse()
    for a, b in zip(factors, factors[1:]):
        assert b % a == 0, "invariant factors must divide each other"
    return AbelianInvariants(tuple(factors))


def conjugacy_class_sizes(g: PermGroup, bound: int = ENUMERATION_BOUND) -> list:
    elems = g.elements(bound)
    index = {e.key(): i for i, e in enumerate(elems)}
    seen = np.zeros(len(elems), dtype=bool)
    gens = g.generators
    sizes = []
    for i in range(len(elems)):
        if seen[i]:
            continue
        seen[i] = True
        cls = [elems[i]]
        for x in cls:
            for t in gens:
                c = ~t * x * t
                j = index[c.key()]
                if not seen[j]:
                    seen[j] = True
                    cls.append(c)
        sizes.append(len(cls))
    return sizes


def max_class_size(g: PermGroup, bound: int = ENUMERATION_BOUND) -> int:
    return max(conjugacy_class_sizes(g, bound))


def nilpotency_class(g: PermGroup, max_terms: int = 64):
    """Class c with gamma_{c+1} = 1, or None if the group is not nilpotent."""
    lcs = lower_central_series(g, max_terms)
    if not lcs.reaches_trivial:
        return None
    return lcs.orders.index(1)


def closure_order(g: PermGroup, bound: int = ENUMERATION_BOUND) -> int:
    """Count elements by brute-force breadth-first closure (independent of the BSGS)."""
    ident = g.identity()
    seen = {ident.key()}
    queue = [ident]
    for x in queue:
        for s in g.generators:
            y = x * s
            k = y.key()
            if k not in seen:
                seen.add(k)
                if len(seen) > bound:
                    raise GroupTooLarge(len(seen), bound)
                queue.append(y)
    return len(seen)


__all__ = [
    "PermGroup", "SeriesReport", "AbelianInvariants", "QuotientMap", "group_order",
    "contains", "normal_closure", "commutator_subgroup", "derived_subgroup", "center",
    "quotient_action", "quotient_map", "lower_central_series", "upper_central_series",
    "derived_series", "exponent", "abelian_invariants", "max_class_size",
    "conjugacy_class_sizes", "is_subgroup", "same_subgroup", "subgroup_product",
    "nilpotency_class", "closure_order",
]
