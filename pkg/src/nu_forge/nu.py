"""The group nu(G) on two copies of a finite group, and the tensor square inside it.

nu(G) is generated by symbols ``x_g`` and ``y_g`` (the second copy) for every
non-identity ``g``, subject to the multiplication rules of each copy and to

    [x_g, y_h]^(x_k) = [x_(g^k), y_(h^k)] = [x_g, y_h]^(y_k)     for all g, h, k.

The presentation is enumerated over the trivial subgroup, which realizes
nu(G) as a regular permutation group.  The tensor square is the subgroup
``[G, G^phi]`` generated by the ``[x_g, y_h]``; ``mu`` is the kernel of the
map ``[x_g, y_h] -> [g, h]`` onto the derived subgroup of G.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .coset import DEFAULT_CAP, CosetTable, todd_coxeter, table_to_perms
from .errors import GroupTooLarge, InputError, NotNormal
from .finite import FiniteGroupInput
from .perm import Permutation
from .permgroup import (PermGroup, abelian_invariants, commutator_subgroup, derived_subgroup,
                        exponent, nilpotency_class)
from .words import Presentation, commutator, conjugate, free_reduce, inverse

log = logging.getLogger(__name__)

MAX_GROUP_ORDER = 24
EXHAUSTIVE_KERNEL_BOUND = 10**4


def x_letter(g: int) -> tuple:
    """Word for x_g (empty for the identity)."""
    return (g,) if g else ()


def y_letter(g: int, n: int) -> tuple:
    return (n - 1 + g,) if g else ()


def generator_names(n: int) -> tuple:
    return tuple(f"x{g}" for g in range(1, n)) + tuple(f"y{g}" for g in range(1, n))


def build_nu_presentation(g: FiniteGroupInput) -> Presentation:
    """The all-elements presentation of nu(G), relators in a fixed order.

    Cayley relators ``x_a x_b x_(ab)^-1`` of the first copy, then of the second,
    then for every (g, h, k) the two tensor relators
    ``[x_g,y_h]^(x_k) [x_(g^k),y_(h^k)]^-1`` and the same with ``y_k``.
    Identity symbols are dropped; relators that reduce to the empty word and
    exact repeats are skipped.
    """
    n = g.order
    tab = g.cayley
    rels = []
    seen = set()

    def add(w):
        w = free_reduce(w)
        if w and w not in seen:
            seen.add(w)
            rels.append(w)

    for letter in (x_letter, lambda e: y_letter(e, n)):
        for a in range(n):
            for b in range(n):
                add(letter(a) + letter(b) + inverse(letter(int(tab[a, b]))))
    for a in range(n):
        for b in range(n):
            base = commutator(x_letter(a), y_letter(b, n))
            if not base:
                continue
            for k in range(n):
                target = commutator(x_letter(int(g.conj(a, k))), y_letter(int(g.conj(b, k)), n))
                add(conjugate(base, x_letter(k)) + inverse(target))
                add(conjugate(base, y_letter(k, n)) + inverse(target))
    return Presentation(generator_names(n), tuple(rels))


@dataclass(frozen=True, eq=False)
class RhoPrime:
    """The homomorphism nu(G) -> G sending both x_g and y_g to g.

    Restricted to the tensor square it is the derived map [x_g, y_h] -> [g, h].
    ``values[i]`` is the image of the element sitting at orbit position ``i``
    of the realized nu(G).
    """

    group: FiniteGroupInput
    nu: PermGroup
    values: np.ndarray

    def __call__(self, p: Permutation) -> int:
        ch = self.nu.chain
        if not ch.base:
            return 0
        return int(self.values[ch.pos[p.images[ch.base[0]]]])

    def on_points(self, points) -> np.ndarray:
        return self.values[self.nu.chain.pos[np.asarray(points)]]

    def evaluate_word(self, word) -> int:
        """Image of a word in the nu(G) generator letters."""
        n = self.group.order
        out = 0
        for x in word:
            e = abs(x) if abs(x) < n else abs(x) - (n - 1)
            if x < 0:
                e = int(self.group.inverse[e])
            out = int(self.group.cayley[out, e])
        return out


@dataclass(frozen=True, eq=False)
class NuRealization:
    group: FiniteGroupInput
    presentation: Presentation
    table: CosetTable
    nu: PermGroup
    x: tuple  # x[g]: permutation of x_g (identity for g = 0)
    y: tuple
    gen_of: tuple  # element index -> generator index of x_g (None for identity)
    gen_of_phi: tuple
    embedded_g: PermGroup
    embedded_gphi: PermGroup
    upsilon: PermGroup
    rho: RhoPrime
    mu: PermGroup = field(default=None)

    @property
    def order(self) -> int:
        return self.nu.order()

    def tensor_generators(self) -> dict:
        """``(g, h) -> [x_g, y_h]`` for all non-identity g, h."""
        n = self.group.order
        return {(a, b): self.x[a].commutator(self.y[b]) for a in range(1, n) for b in range(1, n)}


def realize_nu(g: FiniteGroupInput, cap: int = DEFAULT_CAP, *, max_order: int = MAX_GROUP_ORDER,
               check: bool = True) -> NuRealization:
    """Enumerate nu(G) and build the named subgroups.

    Raises :class:`GroupTooLarge` for ``|G| > max_order`` and
    :class:`CosetLimitExceeded` when the enumeration needs more than ``cap``
    cosets.
    """
    n = g.order
    if n > max_order:
        raise GroupTooLarge(n, max_order)
    pres = build_nu_presentation(g)
    log.info("nu(%s): %d generators, %d relators", g.label, pres.n_gens, len(pres.relators))
    table = todd_coxeter(pres, (), cap)
    perms = table_to_perms(table)
    degree = table.live_count
    ident = Permutation.identity(degree)
    x = (ident,) + tuple(perms[: n - 1])
    y = (ident,) + tuple(perms[n - 1:])
    nu = PermGroup(perms, degree, semiregular=True, name=f"nu({g.label})")
    if nu.order() != degree:
        raise AssertionError("coset action over the trivial subgroup is not regular")
    embedded_g = nu.subgroup(x[1:], name="G")
    embedded_gphi = nu.subgroup(y[1:], name="G^phi")
    upsilon = commutator_subgroup(nu, x[1:], y[1:])
    upsilon.name = "Upsilon"

    ch = nu.chain
    elem_of_gen = np.array([(i % (n - 1)) + 1 for i in range(len(perms))], dtype=np.int64)
    if ch.base:
        kept = np.array(ch.gen_index)
        values = ch.propagate(np.asarray(0, dtype=np.int64),
                              lambda gi, vals: g.cayley[vals, elem_of_gen[kept[gi]]])
    else:
        values = np.zeros(1, dtype=np.int64)
    rho = RhoPrime(g, nu, values)
    gen_of = (None,) + tuple(range(n - 1))
    gen_of_phi = (None,) + tuple(range(n - 1, 2 * (n - 1)))
    r = NuRealization(g, pres, table, nu, x, y, gen_of, gen_of_phi, embedded_g, embedded_gphi,
                      upsilon, rho)
    object.__setattr__(r, "mu", mu_subgroup(r))
    if check:
        assert_realization(r)
    return r


def assert_realization(r: NuRealization) -> None:
    """The structural invariants every realization must satisfy."""
    g = r.group
    n = g.order
    if r.nu.order() != r.upsilon.order() * n * n:
        raise AssertionError("order law |nu| = |Upsilon| |G|^2 fails")
    for sub, perms in ((r.embedded_g, r.x), (r.embedded_gphi, r.y)):
        if sub.order() != n:
            raise AssertionError("embedded copy does not have order |G|")
        for a in range(n):
            for b in range(n):
                if not (perms[a] * perms[b]) == perms[int(g.cayley[a, b])]:
                    raise AssertionError("embedded copy violates the Cayley table")
    for u in r.upsilon.generators:
        for t in r.nu.generators:
            if not r.upsilon.has_member_of_ambient(~t * u * t):
                raise AssertionError("Upsilon is not normal in nu")
    for m in r.mu.generators:
        for t in r.nu.generators:
            if not m * t == t * m:
                raise AssertionError("mu is not central in nu")
    if not rho_well_defined(r):
        raise AssertionError("derived map is not well defined")
    if r.upsilon.order() // max(r.mu.order(), 1) != len(g.derived_subgroup()):
        raise AssertionError("|Upsilon / mu| != |G'|")


def rho_well_defined(r: NuRealization) -> bool:
    """Every defining relator maps to the identity of G, and rho(Upsilon) = G'."""
    if any(r.rho.evaluate_word(w) != 0 for w in r.presentation.relators):
        return False
    ch = r.upsilon.chain
    pts = ch.points if ch.base else np.array([r.nu.chain.base[0] if r.nu.chain.base else 0])
    image = np.unique(r.rho.on_points(pts)) if r.nu.chain.base else np.array([0])
    return np.array_equal(image, r.group.derived_subgroup())


def _points_to_subgroup(ambient: PermGroup, points, name=None) -> PermGroup:
    """Subgroup of a semiregular group whose base orbit is ``points``."""
    ch = ambient.chain
    gens = []
    current = ambient.subgroup([])
    target = len(points)
    for pt in points:
        if current.order() >= target:
            break
        pt = int(pt)
        if ch.base and pt == ch.base[0]:
            continue
        if current.chain.base and current.chain.has_point(pt):
            continue
        gens.append(ch.element(pt))
        current = ambient.subgroup(gens, name=name)
    if current.order() != target:
        raise AssertionError("point set is not a subgroup")
    current.name = name
    return current


def mu_subgroup(r: NuRealization, method: str = "auto") -> PermGroup:
    """Kernel of the derived map on the tensor square.

    ``exhaustive`` evaluates the map on every element of Upsilon;
    ``schreier`` takes the stabilizer of the identity under Upsilon acting on
    G through the map (Schreier generators).  ``auto`` uses the exhaustive
    route up to 10^4 elements.
    """
    ups = r.upsilon
    if method == "auto":
        method = "exhaustive" if ups.order() <= EXHAUSTIVE_KERNEL_BOUND else "schreier"
    if method == "exhaustive":
        ch = ups.chain
        if not ch.base:
            return r.nu.subgroup([], name="mu")
        kernel_pts = ch.points[r.rho.on_points(ch.points) == 0]
        return _points_to_subgroup(r.nu, kernel_pts, name="mu")
    if method == "schreier":
        return _schreier_kernel(r)
    raise ValueError(f"unknown method {method!r}")


def _schreier_kernel(r: NuRealization) -> PermGroup:
    g = r.group
    gens = [u for u in r.upsilon.generators if not u.is_identity()]
    images = [r.rho(u) for u in gens]
    ident = r.nu.identity()
    trans = {0: ident}
    queue = [0]
    for c in queue:
        for s, im in zip(gens, images):
            d = int(g.cayley[c, im])
            if d not in trans:
                trans[d] = trans[c] * s
                queue.append(d)
    kernel_gens = []
    for c, tc in trans.items():
        for s, im in zip(gens, images):
            d = int(g.cayley[c, im])
            k = tc * s * ~trans[d]
            if not k.is_identity():
                kernel_gens.append(k)
    return r.nu.subgroup(kernel_gens, name="mu")


@dataclass
class TensorReport:
    order: int
    exponent: int
    derived_order: int
    nilpotency_class: int | None
    abelian_invariants: list | None

    def as_dict(self) -> dict:
        return {
            "order": self.order,
            "exponent": self.exponent,
            "derived_order": self.derived_order,
            "nilpotency_class": self.nilpotency_class,
            "abelian_invariants": self.abelian_invariants,
        }


def tensor_report(r: NuRealization) -> TensorReport:
    ups = r.upsilon
    inv = abelian_invariants(ups).as_list() if ups.is_abelian() else None
    return TensorReport(ups.order(), exponent(ups), derived_subgroup(ups).order(),
                        nilpotency_class(ups), inv)


def tensor_square(g: FiniteGroupInput, cap: int = DEFAULT_CAP, **kw):
    """The tensor square ``[G, G^phi]`` of a realized nu(G) and its structure report."""
    r = realize_nu(g, cap, **kw)
    return r.upsilon, tensor_report(r)


@dataclass
class KernelCheckReport:
    group: str
    normal_order: int
    nu_order: int
    quotient_nu_order: int
    kernel_order: int
    index_matches: bool
    maps_to_identity: bool
    kernel_equals_preimage: bool
    homomorphism: bool

    @property
    def passed(self) -> bool:
        return (self.index_matches and self.maps_to_identity
                and self.kernel_equals_preimage and self.homomorphism)


def _point_map(r: NuRealization, target: NuRealization, coset_of: np.ndarray) -> np.ndarray:
    """Image point in the target's regular action of every element of ``r.nu``.

    ``x_g -> x_(gN)``, ``y_g -> y_(gN)``; values are indexed by orbit position.
    """
    n = r.group.order
    ch = r.nu.chain
    if not ch.base:
        return np.zeros(1, dtype=np.int64)
    stacks = []
    for i in ch.gen_index:
        e = (i % (n - 1)) + 1
        copy = target.x if i < n - 1 else target.y
        stacks.append(copy[int(coset_of[e])].images)
    stacks = np.stack(stacks)
    return ch.propagate(np.asarray(0, dtype=np.int64), lambda gi, vals: stacks[gi][vals])


def kernel_subgroup(r: NuRealization, normal: Sequence[int]) -> PermGroup:
    """``<N, N^phi> [N, G^phi] [G, N^phi]`` inside nu(G)."""
    nset = [int(a) for a in normal if int(a) != 0]
    xs_n = [r.x[a] for a in nset]
    ys_n = [r.y[a] for a in nset]
    xs = list(r.x[1:])
    ys = list(r.y[1:])
    parts = xs_n + ys_n
    if nset and len(xs):
        parts += list(commutator_subgroup(r.nu, xs_n, ys).generators)
        parts += list(commutator_subgroup(r.nu, xs, ys_n).generators)
    return r.nu.subgroup(parts, name="K")


def quotient_nu_map(g: FiniteGroupInput, n_elements: Sequence[int], cap: int = DEFAULT_CAP, *,
                    realization: NuRealization | None = None,
                    quotient_realization: NuRealization | None = None,
                    max_order: int = MAX_GROUP_ORDER) -> KernelCheckReport:
    """Compare the kernel of nu(G) -> nu(G/N) with the subgroup built from N."""
    normal = sorted(set(int(a) for a in n_elements) | {0})
    if not g.is_normal(normal):
        raise NotNormal("elements do not form a normal subgroup")
    q, coset_of = g.quotient(normal, label=f"{g.label}/N{len(normal)}")
    r = realization or realize_nu(g, cap, max_order=max_order)
    rq = quotient_realization or realize_nu(q, cap, max_order=max_order)
    if rq.group.order != q.order or not np.array_equal(rq.group.cayley, q.cayley):
        raise InputError("quotient realization does not match G/N")
    kernel = kernel_subgroup(r, normal)
    images = _point_map(r, rq, coset_of)
    base_target = rq.nu.chain.base[0] if rq.nu.chain.base else 0
    # letters x_g, y_g of G go to x_(gN), y_(gN); relators must trace back to the start
    n = g.order
    letter_perm = {}
    for e in range(1, n):
        for letter, copy in ((e, rq.x), (n - 1 + e, rq.y)):
            perm = copy[int(coset_of[e])]
            letter_perm[letter] = perm.images
            letter_perm[-letter] = (~perm).images
    homomorphism = True
    for w in r.presentation.relators:
        pt = base_target
        for a in w:
            pt = int(letter_perm[a][pt])
        if pt != base_target:
            homomorphism = False
            break
    ch = r.nu.chain
    if ch.base:
        k_ch = kernel.chain
        k_pts = k_ch.points if k_ch.base else np.array([ch.base[0]])
        in_kernel = images[ch.pos[k_pts]] == base_target
        maps_to_identity = bool(in_kernel.all())
        preimage = int(np.count_nonzero(images == base_target))
        kernel_equal = preimage == kernel.order()
    else:
        maps_to_identity = kernel_equal = True
    index_ok = r.order % kernel.order() == 0 and r.order // kernel.order() == rq.order
    return KernelCheckReport(g.label, len(normal), r.order, rq.order, kernel.order(), index_ok,
                             maps_to_identity, kernel_equal, homomorphism)
