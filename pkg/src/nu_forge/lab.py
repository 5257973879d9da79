"""Machine checks of the identities that hold in every realized nu(G).

Each check returns :class:`CheckResult` records; a failing identity is a
``fail`` verdict carrying the first offending tuple, never an exception.
Element identities are tested as permutation identities inside nu(G): since
nu(G) acts regularly, two words are equal iff they send the base point to the
same place, so whole batches of tuples are traced at once with numpy.
"""

from __future__ import annotations

import time
import zlib
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .finite import FiniteGroupInput
from .nu import NuRealization
from .permgroup import (PermGroup, center, commutator_subgroup, derived_series, derived_subgroup,
                        exponent, lower_central_series, max_class_size, nilpotency_class,
                        same_subgroup, upper_central_series)

EXHAUSTIVE_TUPLES = 12**4
SAMPLE_SIZE = 10**5

CHECK_FAMILIES = ("order", "rho", "lemma21", "lemma22i", "lemma22ii", "lemma22iii", "lemma22v",
                  "lemma23", "cor35", "bfc", "lemma31")


@dataclass
class CheckResult:
    check_id: str
    group_label: str
    verdict: str
    tuples_checked: int = 0
    witness: str | None = None
    elapsed: float = 0.0
    seed: int | None = None
    exhaustive: bool = True
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict not in ("pass", "fail"):
            raise ValueError(f"bad verdict {self.verdict!r}")
        if self.verdict == "fail" and not self.witness:
            raise ValueError("a failing check needs a witness")

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def as_dict(self, timings: bool = False) -> dict:
        d = {
            "check_id": self.check_id,
            "group": self.group_label,
            "verdict": self.verdict,
            "tuples_checked": self.tuples_checked,
            "exhaustive": self.exhaustive,
            "seed": self.seed,
            "witness": self.witness,
            "details": self.details,
        }
        if timings:
            d["elapsed_ms"] = int(round(self.elapsed * 1000))
        return d


def _result(check_id, label, ok, start, *, witness=None, **kw) -> CheckResult:
    if not ok and witness is None:
        witness = "identity fails"
    return CheckResult(check_id, label, "pass" if ok else "fail",
                       witness=None if ok else witness, elapsed=time.perf_counter() - start, **kw)


def family_of(check_id: str) -> str:
    return check_id.split(".", 1)[0]


def _rng(seed: int, check_id: str):
    return np.random.default_rng([seed, zlib.crc32(check_id.encode())])


# --- element identities ---------------------------------------------------

# a word over tuple slots: (stack, slot) with stack in X, x (= X^-1), Y, y
def _atom(kind, slot):
    return [(kind, slot)]


def _inv(w):
    return [(k.swapcase(), s) for k, s in reversed(w)]


def _comm(a, b):
    return _inv(a) + _inv(b) + a + b


def _conj(a, by):
    return _inv(by) + a + by


def _comm3(a, b, c):
    return _comm(_comm(a, b), c)


X = lambda s: _atom("X", s)  # noqa: E731
Y = lambda s: _atom("Y", s)  # noqa: E731

# item -> (arity, words that must all be equal); an empty word is the identity
_BASIC = {
    "i": (4, [_conj(_comm(X(0), Y(1)), _comm(X(2), Y(3))),
              _conj(_comm(X(0), Y(1)), _comm(X(2), X(3)))]),
    "ii": (3, [_comm3(X(0), Y(1), Y(2)), _comm3(X(0), X(1), Y(2)), _comm3(X(0), Y(1), X(2)),
               _comm3(Y(0), X(1), Y(2)), _comm3(Y(0), Y(1), X(2)), _comm3(Y(0), X(1), X(2))]),
    "iii": (2, [_comm(X(0), Y(1)) + _comm(X(1), Y(0)), []]),
    "iv": (3, [_comm(X(0), _comm(Y(1), Y(2))), _inv(_comm(_comm(X(1), X(2)), Y(0)))]),
    "v": (4, [_comm(_comm(X(0), Y(1)), _comm(X(2), Y(3))),
              _comm(_comm(X(0), X(1)), _comm(Y(2), Y(3)))]),
}


class _Tracer:
    """Traces words over x_g / y_g from the base point for a batch of tuples."""

    def __init__(self, r: NuRealization):
        self.start = r.nu.chain.base[0] if r.nu.chain.base else 0
        xs = np.stack([p.images for p in r.x]).astype(np.int64)
        ys = np.stack([p.images for p in r.y]).astype(np.int64)
        self.stacks = {"X": xs, "x": _invert_rows(xs), "Y": ys, "y": _invert_rows(ys)}

    def __call__(self, word, tuples: np.ndarray) -> np.ndarray:
        pts = np.full(tuples.shape[0], self.start, dtype=np.int64)
        for kind, slot in word:
            pts = self.stacks[kind][tuples[:, slot], pts]
        return pts


def _invert_rows(a: np.ndarray) -> np.ndarray:
    out = np.empty_like(a)
    rows = np.arange(a.shape[0])[:, None]
    out[rows, a] = np.arange(a.shape[1])[None, :]
    return out


def _tuples(n, arity, check_id, seed, restrict=None):
    """All tuples when there are at most 12^4 of them, else 10^5 uniform samples."""
    if n ** arity <= EXHAUSTIVE_TUPLES:
        t = np.array(list(product(range(n), repeat=arity)), dtype=np.int64).reshape(-1, arity)
        exhaustive = True
    else:
        t = _rng(seed, check_id).integers(0, n, size=(SAMPLE_SIZE, arity))
        exhaustive = False
    if restrict is not None:
        t = t[restrict(t)]
    return t, exhaustive


def _describe(g: FiniteGroupInput, row) -> str:
    names = ("g", "h", "x", "y")
    return ", ".join(f"{names[i]}={g.elements[int(a)]}" for i, a in enumerate(row))


def check_basic_relations(r: NuRealization, seed: int = 0, items=None) -> list:
    """The five families of commutator identities, one result per item."""
    g = r.group
    n = g.order
    trace = _Tracer(r)
    dmask = np.zeros(n, dtype=bool)
    dmask[g.derived_subgroup()] = True
    out = []
    for item, (arity, words) in _BASIC.items():
        if items is not None and item not in items:
            continue
        start = time.perf_counter()
        check_id = f"lemma21.{item}"
        restrict = (lambda t: dmask[t[:, 0]] | dmask[t[:, 1]]) if item == "iii" else None
        tuples, exhaustive = _tuples(n, arity, check_id, seed, restrict)
        ends = [trace(w, tuples) for w in words]
        bad = np.zeros(tuples.shape[0], dtype=bool)
        for e in ends[1:]:
            bad |= e != ends[0]
        witness = _describe(g, tuples[np.argmax(bad)]) if bad.any() else None
        if item == "iii":
            expected = n * n - (n - int(dmask.sum())) ** 2
        else:
            expected = n ** arity
        details = {"arity": arity}
        if exhaustive:
            details["expected_tuples"] = expected
            if tuples.shape[0] != expected:
                bad[:] = True
                witness = f"checked {tuples.shape[0]} tuples, expected {expected}"
        out.append(_result(check_id, g.label, not bad.any(), start, witness=witness,
                           tuples_checked=int(tuples.shape[0]), exhaustive=exhaustive,
                           seed=None if exhaustive else seed, details=details))
    return out


# --- subgroup identities --------------------------------------------------

def _term(series, i):
    """Term ``i`` of a series, repeating the last term once it has stabilized."""
    terms = series.terms
    return terms[min(i, len(terms) - 1)]


def _gens(*groups):
    return [p for h in groups for p in h.generators]


def default_depth(r: NuRealization) -> int:
    c = nilpotency_class(r.nu)
    return c + 1 if c is not None else 4


def _compare(check_id, label, lhs, rhs, start, **details) -> CheckResult:
    ok = same_subgroup(lhs, rhs)
    witness = None if ok else f"|LHS| = {lhs.order()}, |RHS| = {rhs.order()}"
    return _result(check_id, label, ok, start, witness=witness,
                   tuples_checked=len(lhs.generators) + len(rhs.generators),
                   details={"lhs_order": lhs.order(), "rhs_order": rhs.order(), **details})


def check_lcs_formula(r: NuRealization, i_max: int | None = None) -> list:
    """gamma_i(nu) against the four-factor product, for 2 <= i <= i_max."""
    lcs_nu = lower_central_series(r.nu)
    if i_max is None:
        i_max = max(default_depth(r), lcs_nu.stabilized_at + 2, 2)
    lcs_g = lower_central_series(r.embedded_g)
    lcs_p = lower_central_series(r.embedded_gphi)
    xs, ys = list(r.x[1:]), list(r.y[1:])
    out = []
    for i in range(2, i_max + 1):
        start = time.perf_counter()
        lhs = _term(lcs_nu, i - 1)
        parts = [_term(lcs_g, i - 1), _term(lcs_p, i - 1),
                 commutator_subgroup(r.nu, _term(lcs_g, i - 2).generators, ys),
                 commutator_subgroup(r.nu, xs, _term(lcs_p, i - 2).generators)]
        rhs = r.nu.subgroup(_gens(*parts))
        out.append(_compare(f"lemma22ii.{i}", r.group.label, lhs, rhs, start, i=i))
    return out


def check_derived_formula(r: NuRealization, i_max: int | None = None) -> list:
    """nu^(i) against its factorization; i = 1 uses Upsilon G' (G')^phi."""
    ds_nu = derived_series(r.nu)
    if i_max is None:
        i_max = max(default_depth(r), ds_nu.stabilized_at + 1, 1)
    ds_g = derived_series(r.embedded_g)
    ds_p = derived_series(r.embedded_gphi)
    out = []
    for i in range(1, i_max + 1):
        start = time.perf_counter()
        lhs = _term(ds_nu, i)
        if i == 1:
            parts = [r.upsilon, _term(ds_g, 1), _term(ds_p, 1)]
        else:
            parts = [_term(ds_g, i), _term(ds_p, i),
                     commutator_subgroup(r.nu, _term(ds_g, i - 1).generators,
                                         _term(ds_p, i - 1).generators)]
        rhs = r.nu.subgroup(_gens(*parts))
        out.append(_compare(f"lemma22iii.{i}", r.group.label, lhs, rhs, start, i=i))
    return out


def check_mu_central(r: NuRealization) -> CheckResult:
    start = time.perf_counter()
    pairs = 0
    for m in r.mu.generators:
        for t in r.nu.generators:
            pairs += 1
            if not m * t == t * m:
                return _result("lemma22v", r.group.label, False, start, tuples_checked=pairs,
                               witness=f"mu generator {m} does not commute with {t}")
    return _result("lemma22v", r.group.label, True, start, tuples_checked=pairs,
                   details={"mu_order": r.mu.order()})


def _phi_image(r: NuRealization, h: PermGroup) -> list:
    """Generators of the second-copy image of a subgroup of the first copy."""
    if not r.nu.chain.base:
        return []
    b = r.nu.chain.base[0]
    elem = {int(p.images[b]): a for a, p in enumerate(r.x)}
    return [r.y[elem[int(p.images[b])]] for p in h.generators]


def check_center_containment(r: NuRealization, n_max: int | None = None) -> list:
    """[Z_n(G), G^phi][G, Z_n(G)^phi] inside Z_n(nu) for 1 <= n <= n_max."""
    ucs_nu = upper_central_series(r.nu)
    ucs_g = upper_central_series(r.embedded_g)
    if n_max is None:
        n_max = max(default_depth(r), ucs_nu.stabilized_at + 1, ucs_g.stabilized_at + 1, 1)
    xs, ys = list(r.x[1:]), list(r.y[1:])
    out = []
    for k in range(1, n_max + 1):
        start = time.perf_counter()
        zg = _term(ucs_g, k)
        lhs_gens = (_gens(commutator_subgroup(r.nu, zg.generators, ys))
                    + _gens(commutator_subgroup(r.nu, xs, _phi_image(r, zg))))
        target = _term(ucs_nu, k)
        missing = [p for p in lhs_gens if not target.has_member_of_ambient(p)]
        lhs = r.nu.subgroup(lhs_gens)
        out.append(_result(f"lemma23.{k}", r.group.label, not missing, start,
                           witness=f"{missing[0]} not in Z_{k}(nu)" if missing else None,
                           tuples_checked=len(lhs_gens),
                           details={"n": k, "lhs_order": lhs.order(),
                                    "zn_nu_order": target.order(), "zn_g_order": zg.order()}))
    return out


def _regular(g: FiniteGroupInput) -> PermGroup:
    return PermGroup(g.regular_perms()[1:], g.order, semiregular=True, name=g.label)


def check_schur_neumann(g: FiniteGroupInput, r: NuRealization) -> list:
    out = []
    d = len(g.derived_subgroup())
    start = time.perf_counter()
    ups_d = derived_subgroup(r.upsilon)
    e = exponent(ups_d)
    out.append(_result("cor35.a", g.label, d % e == 0, start, tuples_checked=1,
                       witness=f"exp(Upsilon') = {e} does not divide |G'| = {d}",
                       details={"exp_upsilon_derived": e, "derived_order": d}))
    start = time.perf_counter()
    zu = center(r.upsilon).order()
    idx = r.upsilon.order() // zu
    out.append(_result("cor35.b", g.label, d % idx == 0, start, tuples_checked=1,
                       witness=f"|Upsilon/Z(Upsilon)| = {idx} does not divide |G'| = {d}",
                       details={"upsilon_center_index": idx, "derived_order": d}))
    start = time.perf_counter()
    reg = _regular(g)
    e_d = exponent(derived_subgroup(reg))
    z_idx = g.order // len(g.center())
    out.append(_result("cor35.c", g.label, z_idx % e_d == 0, start, tuples_checked=1,
                       witness=f"exp(G') = {e_d} does not divide [G:Z(G)] = {z_idx}",
                       details={"exp_derived": e_d, "center_index": z_idx}))
    return out


def check_bfc_witness(g: FiniteGroupInput) -> CheckResult:
    """Largest conjugacy class against |G'|; asserted only when G' is central."""
    start = time.perf_counter()
    reg = _regular(g)
    dmax = max_class_size(reg)
    der = g.derived_subgroup()
    central = bool(np.isin(der, g.center()).all())
    ok = dmax <= len(der) if central else True
    ups_central_by_finite = True  # every finite group is central-by-finite
    return _result("bfc", g.label, ok, start, tuples_checked=1,
                   witness=f"class of size {dmax} exceeds |G'| = {len(der)}",
                   details={"max_class_size": dmax, "derived_order": len(der),
                            "derived_is_central": central, "asserted": central,
                            "upsilon_central_by_finite": ups_central_by_finite})


def check_finite_by_nilpotent_witnesses(g: FiniteGroupInput) -> CheckResult:
    """Class read off both central series; they must agree for nilpotent G."""
    start = time.perf_counter()
    reg = _regular(g)
    lcs = lower_central_series(reg)
    ucs = upper_central_series(reg)
    nilpotent = lcs.reaches_trivial
    details = {"lcs_orders": lcs.orders, "ucs_orders": ucs.orders, "nilpotent": nilpotent}
    if nilpotent:
        k = lcs.orders.index(1)
        m = ucs.orders.index(g.order) if ucs.orders[-1] == g.order else None
        details.update(k=k, m=m)
        ok = k == m
        witness = f"lower series gives class {k}, upper series gives {m}"
    else:
        # the upper series must then stall strictly below G
        ok = ucs.orders[-1] < g.order
        witness = "upper central series reaches G although the lower one stalls"
    return _result("lemma31", g.label, ok, start, tuples_checked=1, witness=witness,
                   details=details)


def check_order_law(r: NuRealization) -> CheckResult:
    start = time.perf_counter()
    n = r.group.order
    ok = r.nu.order() == r.upsilon.order() * n * n
    return _result("order", r.group.label, ok, start, tuples_checked=1,
                   witness=f"|nu| = {r.nu.order()} but |Upsilon| |G|^2 = {r.upsilon.order() * n * n}",
                   details={"nu_order": r.nu.order(), "upsilon_order": r.upsilon.order()})


def check_rho(r: NuRealization, seed: int = 0, words: int = 1000) -> list:
    """|Upsilon/mu| = |G'|, and the derived map agrees with letter-wise evaluation
    on random words in the generators of nu."""
    from .nu import rho_well_defined

    g = r.group
    label = g.label
    out = []
    start = time.perf_counter()
    d = len(g.derived_subgroup())
    ok = r.upsilon.order() == r.mu.order() * d and rho_well_defined(r)
    out.append(_result("rho.quotient", label, ok, start, tuples_checked=1,
                       witness=f"|Upsilon| = {r.upsilon.order()}, |mu| = {r.mu.order()}, |G'| = {d}",
                       details={"upsilon_order": r.upsilon.order(), "mu_order": r.mu.order(),
                                "derived_order": d}))
    start = time.perf_counter()
    n = g.order
    ngen = 2 * (n - 1)
    if ngen == 0:
        out.append(_result("rho.words", label, True, start, tuples_checked=0))
        return out
    rng = _rng(seed, "rho.words")
    perms = list(r.x[1:]) + list(r.y[1:])
    b = r.nu.chain.base[0]
    inv_rows = _invert_rows(np.stack([p.images for p in perms]).astype(np.int64))
    fwd = np.stack([p.images for p in perms]).astype(np.int64)
    witness = None
    for _ in range(words):
        length = int(rng.integers(1, 13))
        letters = rng.integers(1, ngen + 1, size=length) * rng.choice([-1, 1], size=length)
        pt = b
        for a in letters:
            pt = int((fwd if a > 0 else inv_rows)[abs(a) - 1, pt])
        if r.rho.on_points([pt])[0] != r.rho.evaluate_word(tuple(int(a) for a in letters)):
            witness = f"word {letters.tolist()}"
            break
    out.append(_result("rho.words", label, witness is None, start, witness=witness,
                       tuples_checked=words, exhaustive=False, seed=seed))
    return out


__all__ = [
    "CheckResult", "CHECK_FAMILIES", "check_basic_relations", "check_lcs_formula",
    "check_derived_formula", "check_mu_central", "check_center_containment",
    "check_schur_neumann", "check_bfc_witness", "check_finite_by_nilpotent_witnesses",
    "check_order_law", "check_rho", "check_quotient_kernels", "run_checks", "default_depth",
    "family_of",
]


KERNEL_NU_BOUND = 10**5


def check_quotient_kernels(r: NuRealization, *, cap: int | None = None,
                           nu_bound: int = KERNEL_NU_BOUND, cache: dict | None = None) -> list:
    """For every normal N of G, the subgroup built from N is the kernel of
    nu(G) -> nu(G/N).  Skipped (no results) when |nu(G)| exceeds ``nu_bound``."""
    from .coset import DEFAULT_CAP
    from .nu import quotient_nu_map, realize_nu

    g = r.group
    if r.order > nu_bound:
        return []
    cache = {} if cache is None else cache
    cap = DEFAULT_CAP if cap is None else cap
    cache.setdefault(g.cayley.tobytes(), r)
    out = []
    for k, normal in enumerate(g.normal_subgroups()):
        start = time.perf_counter()
        q, _ = g.quotient(normal, label=f"{g.label}/N{k}")
        key = q.cayley.tobytes()
        if key not in cache:
            cache[key] = realize_nu(q, cap, max_order=max(q.order, 1))
        rep = quotient_nu_map(g, normal, cap, realization=r, quotient_realization=cache[key])
        witness = (f"|nu(G)|/|K| = {rep.nu_order}/{rep.kernel_order}, |nu(G/N)| = "
                   f"{rep.quotient_nu_order}; maps to 1: {rep.maps_to_identity}; "
                   f"kernel = K: {rep.kernel_equals_preimage}; homomorphism: {rep.homomorphism}")
        out.append(_result(f"lemma22i.N{k}", g.label, rep.passed, start, witness=witness,
                           tuples_checked=1,
                           details={"normal_order": int(len(normal)), "kernel_order": rep.kernel_order,
                                    "nu_order": rep.nu_order,
                                    "quotient_nu_order": rep.quotient_nu_order}))
    return out


def run_checks(r: NuRealization, families=CHECK_FAMILIES, *, seed: int = 0,
               cap: int | None = None) -> list:
    """Run the selected check families on one realization, in a fixed order."""
    g = r.group
    runners = {
        "order": lambda: [check_order_law(r)],
        "rho": lambda: check_rho(r, seed),
        "lemma21": lambda: check_basic_relations(r, seed),
        "lemma22i": lambda: check_quotient_kernels(r, cap=cap),
        "lemma22ii": lambda: check_lcs_formula(r),
        "lemma22iii": lambda: check_derived_formula(r),
        "lemma22v": lambda: [check_mu_central(r)],
        "lemma23": lambda: check_center_containment(r),
        "cor35": lambda: check_schur_neumann(g, r),
        "bfc": lambda: [check_bfc_witness(g)],
        "lemma31": lambda: [check_finite_by_nilpotent_witnesses(g)],
    }
    out = []
    for fam in CHECK_FAMILIES:
        if fam in families:
            out.extend(runners[fam]())
    return out
