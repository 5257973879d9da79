import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nu_forge import catalog
from nu_forge.errors import NotAbelian
from nu_forge.perm import Permutation as P
from nu_forge.permgroup import (PermGroup, abelian_invariants, center, closure_order,
                                commutator_subgroup, contains, derived_series, derived_subgroup,
                                exponent, is_subgroup, lower_central_series, max_class_size,
                                nilpotency_class, normal_closure, quotient_action,
                                upper_central_series)

S3 = PermGroup([P.parse("(0 1)", 3), P.parse("(0 1 2)", 3)])
D8 = PermGroup([P.parse("(0 1 2 3)", 4), P.parse("(1 3)", 4)])
A3 = PermGroup([P.parse("(0 1 2)", 3)])


def regular(name, semiregular=True):
    g = catalog.build(name)
    return PermGroup(g.regular_perms()[1:], g.order, semiregular=semiregular, name=name)


def perm_rep(name):
    """A non-semiregular copy of a catalog group, for the Schreier-Sims path."""
    return regular(name, semiregular=False)


def test_orders():
    assert S3.order() == 6
    assert PermGroup([], 3).order() == 1
    assert D8.order() == 8
    assert S3.verify_bsgs() and D8.verify_bsgs()


def test_membership():
    assert contains(S3, P.parse("(0 1 2)", 3))
    assert not contains(A3, P.parse("(0 1)", 3))
    assert contains(D8, P.identity(4))


def test_normal_closure_and_commutators():
    assert normal_closure(S3, [P.parse("(0 1 2)", 3)]).order() == 3
    assert normal_closure(S3, []).order() == 1
    assert normal_closure(D8, [P.parse("(0 2)(1 3)", 4)]).order() == 2
    assert derived_subgroup(S3).order() == 3
    assert derived_subgroup(D8).order() == 2
    assert derived_subgroup(A3).order() == 1


def test_center_and_quotient():
    assert center(S3).order() == 1
    z = center(D8)
    assert z.order() == 2
    assert center(A3).order() == 3
    q = quotient_action(D8, z)
    assert q.order() == 4 and exponent(q) == 2
    assert quotient_action(D8, D8.trivial_subgroup()).order() == 8
    assert quotient_action(D8, D8).order() == 1


def test_series():
    assert lower_central_series(D8).orders == [8, 2, 1]
    assert nilpotency_class(D8) == 2
    assert lower_central_series(S3).orders == [6, 3, 3]
    assert nilpotency_class(S3) is None
    assert upper_central_series(D8).orders == [1, 2, 8]
    assert upper_central_series(S3).orders == [1, 1]
    assert derived_series(S3).orders == [6, 3, 1]
    assert derived_series(D8).orders == [8, 2, 1]
    assert derived_series(regular("C5")).orders == [5, 1]
    assert lower_central_series(regular("C6")).orders == [6, 1]
    assert upper_central_series(regular("C6")).orders == [1, 6]


def test_element_statistics():
    assert exponent(D8) == 4
    assert exponent(regular("C2xC2")) == 2
    assert exponent(S3) == 6
    assert abelian_invariants(regular("C2xC4")).as_list() == [2, 4]
    assert abelian_invariants(PermGroup([], 1)).as_list() == []
    assert abelian_invariants(regular("C6")).as_list() == [6]
    assert abelian_invariants(regular("C2xC2xC4")).as_list() == [2, 2, 4]
    with pytest.raises(NotAbelian):
        abelian_invariants(S3)
    assert max_class_size(regular("C4")) == 1
    assert max_class_size(S3) == 3
    assert max_class_size(D8) == 2


@pytest.mark.parametrize("name", catalog.DEFAULT_CORPUS)
@pytest.mark.parametrize("semiregular", [True, False])
def test_bsgs_matches_closure(name, semiregular):
    g = regular(name, semiregular)
    assert g.order() == closure_order(g) == catalog.build(name).order
    assert g.verify_bsgs()


@pytest.mark.parametrize("name", catalog.DEFAULT_CORPUS)
def test_closed_under_products(name):
    g = perm_rep(name)
    rng = np.random.default_rng(0)
    for _ in range(10**4):
        x, y = g.random_element(rng), g.random_element(rng)
        assert contains(g, x) and contains(g, y) and contains(g, x * y)


@pytest.mark.parametrize("name", catalog.DEFAULT_CORPUS)
def test_series_shapes(name):
    g = regular(name)
    lcs, ucs, ds = lower_central_series(g), upper_central_series(g), derived_series(g)
    for terms, descending in ((lcs.terms, True), (ucs.terms, False), (ds.terms, True)):
        for a, b in zip(terms, terms[1:]):
            small, big = (b, a) if descending else (a, b)
            assert is_subgroup(small, big)
    for t in lcs.terms + ucs.terms:
        for x in t.generators:
            for s in g.generators:
                assert contains(t, ~s * x * s)
    # nilpotent iff the upper series reaches g, with the same length
    assert lcs.reaches_trivial == (ucs.orders[-1] == g.order())
    if lcs.reaches_trivial:
        assert lcs.orders.index(1) == ucs.orders.index(g.order())


@pytest.mark.parametrize("name", catalog.DEFAULT_CORPUS)
def test_schur_bound(name):
    g = regular(name)
    assert (g.order() // center(g).order()) % exponent(derived_subgroup(g)) == 0


@settings(max_examples=30, deadline=None)
@given(st.lists(st.permutations(range(6)), min_size=1, max_size=3))
def test_random_groups(images):
    g = PermGroup([P(i) for i in images], 6)
    assert g.order() == closure_order(g)
    d = derived_subgroup(g)
    assert g.order() % d.order() == 0
    assert is_subgroup(d, g)
    assert commutator_subgroup(g, g.generators, g.generators).order() == d.order()
    z = center(g)
    for x in z.generators:
        assert all(x * s == s * x for s in g.generators)
