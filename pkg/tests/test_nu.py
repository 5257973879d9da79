import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nu_forge import catalog
from nu_forge.errors import CosetLimitExceeded, GroupTooLarge
from nu_forge.nu import (build_nu_presentation, mu_subgroup, quotient_nu_map, realize_nu,
                         tensor_report)
from nu_forge.permgroup import closure_order, same_subgroup

from oracles import abelian_tensor_square_order

# (|nu|, |Upsilon|, |mu|) from direct enumeration of the all-elements presentation
EXPECTED = {
    "trivial": (1, 1, 1), "C2": (8, 2, 2), "C3": (27, 3, 3), "C4": (64, 4, 4),
    "C2xC2": (256, 16, 16), "C6": (216, 6, 6), "S3": (216, 6, 2), "D8": (2048, 32, 16),
    "Q8": (4096, 64, 32), "C2xC4": (2048, 32, 32), "D10": (1000, 10, 2),
    "D12": (6912, 48, 16), "A4": (3456, 24, 6),
}
ABELIAN = {"trivial": (), "C2": (2,), "C3": (3,), "C4": (4,), "C2xC2": (2, 2), "C6": (6,),
           "C2xC4": (2, 4)}


def test_presentation_shape():
    assert build_nu_presentation(catalog.build("trivial")).n_gens == 0
    p = build_nu_presentation(catalog.build("C2"))
    assert p.generator_names == ("x1", "y1")
    assert all(r for r in p.relators) and len(set(p.relators)) == len(p.relators)


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_orders(realize, name):
    r = realize(name)
    nu, ups, mu = EXPECTED[name]
    n = r.group.order
    assert (r.order, r.upsilon.order(), r.mu.order()) == (nu, ups, mu)
    assert r.embedded_g.order() == r.embedded_gphi.order() == n
    assert r.order == ups * n * n


@pytest.mark.parametrize("name", sorted(ABELIAN))
def test_abelian_against_bilinear_oracle(realize, name):
    r = realize(name)
    assert r.upsilon.order() == abelian_tensor_square_order(ABELIAN[name])
    assert same_subgroup(r.mu, r.upsilon)


def test_structure_reports(realize):
    assert tensor_report(realize("C2")).abelian_invariants == [2]
    assert tensor_report(realize("trivial")).order == 1
    assert tensor_report(realize("C2xC2")).abelian_invariants == [2, 2, 2, 2]
    assert tensor_report(realize("S3")).abelian_invariants == [6]
    assert tensor_report(realize("D8")).abelian_invariants == [2, 2, 2, 4]
    a4 = tensor_report(realize("A4"))
    assert a4.abelian_invariants is None and a4.derived_order == 2 and a4.exponent == 12


def test_semidirect_decomposition(realize):
    # G meets Upsilon G^phi trivially, so |G . Upsilon G^phi| = |nu|
    r = realize("D8")
    ug = r.nu.subgroup(list(r.upsilon.generators) + list(r.embedded_gphi.generators))
    assert ug.order() == r.upsilon.order() * 8
    assert not any(ug.has_member_of_ambient(x) for x in r.x[1:])


@pytest.mark.parametrize("name", catalog.DEFAULT_CORPUS)
def test_mu_routes_agree(realize, name):
    r = realize(name)
    assert same_subgroup(mu_subgroup(r, "exhaustive"), mu_subgroup(r, "schreier"))


@pytest.mark.parametrize("name", ["C2", "S3", "C4", "D8", "D10"])
def test_bsgs_against_closure(realize, name):
    r = realize(name)
    assert closure_order(r.nu) == r.order
    assert closure_order(r.upsilon) == r.upsilon.order()


@pytest.mark.parametrize("name", ["S3", "D8", "Q8", "A4", "D10"])
def test_derived_map_on_random_words(realize, name):
    r = realize(name)
    g = r.group
    n = g.order
    gens = [(a, b) for a in range(1, n) for b in range(1, n)]
    comm = {ab: r.x[ab[0]].commutator(r.y[ab[1]]) for ab in gens}

    @settings(max_examples=1000, deadline=None, derandomize=True)
    @given(st.lists(st.tuples(st.sampled_from(gens), st.booleans()), max_size=8))
    def prop(word):
        p = r.nu.identity()
        e = 0
        for (a, b), inv in word:
            c = comm[(a, b)]
            p = p * (~c if inv else c)
            cg = int(g.comm(a, b))
            e = int(g.mul(e, g.inv(cg) if inv else cg))
        assert r.upsilon.has_member_of_ambient(p)
        assert r.mu.has_member_of_ambient(p) == (e == 0)
        assert r.rho(p) == e

    prop()


def test_quotient_map_examples(realize):
    d8 = catalog.build("D8")
    r = realize("D8")
    whole = quotient_nu_map(d8, range(8), realization=r)
    assert whole.passed and whole.kernel_order == r.order and whole.quotient_nu_order == 1
    one = quotient_nu_map(d8, [0], realization=r, quotient_realization=r)
    assert one.passed and one.kernel_order == 1 and one.quotient_nu_order == r.order
    z = quotient_nu_map(d8, d8.center(), realization=r)
    assert z.passed and r.order // z.kernel_order == 256 == realize("C2xC2").order


def test_limits():
    with pytest.raises(CosetLimitExceeded):
        realize_nu(catalog.build("D8"), cap=500)
    with pytest.raises(GroupTooLarge):
        realize_nu(catalog.build("S4"), max_order=12)


def test_rho_values_are_a_homomorphism(realize):
    r = realize("S3")
    g = r.group
    rng = np.random.default_rng(1)
    for _ in range(200):
        p, q = r.nu.random_element(rng), r.nu.random_element(rng)
        assert r.rho(p * q) == g.mul(r.rho(p), r.rho(q))
