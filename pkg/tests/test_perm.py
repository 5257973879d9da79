import numpy as np
import pytest
from hypothesis import given, strategies as st

from nu_forge.errors import DegreeMismatch, InputError
from nu_forge.perm import Permutation, parse_perm_file

perms = st.integers(1, 9).flatmap(lambda n: st.permutations(range(n))).map(Permutation)


def same_degree_pairs(k):
    return st.integers(1, 9).flatmap(
        lambda n: st.tuples(*[st.permutations(range(n)).map(Permutation)] * k))


def test_parse_and_print():
    p = Permutation.parse("(0 1 2)(3 4)")
    assert p.degree == 5
    assert str(p) == "(0 1 2)(3 4)"
    assert Permutation.parse(str(p), 5) == p
    assert p.order() == 6


def test_right_action():
    # p * q applies p first
    p = Permutation.parse("(0 1)", 3)
    q = Permutation.parse("(1 2)", 3)
    assert (p * q)[0] == q[p[0]] == 2


def test_degree_mismatch():
    with pytest.raises(DegreeMismatch):
        Permutation.parse("(0 1)", 2) * Permutation.parse("(0 1 2)", 3)


def test_perm_file():
    gens, degree = parse_perm_file("degree: 5\n(0 1)\n(0 1 2 3 4)  # rotation\n")
    assert degree == 5 and len(gens) == 2
    with pytest.raises(InputError):
        parse_perm_file("(0 1)\ndegree: 3\n")


@given(same_degree_pairs(3))
def test_associative(t):
    a, b, c = t
    assert (a * b) * c == a * (b * c)


@given(perms)
def test_inverse_and_power(p):
    e = Permutation.identity(p.degree)
    assert p * ~p == e == ~p * p
    assert (p ** p.order()).is_identity()
    assert p ** -1 == ~p


@given(same_degree_pairs(2))
def test_commutator_and_conjugate(t):
    a, b = t
    assert a.commutator(b) == ~a * ~b * a * b
    assert a.conjugate(b) == ~b * a * b
    assert hash(a * b) == hash(Permutation(np.array((a * b).images)))
