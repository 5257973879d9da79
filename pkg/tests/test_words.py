import pytest
from hypothesis import given, strategies as st

from nu_forge.errors import PresentationError, UnknownGenerator, WordSyntaxError
from nu_forge.words import (Presentation, commutator, conjugate, free_reduce, inverse,
                            parse_presentation, parse_word, power, word_to_str)

letters = st.integers(1, 4).flatmap(lambda k: st.sampled_from([k, -k]))
words = st.lists(letters, max_size=30).map(tuple)


def test_cancellation():
    assert parse_word("a*A", ["a"]) == ()
    assert parse_word("a a^-1", ["a"]) == ()


def test_commutator_convention():
    # lowercase generator, uppercase inverse: [a,b] = A B a b
    assert parse_word("[a,b]", ["a", "b"]) == (-1, -2, 1, 2)


def test_power():
    assert parse_word("a^3", ["a"]) == (1, 1, 1)
    assert parse_word("(ab)^-2", ["a", "b"]) == (-2, -1, -2, -1)
    assert parse_word("a^0", ["a"]) == ()


def test_left_normed_commutator():
    a, b, c = (1,), (2,), (3,)
    assert parse_word("[a,b,c]", ["a", "b", "c"]) == commutator(commutator(a, b), c)


def test_identity_and_multichar_names():
    assert parse_word("1", ["x1"]) == ()
    assert parse_word("x1 x2 x1^-1", ["x1", "x2"]) == (1, 2, -1)


@pytest.mark.parametrize("text", ["a*", "[a]", "a^", "(a", "a)", "*a", "a^b"])
def test_syntax_errors(text):
    with pytest.raises(WordSyntaxError):
        parse_word(text, ["a", "b"])


def test_unknown_generator():
    with pytest.raises(UnknownGenerator):
        parse_word("a*c", ["a", "b"])


def test_free_reduce_examples():
    assert free_reduce((1, -1, 2, -2)) == ()
    assert free_reduce((1, 2, -2, -1)) == ()
    assert free_reduce((1, 2, -1)) == (1, 2, -1)


@given(words)
def test_free_reduce_idempotent(w):
    r = free_reduce(w)
    assert free_reduce(r) == r
    assert all(x != -y for x, y in zip(r, r[1:]))


@given(words, words)
def test_inverse_cancels(a, b):
    assert free_reduce(tuple(a) + inverse(a)) == ()
    assert inverse(free_reduce(a + b)) == free_reduce(inverse(b) + inverse(a))


@given(words, st.integers(-4, 4))
def test_power_adds(w, n):
    assert free_reduce(power(w, n) + power(w, 1)) == power(w, n + 1)


@given(words, words)
def test_commutator_identity(a, b):
    # [a,b] = a^-1 a^b
    assert commutator(a, b) == free_reduce(inverse(a) + conjugate(a, b))


@given(words)
def test_round_trip_through_text(w):
    names = ["a", "b", "c", "d"]
    assert parse_word(word_to_str(w, names), names) == free_reduce(w)


def test_presentation_text():
    p = parse_presentation("# klein\ngens: a, b\nrel: a^2\nrel: b^2\nrel: (ab)^2\n")
    assert p.generator_names == ("a", "b")
    assert len(p.relators) == 3
    assert parse_presentation(p.to_text()) == p


@pytest.mark.parametrize("text", ["rel: a", "gens: a, a", "gens: a\nfoo: a", "gens: a\ngens: b", ""])
def test_bad_presentations(text):
    with pytest.raises((PresentationError, UnknownGenerator)):
        parse_presentation(text)


def test_relator_out_of_range():
    with pytest.raises(PresentationError):
        Presentation(("a",), ((2,),))
