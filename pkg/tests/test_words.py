from hypothesis import given, strategies as st

from cubical_sc.linalg import in_row_span, nullspace
from cubical_sc.rewriting import knuth_bendix
from cubical_sc.words import (
    cyclic_reduce, cyclic_subword, exponent_vector, free_reduce, inverse, is_cyclically_reduced,
    parse_word, rotations,
)

from oracles import reduce_free

words = st.text(alphabet="aAbB", max_size=20)


@given(words)
def test_free_reduce_matches_stack_oracle(w):
    assert free_reduce(w) == reduce_free(w)


@given(words)
def test_inverse_cancels(w):
    assert free_reduce(w + inverse(w)) == ""


@given(words)
def test_cyclic_reduce_is_conjugate(w):
    c = cyclic_reduce(w)
    assert is_cyclically_reduced(c)
    assert len(c) <= len(free_reduce(w))
    assert exponent_vector(c, "ab") == exponent_vector(w, "ab")


def test_rotations_and_subwords():
    assert set(rotations("abc")) == {"abc", "bca", "cab"}
    assert cyclic_subword("abcd", 3, 3) == "dab"


def test_parse_word_powers():
    assert parse_word(["a^3", "b", "a^-2"]) == "aaabAA"


def test_nullspace():
    basis = nullspace([[1, 1, 0], [0, 1, 1]], 3)
    assert basis in ([[1, -1, 1]], [[-1, 1, -1]])
    assert in_row_span([[1, 1, 0]], [2, 2, 0])
    assert not in_row_span([[1, 1, 0]], [1, 0, 0])


def test_knuth_bendix_free_abelian():
    rws = knuth_bendix("ab", ["abAB"])
    assert rws is not None
    assert rws.reduce("baBA") == ""
    assert rws.reduce("ba") == rws.reduce("ab")
    assert rws.reduce("ab") != rws.reduce("aab")


def test_knuth_bendix_gives_up_within_budget():
    # two rules are too few to complete the genus-2 relator
    assert knuth_bendix("abcd", ["abABcdCD"], max_rules=2) is None
