import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cubical_sc import Presentation
from cubical_sc.pieces import get_pieces, piece_count
from cubical_sc.small_cancellation import (
    FAILS, HOLDS, check_metric_condition, check_nonmetric_condition, enumerate_cycles,
    family_words, find_family_word, is_essential, piece_systole, systole,
)

from conftest import corpus
from oracles import metric_condition_holds, nonmetric_condition_holds, random_clean_relators


def test_surface_conditions(surf2):
    assert check_nonmetric_condition(surf2, 8).result == HOLDS
    fail = check_nonmetric_condition(surf2, 9)
    assert fail.result == FAILS
    assert fail.witness["word"] == "abABcdCD"
    assert fail.witness["count"] == 8
    assert check_metric_condition(surf2, Fraction(1, 6)).result == HOLDS
    assert check_metric_condition(surf2, Fraction(1, 8)).result == FAILS
    assert piece_systole(surf2) == 8


def test_torus_conditions(torus):
    assert check_metric_condition(torus, Fraction(1, 3)).result == HOLDS
    assert check_metric_condition(torus, Fraction(1, 4)).result == FAILS
    assert check_nonmetric_condition(torus, 4).result == HOLDS
    assert check_nonmetric_condition(torus, 5).result == FAILS


def test_genus_three_is_c12(surf3):
    assert check_nonmetric_condition(surf3, 12).result == HOLDS
    assert check_nonmetric_condition(surf3, 13).result == FAILS


def test_free_holds_vacuously(free):
    assert check_nonmetric_condition(free, 100).result == HOLDS
    assert check_metric_condition(free, Fraction(1, 100)).result == HOLDS


def test_witness_is_a_real_cover(surf2):
    w = check_nonmetric_condition(surf2, 9).witness
    ps = get_pieces(surf2)
    assert "".join(w["pieces"]) == w["word"]
    assert all(q in ps.words for q in w["pieces"])
    assert len(w["pieces"]) == w["count"] < 9


@pytest.mark.parametrize("seed", range(25))
@pytest.mark.parametrize("pval", [3, 4, 6])
def test_nonmetric_matches_oracle(seed, pval):
    rels = random_clean_relators(seed)
    p = Presentation.from_relators("ab", rels)
    got = check_nonmetric_condition(p, pval).result
    assert got == (HOLDS if nonmetric_condition_holds(rels, pval) else FAILS)


@pytest.mark.parametrize("seed", range(25))
@pytest.mark.parametrize("alpha", [Fraction(1, 6), Fraction(1, 4), Fraction(1, 2)])
def test_metric_matches_oracle(seed, alpha):
    rels = random_clean_relators(seed)
    p = Presentation.from_relators("ab", rels)
    got = check_metric_condition(p, alpha).result
    assert got == (HOLDS if metric_condition_holds(rels, alpha) else FAILS)


@pytest.mark.parametrize("seed", range(20))
def test_conditions_are_monotone(seed):
    p = Presentation.from_relators("ab", random_clean_relators(seed))
    nonmetric = [check_nonmetric_condition(p, k).holds for k in range(2, 10)]
    assert nonmetric == sorted(nonmetric, reverse=True)
    metric = [check_metric_condition(p, Fraction(1, k)).holds for k in range(2, 10)]
    assert metric == sorted(metric, reverse=True)


@pytest.mark.parametrize("seed", range(20))
def test_metric_implies_nonmetric(seed):
    p = Presentation.from_relators("ab", random_clean_relators(seed))
    for q in range(2, 9):
        if check_metric_condition(p, Fraction(1, q)).holds:
            assert check_nonmetric_condition(p, q + 1).holds


def test_systole_of_cycle_cone(surf2):
    assert systole(surf2, 0) == 8


def test_contractible_square_cone(torus_cone):
    cycles = list(enumerate_cycles(torus_cone.cones[0], 4))
    assert len(cycles) == 1 and len(cycles[0]) == 4
    assert is_essential(torus_cone, 0, cycles[0]) is False
    assert systole(torus_cone, 0) == math.inf
    assert piece_systole(torus_cone) == math.inf
    assert check_metric_condition(torus_cone, Fraction(1, 8)).result == HOLDS
    assert check_nonmetric_condition(torus_cone, 9).result == HOLDS


def test_loop_cone_systole():
    from test_pieces import LOOP_CONE
    from cubical_sc import parse_presentation
    assert systole(parse_presentation(LOOP_CONE), 0) == 1


def test_family_search_result():
    assert find_family_word() == ("babAbaBBabbb", 495)


def test_family_words_shape():
    words = list(family_words(4))
    assert words == sorted(words, key=lambda w: ["aAbB".index(x) for x in w])
    for w in words:
        assert w[0] == "b" and w[-1] == "b"
        assert "aa" not in w and "AA" not in w
        assert all(w[i] != w[i + 1].swapcase() for i in range(len(w) - 1))


@pytest.mark.parametrize("n", range(5, 11))
def test_family_members(n):
    p = corpus(f"a{n}w")
    ps = get_pieces(p)
    assert "a" * (n - 1) in ps.words
    assert check_metric_condition(p, Fraction(1, 6)).result == FAILS
    assert check_nonmetric_condition(p, 7).result == HOLDS


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=2, max_value=8))
def test_fails_witness_revalidates(seed, pval):
    rels = random_clean_relators(seed, max_total=18)
    p = Presentation.from_relators("ab", rels)
    v = check_nonmetric_condition(p, pval)
    if v.result == FAILS:
        w = v.witness
        ps = get_pieces(p)
        assert piece_count(w["word"], ps)[0] == w["count"] < pval
        r = rels[w["cone"]]
        assert w["word"] in (r + r) or w["word"] in (r + r)[::-1].swapcase()
