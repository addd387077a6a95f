import random

import pytest
from hypothesis import given, settings, strategies as st

from cubical_sc.covers import XHAT, XTILDE, build_ball
from cubical_sc.diagrams import (
    CONECELL, FaceInfo, point_diagram, recognize_ladder, rectangle, relator_ypath, single_cell,
)
from cubical_sc.errors import NotClassical
from cubical_sc.hyperbolicity import (
    NONTRIVIAL, TRIVIAL, DehnReducer, check_ladder_thinness, estimate_delta, fellow_travel_report,
    four_point_defect, scan_thin_bigons, short_word_threshold, word_reduce,
)
from cubical_sc.piece_metric import build_piece_graph

from conftest import corpus
from oracles import detects_nontrivial, random_trivial_word, reduce_free


def test_dehn_on_surface(surf2):
    assert word_reduce("abABcdCD", surf2).result == TRIVIAL
    assert word_reduce("cdCDabAB", surf2).result == TRIVIAL
    v = word_reduce("abABcdC", surf2)
    assert v.result == NONTRIVIAL and v.certificate == "d"
    assert word_reduce("abAB", surf2).result == NONTRIVIAL


def test_dehn_trace_shortens(surf2):
    trace = []
    assert DehnReducer(surf2.relators).reduce("abABcdCDabABcdCD", trace) == ""
    assert trace


def test_torus_needs_search(torus):
    v = word_reduce("aabAAB", torus)
    assert v.result == TRIVIAL and v.method == "search"
    assert word_reduce("ab", torus).method == "abelianization"


def test_free_group(free):
    assert word_reduce("abBA", free).result == TRIVIAL
    assert word_reduce("ab", free).result == NONTRIVIAL


def test_word_reduce_rejects_square_presentations(torus_cone):
    with pytest.raises(NotClassical):
        word_reduce("a", torus_cone)


def test_short_word_threshold(surf2):
    assert short_word_threshold(surf2) == 8


@pytest.mark.parametrize("seed", range(60))
def test_dehn_is_complete_on_trivial_words(surf2, seed):
    w = random_trivial_word(random.Random(seed), surf2.relators, "abcd")
    assert word_reduce(w, surf2).result == TRIVIAL


@pytest.mark.parametrize("seed", range(60))
def test_dehn_is_sound_against_finite_images(surf2, seed):
    rng = random.Random(1000 + seed)
    w = reduce_free("".join(rng.choice("abcdABCD") for _ in range(rng.randint(1, 12))))
    if detects_nontrivial(w, 2, tries=200, seed=seed):
        assert word_reduce(w, surf2).result == NONTRIVIAL
    if word_reduce(w, surf2).result == TRIVIAL:
        assert not detects_nontrivial(w, 2, tries=200, seed=seed)


def test_four_point_defect():
    # four points on a line: all sums pair up, so the defect is zero
    pos = {0: 0, 1: 1, 2: 3, 3: 6}
    assert four_point_defect(lambda a, b: abs(pos[a] - pos[b]), 0, 1, 2, 3) == 0
    # a 4-cycle has defect 1
    cyc = lambda a, b: min((a - b) % 4, (b - a) % 4)
    assert four_point_defect(cyc, 0, 1, 2, 3) == 1


def test_free_tree_is_zero_hyperbolic(free):
    g = build_piece_graph(build_ball(free, XTILDE, 4), p=free)
    assert estimate_delta(g) == 0
    assert scan_thin_bigons(g).epsilon == 0


def test_torus_bigons_grow(torus):
    eps = {R: scan_thin_bigons(build_piece_graph(build_ball(torus, XHAT, R), p=torus)).epsilon
           for R in (2, 4)}
    assert eps[4] > eps[2]


def test_surface_bigons_small_radius(surf2):
    g = build_piece_graph(build_ball(surf2, XHAT, 4), p=surf2)
    scan = scan_thin_bigons(g)
    assert scan.epsilon == 4 and scan.pairs_scanned > 0
    w = scan.witness
    assert w.gamma1[0] == w.gamma2[0] and w.gamma1[-1] == w.gamma2[-1]


def test_fellow_travel_in_tree(free):
    b = build_ball(free, XTILDE, 4)
    g = build_piece_graph(b, p=free)
    v = next(v for v in range(len(b)) if b.level[v] == 2)
    rep = fellow_travel_report(b, g, 0, v)
    assert rep.separation == 0 and rep.d_geodesic == rep.piece_geodesic


def test_fellow_travel_surface(surf2):
    b = build_ball(surf2, XHAT, 3)
    g = build_piece_graph(b, p=surf2)
    for v in range(1, 40):
        if g.exact(0, v):
            rep = fellow_travel_report(b, g, 0, v)
            assert rep.separation <= 2
            assert rep.d_geodesic[0] == rep.piece_geodesic[0] == 0


# ------------------------------------------------------------ ladders

def test_point_ladder(surf2):
    assert check_ladder_thinness(point_diagram(surf2), None) == 0


def test_single_cell_ladder(surf2):
    d = single_cell(surf2, 0, relator_ypath(surf2, 0))
    L = recognize_ladder(d)
    assert L is not None
    assert check_ladder_thinness(d, L) == 4


def test_two_cells_at_a_vertex(surf2):
    d = single_cell(surf2, 0, relator_ypath(surf2, 0))
    path = relator_ypath(surf2, 0, 2)
    labels = [surf2.maps[0].dmap[y] for y in path]
    d.attach_polygon(d.outer_darts()[3], 0, labels, FaceInfo(CONECELL, cone=0), ydarts=path)
    # ends sit on the two cells, each four steps from the cut vertex
    L = recognize_ladder(d, split=(1, 8))
    assert L is not None and len(L.cells) >= 2
    assert check_ladder_thinness(d, L) == 4


@pytest.mark.parametrize("k", [1, 3, 5])
def test_rectangle_ladder(torus_squares, k):
    d, _ = rectangle(torus_squares, k)
    L = recognize_ladder(d)
    assert L is not None
    assert check_ladder_thinness(d, L) == 2


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=1, max_value=30))
def test_dehn_agrees_with_abelian_and_free_reduction(n):
    p = corpus("surf2")
    w = "ab" * n + "BA" * n
    assert word_reduce(w, p).result == TRIVIAL
    assert word_reduce(w + "c", p).result == NONTRIVIAL
