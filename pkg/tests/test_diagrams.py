import pytest
from hypothesis import given, settings, strategies as st

from cubical_sc.diagrams import (
    EXPOSED, FULL, HYPOTHESES_FAIL, INEQUALITY_HOLDS, LADDER, PARTIALLY_REDUCED, WEAK, CONECELL,
    DiscDiagram, FaceInfo, apply_reduction, check_grid_inequality, classify_greendlinger,
    diagonal_staircase, exposed_cells, find_cornsquares, find_sites, grid_diagram, is_reduced,
    point_diagram, random_classical_diagram, random_staircase, recognize_ladder, rectangle, reduce,
    relator_ypath, sandwich_decompose, shell_degree, single_cell, single_square, staircase,
    trace_dual_curves, validate_diagram, validate_ladder,
)
from cubical_sc.diagrams.generators import cone_lifts
from cubical_sc.errors import DiagramError

from conftest import corpus
from diagram_builders import cell_with_square, grown_squares, mirrored_pair


def test_single_cell_reads_relator(surf2):
    d = single_cell(surf2, 0, relator_ypath(surf2, 0))
    assert d.boundary_text() == "abABcdCD"
    assert d.comp() == (1, 0)
    assert validate_diagram(d).ok
    assert d.euler() == 1 + 1  # a disc plus the outer face


def test_single_square_boundary(torus_squares):
    d = single_square(torus_squares, 0)
    assert d.boundary() == (1, 2, -1, -2)
    assert d.comp() == (0, 1)


def test_grid_dual_curves(torus_squares):
    d = grid_diagram(torus_squares, {(0, 0), (1, 0), (0, 1), (1, 1)})
    data = trace_dual_curves(d)
    assert len(data.curves) == 4
    assert not data.bigons
    assert len(find_cornsquares(d)) == 4


@pytest.mark.parametrize("k", [1, 2, 5])
def test_row_dual_curves(torus_squares, k):
    d, _ = rectangle(torus_squares, k)
    data = trace_dual_curves(d)
    assert len(data.curves) == k + 1
    assert all(not c.closed for c in data.curves)


def test_mirrored_pair_cancels(torus_squares):
    d = mirrored_pair(torus_squares)
    assert validate_diagram(d).ok
    sites = find_sites(d, 0)
    assert sites
    e = apply_reduction(d, 0, sites[0])
    assert e.comp() == (0, 0)
    assert e.boundary() == d.boundary()


def test_bigon_removal(torus_squares):
    d = next(d for d in (grown_squares(torus_squares, s, 3) for s in range(50)) if find_sites(d, 1))
    region = find_sites(d, 1)[0]
    e = apply_reduction(d, 1, region)
    assert e.comp()[1] < d.comp()[1]
    assert e.boundary() == d.boundary()


def test_cell_merge_and_null_cell(surf2):
    d = random_classical_diagram(surf2, 0)
    for move in (2, 3):
        site = find_sites(d, move)[0]
        e = apply_reduction(d, move, site)
        assert e.comp() < d.comp()
        assert e.boundary() == d.boundary()


@pytest.mark.parametrize("k, move", [(1, 5), (2, 4)])
def test_square_absorption(torus_cone, k, move):
    d = cell_with_square(torus_cone, k)
    assert d.comp() == (1, 1)
    site = find_sites(d, move)[0]
    e = apply_reduction(d, move, site)
    assert e.comp() == (1, 0)
    assert e.boundary() == d.boundary()
    assert validate_diagram(e).ok


def test_bad_site_is_rejected(torus_squares):
    d = single_square(torus_squares, 0)
    with pytest.raises(Exception):
        apply_reduction(d, 0, d.outer_darts()[0])


def test_weak_reduction_keeps_cancellable_squares(torus_squares):
    d = mirrored_pair(torus_squares)
    weak = reduce(d, WEAK)
    assert is_reduced(weak, WEAK)
    full = reduce(d, FULL)
    assert is_reduced(full, FULL) and full.comp() == (0, 0)
    assert full.boundary() == d.boundary()


@pytest.mark.parametrize("seed", range(30))
def test_full_reduce_on_random_diagrams(surf2, seed):
    d = random_classical_diagram(surf2, seed)
    r = reduce(d, FULL)
    assert r.boundary() == d.boundary()
    assert r.comp() <= d.comp()
    if PARTIALLY_REDUCED not in r.flags:
        assert is_reduced(r, FULL)
    assert all(after < before for _, _, before, after in r.log)


def test_json_round_trip(surf2):
    d = reduce(random_classical_diagram(surf2, 4, cells=4), WEAK)
    e = DiscDiagram.from_json(d.to_json(), surf2)
    assert e.boundary() == d.boundary()
    assert e.comp() == d.comp()
    assert validate_diagram(e).ok
    assert e.to_json() == d.to_json()


def test_json_rejects_unknown_format(surf2):
    with pytest.raises(Exception):
        DiscDiagram.from_json('{"format": "scd/9"}', surf2)


def test_validation_catches_broken_rotation(surf2):
    d = single_cell(surf2, 0, relator_ypath(surf2, 0))
    x = d.outer_darts()[0]
    d.lab[x] = "c" if d.lab[x] != "c" else "d"
    assert not validate_diagram(d).ok


# ------------------------------------------------------------ Greendlinger

def test_point_and_cell_are_ladders(surf3):
    assert classify_greendlinger(point_diagram(surf3)).kind == LADDER
    cell = single_cell(surf3, 0, relator_ypath(surf3, 0))
    v = classify_greendlinger(cell)
    assert v.kind == LADDER and v.dichotomy_holds
    assert not v.caveats


def test_surface_two_is_not_certified(surf2):
    v = classify_greendlinger(single_cell(surf2, 0, relator_ypath(surf2, 0)))
    assert v.caveats == ["NOT_APPLICABLE"]


def test_shell_degree_of_a_lone_cell(surf3):
    d = single_cell(surf3, 0, relator_ypath(surf3, 0))
    f = d.cone_faces()[0]
    rep = shell_degree(d, f)
    assert rep.degree == 0 and not rep.R


def test_shells_of_glued_cells(surf3):
    d = single_cell(surf3, 0, relator_ypath(surf3, 0))
    arc = d.lab[d.outer_darts()[0]]
    # a second copy of the relator meeting the first in one edge, not its mirror image
    path, labels = next((y, w) for y, w in cone_lifts(surf3, 0) if w[0] == arc and y[0] != -1)
    d.attach_polygon(d.outer_darts()[0], 1, labels[1:], FaceInfo(CONECELL, cone=0), ydarts=path)
    assert validate_diagram(d).ok
    for f in d.cone_faces():
        assert shell_degree(d, f).degree == 1
    assert not find_sites(d, 2)
    assert sum(1 for e in exposed_cells(d) if e.kind == "SHELL") == 2


def test_not_weakly_reduced_is_rejected(surf3):
    d = random_classical_diagram(surf3, 0)
    if not is_reduced(d, WEAK):
        with pytest.raises(DiagramError):
            classify_greendlinger(d)


@pytest.mark.parametrize("seed", range(25))
def test_dichotomy_on_reduced_diagrams(surf3, seed):
    d = reduce(random_classical_diagram(surf3, seed, mix=(0.1, 0.05, 0.1, 0.05)), WEAK)
    v = classify_greendlinger(d)
    assert v.dichotomy_holds
    if v.kind == LADDER:
        assert validate_ladder(d, v.ladder).ok


@pytest.mark.parametrize("k", [1, 2, 4])
def test_rectangle_is_a_ladder(torus_squares, k):
    d, _ = rectangle(torus_squares, k)
    L = recognize_ladder(d)
    assert L is not None and validate_ladder(d, L).ok


# ------------------------------------------------------------ sandwich

@pytest.mark.parametrize("split", range(0, 11))
def test_sandwich_on_rectangle(torus_squares, split):
    d, _ = rectangle(torus_squares, 4)
    s = sandwich_decompose(d, split)
    assert s.verdict.ok, s.verdict.violations
    assert len(s.pushes) <= d.area()
    assert s.d1 | s.dprime | s.d2 == set(d.square_faces())


def test_sandwich_on_staircase(torus_squares):
    d, _ = staircase(torus_squares, [3, 2, 2, 1])
    for split in range(len(d.boundary()) + 1):
        assert sandwich_decompose(d, split).verdict.ok


def test_sandwich_needs_a_split(torus_squares):
    d, _ = rectangle(torus_squares, 2)
    with pytest.raises(DiagramError):
        sandwich_decompose(d, None)


# ------------------------------------------------------------ grid checker

def test_staircase_boundary_shape(torus_squares):
    d, marking = staircase(torus_squares, [3, 2, 2, 1])
    assert marking == (3, 4, 0)
    b = d.boundary()
    assert b[:3] == (-2, -2, -2) and b[3:7] == (1, 1, 1, 1)


@pytest.mark.parametrize("seed", range(20))
def test_staircases_satisfy_the_inequality(torus_squares, seed):
    d, marking = random_staircase(torus_squares, seed)
    v = check_grid_inequality(d, marking)
    assert v.status == INEQUALITY_HOLDS, v.failures


def test_rectangle_fails_hypotheses(torus_squares):
    d, marking = rectangle(torus_squares, 4)
    assert check_grid_inequality(d, marking).status == HYPOTHESES_FAIL


def test_diagonal_has_cornsquares_on_q(torus_squares):
    d, marking = diagonal_staircase(torus_squares, 3)
    v = check_grid_inequality(d, marking)
    assert v.status == HYPOTHESES_FAIL
    assert v.failures


def test_degenerate_path_diagram(torus_squares):
    d = point_diagram(torus_squares)
    at = None
    for lab in [1, 1, 2, 1, 2]:
        at = d.attach_spur(at, lab)
    d.base = 2
    assert check_grid_inequality(d, (0, 5, 0)).status == INEQUALITY_HOLDS


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(min_value=1, max_value=4), min_size=1, max_size=6))
def test_staircase_property(heights):
    p = corpus("torus_squares")
    heights = sorted(heights, reverse=True)
    d, marking = staircase(p, heights)
    assert validate_diagram(d).ok
    assert d.comp() == (0, sum(heights))
    assert len(d.boundary()) == 2 * (heights[0] + len(heights))
    assert check_grid_inequality(d, marking).status != "INEQUALITY_VIOLATED"


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=100_000))
def test_reduction_preserves_boundary(seed):
    p = corpus("a5w")
    d = random_classical_diagram(p, seed, cells=4)
    for mode in (WEAK, FULL):
        r = reduce(d, mode)
        assert r.boundary() == d.boundary()
        assert validate_diagram(r).ok
