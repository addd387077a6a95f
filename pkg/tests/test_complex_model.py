import pytest
from hypothesis import given, settings, strategies as st

from cubical_sc import Presentation, SquareComplex, parse_presentation
from cubical_sc.complex_model import (
    ComplexMorphism, check_local_isometry, check_npc, cycle_complex, cycle_morphism, wedge_of_circles,
)
from cubical_sc.covers import XHAT, XTILDE, build_ball, is_null_homotopic, path_normal_form
from cubical_sc.errors import PresentationSyntaxError, ValidationError

from oracles import lattice_ball_size, tree_ball_size


def torus_complex():
    return SquareComplex(["x"], {1: ("x", "x"), -1: ("x", "x"), 2: ("x", "x"), -2: ("x", "x")},
                         {1: -1, -1: 1, 2: -2, -2: 2}, [(1, 2, -1, -2)])


def test_parse_classical(surf2):
    assert surf2.classical
    assert surf2.gens == ("a", "b", "c", "d")
    assert surf2.relators == ("abABcdCD",)
    assert len(surf2.cones) == 1 and len(surf2.cones[0].vertices) == 8


def test_parse_exponent_syntax():
    p = parse_presentation("gens a b\nrel a^3 b A^-1 B\n")
    assert p.relators == ("aaabAB",) or p.relators[0].startswith("aaab")


@pytest.mark.parametrize("text, line", [
    ("gens a B\n", 1),
    ("rel a b\n", 1),
    ("gens a b\nrel a x\n", 2),
    ("gens a b\nfoo a\n", 2),
    ("gens a b\ngens c\n", 2),
])
def test_syntax_errors_carry_position(text, line):
    with pytest.raises(PresentationSyntaxError) as exc:
        parse_presentation(text)
    assert exc.value.line == line


def test_relator_must_be_cyclically_reduced():
    with pytest.raises(ValidationError):
        parse_presentation("gens a b\nrel a b A\n")


def test_square_format(torus_cone):
    assert not torus_cone.classical
    assert len(torus_cone.base.squares) == 1
    assert len(torus_cone.cones[0].squares) == 1


def test_square_format_section_errors():
    with pytest.raises(PresentationSyntaxError):
        parse_presentation("[complex X]\nvertex x\ndart 0 x x\n")
    with pytest.raises(PresentationSyntaxError):
        parse_presentation("[complex X\n")


def test_npc_torus_and_graph():
    assert check_npc(torus_complex()).ok
    assert check_npc(wedge_of_circles("ab")).ok
    assert check_npc(cycle_complex(5)).ok


def test_npc_detects_bigon_in_link():
    # two squares glued along two consecutive edges: the link at the corner has a double edge
    c = SquareComplex(
        ["v"], {k: ("v", "v") for k in (1, -1, 2, -2)}, {1: -1, -1: 1, 2: -2, -2: 2},
        [(1, 2, -1, -2), (1, 2, -1, -2)])
    bad = check_npc(c)
    assert not bad.ok
    assert any(kind[0] == "bigon" for _, kind in bad.violations)


def test_local_isometry_cycle_maps():
    X = wedge_of_circles("ab")
    assert check_local_isometry(cycle_morphism("abAB", X)).ok
    assert check_local_isometry(cycle_morphism("ab", X)).ok


def test_fold_is_not_local_isometry():
    X = wedge_of_circles("ab")
    y = cycle_complex(2)
    # the closed path a A backtracks at vertex 1
    m = ComplexMorphism(y, X, {0: 0, 1: 0}, {1: "a", -1: "A", 2: "A", -2: "a"})
    v = check_local_isometry(m)
    assert not v.ok and v.violations[0][0] == "fold"


def test_missing_square():
    X = torus_complex()
    y = SquareComplex([0, 1, 2], {1: (0, 1), -1: (1, 0), 2: (1, 2), -2: (2, 1)}, {1: -1, -1: 1, 2: -2, -2: 2})
    m = ComplexMorphism(y, X, {0: "x", 1: "x", 2: "x"}, {1: 1, -1: -1, 2: 2, -2: -2})
    v = check_local_isometry(m)
    assert not v.ok and v.violations[0][0] == "missing_square"


def test_presentation_rejects_non_isometry():
    X = wedge_of_circles("a")
    y = cycle_complex(2)
    m = ComplexMorphism(y, X, {0: 0, 1: 0}, {1: "a", -1: "A", 2: "A", -2: "a"})
    with pytest.raises(ValidationError):
        Presentation(X, [y], [m], "CLASSICAL")


@pytest.mark.parametrize("radius", [0, 1, 2, 3, 4])
def test_free_ball_is_tree(free, radius):
    assert len(build_ball(free, XTILDE, radius)) == tree_ball_size(2, radius)


@pytest.mark.parametrize("radius", [1, 2, 3, 4])
def test_torus_squares_universal_cover_is_lattice(torus_squares, radius):
    assert len(build_ball(torus_squares, XTILDE, radius)) == lattice_ball_size(radius)


@pytest.mark.parametrize("radius", [1, 2, 3, 4])
def test_torus_quotient_ball(torus, radius):
    assert len(build_ball(torus, XHAT, radius)) == lattice_ball_size(radius)


def test_null_homotopy_in_torus():
    X = torus_complex()
    assert is_null_homotopic(X, (1, 2, -1, -2))
    assert not is_null_homotopic(X, (1, 2, 1, -2))
    assert path_normal_form(X, (1, 2)) == path_normal_form(X, (2, 1))


@settings(max_examples=30, deadline=None)
@given(st.permutations([1, 2]), st.booleans())
def test_npc_invariant_under_relabeling(order, flip):
    c = torus_complex()
    sign = -1 if flip else 1
    dperm = {}
    for new, old in enumerate(order, 1):
        dperm[old] = sign * new
        dperm[-old] = -sign * new
    r = c.relabeled({"x": "y"}, dperm)
    assert check_npc(r).ok == check_npc(c).ok
    assert len(r.corners()) == len(c.corners())
