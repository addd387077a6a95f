"""Seeded diagram families used by the fuzz suites and the grid checker."""
import random

from ..errors import DiagramError
from .core import CONECELL, SQUARE, DiscDiagram, FaceInfo, from_embedding, relator_ypath, single_cell


def cone_lifts(p, cone):
    """All single-wrap lifts of a classical relator cycle, as (ypath, labels)."""
    n = len(p.cones[cone].vertices)
    m = p.maps[cone]
    out = []
    for orientation in (1, -1):
        for shift in range(n):
            path = relator_ypath(p, cone, shift, orientation)
            out.append((path, [m.dmap[y] for y in path]))
    return out


def _continue_from(p, cone, first):
    """The single-wrap lift starting with Y-dart ``first``."""
    n = len(p.cones[cone].vertices)
    if first > 0:
        return relator_ypath(p, cone, first - 1, 1)
    return relator_ypath(p, cone, -first, -1)


def _glue_cell(d, rng, max_arc):
    outer = d.outer_darts()
    for _ in range(8):
        start = rng.randrange(len(outer))
        k = rng.randint(1, min(max_arc, len(outer)))
        arc = [outer[(start + j) % len(outer)] for j in range(k)]
        want = [d.lab[x] for x in arc]
        options = []
        for cone in range(len(d.p.cones)):
            for path, labels in cone_lifts(d.p, cone):
                if len(labels) > k and labels[:k] == want:
                    options.append((cone, path, labels))
        if options:
            cone, path, labels = rng.choice(options)
            d.attach_polygon(arc[0], k, labels[k:], FaceInfo(CONECELL, cone=cone), ydarts=path)
            return True
    return False


def _glue_mirror(d, rng, max_arc):
    outer = d.outer_darts()
    backed = [i for i, x in enumerate(outer) if d.info[d.face[d.opp[x]]].kind == CONECELL]
    if not backed:
        return False
    i = rng.choice(backed)
    cell = d.face[d.opp[outer[i]]]
    k = 1
    while k < max_arc and k < len(outer) - 1 and d.face[d.opp[outer[(i + k) % len(outer)]]] == cell:
        k += 1
    k = rng.randint(1, k)
    arc = [outer[(i + j) % len(outer)] for j in range(k)]
    cone = d.info[cell].cone
    y = d.p.cones[cone]
    path = _continue_from(d.p, cone, y.opp(d.ymap[d.opp[arc[0]]]))
    labels = [d.p.maps[cone].dmap[t] for t in path]
    if labels[:k] != [d.lab[x] for x in arc] or len(labels) <= k:
        return False
    d.attach_polygon(arc[0], k, labels[k:], FaceInfo(CONECELL, cone=cone), ydarts=path)
    return True


def _glue_null(d, rng):
    cone = rng.randrange(len(d.p.cones))
    n = len(d.p.cones[cone].vertices)
    j = rng.randint(1, min(3, n - 1))
    s = rng.randrange(n)
    fwd = [((s + t) % n) + 1 for t in range(j)]
    path = fwd + [-x for x in reversed(fwd)]
    labels = [d.p.maps[cone].dmap[t] for t in path]
    at = rng.choice(d.outer_darts()) if d.opp else None
    d.attach_polygon(at, 0, labels, FaceInfo(CONECELL, cone=cone), ydarts=path)


def _glue_at_vertex(d, rng):
    cone = rng.randrange(len(d.p.cones))
    path, labels = rng.choice(cone_lifts(d.p, cone))
    d.attach_polygon(rng.choice(d.outer_darts()), 0, labels, FaceInfo(CONECELL, cone=cone), ydarts=path)


def random_classical_diagram(p, seed, cells=None, max_arc=3, mix=(0.25, 0.1, 0.1, 0.1)):
    """Random gluing of relator cells, mirrored cells, null cells and spurs.

    ``mix`` gives the chances of a mirrored cell, a null cell, a cell hung at a
    vertex and a spur; otherwise a cell is glued along an outer arc.
    """
    rng = random.Random(seed)
    cells = cells if cells is not None else rng.randint(1, 6)
    cone = rng.randrange(len(p.cones))
    path, _ = rng.choice(cone_lifts(p, cone))
    d = single_cell(p, cone, path)
    cuts = [sum(mix[:k + 1]) for k in range(4)]
    for _ in range(cells - 1):
        roll = rng.random()
        done = False
        if roll < cuts[0]:
            done = _glue_mirror(d, rng, max_arc)
        elif roll < cuts[1]:
            _glue_null(d, rng)
            done = True
        elif roll < cuts[2]:
            _glue_at_vertex(d, rng)
            done = True
        elif roll < cuts[3]:
            d.attach_spur(rng.choice(d.outer_darts()), rng.choice(p.gens))
            done = True
        if not done:
            _glue_cell(d, rng, max_arc)
    return d


# ---------------------------------------------------------------- grids over a square complex

def _grid_labels(p):
    """(right, up) darts of a square of X whose boundary reads right, up, left, down."""
    X = p.base
    if not X.squares:
        raise DiagramError("the base complex has no squares")
    a, b, c, e = X.squares[0]
    return a, b


def grid_diagram(p, cells):
    """Square diagram made of unit cells {(i, j)} of the plane, labelled by one square of X.

    The cells must form a disc; X must have a square reading R U R^-1 U^-1.
    """
    R, U = _grid_labels(p)
    X = p.base
    if X.squares[0] != (R, U, X.opp(R), X.opp(U)):
        raise DiagramError("grid diagrams need a square reading R U R^-1 U^-1")
    edges = set()
    for i, j in cells:
        edges |= {((i, j), (i + 1, j), R), ((i, j + 1), (i + 1, j + 1), R),
                  ((i, j), (i, j + 1), U), ((i + 1, j), (i + 1, j + 1), U)}
    points = {v: v for e in edges for v in e[:2]}
    return from_embedding(p, points, sorted(edges))


def rotate_to(d, vertex_name, direction):
    """Move the basepoint so the boundary starts at ``vertex_name`` heading ``direction``."""
    names = d.vertex_names
    vid = d.vertices()
    for x in d.outer_darts():
        # boundary dart opp(x) starts at the head of x
        y = d.opp[x]
        if names[vid[y]] == vertex_name and d.lab[y] == direction:
            d.base = x
            return d
    raise DiagramError("no boundary dart at that vertex")


def staircase(p, heights):
    """Square diagram between a flat bottom and a monotone descending top.

    Column i spans heights 0 .. heights[i] (non-increasing, all >= 1). Read
    from the top-left corner the boundary is l (left side, down), Q (bottom,
    rightwards), r (empty), then gamma reversed, where gamma is the top
    staircase from the top-left corner to the bottom-right corner.
    Returns (diagram, (|l|, |Q|, |r|)).
    """
    heights = list(heights)
    if not heights or min(heights) < 1 or heights != sorted(heights, reverse=True):
        raise DiagramError("heights must be non-increasing and positive")
    cells = {(i, j) for i, h in enumerate(heights) for j in range(h)}
    d = grid_diagram(p, cells)
    R, U = _grid_labels(p)
    rotate_to(d, (0, heights[0]), p.base.opp(U))
    return d, (heights[0], len(heights), 0)


def random_staircase(p, seed, max_width=6, max_height=4):
    rng = random.Random(seed)
    width = rng.randint(3, max_width)
    top = rng.randint(1, max_height)
    heights = sorted((rng.randint(1, top) for _ in range(width)), reverse=True)
    return staircase(p, heights)


def rectangle(p, k):
    """k x 1 row of squares, marked with l = left side, Q = bottom, r = right side."""
    d = grid_diagram(p, {(i, 0) for i in range(k)})
    R, U = _grid_labels(p)
    rotate_to(d, (0, 1), p.base.opp(U))
    return d, (1, k, 1)


def diagonal_staircase(p, k):
    """k squares meeting corner to corner; Q is the lower path, gamma the upper one."""
    d = grid_diagram(p, {(i, i) for i in range(k)})
    R, U = _grid_labels(p)
    rotate_to(d, (0, 0), R)
    return d, (0, 2 * k, 0)
