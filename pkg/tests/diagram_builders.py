"""Small hand-built diagrams shared by the diagram tests."""
import random

from cubical_sc.diagrams import SQUARE, FaceInfo, single_cell, single_square, validate_diagram


def mirrored_pair(p):
    """Two copies of the torus square folded along the edge labelled 1."""
    d = single_square(p, 0)
    x = next(x for x in d.outer_darts() if d.lab[x] == -1)
    d.attach_polygon(x, 1, [2, 1, -2], FaceInfo(SQUARE, square=0))
    return d


def grown_squares(p, seed, steps):
    """Glue squares of X one by one along boundary arcs of length 1 or 2."""
    rng = random.Random(seed)
    reads = p.base.square_boundaries(0)
    d = single_square(p, 0)
    for _ in range(steps):
        out = d.outer_darts()
        options = []
        for s in range(len(out)):
            for k in (1, 2):
                arc = [d.lab[out[(s + j) % len(out)]] for j in range(k)]
                options += [(s, k, rd) for rd in reads if list(rd[:k]) == arc]
        s, k, rd = rng.choice(options)
        e = d.copy()
        e.attach_polygon(e.outer_darts()[s], k, list(rd[k:]), FaceInfo(SQUARE, square=0))
        if validate_diagram(e).ok:
            d = e
    return d


def cell_with_square(p, k):
    """The square cone-cell with a parallel copy of its square glued on k of its boundary edges."""
    d = single_cell(p, 0, [1, 2, -3, -4])
    out = d.outer_darts()
    rd = tuple(d.lab[x] for x in out)
    assert rd in p.base.square_boundaries(0)
    d.attach_polygon(out[0], k, list(rd[k:]), FaceInfo(SQUARE, square=0))
    return d
