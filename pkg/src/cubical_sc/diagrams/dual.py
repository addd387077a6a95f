"""Dual curves of the square part of a diagram."""
from dataclasses import dataclass, field

from .core import SQUARE


@dataclass
class DualCurve:
    squares: list                 # (face, dart of entry) in order of traversal
    edges: list                   # edge representatives crossed, in order
    ends: tuple = None            # terminal darts (face not a square) at both ends
    closed: bool = False


@dataclass
class Cornsquare:
    square: int
    a: int                        # consecutive darts a, nxt a of the square
    b: int
    ends: tuple                   # terminal darts a', b' on the boundary
    vertex: int = None


@dataclass
class DualData:
    curves: list
    cornsquares: list
    bigons: list                  # (curve i, curve j, shared squares); i == j for self-crossings
    curve_of_edge: dict = field(default_factory=dict)


def _is_square(d, f):
    return d.info[f].kind == SQUARE


def _edge(d, x):
    return min(x, d.opp[x])


def walk_out(d, x, limit=None):
    """Follow the dual curve through dart x into face[x] until it reaches a non-square face.

    Returns (squares, edges, terminal dart); terminal is None for a closed curve.
    """
    squares, edges = [], [_edge(d, x)]
    start = _edge(d, x)
    limit = limit or 4 * len(d.opp) + 4
    for _ in range(limit):
        f = d.face[x]
        if not _is_square(d, f):
            return squares, edges, x
        squares.append((f, x))
        y = d.nxt[d.nxt[x]]
        x = d.opp[y]
        if _edge(d, x) == start:
            return squares, edges, None
        edges.append(_edge(d, x))
    raise RuntimeError("dual curve does not terminate")


def trace_dual_curves(d):
    curves = []
    owner = {}
    for e in d.edges():
        if e in owner:
            continue
        sides = [x for x in (e, d.opp[e]) if _is_square(d, d.face[x])]
        if not sides:
            continue
        fwd_sq, fwd_edges, fwd_end = walk_out(d, e)
        if fwd_end is None and fwd_sq:
            curve = DualCurve(fwd_sq, fwd_edges, None, True)
        else:
            back_sq, back_edges, back_end = walk_out(d, d.opp[e])
            squares = [(f, d.nxt[d.nxt[x]]) for f, x in reversed(back_sq)] + fwd_sq
            edges = list(reversed(back_edges[1:])) + fwd_edges
            curve = DualCurve(squares, edges, (back_end, fwd_end), False)
        for x in curve.edges:
            owner[x] = len(curves)
        curves.append(curve)
    crossings = {}
    for f in d.square_faces():
        c = d.cycle(next(x for x, g in d.face.items() if g == f))
        pair = sorted((owner[_edge(d, c[0])], owner[_edge(d, c[1])]))
        crossings.setdefault(tuple(pair), []).append(f)
    bigons = [(i, j, fs) for (i, j), fs in sorted(crossings.items()) if i == j or len(fs) >= 2]
    return DualData(curves, find_cornsquares(d), bigons, owner)


def find_cornsquares(d, target=None):
    """Squares whose dual curves from two consecutive edges land on consecutive edges of ``target``.

    ``target`` is a face id; the default is the outer face.
    """
    target = d.outer if target is None else target
    vid = d.vertices() if d.opp else {}
    out = []
    for f in d.square_faces():
        c = d.face_darts(f)
        for i in range(4):
            a, b = c[i], c[(i + 1) % 4]
            ta = walk_out(d, d.opp[a])[2]
            tb = walk_out(d, d.opp[b])[2]
            if ta is None or tb is None or ta == tb:
                continue
            if d.face[ta] != target or d.face[tb] != target:
                continue
            if d.nxt[tb] == ta:
                out.append(Cornsquare(f, a, b, (ta, tb), vid[ta]))
            elif d.nxt[ta] == tb:
                out.append(Cornsquare(f, a, b, (ta, tb), vid[tb]))
    return out


def crosses_twice(data):
    return [b for b in data.bigons if b[0] != b[1]]
