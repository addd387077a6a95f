"""Piece-length inequality for square diagrams with a marked boundary."""
from dataclasses import dataclass, field

from ..covers import XTILDE, build_ball
from ..errors import DiagramError
from ..piece_metric import build_piece_graph
from ..pieces import get_pieces, piece_length
from .dual import find_cornsquares, trace_dual_curves

HYPOTHESES_FAIL = "HYPOTHESES_FAIL"
INEQUALITY_HOLDS = "INEQUALITY_HOLDS"
INEQUALITY_VIOLATED = "INEQUALITY_VIOLATED"


@dataclass
class GridVerdict:
    status: str
    failures: list = field(default_factory=list)
    lengths: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.status != INEQUALITY_VIOLATED


def _p_length(d, path, ps):
    labels = [d.lab[x] for x in path]
    if d.p.classical:
        return piece_length("".join(labels), ps)
    return piece_length(tuple(labels), ps)


def _piece_graph(p, radius):
    cache = p.__dict__.setdefault("_grid_balls", {})
    for r, g in cache.items():
        if r >= radius:
            return g
    ball = build_ball(p, XTILDE, radius)
    g = build_piece_graph(ball, get_pieces(p), p)
    cache[radius] = g
    return g


def is_piece_geodesic(d, path, ps, graph=None):
    """True when the path, traced from the basepoint of the universal cover, realizes d_p.

    Returns None when the ball is too small to certify the distance.
    """
    n = _p_length(d, path, ps)
    g = graph or _piece_graph(d.p, len(path))
    ball = g.base
    v = ball.vertex_of(tuple(d.lab[x] for x in path) if not d.p.classical else "".join(d.lab[x] for x in path))
    if v is None:
        return None
    if not g.exact(0, v):
        return None
    return g.dp(0, v) == n


def check_grid_inequality(E, marking, ps=None, graph=None):
    """Boundary of E reads l Q r gamma-bar from the basepoint; marking = (|l|, |Q|, |r|)."""
    if E.cone_faces():
        raise DiagramError("E must be a square diagram", code="BAD_MARKING")
    bd = E.boundary_darts()
    a, b, c = marking
    if min(a, b, c) < 0 or a + b + c > len(bd):
        raise DiagramError("marking does not fit the boundary", code="BAD_MARKING")
    ell, Q, r = bd[:a], bd[a:a + b], bd[a + b:a + b + c]
    gamma = [E.opp[x] for x in reversed(bd[a + b + c:])]
    ps = ps or get_pieces(E.p)
    segment = {}
    for name, part in (("l", ell), ("Q", Q), ("r", r)):
        for x in part:
            segment[x] = name
    failures = []
    data = trace_dual_curves(E)
    for k, curve in enumerate(data.curves):
        if curve.closed:
            continue
        hits = [segment.get(E.opp[t]) for t in curve.ends]
        if all(h is not None for h in hits):
            failures.append(("curve crosses lQr twice", k))
    for cs in find_cornsquares(E):
        s1, s2 = segment.get(E.opp[cs.ends[0]]), segment.get(E.opp[cs.ends[1]])
        if s1 is not None and s1 == s2:
            failures.append(("cornsquare inside " + s1, cs.vertex))
    lengths = {"gamma": _p_length(E, gamma, ps), "l": _p_length(E, ell, ps),
               "Q": _p_length(E, Q, ps), "r": _p_length(E, r, ps)}
    if lengths["Q"] < 3:
        failures.append(("|Q|_p below 3", lengths["Q"]))
    geo = is_piece_geodesic(E, gamma, ps, graph)
    if geo is not True:
        failures.append(("gamma not a certified piece geodesic", geo))
    if failures:
        return GridVerdict(HYPOTHESES_FAIL, failures, lengths)
    if lengths["gamma"] >= lengths["l"] + lengths["Q"] + lengths["r"] - 3:
        return GridVerdict(INEQUALITY_HOLDS, [], lengths)
    return GridVerdict(INEQUALITY_VIOLATED, [], lengths)
