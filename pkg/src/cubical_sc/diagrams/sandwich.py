"""Square pushes and the three-layer decomposition of a bigon diagram."""
from collections import Counter
from dataclasses import dataclass, field

from ..complex_model import Verdict
from ..errors import DiagramError


@dataclass
class SandwichDecomposition:
    d1: frozenset
    dprime: frozenset
    d2: frozenset
    gamma1: list
    lambda1: list
    lambda2: list
    gamma2: list
    pushes: list = field(default_factory=list)     # (side, square) in push order
    verdict: Verdict = None


def _push_all(d, frontier, allowed, side, log):
    """Push squares with two or more consecutive edges on the frontier (diagram on its left)."""
    taken = set()
    path = list(frontier)
    progress = True
    while progress:
        progress = False
        for i in range(len(path) - 1):
            x, y = path[i], path[i + 1]
            s = d.face[x]
            if s not in allowed or s in taken or d.face[y] != s or d.nxt[x] != y:
                continue
            j = i + 1
            while j + 1 < len(path) and d.face[path[j + 1]] == s and d.nxt[path[j]] == path[j + 1]:
                j += 1
            run = path[i:j + 1]
            if len(run) >= 4:
                continue
            cyc = d.cycle(run[0])
            rest = cyc[len(run):]
            path = path[:i] + [d.opp[z] for z in reversed(rest)] + path[j + 1:]
            taken.add(s)
            log.append((side, s))
            progress = True
            break
    return path, taken


def _is_path(d, path):
    tails = d.vertices()
    return all(tails[d.opp[x]] == tails[y] for x, y in zip(path, path[1:]))


def _bounds(d, faces, left, right):
    """Does the closed path left.reverse(right) equal the boundary 1-chain of ``faces``?"""
    want = Counter()
    for f in faces:
        for x in d.face_darts(f):
            want[x] += 1
            want[d.opp[x]] -= 1
    got = Counter()
    for x in list(left) + [d.opp[y] for y in reversed(right)]:
        got[x] += 1
        got[d.opp[x]] -= 1
    return +want == +got and _is_path(d, left) and _is_path(d, right)


def _curve_exits(d, x, region, exits):
    """Follow the dual curve entering ``region`` across dart x; True iff it leaves through ``exits``."""
    y = d.opp[x]
    while d.face[y] in region:
        y = d.opp[d.nxt[d.nxt[y]]]
    return d.opp[y] in exits


def sandwich_decompose(d, split):
    """Split at boundary position ``split``: gamma1 is the first part, gamma2 the reversed rest."""
    bd = d.boundary_darts()
    if split is None or not (0 <= split <= len(bd)):
        raise DiagramError("no split marked on the boundary", code="NO_SPLIT_MARKED")
    gamma1 = bd[:split]
    back = bd[split:]
    gamma2 = [d.opp[x] for x in reversed(back)]
    squares = set(d.square_faces())
    log = []
    lam1, d1 = _push_all(d, gamma1, squares, 1, log)
    lam2_rev, d2 = _push_all(d, back, squares - d1, 2, log)
    lam2 = [d.opp[x] for x in reversed(lam2_rev)]
    dprime = set(d.info) - d1 - d2 - {d.outer}
    v = []
    for name, faces, left, right in (("D1", d1, gamma1, lam1), ("D'", dprime, lam1, lam2),
                                     ("D2", d2, lam2, gamma2)):
        if not _bounds(d, faces, left, right):
            v.append((f"boundary of {name}", None))
    if len(log) > d.area():
        v.append(("push count", len(log)))
    exits = set(gamma1)
    for x in lam1:
        if d.face[d.opp[x]] in d1 and not _curve_exits(d, x, d1, exits):
            v.append(("curve from lambda1 misses gamma1", x))
    return SandwichDecomposition(frozenset(d1), frozenset(dprime), frozenset(d2),
                                 gamma1, lam1, lam2, gamma2, log, Verdict(not v, v))
