"""Balls in covers: the universal covers of X and of the cones, and X-hat.

Vertices of a universal cover are homotopy classes of paths from the
basepoint.  For a graph the freely reduced path is canonical.  For an NPC
square complex we take the least path, in dart order, of the class reached
by square flips once no backtrack is left anywhere in that class.
"""
from collections import deque

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import BudgetExceeded, OverflowError_, ValidationError

XTILDE = "Xtilde"
XHAT = "Xhat"

DEFAULT_VERTEX_BUDGET = 200_000


def _backtrack_at(c, w):
    for i in range(len(w) - 1):
        if w[i + 1] == c.opp(w[i]):
            return i
    return -1


def _free_reduce_path(c, w):
    out = []
    for d in w:
        if out and out[-1] == c.opp(d):
            out.pop()
        else:
            out.append(d)
    return tuple(out)


def flip_class(c, w, limit):
    """All paths reachable from w by square flips; stops early at a backtrack.

    Returns (paths, path_with_backtrack_or_None).
    """
    seen = {w}
    queue = deque([w])
    while queue:
        u = queue.popleft()
        if _backtrack_at(c, u) >= 0:
            return seen, u
        for i in range(len(u) - 1):
            for a, b in c.flips(u[i], u[i + 1]):
                v = u[:i] + (a, b) + u[i + 2:]
                if v not in seen:
                    if len(seen) >= limit:
                        raise BudgetExceeded(f"flip class of a length-{len(w)} path exceeds {limit}")
                    seen.add(v)
                    queue.append(v)
    return seen, None


def flip_budget(n, constant=4, floor=4096):
    return max(floor, constant * n * n)


def path_normal_form(c, w, constant=4):
    """Canonical representative of the homotopy class (rel endpoints) of w."""
    w = _free_reduce_path(c, tuple(w))
    if c.is_graph():
        return w
    while True:
        cls, bad = flip_class(c, w, flip_budget(len(w), constant))
        if bad is None:
            rank = c.dart_rank
            return min(cls, key=lambda p: [rank[d] for d in p])
        w = _free_reduce_path(c, bad)


def is_null_homotopic(c, loop, constant=4):
    """Closed path test: True / False, or None when the budget runs out."""
    try:
        return len(path_normal_form(c, loop, constant)) == 0
    except BudgetExceeded:
        return None


class CoverBall:
    """Ball of radius R around the basepoint of some cover.

    ``labels[v]`` is the canonical path label of vertex v, ``level[v]`` its
    distance to the basepoint and ``step[v]`` maps a dart of the base
    complex to the neighbouring vertex inside the ball.
    """

    def __init__(self, cover, complex_, radius, labels, level, step, base_vertex=None):
        self.cover = cover
        self.complex = complex_
        self.radius = radius
        self.labels = labels
        self.level = np.asarray(level, dtype=np.int32)
        self.step = step
        self.index = {lab: k for k, lab in enumerate(labels)}
        self.base_vertex = base_vertex or {}
        self.basepoint = 0
        self._rows = {}
        rows, cols = [], []
        for u, nbrs in enumerate(step):
            for v in nbrs.values():
                rows.append(u)
                cols.append(v)
        n = len(labels)
        self.adjacency = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))

    def __len__(self):
        return len(self.labels)

    @property
    def n_edges(self):
        return sum(len(s) for s in self.step) // 2

    def neighbours(self, u):
        return sorted(set(self.step[u].values()))

    def dist_row(self, u):
        row = self._rows.get(u)
        if row is None:
            d = shortest_path(self.adjacency, directed=False, unweighted=True, indices=u)
            row = np.where(np.isinf(d), -1, d).astype(np.int32)
            self._rows[u] = row
        return row

    def dist(self, u, v):
        return int(self.dist_row(u)[v])

    def exact(self, u, v, scale=1):
        """Every path of length scale*dist between u and v stays inside the ball."""
        return int(self.level[u]) + int(self.level[v]) + scale * self.dist(u, v) <= 2 * self.radius

    def trace(self, u, path):
        for d in path:
            u = self.step[u].get(d)
            if u is None:
                return None
        return u

    def vertex_of(self, path):
        return self.trace(self.basepoint, path)

    def label_text(self, v):
        lab = self.labels[v]
        if isinstance(lab, str):
            return lab or "1"
        return " ".join(str(d) for d in lab) or "1"


def _bfs_canonical(c, start_vertex, radius, normal_form, cover, budget):
    labels = [()]
    level = [0]
    step = [{}]
    index = {(): 0}
    end = {0: start_vertex}
    frontier = [0]
    for k in range(radius + 1):
        new = []
        for u in frontier:
            lab = labels[u]
            for d in c.out_darts(end[u]):
                cand = normal_form(lab + (d,))
                v = index.get(cand)
                if v is None:
                    if k == radius:
                        continue
                    if len(labels) >= budget:
                        raise OverflowError_(f"ball exceeds {budget} vertices")
                    v = len(labels)
                    index[cand] = v
                    labels.append(cand)
                    level.append(k + 1)
                    step.append({})
                    end[v] = c.head(d)
                    new.append(v)
                step[u][d] = v
                step[v][c.opp(d)] = u
        frontier = new
    return CoverBall(cover, c, radius, labels, level, step, end)


def build_ball(p, which, radius, budget=DEFAULT_VERTEX_BUDGET, oracle_budget=64):
    """Ball of the chosen cover.

    ``which`` is ``"Xtilde"``, ``("Ytilde", i)`` or ``"Xhat"``.
    """
    if radius < 0:
        raise ValidationError("radius must be >= 0")
    if which == XHAT:
        from .hyperbolicity import build_quotient_ball
        return build_quotient_ball(p, radius, budget=budget, oracle_budget=oracle_budget)
    if which == XTILDE:
        c = p.base
    elif isinstance(which, tuple) and which[0] == "Ytilde":
        c = p.cones[which[1]]
    else:
        raise ValidationError(f"unknown cover selector {which!r}")
    cache = {}

    def nf(path):
        got = cache.get(path)
        if got is None:
            got = path_normal_form(c, path)
            cache[path] = got
        return got

    ball = _bfs_canonical(c, c.vertices[0], radius, nf, which, budget)
    if p.classical and which == XTILDE:
        ball.labels = ["".join(lab) for lab in ball.labels]
        ball.index = {lab: k for k, lab in enumerate(ball.labels)}
    return ball
