"""The piece metric on cover balls.

Piece edges join every pair of vertices that lie on a common lift of a
piece. The resulting graph metric d_p is compared against the ordinary
combinatorial metric d.
"""
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import NonInterior, PreconditionError
from .pieces import get_pieces, piece_length

BASE = 0
PIECE = 1


def _piece_prefixes(ps):
    """Piece test on step labels plus the set of prefixes worth extending."""
    if ps.classical:
        pieces = set(ps.words)
        prefixes = {w[:k] for w in pieces for k in range(len(w) + 1)}
        return (lambda lab: lab), pieces, prefixes
    sigs = ps.all_signatures()
    prefixes = {s[:k] for s in sigs for k in range(len(s) + 1)}
    return (lambda d: (ps.hyperplane[d],)), sigs, prefixes


def _join(ps, labels):
    return "".join(labels) if ps.classical else tuple(labels)


class PieceGraph:
    def __init__(self, base, ps, p=None):
        self.base = base
        self.ps = ps
        self.p = p
        self.M = ps.M
        self.piece_edges = {}   # (u, v) with u < v -> step labels read from u to v
        self._rows = {}
        self._build()

    def _build(self):
        ball, ps = self.base, self.ps
        if not ps.maximal:
            self.adjacency = ball.adjacency
            self._nbrs = [[(BASE, v) for v in ball.neighbours(u)] for u in range(len(ball))]
            return
        encode, pieces, prefixes = _piece_prefixes(ps)
        for u in range(len(ball)):
            stack = [(u, (), (), (u,))]
            while stack:
                x, labs, key, verts = stack.pop()
                for lab, y in sorted(ball.step[x].items(), key=lambda kv: str(kv[0])):
                    k2 = key + encode(lab) if not ps.classical else key + (lab,)
                    probe = "".join(k2) if ps.classical else k2
                    if probe not in prefixes:
                        continue
                    l2 = labs + (lab,)
                    v2 = verts + (y,)
                    if probe in pieces:
                        self._record(ps, v2, l2)
                    if len(l2) < max(ps.M, 1):
                        stack.append((y, l2, k2, v2))
        base_pairs = set()
        for u in range(len(ball)):
            for v in ball.neighbours(u):
                base_pairs.add((min(u, v), max(u, v)))
        self.piece_edges = {e: w for e, w in self.piece_edges.items() if e not in base_pairs and e[0] != e[1]}
        rows, cols = [], []
        for a, b in base_pairs | set(self.piece_edges):
            rows += [a, b]
            cols += [b, a]
        n = len(ball)
        self.adjacency = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
        nb = [[(BASE, v) for v in ball.neighbours(u)] for u in range(n)]
        for (a, b) in sorted(self.piece_edges):
            nb[a].append((PIECE, b))
            nb[b].append((PIECE, a))
        self._nbrs = [sorted(set(x)) for x in nb]

    def _record(self, ps, verts, labs):
        # every pair along the lift, with the subpath between them as witness
        for i in range(len(verts)):
            for j in range(i + 1, len(verts)):
                a, b = verts[i], verts[j]
                if a == b:
                    continue
                sub = labs[i:j]
                if a > b:
                    a, b = b, a
                    sub = tuple(self.base.complex.opp(d) for d in reversed(sub)) if not ps.classical \
                        else tuple(x.swapcase() for x in reversed(sub))
                self.piece_edges.setdefault((a, b), sub)

    def __len__(self):
        return len(self.base)

    def neighbours(self, u):
        """(kind, vertex) pairs, base edges first."""
        return self._nbrs[u]

    def dp_row(self, u):
        row = self._rows.get(u)
        if row is None:
            d = shortest_path(self.adjacency, directed=False, unweighted=True, indices=u)
            row = np.where(np.isinf(d), -1, d).astype(np.int32)
            self._rows[u] = row
        return row

    def dp(self, u, v):
        return int(self.dp_row(u)[v])

    def d(self, u, v):
        return self.base.dist(u, v)

    def exact(self, u, v):
        """d_p(u, v) is the true piece distance in the whole cover.

        Any path of length at most M*d_p(u,v) from u to v stays within
        (level u + level v + M*d_p)/2 of the basepoint.
        """
        lv = self.base.level
        return int(lv[u]) + int(lv[v]) + max(self.M, 1) * self.dp(u, v) <= 2 * self.base.radius

    def edge_word(self, a, b):
        """Step labels from a to b along one edge of the piece graph."""
        for lab, y in self.base.step[a].items():
            if y == b:
                return (lab,)
        key = (min(a, b), max(a, b))
        w = self.piece_edges[key]
        if a < b:
            return tuple(w)
        if self.ps.classical:
            return tuple(x.swapcase() for x in reversed(w))
        return tuple(self.base.complex.opp(d) for d in reversed(w))

    def underlying(self, path):
        """Concatenated underlying path of a vertex sequence in the piece graph."""
        out = []
        for a, b in zip(path, path[1:]):
            out += self.edge_word(a, b)
        return _join(self.ps, out)

    def core_radius(self):
        """Vertices at most this far from the basepoint are pairwise exact."""
        return self.base.radius // (max(self.M, 1) + 1)


def build_piece_graph(b, ps=None, p=None):
    if ps is None:
        ps = get_pieces(p)
    return PieceGraph(b, ps, p)


def piece_geodesics(g, u, v, cap=64, check=True):
    """d_p-geodesics from u to v as vertex lists; returns (paths, truncated)."""
    if check and not g.exact(u, v):
        raise NonInterior(f"pair ({u}, {v}) is too close to the ball boundary")
    row = g.dp_row(u)
    target = int(row[v])
    if target < 0:
        return [], False
    found = []
    truncated = False
    stack = [(v, (v,))]
    while stack:
        x, suffix = stack.pop()
        if x == u:
            found.append(suffix[::-1])
            if len(found) >= cap:
                truncated = bool(stack)
                break
            continue
        preds = [w for kind, w in g.neighbours(x) if row[w] == row[x] - 1]
        for w in reversed(preds):
            stack.append((w, suffix + (w,)))

    def key(path):
        out = []
        for a, b in zip(path, path[1:]):
            kind = BASE if (BASE, b) in g.neighbours(a) else PIECE
            out.append((kind, b))
        return out

    found.sort(key=key)
    return found, truncated


def verify_splitting(g, path, k):
    """Two-sided additivity of |.|_p at letter k of the underlying path of a geodesic."""
    ps, p = g.ps, g.p
    word = g.underlying(path)
    u, v = path[0], path[-1]
    if not (0 <= k <= len(word)):
        raise PreconditionError("split index outside the path")
    mid = g.base.trace(u, word[:k])
    if mid is None:
        raise PreconditionError("split point leaves the ball")
    first, second = word[:k], word[k:]
    for a, b, w in ((u, mid, first), (mid, v, second)):
        if not g.exact(a, b):
            raise NonInterior("split half is not an interior pair")
        if _plength(w, ps) != g.dp(a, b):
            raise PreconditionError("half is not a piece geodesic")
    whole = _plength(word, ps)
    l1, l2 = _plength(first, ps), _plength(second, ps)
    return l1 + l2 - 1 <= whole <= l1 + l2


def _plength(w, ps):
    return piece_length(w, ps) if len(w) else 0


@dataclass
class ConeDiameter:
    cone: int
    vertices: int
    diameter: int
    combinatorial_diameter: int


def _all_pairs_max(n, edges):
    if n <= 1:
        return 0
    rows = [a for a, b in edges] + [b for a, b in edges]
    cols = [b for a, b in edges] + [a for a, b in edges]
    adj = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    d = shortest_path(adj, directed=False, unweighted=True)
    return int(d.max())


def cone_diameter_report(p, ps=None):
    """Per cone: d_p-diameter of the cone's vertices, with piece chords of that cone."""
    ps = ps or get_pieces(p)
    out = []
    if p.classical:
        for i, r in enumerate(p.relators):
            n = len(r)
            edges = [(j, (j + 1) % n) for j in range(n)]
            plain = _all_pairs_max(n, edges)
            for j in range(n):
                for length in range(2, min(ps.M, n - 1) + 1):
                    w = (r + r)[j:j + length]
                    if w in ps.words:
                        edges.append((j, (j + length) % n))
            out.append(ConeDiameter(i, n, _all_pairs_max(n, edges), plain))
        return out
    for i, y in enumerate(p.cones):
        m = p.maps[i]
        verts = sorted(y.vertices, key=str)
        idx = {v: k for k, v in enumerate(verts)}
        edges = [(idx[y.tail(d)], idx[y.head(d)]) for d in y.darts]
        plain = _all_pairs_max(len(verts), edges)
        sigs = ps.cone_sigs.get(i, set()) | ps.wall_sigs.get(i, set())
        # chords along paths in Y whose image signature is a piece
        prefixes = {s[:k] for s in sigs for k in range(len(s) + 1)}
        for v0 in verts:
            stack = [(v0, ())]
            while stack:
                x, sig = stack.pop()
                for d in y.out_darts(x):
                    s2 = sig + (ps.hyperplane[m.dmap[d]],)
                    if s2 not in prefixes:
                        continue
                    if s2 in sigs:
                        edges.append((idx[v0], idx[y.head(d)]))
                    if len(s2) < ps.M:
                        stack.append((y.head(d), s2))
        out.append(ConeDiameter(i, len(verts), _all_pairs_max(len(verts), edges), plain))
    return out


@dataclass
class QIReport:
    pairs_checked: int
    lower_violations: list = field(default_factory=list)
    upper_violations: list = field(default_factory=list)
    triangle_violations: list = field(default_factory=list)
    max_ratio: float = 1.0
    ratio_witness: tuple = None
    M: int = 0

    @property
    def ok(self):
        return not (self.lower_violations or self.upper_violations or self.triangle_violations)


def _matrix(adj, sources):
    d = shortest_path(adj, directed=False, unweighted=True, indices=sources)
    return np.where(np.isinf(d), -1, d).astype(np.int32)


def qi_constants_report(g, chunk=256):
    """Check d_p <= d <= M d_p on every exact pair and the triangle inequality on the core."""
    ball = g.base
    n = len(ball)
    lv = np.asarray(ball.level, dtype=np.int32)
    M = max(g.M, 1)
    rep = QIReport(0, M=g.M)
    best = (1, 1)
    for start in range(0, n, chunk):
        src = list(range(start, min(n, start + chunk)))
        D = _matrix(ball.adjacency, src)
        P = _matrix(g.adjacency, src)
        for k, u in enumerate(src):
            dp, d = P[k], D[k]
            mask = (lv[u] + lv + M * dp <= 2 * ball.radius) & (np.arange(n) > u)
            idx = np.nonzero(mask)[0]
            rep.pairs_checked += len(idx)
            for v in idx[dp[idx] > d[idx]][:5]:
                rep.lower_violations.append((u, int(v)))
            if g.M >= 1:
                for v in idx[d[idx] > M * dp[idx]][:5]:
                    rep.upper_violations.append((u, int(v)))
            pos = idx[dp[idx] > 0]
            if len(pos):
                r = d[pos] * best[1]
                j = int(np.argmax(d[pos] / dp[pos]))
                v = int(pos[j])
                if d[v] * best[1] > best[0] * dp[v]:
                    best = (int(d[v]), int(dp[v]))
                    rep.ratio_witness = (u, v)
    rep.max_ratio = best[0] / best[1]
    core = [v for v in range(n) if ball.level[v] <= g.core_radius()]
    if len(core) > 1:
        P = _matrix(g.adjacency, core)[:, core]
        bad = np.argwhere(P[:, None, :] > P[:, :, None] + P[None, :, :])
        for i, j, k in bad[:5]:
            rep.triangle_violations.append((core[i], core[j], core[k]))
        if not (np.all(P == P.T) and np.all((P == 0) == np.eye(len(core), dtype=bool))):
            rep.triangle_violations.append(("not a metric on the core",))
    return rep
