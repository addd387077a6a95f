"""Word problem oracles, quotient balls and empirical hyperbolicity checks.

Every output here is empirical at the radius it was computed at.
"""
import itertools
import math
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .covers import XHAT, CoverBall
from .errors import NonInterior, NotClassical, OracleUnknown, OverflowError_, ScError
from .linalg import in_row_span, nullspace
from .pieces import get_pieces, is_piece, longest_piece_cover
from .rewriting import knuth_bendix
from .words import cyclic_reduce, exponent_vector, free_reduce, inverse

TRIVIAL = "TRIVIAL"
NONTRIVIAL = "NONTRIVIAL"
UNKNOWN = "UNKNOWN"


@dataclass
class WordVerdict:
    word: str
    result: str
    certificate: object = None
    method: str = ""


# ------------------------------------------------------------------ Dehn

class DehnReducer:
    """Dehn's algorithm for a presentation certified C'(1/6)."""

    def __init__(self, relators):
        table = {}
        for r in relators:
            n = len(r)
            for w in (r, inverse(r)):
                for s in range(n):
                    c = w[s:] + w[:s]
                    for k in range(n // 2 + 1, n + 1):
                        table.setdefault(c[:k], inverse(c[k:]))
        self.table = table
        self.lengths = sorted({len(k) for k in table}, reverse=True)

    def reduce(self, w, trace=None):
        w = free_reduce(w)
        while True:
            hit = None
            for i in range(len(w)):
                for k in self.lengths:
                    if i + k <= len(w):
                        rep = self.table.get(w[i:i + k])
                        if rep is not None:
                            hit = (i, k, rep)
                            break
                if hit:
                    break
            if hit is None:
                return w
            i, k, rep = hit
            if trace is not None:
                trace.append((i, w[i:i + k], rep))
            w = free_reduce(w[:i] + rep + w[i + k:])


def _certificates(p):
    """Cached facts about p used to pick a word oracle."""
    info = getattr(p, "_oracle_cache", None)
    if info is not None:
        return info
    from .small_cancellation import check_metric_condition, piece_systole
    info = {}
    ps = get_pieces(p)
    info["dehn"] = bool(p.relators) and check_metric_condition(p, Fraction(1, 6), ps).holds
    info["piece_systole"] = piece_systole(p, None, ps) if p.relators else math.inf
    threshold = None
    sys = info["piece_systole"]
    if p.relators and sys is not None and sys >= 6:
        shell = min(len(r) - longest_piece_cover(r, ps, 3) for r in p.relators)
        threshold = min(min(len(r) for r in p.relators), 2 * shell)
    info["threshold"] = threshold
    p._oracle_cache = info
    return info


def short_word_threshold(p):
    """T such that a cyclically reduced nonempty word shorter than T is nontrivial (None if unknown).

    Needs C(6). A reduced disc diagram is then a single face, or it has two
    shells with disjoint exterior arcs, each shell's interior boundary being
    at most three pieces.
    """
    if not p.relators:
        return math.inf
    return _certificates(p)["threshold"]


class AbelianInvariant:
    """Image of a word in a torsion-free quotient that kills the relators.

    Exponent sums projected away from the relator span; when every relator
    has zero exponent sum the class-two coordinates are included as well.
    """

    def __init__(self, gens, relators):
        self.gens = tuple(gens)
        n = len(self.gens)
        vecs = [exponent_vector(r, self.gens) for r in relators]
        self.lin = nullspace(vecs, n) if any(any(v) for v in vecs) else [
            [int(i == j) for j in range(n)] for i in range(n)]
        self.pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        self.second = None
        if all(not any(v) for v in vecs) and self.pairs:
            omegas = [self._omega(r) for r in relators]
            self.second = nullspace(omegas, len(self.pairs))
        self.relator_vectors = vecs

    def _omega(self, w):
        idx = {g: k for k, g in enumerate(self.gens)}
        n = len(self.gens)
        e = [0] * n
        om = {pair: 0 for pair in self.pairs}
        for x in w:
            k = idx[x.lower()]
            s = 1 if x.islower() else -1
            if s < 0:
                e[k] -= 1
            for i in range(k):
                om[(i, k)] += s * e[i]
            if s > 0:
                e[k] += 1
        return [om[pair] for pair in self.pairs]

    def key(self, w):
        v = exponent_vector(w, self.gens)
        out = tuple(sum(a * b for a, b in zip(u, v)) for u in self.lin)
        if self.second is not None:
            om = self._omega(w)
            out += tuple(sum(a * b for a, b in zip(u, om)) for u in self.second)
        return out

    def certifies_nontrivial(self, w):
        v = exponent_vector(w, self.gens)
        return not in_row_span([r for r in self.relator_vectors if any(r)], v) if any(v) else False


def _bfs_word_search(w, relators, budget, max_states=20_000):
    conj = set()
    for r in relators:
        for x in (r, inverse(r)):
            for s in range(len(x)):
                conj.add(x[s:] + x[:s])
    conj = sorted(conj)
    start = free_reduce(w)
    seen = {start: None}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        if u == "":
            steps = []
            while seen[u] is not None:
                prev, move = seen[u]
                steps.append(move)
                u = prev
            return TRIVIAL, steps[::-1]
        for i in range(len(u) + 1):
            for c in conj:
                v = free_reduce(u[:i] + c + u[i:])
                if len(v) > budget or v in seen:
                    continue
                seen[v] = (u, (i, c))
                if len(seen) > max_states:
                    return UNKNOWN, {"states": len(seen)}
                queue.append(v)
    return UNKNOWN, {"states": len(seen), "exhausted": True}


def word_reduce(w, p, budget=64):
    if not p.classical:
        raise NotClassical("word_reduce needs a classical presentation")
    if not p.relators:
        r = free_reduce(w)
        return WordVerdict(w, TRIVIAL if not r else NONTRIVIAL, r, "free")
    info = _certificates(p)
    if info["dehn"]:
        trace = []
        r = DehnReducer(p.relators).reduce(w, trace)
        if r == "":
            return WordVerdict(w, TRIVIAL, trace, "dehn")
        return WordVerdict(w, NONTRIVIAL, r, "dehn")
    fr = free_reduce(w)
    if fr == "":
        return WordVerdict(w, TRIVIAL, [], "free")
    if AbelianInvariant(p.gens, p.relators).certifies_nontrivial(fr):
        return WordVerdict(w, NONTRIVIAL, fr, "abelianization")
    t = info["threshold"]
    if t is not None and len(cyclic_reduce(fr)) < t:
        return WordVerdict(w, NONTRIVIAL, fr, "short-word threshold")
    result, cert = _bfs_word_search(fr, p.relators, budget)
    return WordVerdict(w, result, cert, "search")


# ------------------------------------------------------------------ X-hat

class _CanonicalOracle:
    decisive = True

    def __init__(self, name, normal):
        self.name = name
        self.normal = normal

    def key(self, w):
        return self.normal(w)

    def equal(self, a, b):
        return True


class _DehnOracle:
    name = "dehn"

    def __init__(self, p):
        self.dehn = DehnReducer(p.relators)
        self.inv = AbelianInvariant(p.gens, p.relators)

    def key(self, w):
        return self.inv.key(w)

    def equal(self, a, b):
        return self.dehn.reduce(a + inverse(b)) == ""


def choose_oracle(p, radius, kb_rules=200):
    """Equality oracle good enough for words of length <= 2*radius + 1."""
    if not p.relators:
        return _CanonicalOracle("free", free_reduce)
    info = _certificates(p)
    t = info["threshold"]
    # odd words are never trivial when every relator has even length
    even = all(len(r) % 2 == 0 for r in p.relators)
    if t is not None and (2 * radius + 1 < t or (even and 2 * radius < t)):
        return _CanonicalOracle("short-word threshold", free_reduce)
    rs = knuth_bendix(p.gens, p.relators, max_rules=kb_rules, max_rounds=12)
    if rs is not None:
        return _CanonicalOracle("rewriting", lambda w: rs.reduce(free_reduce(w)))
    if info["dehn"]:
        return _DehnOracle(p)
    return None


class QuotientBall(CoverBall):
    """Ball in the Cayley graph of a classical presentation."""

    def __init__(self, *args, oracle=None, buckets=None, **kw):
        super().__init__(*args, **kw)
        self.oracle = oracle
        self.buckets = buckets

    def locate(self, word):
        """Vertex of the group element ``word``, or None if outside the ball."""
        v = self.trace(0, word)
        if v is not None:
            return v
        for u in self.buckets.get(self.oracle.key(word), ()):
            if self.oracle.equal(word, self.labels[u]):
                return u
        return None

    def translate_distance(self, row, x, y):
        """Distance x -> y read off a basepoint row, using vertex transitivity."""
        z = self.locate(inverse(self.labels[x]) + self.labels[y])
        if z is None:
            return None
        return int(row[z]), z


def build_quotient_ball(p, radius, budget=200_000, oracle_budget=64):
    if not p.classical:
        raise NotClassical("the quotient cover needs a classical presentation")
    oracle = choose_oracle(p, radius)
    if oracle is None:
        raise OracleUnknown("no decisive word oracle for this presentation at this radius")
    letters = []
    for g in p.gens:
        letters += [g, g.upper()]
    labels = [""]
    level = [0]
    step = [{}]
    buckets = {oracle.key(""): [0]}

    def find(word, lo, hi):
        for u in buckets.get(oracle.key(word), ()):
            if lo <= level[u] <= hi and oracle.equal(word, labels[u]):
                return u
        return None

    frontier = [0]
    for k in range(radius + 1):
        new = []
        for u in frontier:
            for x in letters:
                if x in step[u]:
                    continue
                cand = labels[u] + x
                v = find(cand, k - 1, k + 1)
                if v is None:
                    if k == radius:
                        continue
                    if len(labels) >= budget:
                        raise OverflowError_(f"ball exceeds {budget} vertices")
                    v = len(labels)
                    labels.append(cand)
                    level.append(k + 1)
                    step.append({})
                    buckets.setdefault(oracle.key(cand), []).append(v)
                    new.append(v)
                step[u][x] = v
                step[v][x.swapcase()] = u
        frontier = new
    ball = QuotientBall(XHAT, p.base, radius, labels, level, step, oracle=oracle, buckets=buckets)
    ball.oracle_name = oracle.name
    return ball


# ------------------------------------------------------------------ scans

class _PairDistance:
    """d_p between two ball vertices, or None when the ball cannot certify it.

    Cayley balls are vertex transitive, so d_p(x, y) = d_p(1, x^-1 y) and a
    single basepoint row serves every pair.
    """

    def __init__(self, g):
        self.g = g
        self.cayley = isinstance(g.base, QuotientBall)
        self.cache = {}

    def __call__(self, x, y):
        if x == y:
            return 0
        key = (x, y) if x < y else (y, x)
        if key in self.cache:
            return self.cache[key]
        g = self.g
        if self.cayley:
            z = g.base.locate(inverse(g.base.labels[x]) + g.base.labels[y])
            out = g.dp(0, z) if z is not None and g.exact(0, z) else None
        else:
            out = g.dp(x, y) if g.exact(x, y) else None
        self.cache[key] = out
        return out


def _separation(dist, path1, path2):
    """max_t dist(path1(t), path2(t)) with the shorter path waiting; None if uncertified."""
    worst = 0
    where = 0
    for t in range(max(len(path1), len(path2))):
        a = path1[min(t, len(path1) - 1)]
        b = path2[min(t, len(path2) - 1)]
        d = dist(a, b)
        if d is None:
            return None, t
        if d > worst:
            worst, where = d, t
    return worst, where


@dataclass
class BigonReport:
    endpoints: tuple
    gamma1: tuple
    gamma2: tuple
    epsilon: int
    at: int = 0
    truncated: bool = False


@dataclass
class BigonScan:
    radius: int
    pairs_scanned: int
    pairs_skipped: int
    epsilon: int
    witness: BigonReport = None
    truncated: bool = False
    sources: int = 0

    def row(self):
        w = self.witness
        wit = "-" if w is None else f"{w.endpoints[0]}->{w.endpoints[1]}@{w.at}"
        return f"{self.radius}\t{self.pairs_scanned}\t{self.epsilon}\t{wit}"


def scan_sources(g):
    if isinstance(g.base, QuotientBall):
        return [0]
    core = [v for v in range(len(g)) if g.base.level[v] <= g.core_radius()]
    if not core:
        raise ScError("no interior vertices at this radius", code="EMPTY_INTERIOR")
    return core


def scan_thin_bigons(g, cap=16, sources=None):
    """Largest bigon separation over certified pairs (empirical at this radius)."""
    from .piece_metric import piece_geodesics
    dist = _PairDistance(g)
    sources = scan_sources(g) if sources is None else sources
    best = None
    scanned = skipped = 0
    truncated = False
    for u in sources:
        for v in range(len(g)):
            if v == u or not g.exact(u, v):
                continue
            paths, trunc = piece_geodesics(g, u, v, cap, check=False)
            truncated |= trunc
            pair_best = None
            ok = True
            for i in range(len(paths)):
                for j in range(i + 1, len(paths)):
                    eps, t = _separation(dist, paths[i], paths[j])
                    if eps is None:
                        ok = False
                        break
                    if pair_best is None or eps > pair_best.epsilon:
                        pair_best = BigonReport((u, v), paths[i], paths[j], eps, t, trunc)
                if not ok:
                    break
            if not ok:
                skipped += 1
                continue
            scanned += 1
            if pair_best is None:
                pair_best = BigonReport((u, v), paths[0], paths[0], 0, 0, trunc)
            if best is None or pair_best.epsilon > best.epsilon:
                best = pair_best
    if best is None:
        raise ScError("no interior pairs to scan", code="EMPTY_INTERIOR")
    return BigonScan(g.base.radius, scanned, skipped, best.epsilon, best, truncated, len(sources))


def _delta_points(g):
    ball = g.base
    if isinstance(ball, QuotientBall):
        return [v for v in range(len(g)) if ball.level[v] <= ball.radius // 2]
    return [v for v in range(len(g)) if ball.level[v] <= g.core_radius()]


def four_point_defect(dist, x, y, z, w):
    s = sorted((dist(x, y) + dist(z, w), dist(x, z) + dist(y, w), dist(x, w) + dist(y, z)))
    return Fraction(s[2] - s[1], 2)


def estimate_delta(g, samples=2000, seed=0):
    """Largest four-point defect over interior 4-tuples; exhaustive when that is cheaper."""
    dist = _PairDistance(g)
    pts = _delta_points(g)
    n = len(pts)
    best = Fraction(0)
    if n < 4:
        return best
    total = math.comb(n, 4)
    if total <= samples:
        quads = itertools.combinations(pts, 4)
    else:
        rng = random.Random(seed)
        quads = (rng.sample(pts, 4) for _ in range(samples))
    for q in quads:
        try:
            best = max(best, four_point_defect(dist, *q))
        except TypeError:
            continue    # an uncertified distance
    return best


@dataclass
class FellowTravel:
    d_geodesic: tuple
    piece_geodesic: tuple
    separation: int
    global_max: int = None
    picks: tuple = (1, 1)


def _d_geodesics(ball, u, v, cap):
    row = ball.dist_row(u)
    out = []
    stack = [(v, (v,))]
    while stack and len(out) < cap:
        x, suffix = stack.pop()
        if x == u:
            out.append(suffix[::-1])
            continue
        for w in sorted(ball.neighbours(x), reverse=True):
            if row[w] == row[x] - 1:
                stack.append((w, suffix + (w,)))
    return sorted(out)


def _underlying_vertices(g, path):
    out = [path[0]]
    for a, b in zip(path, path[1:]):
        x = a
        for lab in g.edge_word(a, b):
            x = g.base.step[x][lab]
            out.append(x)
    return tuple(out)


def fellow_travel_report(b, g, u, v, cap=16):
    """d_p-separation between d-geodesics and piece geodesics, both read as paths in the ball."""
    from .piece_metric import piece_geodesics
    if not g.exact(u, v):
        raise NonInterior(f"pair ({u}, {v}) is too close to the ball boundary")
    dist = _PairDistance(g)
    dgeo = _d_geodesics(b, u, v, cap)
    pgeo, _ = piece_geodesics(g, u, v, cap)
    pgeo = [_underlying_vertices(g, x) for x in pgeo]
    first, _ = _separation(dist, dgeo[0], pgeo[0])
    glob = None
    if len(dgeo) * len(pgeo) <= cap * cap:
        vals = [_separation(dist, a, c)[0] for a in dgeo for c in pgeo]
        if all(x is not None for x in vals):
            glob = max(vals)
    return FellowTravel(dgeo[0], pgeo[0], first, glob, (len(dgeo), len(pgeo)))


def _diagram_piece_graph(d, ps):
    """Diagram 1-skeleton plus a chord across every piece on a cone-cell boundary."""
    vid = d.vertices()
    n = max(vid.values()) + 1
    pairs = {(vid[x], vid[d.opp[x]]) for x in d.opp}
    for f in d.cone_faces():
        cyc = d.face_darts(f)
        k = len(cyc)
        for i in range(k):
            for length in range(2, min(max(ps.M, 1), k - 1) + 1):
                seg = [cyc[(i + j) % k] for j in range(length)]
                if d.p.classical:
                    ok = is_piece("".join(d.lab[x] for x in seg), ps)
                else:
                    ok = is_piece(tuple(d.ymap[x] for x in seg), ps, d.p, d.info[f].cone)
                if ok:
                    u, v = vid[seg[0]], vid[d.opp[seg[-1]]]
                    pairs.add((u, v))
                    pairs.add((v, u))
    rows = [a for a, _ in pairs]
    cols = [b for _, b in pairs]
    return vid, csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))


def check_ladder_thinness(d, L, ps=None):
    """Largest d_p gap between matched points of the two ladder sides.

    Distances are taken in the diagram with piece chords, so they bound the
    d_p distance in the cover from above.  The shorter side waits at its end.
    """
    from .diagrams.dual import trace_dual_curves
    ps = ps or get_pieces(d.p)
    if d.is_point():
        return 0
    curve_of = trace_dual_curves(d).curve_of_edge
    for g in L.grids:
        if g.kind != "SQUARES":
            continue
        for side, left_side in ((L.lambda1, True), (L.lambda2, False)):
            seen = set()
            for x in side:
                inner = x if left_side else d.opp[x]
                if d.face[inner] not in g.faces:
                    continue
                c = curve_of.get(min(x, d.opp[x]))
                if c in seen:
                    raise ScError("ladder side crosses a dual curve twice", code="SIDE_NOT_GEODESIC")
                seen.add(c)
    vid, adj = _diagram_piece_graph(d, ps)
    start = vid[L.lambda1[0]] if L.lambda1 else vid[d.opp[L.lambda2[0]]]
    side1 = [start] + [vid[d.opp[x]] for x in L.lambda1]
    side2 = [start] + [vid[d.opp[x]] for x in L.lambda2]
    dist = shortest_path(adj, directed=False, unweighted=True, indices=sorted(set(side1)))
    row = {v: k for k, v in enumerate(sorted(set(side1)))}
    eps = 0
    for t in range(max(len(side1), len(side2))):
        a = side1[min(t, len(side1) - 1)]
        b = side2[min(t, len(side2) - 1)]
        eps = max(eps, int(dist[row[a], b]))
    return eps
