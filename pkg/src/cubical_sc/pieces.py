"""Cone-pieces and wall-pieces, piece membership and piece length."""
import math
from dataclasses import dataclass, field

from .complex_model import ComplexMorphism, SquareComplex
from .covers import path_normal_form
from .errors import BudgetExceeded
from .words import cyclic_subword, inverse

CONE = "CONE"
WALL = "WALL"


@dataclass(frozen=True)
class Piece:
    kind: str
    path: object          # word (classical) or tuple of darts of the first source cone
    provenance: tuple
    diameter: int


@dataclass
class PieceSet:
    classical: bool
    maximal: list = field(default_factory=list)
    M: int = 0
    # classical: every piece word (closed under subwords)
    words: frozenset = frozenset()
    # square: per cone, hyperplane signatures of pieces, split by source kind
    cone_sigs: dict = field(default_factory=dict)
    wall_sigs: dict = field(default_factory=dict)
    hyperplane: dict = field(default_factory=dict)
    unbounded: bool = False
    n_cones: int = 0

    def __len__(self):
        return len(self.maximal)

    def all_signatures(self):
        out = set()
        for table in (self.cone_sigs, self.wall_sigs):
            for sigs in table.values():
                out |= sigs
        return out


# ------------------------------------------------------------ classical

def symmetrized_positions(relators):
    """(relator, shift, orientation) -> cyclic word read from that position."""
    out = {}
    for i, r in enumerate(relators):
        for o, w in ((1, r), (-1, inverse(r))):
            for s in range(len(w)):
                out[(i, s, o)] = w[s:] + w[:s]
    return out


def _common_prefix(u, v):
    n = min(len(u), len(v))
    k = 0
    while k < n and u[k] == v[k]:
        k += 1
    return u[:k]


def _classical_cone_pieces(relators):
    pos = symmetrized_positions(relators)
    keys = sorted(pos)
    prefixes = {}
    for a in range(len(keys)):
        for b in range(a + 1, len(keys)):
            pa, pb = keys[a], keys[b]
            common = _common_prefix(pos[pa], pos[pb])
            if common:
                prefixes.setdefault(common, set()).add((pa[0], pb[0]))
    words = set()
    for w in prefixes:
        for i in range(len(w)):
            for j in range(i + 1, len(w) + 1):
                words.add(w[i:j])
    maximal = []
    for w in sorted(words, key=lambda x: (-len(x), x)):
        if any(w in m.path for m in maximal if len(m.path) > len(w)):
            continue
        cones = tuple(sorted({i for i, r in enumerate(relators)
                              if _occurs_cyclically(w, r) or _occurs_cyclically(w, inverse(r))}))
        maximal.append(Piece(CONE, w, cones, len(w)))
    maximal.sort(key=lambda p: (-p.diameter, p.path))
    return maximal, frozenset(words)


def _occurs_cyclically(w, r):
    if len(w) > len(r):
        return False
    return w in r + r[:len(w) - 1]


# ------------------------------------------------------------ square

def fiber_product(m1, m2):
    """Fiber product of two morphisms into the same complex.

    Returns (complex, projection vmap/dmap to the first and second source).
    """
    y1, y2, x = m1.source, m2.source, m1.target
    verts = [(a, b) for a in y1.vertices for b in y2.vertices if m1.vmap[a] == m2.vmap[b]]
    by_image = {}
    for d in y2.darts:
        by_image.setdefault(m2.dmap[d], []).append(d)
    ends, opp = {}, {}
    for d1 in y1.darts:
        for d2 in by_image.get(m1.dmap[d1], ()):
            dart = (d1, d2)
            ends[dart] = ((y1.tail(d1), y2.tail(d2)), (y1.head(d1), y2.head(d2)))
            opp[dart] = (y1.opp(d1), y2.opp(d2))
    squares = []
    seen = set()
    for k1, s1 in enumerate(y1.squares):
        for k2 in range(len(y2.squares)):
            for s2 in y2.square_boundaries(k2):
                if tuple(m1.dmap[d] for d in s1) == tuple(m2.dmap[d] for d in s2):
                    sq = tuple(zip(s1, s2))
                    key = frozenset(sq)
                    if key not in seen:
                        seen.add(key)
                        squares.append(sq)
    return SquareComplex(verts, ends, opp, squares, name=f"{y1.name}x{y2.name}")


def components(c):
    """Connected components as lists of vertices (deterministic order)."""
    parent = {v: v for v in c.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for d in c.darts:
        a, b = find(c.tail(d)), find(c.head(d))
        if a != b:
            parent[a] = b
    groups = {}
    for v in c.vertices:
        groups.setdefault(find(v), []).append(v)
    return list(groups.values())


def subcomplex(c, verts, name=""):
    vs = set(verts)
    ends = {d: e for d, e in c.ends.items() if e[0] in vs}
    opp = {d: c.opp(d) for d in ends}
    squares = [s for s in c.squares if c.tail(s[0]) in vs]
    return SquareComplex(list(verts), ends, opp, squares, name=name)


def geodesic_paths(c, cap, budget=200_000):
    """Nonempty paths of c that are geodesic in its universal cover, up to length cap.

    Returns (paths, hit_cap).
    """
    paths = []
    frontier = [(d,) for d in c.darts]
    hit = False
    length = 1
    while frontier:
        keep = []
        for p in frontier:
            if length > 1 and p[-1] == c.opp(p[-2]):
                continue
            if len(path_normal_form(c, p)) == len(p):
                keep.append(p)
        paths.extend(keep)
        if len(paths) > budget:
            raise BudgetExceeded("too many piece paths")
        if length == cap:
            hit = bool(keep)
            break
        frontier = [p + (d,) for p in keep for d in c.out_darts(c.head(p[-1]))]
        length += 1
    return paths, hit


def carrier(x, hyper, h):
    """Abstract carrier of hyperplane h of x, with its morphism to x."""
    reps = {}
    for d in x.edges():
        reps[d] = (d, 0)
        reps[x.opp(d)] = (d, 1)
    parent = {}

    def find(v):
        parent.setdefault(v, v)
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    ends, opp, dmap, squares = {}, {}, {}, []
    vx = {}

    def edge_vertex(d, which):
        rep, flip = reps[d]
        return ("ev", rep, which ^ flip)

    for d in x.darts:
        if hyper[d] == h:
            dart = ("e", d)
            t, hd = edge_vertex(d, 0), edge_vertex(d, 1)
            vx[t], vx[hd] = x.tail(d), x.head(d)
            ends[dart] = (t, hd)
            opp[dart] = ("e", x.opp(d))
            dmap[dart] = d
    for k, s in enumerate(x.squares):
        for pair in (0, 1):
            if hyper[s[pair]] != h:
                continue
            corners = [("c", k, pair, i) for i in range(4)]
            for i in range(4):
                vx[corners[i]] = x.tail(s[i])
            sq = []
            for i in range(4):
                d = s[i]
                tail, head = corners[i], corners[(i + 1) % 4]
                if i % 2 == pair:
                    union(tail, edge_vertex(d, 0))
                    union(head, edge_vertex(d, 1))
                    sq.append(("e", d))
                else:
                    dart = ("n", k, pair, i, 1)
                    back = ("n", k, pair, i, -1)
                    ends[dart] = (tail, head)
                    ends[back] = (head, tail)
                    opp[dart], opp[back] = back, dart
                    dmap[dart], dmap[back] = d, x.opp(d)
                    sq.append(dart)
            squares.append(tuple(sq))
    canon = {v: find(v) for v in vx}
    verts = sorted({canon[v] for v in vx}, key=repr)
    ends = {d: (canon[t], canon[hd]) for d, (t, hd) in ends.items()}
    c = SquareComplex(verts, ends, opp, squares, name=f"N(H{h})")
    vmap = {canon[v]: vx[v] for v in vx}
    return c, ComplexMorphism(c, x, vmap, dmap)


def _signature(hyper, m, path):
    return tuple(hyper[m.dmap[d]] for d in path)


def _square_pieces(p, cap=None):
    x = p.base
    hyper = x.hyperplanes()
    n = len(p.cones)
    if cap is None:
        cap = max([len(c.darts) for c in p.cones] + [1])
    maximal, cone_sigs, wall_sigs = [], {i: set() for i in range(n)}, {i: set() for i in range(n)}
    unbounded = False
    M = 0

    def record(kind, prov, comp, proj, cone_index, extra_index=None):
        nonlocal unbounded, M
        paths, hit = geodesic_paths(comp, cap)
        unbounded = unbounded or hit
        m_i = p.maps[cone_index]
        best = {}
        for path in paths:
            ypath = tuple(proj(d) for d in path)
            sig = _signature(hyper, m_i, ypath)
            (cone_sigs if kind == CONE else wall_sigs)[cone_index].add(sig)
            if extra_index is not None:
                cone_sigs[extra_index].add(sig)
            best.setdefault(len(path), ypath)
        if paths:
            top = max(best)
            M = max(M, top)
            maximal.append(Piece(kind, best[top], prov, top))

    for i in range(n):
        for j in range(i, n):
            fp = fiber_product(p.maps[i], p.maps[j])
            for ci, comp_verts in enumerate(components(fp)):
                if i == j and all(a == b for a, b in comp_verts):
                    continue
                comp = subcomplex(fp, comp_verts)
                if not comp.darts:
                    continue
                record(CONE, (i, j, ci), comp, lambda d: d[0], i, j)
    for h in sorted(set(hyper.values())):
        car, cm = carrier(x, hyper, h)
        for i in range(n):
            fp = fiber_product(p.maps[i], cm)
            for ci, comp_verts in enumerate(components(fp)):
                comp = subcomplex(fp, comp_verts)
                if not comp.darts:
                    continue
                # a dual edge inside the component means H-tilde meets Y_i-tilde
                if any(d[1][0] == "e" for d in comp.darts):
                    continue
                record(WALL, (i, h, ci), comp, lambda d: d[0], i)
    maximal.sort(key=lambda q: (-q.diameter, q.kind, repr(q.provenance)))
    # subpath closure
    for table in (cone_sigs, wall_sigs):
        for i, sigs in table.items():
            closed = set()
            for s in sigs:
                for a in range(len(s)):
                    for b in range(a + 1, len(s) + 1):
                        closed.add(s[a:b])
            table[i] = closed
    return maximal, M, cone_sigs, wall_sigs, hyper, unbounded


# ------------------------------------------------------------ public API

def enumerate_cone_pieces(p):
    if p.classical:
        maximal, words = _classical_cone_pieces(p.relators)
        M = max((q.diameter for q in maximal), default=0)
        return PieceSet(True, maximal, M, words, n_cones=len(p.cones))
    maximal, M, cone_sigs, _, hyper, unbounded = _square_pieces(p)
    maximal = [q for q in maximal if q.kind == CONE]
    M = max((q.diameter for q in maximal), default=0)
    return PieceSet(False, maximal, M, cone_sigs=cone_sigs,
                    wall_sigs={i: set() for i in range(len(p.cones))},
                    hyperplane=hyper, unbounded=unbounded, n_cones=len(p.cones))


def enumerate_wall_pieces(p):
    if p.classical:
        return PieceSet(True, [], 0, frozenset(), n_cones=len(p.cones))
    maximal, _, _, wall_sigs, hyper, unbounded = _square_pieces(p)
    maximal = [q for q in maximal if q.kind == WALL]
    M = max((q.diameter for q in maximal), default=0)
    return PieceSet(False, maximal, M, cone_sigs={i: set() for i in range(len(p.cones))},
                    wall_sigs=wall_sigs, hyperplane=hyper, unbounded=unbounded,
                    n_cones=len(p.cones))


def enumerate_pieces(p):
    """Cone- and wall-pieces together."""
    if p.classical:
        return enumerate_cone_pieces(p)
    maximal, M, cone_sigs, wall_sigs, hyper, unbounded = _square_pieces(p)
    return PieceSet(False, maximal, M, cone_sigs=cone_sigs, wall_sigs=wall_sigs,
                    hyperplane=hyper, unbounded=unbounded, n_cones=len(p.cones))


def max_piece_diameter(ps):
    return ps.M


class _Membership:
    """Piece test for slices of one path."""

    def __init__(self, q, ps, p=None, cone=None, include_walls=True):
        self.q = q
        self.ps = ps
        if ps.classical:
            self.test = lambda a, b: q[a:b] in ps.words
            return
        if p is not None and cone is not None:
            m = p.maps[cone]
            sig = tuple(ps.hyperplane[m.dmap[d]] for d in q)
            sigs = set(ps.cone_sigs.get(cone, ()))
            if include_walls:
                sigs |= ps.wall_sigs.get(cone, set())
        else:
            sig = tuple(ps.hyperplane[d] for d in q)
            sigs = ps.all_signatures() if include_walls else set().union(*ps.cone_sigs.values()) if ps.cone_sigs else set()
        self.test = lambda a, b: sig[a:b] in sigs


def is_piece(q, ps, p=None, cone=None):
    if not q:
        return False
    return _Membership(q, ps, p, cone).test(0, len(q))


def _decompose(q, ps, allow_edges, p=None, cone=None, include_walls=True):
    n = len(q)
    if n == 0:
        return 0, []
    mem = _Membership(q, ps, p, cone, include_walls)
    longest = max(ps.M, 1)
    best = [math.inf] * (n + 1)
    back = [None] * (n + 1)
    best[0] = 0
    for j in range(1, n + 1):
        for i in range(max(0, j - longest), j):
            if best[i] + 1 >= best[j]:
                continue
            if (allow_edges and j - i == 1) or mem.test(i, j):
                best[j] = best[i] + 1
                back[j] = i
    if best[n] == math.inf:
        return math.inf, None
    cuts = []
    j = n
    while j:
        cuts.append((back[j], j))
        j = back[j]
    return best[n], cuts[::-1]


def piece_length(q, ps, p=None, cone=None):
    """Fewest pieces or single edges whose concatenation is q."""
    return _decompose(q, ps, True, p, cone)[0]


def piece_decomposition(q, ps, p=None, cone=None):
    return _decompose(q, ps, True, p, cone)[1]


def piece_count(q, ps, p=None, cone=None, include_walls=True):
    """Fewest pieces (edges only when they are pieces) covering q; inf if impossible."""
    return _decompose(q, ps, False, p, cone, include_walls)


def cyclic_piece_count(cycle, ps, p=None, cone=None, include_walls=True):
    """Minimum over starting points of piece_count of a closed path.

    Returns (count, rotation start, cuts)."""
    best = (math.inf, 0, None)
    for s in range(len(cycle)):
        rot = cycle[s:] + cycle[:s]
        k, cuts = piece_count(rot, ps, p, cone, include_walls)
        if k < best[0]:
            best = (k, s, cuts)
    return best


def longest_piece_cover(r, ps, pieces_allowed=3):
    """Largest total length of at most k pairwise disjoint piece occurrences in the cyclic word r."""
    n = len(r)
    doubled = r + r
    best = 0
    for start in range(n):
        # linear DP on the rotation starting at `start`
        w = doubled[start:start + n]
        table = [[0] * (pieces_allowed + 1) for _ in range(n + 1)]
        for j in range(1, n + 1):
            for k in range(pieces_allowed + 1):
                table[j][k] = table[j - 1][k]
                if k:
                    for i in range(max(0, j - max(ps.M, 1)), j):
                        if w[i:j] in ps.words:
                            table[j][k] = max(table[j][k], table[i][k - 1] + j - i)
        best = max(best, table[n][pieces_allowed])
    return best


def get_pieces(p):
    """Pieces of p, computed once per presentation object."""
    ps = getattr(p, "_piece_cache", None)
    if ps is None:
        ps = enumerate_pieces(p)
        p._piece_cache = ps
    return ps
