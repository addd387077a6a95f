"""Exposed cells, ladders and the Greendlinger dichotomy."""
from dataclasses import dataclass, field

from ..complex_model import Verdict
from ..errors import DiagramError
from ..pieces import get_pieces, piece_length
from .core import CONECELL, SQUARE
from .dual import trace_dual_curves
from .reduction import WEAK, is_reduced

LADDER = "LADDER"
EXPOSED = "EXPOSED"
NOT_APPLICABLE = "NOT_APPLICABLE"
MAX_ORDERS = 24


@dataclass
class ShellReport:
    cell: int
    Q: list
    R: list
    degree: int


@dataclass
class Exposed:
    kind: str          # SHELL | CORNER | SPUR
    where: int         # face id for shells, vertex id otherwise
    degree: int = None


@dataclass
class Grid:
    kind: str          # SQUARES | ARC | PATH | POINT
    faces: frozenset = frozenset()
    edges: frozenset = frozenset()
    mu: list = field(default_factory=list)
    rho: list = field(default_factory=list)
    nu: list = field(default_factory=list)
    eta: list = field(default_factory=list)
    vertex: int = None


@dataclass
class LadderDecomposition:
    cells: list        # ("CELL", face) or ("VERTEX", vertex)
    grids: list
    lambda1: list      # darts, diagram on the left
    lambda2: list      # darts, diagram on the right


@dataclass
class GreendlingerVerdict:
    kind: str
    ladder: LadderDecomposition = None
    exposed: list = field(default_factory=list)
    caveats: list = field(default_factory=list)

    @property
    def dichotomy_holds(self):
        return self.kind == LADDER or len(self.exposed) >= 3


# ---------------------------------------------------------------- shells

def is_disconnecting(d, f):
    """True when removing the closed cell f splits the rest of the diagram."""
    vid = d.vertices()
    cyc = d.face_darts(f)
    gone_v = {vid[x] for x in cyc}
    gone_e = {min(x, d.opp[x]) for x in cyc}
    parent = {}

    def find(a):
        parent.setdefault(a, a)
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        parent[find(a)] = find(b)

    for x in d.opp:
        e = min(x, d.opp[x])
        if e in gone_e:
            continue
        node = ("e", e)
        find(node)
        for end in (vid[x], vid[d.opp[x]]):
            if end not in gone_v:
                union(node, ("v", end))
        g = d.face[x]
        if g != f and g != d.outer:
            union(node, ("f", g))
    for x, v in vid.items():
        g = d.face[x]
        if v not in gone_v and g != f and g != d.outer:
            union(("v", v), ("f", g))
    for g in d.info:
        if g != f and g != d.outer:
            find(("f", g))
    return len({find(a) for a in list(parent)}) > 1


def shell_degree(d, f, ps=None):
    if f not in d.info or d.info[f].kind != CONECELL:
        raise DiagramError("not a cone-cell", code="INTERIOR_CELL")
    cyc = d.face_darts(f)
    on = [d.face[d.opp[x]] == d.outer for x in cyc]
    if not any(on):
        raise DiagramError("cone-cell has no edge on the boundary", code="INTERIOR_CELL")
    if is_disconnecting(d, f):
        raise DiagramError("cone-cell disconnects the diagram", code="DISCONNECTING")
    n = len(cyc)
    if all(on):
        return ShellReport(f, cyc, [], 0)
    starts = [k for k in range(n) if on[k] and not on[k - 1]]
    if len(starts) != 1:
        raise DiagramError("cone-cell meets the boundary in several arcs", code="DISCONNECTING")
    k = starts[0]
    rot = cyc[k:] + cyc[:k]
    q_len = next(i for i, flag in enumerate(on[k:] + on[:k]) if not flag)
    Q, R = rot[:q_len], rot[q_len:]
    ps = ps or get_pieces(d.p)
    if d.p.classical:
        degree = piece_length("".join(d.lab[x] for x in R), ps)
    else:
        degree = piece_length(tuple(d.ymap[x] for x in R), ps, d.p, d.info[f].cone)
    return ShellReport(f, Q, R, degree)


def exposed_cells(d, ps=None, max_degree=4):
    out = []
    if d.is_point():
        return out
    vid, deg = d.degree_table()
    on_boundary = {vid[d.opp[x]] for x in d.outer_darts()}
    in_square = {vid[x] for x, g in d.face.items() if d.info[g].kind == SQUARE}
    for v in sorted(on_boundary):
        if deg[v] == 1:
            out.append(Exposed("SPUR", v))
        elif deg[v] == 2 and v in in_square:
            out.append(Exposed("CORNER", v))
    for f in d.cone_faces():
        try:
            rep = shell_degree(d, f, ps)
        except DiagramError:
            continue
        if rep.degree <= max_degree:
            out.append(Exposed("SHELL", f, rep.degree))
    return out


# ---------------------------------------------------------------- ladders

def _elements(d):
    """Face -> element key and bare edge -> element key."""
    of_face, of_edge = {}, {}
    squares = d.square_faces()
    parent = {f: f for f in squares}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for x in d.opp:
        f, g = d.face[x], d.face[d.opp[x]]
        if f in parent and g in parent:
            parent[find(f)] = find(g)
    roots = {}
    for f in squares:
        roots.setdefault(find(f), set()).add(f)
    comps = {min(fs): fs for fs in roots.values()}
    for key, fs in comps.items():
        for f in fs:
            of_face[f] = ("G", key)
    for f in d.cone_faces():
        of_face[f] = ("C", f)
    for e in d.edges():
        if d.face[e] == d.outer and d.face[d.opp[e]] == d.outer:
            of_edge[e] = ("B", e)
    return of_face, of_edge, comps


def _element_of(d, x, of_face, of_edge):
    f = d.face[x]
    if f != d.outer:
        return of_face[f]
    return of_edge[min(x, d.opp[x])]


def _compress(seq):
    out = []
    for s in seq:
        if not out or out[-1] != s:
            out.append(s)
    return out


def _merges(a, b, adjacent, limit):
    """Linear orders containing a and b as subsequences, preferring adjacent steps."""
    out = []

    def rec(i, j, acc):
        if len(out) >= limit:
            return
        if i == len(a) and j == len(b):
            out.append(list(acc))
            return
        options = []
        if i < len(a) and j < len(b) and a[i] == b[j]:
            options = [(a[i], i + 1, j + 1)]
        else:
            if i < len(a) and a[i] not in b[j:]:
                options.append((a[i], i + 1, j))
            if j < len(b) and b[j] not in a[i:]:
                options.append((b[j], i, j + 1))
            if acc:
                options.sort(key=lambda o: not adjacent(acc[-1], o[0]))
        for el, i2, j2 in options:
            acc.append(el)
            rec(i2, j2, acc)
            acc.pop()

    rec(0, 0, [])
    return out


def _build(d, order, lam1, lam2, comps, vid):
    """Alternating cells and grids along an element order."""
    cells, grids = [], []

    def verts(el):
        kind, key = el
        if kind == "C":
            return {vid[x] for x in d.face_darts(key)}
        if kind == "B":
            return {vid[key], vid[d.opp[key]]}
        return {vid[x] for f in comps[key] for x in d.face_darts(f)}

    def grid_of(el):
        kind, key = el
        if kind == "B":
            return Grid("PATH", edges=frozenset([key]))
        return Grid("SQUARES", faces=frozenset(comps[key]))

    start = vid[lam1[0]] if lam1 else vid[d.opp[lam2[0]]]
    end = vid[d.opp[lam1[-1]]] if lam1 else vid[lam2[-1]]
    for el in order:
        if el[0] == "C":
            if cells and len(cells) > len(grids):
                prev = cells[-1][1]
                arc = [x for x in d.face_darts(prev) if d.face[d.opp[x]] == el[1]]
                if arc:
                    grids.append(Grid("ARC", mu=arc, nu=[d.opp[x] for x in reversed(arc)]))
                else:
                    common = verts(("C", prev)) & verts(el)
                    if len(common) != 1:
                        return None
                    grids.append(Grid("POINT", vertex=common.pop()))
            cells.append(("CELL", el[1]))
        else:
            if not cells:
                cells.append(("VERTEX", start))
            elif len(cells) == len(grids):
                common = verts(order[order.index(el) - 1]) & verts(el)
                if len(common) != 1:
                    return None
                cells.append(("VERTEX", common.pop()))
            grids.append(grid_of(el))
    if len(cells) == len(grids):
        cells.append(("VERTEX", end))
    return LadderDecomposition(cells, grids, lam1, lam2)


def recognize_ladder(d, split=None):
    """Find a verified ladder structure, or None.

    ``split=(i, length)`` fixes lambda1 to the boundary darts i .. i+length-1;
    otherwise balanced splits with distinct ends are tried first.
    """
    if d.is_point():
        return LadderDecomposition([("VERTEX", 0)], [], [], [])
    of_face, of_edge, comps = _elements(d)
    vid = d.vertices()
    bd = d.boundary_darts()
    seq = [_element_of(d, x, of_face, of_edge) for x in bd]
    if set(seq) != set(of_face.values()) | set(of_edge.values()):
        return None
    at_vertex = {}
    for x in d.opp:
        if d.face[x] != d.outer or min(x, d.opp[x]) in of_edge:
            at_vertex.setdefault(vid[x], set()).add(_element_of(d, x, of_face, of_edge))
    touching = {}
    for els in at_vertex.values():
        for a in els:
            touching.setdefault(a, set()).update(els - {a})

    def adjacent(a, b):
        return b in touching.get(a, ())

    n = len(bd)
    # balanced splits first: the sides of a ladder run between its two ends
    def preference(t):
        i, length = t
        closed = vid[bd[i]] == vid[bd[(i + length) % n]]
        return (closed, abs(2 * length - n), length < n - length, i)

    if split is not None:
        splits = [split]
    else:
        splits = sorted(((i, length) for i in range(n) for length in range(n + 1)), key=preference)
    for i, length in splits:
        if True:
            lam1 = [bd[(i + k) % n] for k in range(length)]
            rest = [bd[(i + length + k) % n] for k in range(n - length)]
            a = _compress([_element_of(d, x, of_face, of_edge) for x in lam1])
            b = _compress([_element_of(d, x, of_face, of_edge) for x in reversed(rest)])
            if len(set(a)) != len(a) or len(set(b)) != len(b):
                continue
            lam2 = [d.opp[x] for x in reversed(rest)]
            for order in _merges(a, b, adjacent, MAX_ORDERS):
                ladder = _build(d, order, lam1, lam2, comps, vid)
                if ladder is not None and validate_ladder(d, ladder).ok:
                    return ladder
    return None


def _boundary_cycle(d, faces):
    """Boundary darts of a union of faces, in order with the union on the left."""
    inside = set(faces)
    darts = [x for x, f in d.face.items() if f in inside and d.face[d.opp[x]] not in inside]
    if not darts:
        return []
    todo = set(darts)
    start = min(darts)
    cyc = [start]
    x = start
    while True:
        y = d.nxt[x]
        while d.face[d.opp[y]] in inside:
            y = d.nxt[d.opp[y]]
        if y == start:
            break
        cyc.append(y)
        x = y
    if set(cyc) != todo:
        return None
    return cyc


def _pattern_ok(tags, first, last):
    """Cyclic tag sequence must read P* L1* N* L2*."""
    order = {"P": 0, "L1": 1, "N": 2, "L2": 3}
    if "X" in tags:
        return False
    if first and "P" in tags or last and "N" in tags:
        return False
    if not tags:
        return True
    ranks = [order[t] for t in tags]
    n = len(ranks)
    drops = sum(1 for k in range(n) if ranks[k] < ranks[k - 1])
    return drops <= 1 or len(set(ranks)) == 1


def validate_ladder(d, L):
    """Recheck a ladder decomposition from its own fields."""
    v = []
    if len(L.cells) != len(L.grids) + 1:
        v.append(("alternation", len(L.cells), len(L.grids)))
        return Verdict(False, v)
    if d.is_point():
        return Verdict(not L.grids, v)
    bd = d.boundary_darts()
    walk = list(L.lambda1) + [d.opp[x] for x in reversed(L.lambda2)]
    n = len(bd)
    if len(walk) != n or not any(bd[k:] + bd[:k] == walk for k in range(n)):
        v.append(("boundary factorization", None))
        return Verdict(False, v)
    vid = d.vertices()
    index_face, index_edge, index_vertex = {}, {}, {}
    for k, (kind, key) in enumerate(L.cells):
        if kind == "CELL":
            index_face[key] = 2 * k
        else:
            index_vertex[key] = 2 * k
    for k, g in enumerate(L.grids):
        for f in g.faces:
            index_face[f] = 2 * k + 1
        for e in g.edges:
            index_edge[e] = 2 * k + 1
    for f, info in d.info.items():
        if f != d.outer and f not in index_face:
            v.append(("face outside the ladder", f))
    for e in d.edges():
        if d.face[e] == d.outer and d.face[d.opp[e]] == d.outer and e not in index_edge:
            v.append(("edge outside the ladder", e))
    if v:
        return Verdict(False, v)

    def idx(x):
        f = d.face[x]
        return index_face[f] if f != d.outer else index_edge[min(x, d.opp[x])]

    side1 = [idx(x) for x in L.lambda1]
    side2 = [idx(d.opp[x]) for x in L.lambda2]
    for name, s in (("lambda1", side1), ("lambda2", side2)):
        if any(a > b for a, b in zip(s, s[1:])):
            v.append(("not monotone", name))
    last = 2 * len(L.grids)

    def vertex_set(kind, key):
        if kind == "VERTEX":
            return {key}
        return {vid[x] for x in d.face_darts(key)}

    first_cell, last_cell = vertex_set(*L.cells[0]), vertex_set(*L.cells[-1])
    for name, path, forward in (("lambda1", L.lambda1, True), ("lambda2", L.lambda2, True)):
        if path:
            if vid[path[0]] not in first_cell:
                v.append(("start outside C0", name))
            if vid[d.opp[path[-1]]] not in last_cell:
                v.append(("end outside the last cell", name))
    on1 = set(L.lambda1)
    vertices1 = {vid[x] for x in L.lambda1} | {vid[d.opp[x]] for x in L.lambda1}
    vertices2 = {vid[x] for x in L.lambda2} | {vid[d.opp[x]] for x in L.lambda2}
    if not L.lambda1:
        vertices1 = vertices2 = {vid[bd[0]]} if not bd else vertices2

    def tag(x, me):
        o = d.opp[x]
        if d.face[o] == d.outer:
            return "L1" if x in on1 else "L2"
        j = idx(o)
        if me - 2 <= j < me:
            return "P"
        if me < j <= me + 2:
            return "N"
        return "X"

    for k, (kind, key) in enumerate(L.cells):
        me = 2 * k
        if kind == "VERTEX":
            if 0 < k < len(L.cells) - 1 and not (key in vertices1 and key in vertices2):
                v.append(("vertex cell off a side", key))
            continue
        tags = [tag(x, me) for x in d.face_darts(key)]
        if not _pattern_ok(tags, me == 0, me == last):
            v.append(("cell boundary pattern", key, tags))
    data = None
    for k, g in enumerate(L.grids):
        me = 2 * k + 1
        if g.kind == "PATH":
            e = next(iter(g.edges))
            if not ((e in on1) ^ (d.opp[e] in on1)):
                v.append(("path grid not on both sides", e))
            continue
        if g.kind != "SQUARES":
            continue
        cyc = _boundary_cycle(d, g.faces)
        if cyc is None:
            v.append(("grid is not a disc", me))
            continue
        tags = {x: tag(x, me) for x in cyc}
        if not _pattern_ok([tags[x] for x in cyc], False, False):
            v.append(("grid boundary pattern", me))
            continue
        data = data or trace_dual_curves(d)
        ends = []
        for ci, c in enumerate(data.curves):
            if not c.squares or c.squares[0][0] not in g.faces:
                continue
            if c.closed:
                ends.append((ci, None, None))
                continue
            ends.append((ci, tags.get(d.opp[c.ends[0]]), tags.get(d.opp[c.ends[1]])))
        mu_curves = set()
        for ci, a, b in ends:
            if ("P" in (a, b) or "N" in (a, b)) and {a, b} != {"P", "N"}:
                v.append(("curve from mu misses nu", ci))
            if a == "P" or b == "P":
                mu_curves.add(ci)
        for i, j, fs in data.bigons:
            if fs and fs[0] in g.faces:
                v.append(("curves cross twice", i, j))
        for f in g.faces:
            pair = _curves_at(d, data, f)
            if pair[0] != pair[1] and pair[0] in mu_curves and pair[1] in mu_curves:
                v.append(("mu curves cross", pair))
    return Verdict(not v, v)


def _curves_at(d, data, f):
    c = d.face_darts(f)
    return (data.curve_of_edge[min(c[0], d.opp[c[0]])], data.curve_of_edge[min(c[1], d.opp[c[1]])])


# ---------------------------------------------------------------- classification

def _c9_certified(p):
    cached = getattr(p, "_c9_cache", None)
    if cached is None:
        from ..small_cancellation import check_nonmetric_condition
        cached = check_nonmetric_condition(p, 9).holds
        p._c9_cache = cached
    return cached


def classify_greendlinger(d, ps=None, check_reduced=True):
    if check_reduced and not is_reduced(d, WEAK):
        raise DiagramError("diagram is not weakly reduced", code="NOT_WEAKLY_REDUCED")
    caveats = [] if _c9_certified(d.p) else [NOT_APPLICABLE]
    exposed = exposed_cells(d, ps)
    ladder = recognize_ladder(d)
    if ladder is not None:
        return GreendlingerVerdict(LADDER, ladder, exposed, caveats)
    return GreendlingerVerdict(EXPOSED, None, exposed, caveats)
