"""The six reduction moves and the reduction loop."""
from collections import deque

from ..covers import is_null_homotopic
from ..errors import DiagramError, PatternMismatch, SearchExhausted
from ..words import cyclic_reduce
from .core import CONECELL, HOLE, SQUARE, FaceInfo, validate_diagram
from .dual import trace_dual_curves

WEAK = "WEAK"
FULL = "FULL"
PARTIALLY_REDUCED = "PARTIALLY_REDUCED"
MOVES = {WEAK: (1, 2, 3, 4, 5), FULL: (0, 1, 2, 3, 4, 5)}

FILL_BUDGET = 20_000


# ---------------------------------------------------------------- filling holes

def _fold_all(X, t):
    """Greedy cyclic free reduction; returns the reduced tuple and the folds used."""
    ops = []
    t = tuple(t)
    changed = True
    while changed and len(t) >= 2:
        changed = False
        n = len(t)
        for i in range(n if n > 2 else 1):
            j = (i + 1) % n
            if t[j] == X.opp(t[i]):
                ops.append(("fold", i))
                t = t[:i] + t[i + 2:] if j else t[1:n - 1]
                changed = True
                break
    return t, ops


def find_filling(X, word, max_squares, budget=FILL_BUDGET):
    """Folds and square flips reducing a cyclic word to nothing with the fewest flips.

    Returns the list of operations, or None if no filling with at most
    ``max_squares`` squares exists; SearchExhausted when the budget runs out.
    """
    start, ops0 = _fold_all(X, word)
    parent = {start: (None, ops0, 0)}
    queue = deque([start])
    expanded = 0
    while queue:
        t = queue.popleft()
        cost = parent[t][2]
        if not t:
            path = []
            while t is not None:
                prev, ops, _ = parent[t]
                path = ops + path
                t = prev
            return path
        if cost >= max_squares:
            continue
        expanded += 1
        if expanded > budget:
            raise SearchExhausted("filling search budget exhausted", budget=budget)
        n = len(t)
        for i in range(n):
            j = (i + 1) % n
            for k, c, dd in X.corners().get((t[i], t[j]), ()):
                x, y = X.opp(dd), X.opp(c)
                if j:
                    t2 = t[:i] + (x, y) + t[j + 1:]
                else:
                    t2 = (y,) + t[1:n - 1] + (x,)
                t3, folds = _fold_all(X, t2)
                if t3 not in parent:
                    parent[t3] = (t, [("flip", i, k, c, dd)] + folds, cost + 1)
                    queue.append(t3)
    return None


def replay_filling(d, hole, ops):
    darts = d.face_darts(hole)
    for op in ops:
        n = len(darts)
        i = op[1]
        j = (i + 1) % n
        if op[0] == "fold":
            d.zip_pair(darts[i])
            darts = darts[:i] + darts[i + 2:] if j else darts[1:n - 1]
        else:
            _, _, k, c, dd = op
            od, oc = d.insert_square(darts[i], c, dd, k)
            darts = darts[:i] + [od, oc] + darts[j + 1:] if j else [oc] + darts[1:n - 1] + [od]
    if darts or hole in d.info:
        raise DiagramError("filling left part of the hole open")


def fill_hole(d, hole, max_squares, budget=FILL_BUDGET):
    word = d.face_word(hole)
    ops = find_filling(d.X, word, max_squares, budget)
    if ops is None:
        raise SearchExhausted("no square filling with fewer squares", max_squares=max_squares)
    replay_filling(d, hole, ops)


def region_to_hole(d, faces):
    """Merge a set of faces into one face marked HOLE; it must form a disc."""
    faces = set(faces)
    keep = min(faces)
    d.info[keep] = FaceInfo(HOLE)
    changed = True
    while changed:
        changed = False
        for x in sorted(d.opp):
            if x not in d.opp or x > d.opp[x]:
                continue
            f1, f2 = d.face[x], d.face[d.opp[x]]
            if f1 != f2 and f1 in faces and f2 in faces:
                d.delete_edge(x, keep=keep if keep in (f1, f2) else f1)
                changed = True
    changed = True
    while changed:
        changed = False
        for x in sorted(d.opp):
            if x not in d.opp or d.face[x] != keep or d.face[d.opp[x]] != keep:
                continue
            if d.nxt[x] == d.opp[x]:
                d.remove_spur(x)
                changed = True
            elif d.nxt[d.opp[x]] == x:
                d.remove_spur(d.opp[x])
                changed = True
    if any(d.face[x] == keep and d.face[d.opp[x]] == keep for x in d.opp):
        raise PatternMismatch("region is not a disc")
    return keep


# ---------------------------------------------------------------- site finders

def _cone_lift_ok(d, f):
    y = d.p.cones[d.info[f].cone]
    return y.is_closed_path(d.ypath(f))


def sites_move0(d):
    out = []
    for s in d.square_faces():
        for x in d.face_darts(s):
            o = d.opp[x]
            s2 = d.face[o]
            if s2 == s or d.info[s2].kind != SQUARE or x > o:
                continue
            if d.info[s2].square != d.info[s].square:
                continue
            c1 = d.cycle(x)
            c2 = d.cycle(o)
            want = [d.X.opp(d.lab[c1[0]])] + [d.X.opp(d.lab[c1[k]]) for k in (3, 2, 1)]
            if [d.lab[z] for z in c2] == want:
                out.append(x)
    return out


def _enclosed(d, loop):
    """Faces cut off from the outer face by the closed squares in ``loop``."""
    vid = d.vertices()
    blocked_edges = set()
    blocked_vertices = set()
    for f in loop:
        for x in d.face_darts(f):
            blocked_edges.add(min(x, d.opp[x]))
            blocked_vertices.add(vid[x])
    around = {}
    for x, v in vid.items():
        around.setdefault(v, set()).add(d.face[x])
        around[v].add(d.face[d.opp[x]])
    seen = {d.outer}
    stack = [d.outer]
    darts_of = {}
    for x, f in d.face.items():
        darts_of.setdefault(f, []).append(x)
    while stack:
        f = stack.pop()
        for x in darts_of.get(f, ()):
            nbrs = []
            if min(x, d.opp[x]) not in blocked_edges:
                nbrs.append(d.face[d.opp[x]])
            if vid[x] not in blocked_vertices:
                nbrs.extend(around[vid[x]])
            for g in nbrs:
                if g not in seen and g not in loop:
                    seen.add(g)
                    stack.append(g)
    return set(d.info) - seen - set(loop)


def sites_move1(d):
    data = trace_dual_curves(d)
    out = []
    for i, j, shared in data.bigons:
        if i == j:
            continue
        A, B = data.curves[i], data.curves[j]
        pos_a = {f: k for k, (f, _) in enumerate(A.squares)}
        pos_b = {f: k for k, (f, _) in enumerate(B.squares)}
        order = sorted(shared, key=lambda f: pos_a[f])
        for s1, s2 in zip(order, order[1:]):
            a0, a1 = pos_a[s1], pos_a[s2]
            b0, b1 = sorted((pos_b[s1], pos_b[s2]))
            loop = {f for f, _ in A.squares[a0:a1 + 1]} | {f for f, _ in B.squares[b0:b1 + 1]}
            inside = _enclosed(d, loop)
            if any(d.info[g].kind != SQUARE for g in inside):
                continue
            out.append(frozenset(loop | inside))
    out = sorted(set(out), key=lambda r: (len(r), sorted(r)))
    return out


def _arc_run(cycle, marked):
    """Indices of the single cyclic run of marked positions, or None."""
    n = len(cycle)
    flags = [x in marked for x in cycle]
    if all(flags) or not any(flags):
        return None
    starts = [k for k in range(n) if flags[k] and not flags[k - 1]]
    if len(starts) != 1:
        return None
    k = starts[0]
    run = []
    while flags[k % n]:
        run.append(cycle[k % n])
        k += 1
    return run


def sites_move2(d):
    out = []
    vid, deg = d.degree_table()
    cones = d.cone_faces()
    for c1 in cones:
        cyc = d.face_darts(c1)
        nbrs = sorted({d.face[d.opp[x]] for x in cyc})
        for c2 in nbrs:
            if c2 <= c1 or d.info[c2].kind != CONECELL or d.info[c2].cone != d.info[c1].cone:
                continue
            shared = {x for x in cyc if d.face[d.opp[x]] == c2}
            run = _arc_run(cyc, shared)
            if run is None or len(run) != len(shared):
                continue
            if _arc_run(d.face_darts(c2), {d.opp[x] for x in run}) is None:
                continue
            y = d.p.cones[d.info[c1].cone]
            if any(d.ymap.get(d.opp[x]) != y.opp(d.ymap.get(x)) for x in run):
                continue
            if any(deg[vid[x]] != 2 for x in run[1:]):
                continue
            out.append((c1, c2))
    return out


def cell_is_null(d, f):
    word = d.face_word(f)
    if d.p.classical:
        return cyclic_reduce("".join(word)) == ""
    return is_null_homotopic(d.X, word) is True


def sites_move3(d):
    return [f for f in d.cone_faces() if cell_is_null(d, f)]


def _corner_flip(d, s, i):
    c = d.face_darts(s)
    a, b = c[i], c[(i + 1) % 4]
    C = d.face[d.opp[a]]
    if d.info[C].kind != CONECELL or d.face[d.opp[b]] != C or d.nxt[d.opp[b]] != d.opp[a]:
        return None
    y = d.p.cones[d.info[C].cone]
    m = d.p.maps[d.info[C].cone]
    y1, y2 = d.ymap[d.opp[b]], d.ymap[d.opp[a]]
    want = (d.lab[c[(i + 2) % 4]], d.lab[c[(i + 3) % 4]])
    for alt in y.flips(y1, y2):
        if (m.dmap[alt[0]], m.dmap[alt[1]]) == want:
            return C, a, b, alt
    return None


def sites_move4(d):
    out = []
    for s in d.square_faces():
        for i in range(4):
            if _corner_flip(d, s, i):
                out.append((s, d.face_darts(s)[i]))
    return out


def _square_lift(d, s, a):
    C = d.face[d.opp[a]]
    y = d.p.cones[d.info[C].cone]
    m = d.p.maps[d.info[C].cone]
    z = y.opp(d.ymap[d.opp[a]])
    word = tuple(d.lab[x] for x in d.cycle(a))
    for k in range(len(y.squares)):
        for reading in y.square_boundaries(k):
            if reading[0] == z and tuple(m.dmap[t] for t in reading) == word:
                return C, reading
    return None


def sites_move5(d):
    out = []
    for s in d.square_faces():
        c = d.face_darts(s)
        by_cell = {}
        for x in c:
            g = d.face[d.opp[x]]
            if d.info[g].kind == CONECELL:
                by_cell.setdefault(g, []).append(x)
        for g in sorted(by_cell):
            if len(by_cell[g]) == 1 and _square_lift(d, s, by_cell[g][0]):
                out.append((s, by_cell[g][0]))
    return out


FINDERS = {0: sites_move0, 1: sites_move1, 2: sites_move2, 3: sites_move3, 4: sites_move4, 5: sites_move5}


def find_sites(d, move):
    return FINDERS[move](d)


# ---------------------------------------------------------------- moves

def _apply0(d, x):
    if x not in sites_move0(d):
        raise PatternMismatch("no mirrored square pair at this edge")
    hole = region_to_hole(d, {d.face[x], d.face[d.opp[x]]})
    fill_hole(d, hole, 0)


def _apply1(d, region, budget):
    region = frozenset(region)
    if any(f not in d.info or d.info[f].kind != SQUARE for f in region):
        raise PatternMismatch("bigon region must consist of squares")
    hole = region_to_hole(d, region)
    fill_hole(d, hole, len(region) - 1, budget)


def _apply2(d, site):
    if site not in sites_move2(d):
        raise PatternMismatch("cells are not a mergeable pair")
    c1, c2 = site
    cyc = d.face_darts(c1)
    run = _arc_run(cyc, {x for x in cyc if d.face[d.opp[x]] == c2})
    enclosed = d.info[c2].enclosed
    d.delete_edge(run[0], keep=c1)
    for x in run[1:]:
        o = d.opp[x]
        if d.nxt[o] == x:
            d.remove_spur(o)
        elif d.nxt[x] == o:
            d.remove_spur(x)
        else:
            raise PatternMismatch("shared arc does not collapse")
    d.info[c1].enclosed += enclosed
    if not _cone_lift_ok(d, c1):
        raise PatternMismatch("merged boundary is not closed in the cone")
    fold_cell_backtracks(d, c1)


def fold_cell_backtracks(d, f):
    """Zip consecutive boundary darts of a cone-cell whose lifts backtrack in the cone."""
    y = d.p.cones[d.info[f].cone]
    changed = True
    while changed and f in d.info:
        changed = False
        for x in d.face_darts(f):
            nx = d.nxt[x]
            if nx != x and d.ymap.get(nx) == y.opp(d.ymap[x]):
                d.zip_pair(x)
                changed = True
                break


def _apply3(d, f, budget):
    if f not in d.info or d.info[f].kind != CONECELL or not cell_is_null(d, f):
        raise PatternMismatch("cone-cell boundary is not null-homotopic")
    d.info[f] = FaceInfo(HOLE)
    fill_hole(d, f, budget, budget)


def _apply4(d, site):
    s, a = site
    if d.info.get(s) is None or d.info[s].kind != SQUARE or a not in d.face_darts(s):
        raise PatternMismatch("not a square dart")
    i = d.face_darts(s).index(a)
    hit = _corner_flip(d, s, i)
    if hit is None:
        raise PatternMismatch("not a cornsquare on a cone-cell")
    C, a, b, alt = hit
    c = d.face_darts(s)
    rest = (c[(i + 2) % 4], c[(i + 3) % 4])
    d.delete_edge(a, keep=C)
    d.remove_spur(d.opp[b])
    d.ymap[rest[0]], d.ymap[rest[1]] = alt
    if not _cone_lift_ok(d, C):
        raise PatternMismatch("absorbed boundary is not closed in the cone")


def _apply5(d, site):
    s, a = site
    if site not in sites_move5(d):
        raise PatternMismatch("square does not meet a cone-cell in a single liftable edge")
    C, reading = _square_lift(d, s, a)
    rest = d.cycle(a)[1:]
    d.delete_edge(a, keep=C)
    for x, t in zip(rest, reading[1:]):
        d.ymap[x] = t
    if not _cone_lift_ok(d, C):
        raise PatternMismatch("absorbed boundary is not closed in the cone")


def apply_reduction(d, move, site, budget=FILL_BUDGET):
    """Apply one move at ``site`` to a copy of d; checks boundary and complexity."""
    new = d.copy()
    before = d.comp()
    if move == 0:
        _apply0(new, site)
    elif move == 1:
        _apply1(new, site, budget)
    elif move == 2:
        _apply2(new, site)
    elif move == 3:
        _apply3(new, site, budget)
    elif move == 4:
        _apply4(new, site)
    elif move == 5:
        _apply5(new, site)
    else:
        raise PatternMismatch(f"unknown move {move}")
    after = new.comp()
    if new.boundary() != d.boundary():
        raise DiagramError("reduction changed the boundary", move=move)
    if not after < before:
        raise DiagramError("reduction did not lower the complexity", move=move)
    verdict = validate_diagram(new)
    if not verdict.ok:
        raise DiagramError(f"reduction produced an invalid diagram: {verdict.violations[:3]}", move=move)
    new.log.append((move, site, before, after))
    return new


def _site_key(move, site):
    return (move, site if not isinstance(site, frozenset) else tuple(sorted(site)))


def reduce(d, mode=FULL, budget=FILL_BUDGET):
    """Apply the lowest-numbered available move at its first site until none applies."""
    moves = MOVES[mode]
    failed = set()
    while True:
        chosen = None
        for move in moves:
            for site in find_sites(d, move):
                if _site_key(move, site) not in failed:
                    chosen = (move, site)
                    break
            if chosen:
                break
        if chosen is None:
            return d
        try:
            d = apply_reduction(d, *chosen, budget=budget)
        except (SearchExhausted, PatternMismatch):
            failed.add(_site_key(*chosen))
            d = d.copy()
            d.flags.add(PARTIALLY_REDUCED)


def is_reduced(d, mode=FULL):
    return not any(find_sites(d, move) for move in MOVES[mode])
