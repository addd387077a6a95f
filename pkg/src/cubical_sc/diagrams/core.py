"""Disc diagrams stored as planar maps.

Each dart has an opposite (``opp``) and a face successor (``nxt``): the
next dart along the face lying to its left. The rotation at a vertex is
``d -> nxt[opp[d]]``; vertices are its cycles and are never stored.
"""
import copy
import json
import math
from dataclasses import dataclass

from ..complex_model import Verdict
from ..errors import DiagramError, ValidationError

OUTER = "OUTER"
SQUARE = "SQUARE"
CONECELL = "CONECELL"
HOLE = "HOLE"   # transient: a region being refilled during a reduction move

FORMAT = "scd/1"


@dataclass
class FaceInfo:
    kind: str
    square: int = None
    cone: int = None
    # squares of an annular region absorbed inside a cone-cell; kept out of D_square
    enclosed: int = 0


class DiscDiagram:
    def __init__(self, presentation):
        self.p = presentation
        self.X = presentation.base
        self.opp = {}
        self.nxt = {}
        self.lab = {}
        self.face = {}
        self.info = {}
        self.ymap = {}
        self.outer = self._new_face(FaceInfo(OUTER))
        self.base = None
        self._dart_counter = 0
        self.flags = set()
        self.log = []

    # ------------------------------------------------------------ bookkeeping

    def _new_face(self, info):
        fid = max(self.info, default=-1) + 1
        self.info[fid] = info
        return fid

    def _new_pair(self, label):
        self._dart_counter += 2
        d, e = self._dart_counter - 1, self._dart_counter
        self.opp[d], self.opp[e] = e, d
        self.lab[d], self.lab[e] = label, self.X.opp(label)
        return d, e

    def _drop(self, d):
        for table in (self.opp, self.nxt, self.lab, self.face, self.ymap):
            table.pop(d, None)

    def copy(self):
        new = copy.copy(self)
        for name in ("opp", "nxt", "lab", "face", "ymap"):
            setattr(new, name, dict(getattr(self, name)))
        new.info = {k: copy.copy(v) for k, v in self.info.items()}
        new.flags = set(self.flags)
        new.log = list(self.log)
        return new

    # ------------------------------------------------------------ queries

    @property
    def darts(self):
        return sorted(self.opp)

    def is_point(self):
        return not self.opp

    def cycle(self, d):
        out = [d]
        x = self.nxt[d]
        while x != d:
            out.append(x)
            x = self.nxt[x]
        return out

    def prev(self, d):
        x = d
        while self.nxt[x] != d:
            x = self.nxt[x]
        return x

    def rot(self, d):
        return self.nxt[self.opp[d]]

    def faces(self):
        """face id -> dart cycle, starting at its smallest dart."""
        out = {f: [] for f in self.info}
        seen = set()
        for d in sorted(self.nxt):
            if d in seen:
                continue
            c = self.cycle(d)
            seen.update(c)
            out.setdefault(self.face[d], []).extend(c)
        return out

    def face_darts(self, f):
        ds = [d for d, g in self.face.items() if g == f]
        return self.cycle(min(ds)) if ds else []

    def vertices(self):
        """dart -> vertex id (vertex of its tail), ids are consecutive ints."""
        vid = {}
        n = 0
        for d in sorted(self.opp):
            if d in vid:
                continue
            x = d
            while x not in vid:
                vid[x] = n
                x = self.rot(x)
            n += 1
        return vid

    def n_vertices(self):
        return 1 if self.is_point() else len(set(self.vertices().values()))

    def degree_table(self):
        vid = self.vertices()
        deg = {}
        for d, v in vid.items():
            deg[v] = deg.get(v, 0) + 1
        return vid, deg

    def edges(self):
        return sorted(d for d in self.opp if d < self.opp[d])

    def cone_faces(self):
        return sorted(f for f, i in self.info.items() if i.kind == CONECELL)

    def square_faces(self):
        return sorted(f for f, i in self.info.items() if i.kind == SQUARE)

    def comp(self):
        """(number of cone-cells, number of squares outside cone-cells)."""
        return (len(self.cone_faces()), len(self.square_faces()))

    def area(self):
        return sum(1 for i in self.info.values() if i.kind in (SQUARE, CONECELL))

    def outer_darts(self):
        """The outer face cycle from the basepoint (outer face on the left)."""
        if self.base is None:
            return []
        return self.cycle(self.base)

    def boundary_darts(self):
        """Boundary path with the diagram on its left, starting at the basepoint's opposite."""
        out = self.outer_darts()
        return [self.opp[x] for x in out[:1] + out[:0:-1]]

    def boundary(self):
        """Labels along the outer face, read from the basepoint."""
        return tuple(self.lab[d] for d in self.boundary_darts())

    def boundary_text(self):
        b = self.boundary()
        if self.p.classical:
            return "".join(b)
        return " ".join(str(x) for x in b)

    def euler(self):
        faces = len(self.info)
        return self.n_vertices() - len(self.opp) // 2 + faces

    def ypath(self, f):
        return [self.ymap.get(d) for d in self.face_darts(f)]

    def face_word(self, f):
        return tuple(self.lab[d] for d in self.face_darts(f))

    # ------------------------------------------------------------ surgery

    def attach_polygon(self, arc_start, k, labels, info, ydarts=None):
        """Glue a new face onto k consecutive outer darts starting at ``arc_start``.

        The new face reads the arc followed by fresh edges labelled ``labels``.
        With k == 0 the face is a loop hung at the head of ``arc_start``.
        ``ydarts`` lifts the whole new cycle (arc first) into a cone.
        """
        if not labels:
            raise DiagramError("a new face needs at least one new edge")
        f = self._new_face(info)
        pairs = [self._new_pair(x) for x in labels]
        ps = [a for a, _ in pairs]
        qs = [b for _, b in pairs]
        for a, b in pairs:
            self.face[a] = f
            self.face[b] = self.outer
        for a, b in zip(ps, ps[1:]):
            self.nxt[a] = b
        for a, b in zip(qs[1:], qs):
            self.nxt[a] = b
        if arc_start is None:
            self.nxt[ps[-1]] = ps[0]
            self.nxt[qs[0]] = qs[-1]
            arc = []
        elif k == 0:
            o = arc_start
            after = self.nxt[o]
            self.nxt[ps[-1]] = ps[0]
            self.nxt[o] = qs[-1]
            self.nxt[qs[0]] = after
            arc = []
        else:
            outer = self.cycle(arc_start)
            if k > len(outer):
                raise DiagramError("arc longer than the boundary")
            arc = outer[:k]
            before = self.prev(arc[0])
            after = self.nxt[arc[-1]]
            self.nxt[arc[-1]] = ps[0]
            self.nxt[ps[-1]] = arc[0]
            if k == len(outer):
                self.nxt[qs[0]] = qs[-1]
            else:
                self.nxt[before] = qs[-1]
                self.nxt[qs[0]] = after
            for a in arc:
                self.face[a] = f
            if self.base in arc:
                self.base = qs[-1]
        if self.base is None:
            self.base = qs[0]
        if ydarts is not None:
            for d, y in zip(arc + ps, ydarts):
                self.ymap[d] = y
        return f

    def attach_spur(self, at, label):
        """Hang a new edge at the head of outer dart ``at`` (or on a point diagram)."""
        a, b = self._new_pair(label)
        self.face[a] = self.face[b] = self.outer
        if at is None:
            self.nxt[a], self.nxt[b] = b, a
            self.base = a
        else:
            after = self.nxt[at]
            self.nxt[at] = a
            self.nxt[a] = b
            self.nxt[b] = after
        return a

    def zip_pair(self, d):
        """Fold d with its face successor, whose label is d's inverse."""
        e = self.nxt[d]
        if self.lab[e] != self.X.opp(self.lab[d]):
            raise DiagramError("zip needs inverse labels")
        if e == self.opp[d]:
            self.remove_spur(d)
            return
        f = self.face[d]
        a, b = self.opp[d], self.opp[e]
        if self.nxt[e] == d:
            del self.info[f]
        else:
            self.nxt[self.prev(d)] = self.nxt[e]
        self.opp[a], self.opp[b] = b, a
        self._drop(d)
        self._drop(e)
        self._prune()

    def remove_spur(self, d):
        """Remove edge d whose head has valence one."""
        o = self.opp[d]
        if self.nxt[d] != o:
            raise DiagramError("not a spur")
        after = self.nxt[o]
        if after == d:
            # the diagram was a single edge
            self._drop(d)
            self._drop(o)
            self.base = None
            return
        before = self.prev(d)
        self.nxt[before] = after
        if self.base in (d, o):
            self.base = after
        self._drop(d)
        self._drop(o)

    def delete_edge(self, d, keep=None):
        """Delete an edge separating two faces, merging them into ``keep``."""
        o = self.opp[d]
        f1, f2 = self.face[d], self.face[o]
        if f1 == f2:
            raise DiagramError("edge has the same face on both sides")
        if keep is None:
            keep = f1 if f2 != self.outer else f2
        gone = f2 if keep == f1 else f1
        if self.nxt[d] == d:
            self.nxt[self.prev(o)] = self.nxt[o]
        elif self.nxt[o] == o:
            self.nxt[self.prev(d)] = self.nxt[d]
        else:
            p1, n1, p2, n2 = self.prev(d), self.nxt[d], self.prev(o), self.nxt[o]
            self.nxt[p1] = n2
            self.nxt[p2] = n1
        if self.base in (d, o):
            self.base = None
        self._drop(d)
        self._drop(o)
        for x, g in list(self.face.items()):
            if g == gone:
                self.face[x] = keep
        del self.info[gone]
        if self.base is not None and self.base not in self.opp:
            self.base = None
        if self.base is None and self.opp:
            self.base = min(x for x, g in self.face.items() if g == self.outer)
        return keep

    def insert_square(self, a, c_label, d_label, square):
        """Fill the corner (a, nxt a) of a face with a new square reading a b c d."""
        f = self.face[a]
        b = self.nxt[a]
        s = self._new_face(FaceInfo(SQUARE, square=square))
        c, oc = self._new_pair(c_label)
        dd, od = self._new_pair(d_label)
        if self.nxt[b] == a:
            self.nxt[od], self.nxt[oc] = oc, od
        else:
            before, after = self.prev(a), self.nxt[b]
            self.nxt[before] = od
            self.nxt[od] = oc
            self.nxt[oc] = after
        self.nxt[b] = c
        self.nxt[c] = dd
        self.nxt[dd] = a
        for x in (a, b, c, dd):
            self.face[x] = s
            self.ymap.pop(x, None)
        self.face[oc] = self.face[od] = f
        return od, oc

    def _prune(self):
        """Drop components cut off from the outer face (they close up into spheres)."""
        if not self.opp:
            self.base = None
            return
        parent = {d: d for d in self.opp}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for d in self.opp:
            for e in (self.opp[d], self.nxt[d]):
                ra, rb = find(d), find(e)
                if ra != rb:
                    parent[ra] = rb
        roots = {find(d) for d in self.opp}
        if len(roots) == 1:
            return
        anchor = self.base if self.base in self.opp else next(d for d, f in self.face.items() if f == self.outer)
        keep = find(anchor)
        for d in list(self.opp):
            if find(d) != keep:
                f = self.face[d]
                self._drop(d)
                if f in self.info and f != self.outer and not any(g == f for g in self.face.values()):
                    del self.info[f]

    # ------------------------------------------------------------ export

    def to_json(self):
        vid = self.vertices()
        darts = []
        for d in self.darts:
            rec = {"id": d, "opposite": self.opp[d], "next": self.rot(d), "tail": vid[d],
                   "label": self.lab[d], "face": self.face[d]}
            if d in self.ymap:
                rec["y"] = self.ymap[d]
            darts.append(rec)
        faces = []
        cycles = self.faces()
        for f in sorted(self.info):
            i = self.info[f]
            faces.append({"id": f, "kind": i.kind, "square": i.square, "cone": i.cone,
                          "enclosed": i.enclosed, "boundary": cycles.get(f, [])})
        return json.dumps({"format": FORMAT, "darts": darts, "faces": faces,
                           "outer": self.outer, "basepoint": self.base}, indent=1)

    @classmethod
    def from_json(cls, text, presentation):
        data = json.loads(text)
        if data.get("format") != FORMAT:
            raise ValidationError(f"unknown diagram format {data.get('format')!r}")
        d = cls(presentation)
        d.info = {}
        for f in data["faces"]:
            d.info[f["id"]] = FaceInfo(f["kind"], f.get("square"), f.get("cone"), f.get("enclosed", 0))
        d.outer = data["outer"]
        rot = {}
        for rec in data["darts"]:
            x = rec["id"]
            d.opp[x] = rec["opposite"]
            d.lab[x] = rec["label"]
            d.face[x] = rec["face"]
            rot[x] = rec["next"]
            if "y" in rec:
                d.ymap[x] = rec["y"]
        for x in d.opp:
            d.nxt[x] = rot[d.opp[x]]
        d.base = data["basepoint"]
        d._dart_counter = max(d.opp, default=0)
        return d

    def to_dot(self):
        vid = self.vertices()
        lines = ["graph D {"]
        for e in self.edges():
            lines.append(f'  v{vid[e]} -- v{vid[self.opp[e]]} [label="{self.lab[e]}"];')
        lines.append("}")
        return "\n".join(lines)


# ---------------------------------------------------------------- validation

def validate_diagram(d):
    v = []
    X = d.X
    for x in d.opp:
        if d.opp.get(d.opp[x]) != x or d.opp[x] == x:
            v.append(("opposite", x))
        if d.lab.get(d.opp[x]) != X.opp(d.lab[x]):
            v.append(("label", x))
    if set(d.nxt) != set(d.opp) or len(set(d.nxt.values())) != len(d.nxt):
        v.append(("successor", None))
        return Verdict(False, v)
    outer = [f for f, i in d.info.items() if i.kind == OUTER]
    if outer != [d.outer]:
        v.append(("outer", outer))
    cycles = d.faces()
    for f, darts in cycles.items():
        if f not in d.info:
            v.append(("unlabelled face", f))
            continue
        if not darts and f != d.outer:
            v.append(("empty face", f))
        if darts and len(d.cycle(darts[0])) != len(darts):
            v.append(("face split", f))
    if d.euler() != 2:
        v.append(("euler", d.euler()))
    if d.opp:
        if d.base not in d.opp or d.face[d.base] != d.outer:
            v.append(("basepoint", d.base))
        seen = set()
        stack = [next(iter(d.opp))]
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            stack += [d.opp[x], d.nxt[x]]
        if len(seen) != len(d.opp):
            v.append(("disconnected", None))
    for f, info in d.info.items():
        darts = cycles.get(f, [])
        if info.kind == SQUARE:
            word = tuple(d.lab[x] for x in darts)
            if len(word) != 4 or info.square is None or word not in X.square_boundaries(info.square):
                v.append(("square label", f))
        elif info.kind == CONECELL:
            if info.cone is None or not (0 <= info.cone < len(d.p.cones)):
                v.append(("cone index", f))
                continue
            y = d.p.cones[info.cone]
            m = d.p.maps[info.cone]
            path = [d.ymap.get(x) for x in darts]
            if any(t is None or t not in y.darts for t in path):
                v.append(("cone lift missing", f))
                continue
            if not y.is_closed_path(path):
                v.append(("cone boundary not closed", f))
            if any(m.dmap[t] != d.lab[x] for t, x in zip(path, darts)):
                v.append(("cone lift label", f))
        elif info.kind == HOLE:
            v.append(("hole", f))
    return Verdict(not v, v)


# ---------------------------------------------------------------- builders

def point_diagram(p):
    return DiscDiagram(p)


def single_cell(p, cone, ypath):
    """A diagram with one cone-cell whose boundary lifts to ``ypath`` in cone ``cone``."""
    d = DiscDiagram(p)
    m = p.maps[cone]
    labels = [m.dmap[y] for y in ypath]
    d.attach_polygon(None, 0, labels, FaceInfo(CONECELL, cone=cone), ydarts=list(ypath))
    return d


def relator_ypath(p, cone, shift=0, orientation=1, turns=1):
    """Lift of the relator cycle of a classical cone read from ``shift``."""
    n = len(p.cones[cone].vertices)
    if orientation > 0:
        path = [((shift + k) % n) + 1 for k in range(n)]
    else:
        path = [-(((shift - 1 - k) % n) + 1) for k in range(n)]
    return path * turns


def single_square(p, square, rotation=0):
    d = DiscDiagram(p)
    word = p.base.square_boundaries(square)[rotation]
    d.attach_polygon(None, 0, list(word), FaceInfo(SQUARE, square=square))
    return d


def from_embedding(p, points, edges, cones=None):
    """Build a diagram from a straight-line planar embedding.

    ``points`` maps vertex -> (x, y); ``edges`` lists (u, v, label).
    Bounded faces become squares (found by their boundary reading) unless
    ``cones`` maps a frozenset of the face's vertices to (cone, lift function).
    """
    d = DiscDiagram(p)
    out = {}
    tail = {}
    head = {}
    for u, v, label in edges:
        a, b = d._new_pair(label)
        tail[a], head[a] = u, v
        tail[b], head[b] = v, u
        out.setdefault(u, []).append(a)
        out.setdefault(v, []).append(b)

    def angle(x):
        (x0, y0), (x1, y1) = points[tail[x]], points[head[x]]
        return math.atan2(y1 - y0, x1 - x0)

    ccw = {u: sorted(ds, key=angle) for u, ds in out.items()}
    for x in d.opp:
        around = ccw[head[x]]
        i = around.index(d.opp[x])
        d.nxt[x] = around[i - 1]
    seen = set()
    outer_set = None
    cyc_list = []
    for x in sorted(d.nxt):
        if x in seen:
            continue
        c = d.cycle(x)
        seen.update(c)
        area = 0.0
        for y in c:
            (x0, y0), (x1, y1) = points[tail[y]], points[head[y]]
            area += x0 * y1 - x1 * y0
        cyc_list.append((area, c))
    cyc_list.sort(key=lambda t: t[0])
    outer_area, outer_cycle = cyc_list[0]
    if outer_area >= 0 and len(cyc_list) > 1:
        raise DiagramError("embedding has no outer face")
    for y in outer_cycle:
        d.face[y] = d.outer
    for area, c in cyc_list[1:]:
        word = tuple(d.lab[y] for y in c)
        key = frozenset(tail[y] for y in c)
        if cones and key in cones:
            cone, lift = cones[key]
            f = d._new_face(FaceInfo(CONECELL, cone=cone))
            for y, t in zip(c, lift(word)):
                d.ymap[y] = t
        else:
            sq = p.base.find_square(word)
            if sq is None:
                raise DiagramError(f"face {word} is not a square of X")
            f = d._new_face(FaceInfo(SQUARE, square=sq))
        for y in c:
            d.face[y] = f
    d.base = min(outer_cycle)
    d._dart_counter = max(d.opp, default=0)
    d.vertex_names = {}
    vid = d.vertices()
    for x, u in tail.items():
        d.vertex_names[vid[x]] = u
    return d
