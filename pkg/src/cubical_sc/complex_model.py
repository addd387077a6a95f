"""Square complexes, morphisms between them and presentations.

A graph is a square complex without squares.  Darts are the oriented
edges; every dart has an ``opposite``.  A square is a closed path of four
darts.
"""
from dataclasses import dataclass, field
from itertools import combinations

from .errors import PresentationSyntaxError, ValidationError
from .words import is_cyclically_reduced, parse_word

CLASSICAL = "CLASSICAL"
SQUARE = "SQUARE"

FORMAT_VERSION = "scp/1"


@dataclass
class Verdict:
    ok: bool
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def _sort_key(x):
    # darts are letters in classical complexes and ints elsewhere
    if isinstance(x, str):
        return (0, x.lower(), x.isupper())
    if isinstance(x, int):
        return (1, abs(x), x < 0)
    return (2, repr(x))


class SquareComplex:
    """A combinatorial square complex (dimension at most 2)."""

    def __init__(self, vertices, darts, opposite, squares=(), name=""):
        self.name = name
        self.vertices = tuple(vertices)
        # darts: mapping dart -> (tail, head)
        self.ends = dict(darts)
        self.opposite = dict(opposite)
        self.squares = tuple(tuple(s) for s in squares)
        self._vertex_set = set(self.vertices)
        self.darts = tuple(sorted(self.ends, key=_sort_key))
        self.dart_rank = {d: k for k, d in enumerate(self.darts)}
        self._validate()
        self._out = {v: [] for v in self.vertices}
        for d in self.darts:
            self._out[self.tail(d)].append(d)
        self._corners = None

    def _validate(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise ValidationError("duplicate vertex ids")
        for d, (t, h) in self.ends.items():
            if t not in vs or h not in vs:
                raise ValidationError(f"dart {d!r} has an unknown endpoint")
            if d not in self.opposite:
                raise ValidationError(f"dart {d!r} has no opposite")
            o = self.opposite[d]
            if o == d:
                raise ValidationError(f"dart {d!r} is its own opposite")
            if self.opposite.get(o) != d:
                raise ValidationError(f"opposite is not an involution at {d!r}")
            if self.ends.get(o) != (h, t):
                raise ValidationError(f"dart {d!r} and its opposite disagree on endpoints")
        for s in self.squares:
            if len(s) != 4:
                raise ValidationError(f"square {s!r} does not have length 4")
            for k in range(4):
                a, b = s[k], s[(k + 1) % 4]
                if a not in self.ends or b not in self.ends:
                    raise ValidationError(f"square {s!r} uses an unknown dart")
                if self.head(a) != self.tail(b):
                    raise ValidationError(f"square {s!r} is not a closed path")

    # basic queries
    def tail(self, d):
        return self.ends[d][0]

    def head(self, d):
        return self.ends[d][1]

    def opp(self, d):
        return self.opposite[d]

    def out_darts(self, v):
        return self._out[v]

    def edges(self):
        """One representative dart per undirected edge."""
        seen, reps = set(), []
        for d in self.darts:
            if d not in seen:
                seen.add(d)
                seen.add(self.opp(d))
                reps.append(d)
        return reps

    def is_graph(self):
        return not self.squares

    def square_boundaries(self, k):
        """All 8 readings of square k: 4 rotations in each orientation."""
        s = self.squares[k]
        rev = tuple(self.opp(x) for x in reversed(s))
        out = []
        for base in (s, rev):
            for i in range(4):
                out.append(base[i:] + base[:i])
        return out

    def corners(self):
        """Map (a, b) -> list of (square index, c, d) with a b c d a square reading."""
        if self._corners is None:
            table = {}
            for k in range(len(self.squares)):
                for a, b, c, d in self.square_boundaries(k):
                    table.setdefault((a, b), []).append((k, c, d))
            self._corners = table
        return self._corners

    def flips(self, a, b):
        """Paths of length 2 homotopic to ``a b`` across a single square."""
        out = []
        for _, c, d in self.corners().get((a, b), ()):
            alt = (self.opp(d), self.opp(c))
            if alt not in out:
                out.append(alt)
        return out

    def find_square(self, path):
        """Index of a square whose boundary reads ``path`` in some rotation or orientation."""
        path = tuple(path)
        for k in range(len(self.squares)):
            if path in self.square_boundaries(k):
                return k
        return None

    def is_closed_path(self, path):
        if not path:
            return True
        for a, b in zip(path, path[1:]):
            if self.head(a) != self.tail(b):
                return False
        return self.head(path[-1]) == self.tail(path[0])

    def is_path(self, path):
        return all(self.head(a) == self.tail(b) for a, b in zip(path, path[1:]))

    # links
    def link(self, v):
        """Vertices and edge list of the link at v; edges carry the square index."""
        verts = list(self.out_darts(v))
        edges = []
        for k, s in enumerate(self.squares):
            for i in range(4):
                a, b = s[i], s[(i + 1) % 4]
                if self.head(a) == v:
                    edges.append((self.opp(a), b, k))
        return verts, edges

    def hyperplanes(self):
        """Map dart -> hyperplane id; opposite sides of squares share a class."""
        parent = {}

        def find(x):
            while parent.setdefault(x, x) != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)

        edge_of = {}
        for k, d in enumerate(self.edges()):
            edge_of[d] = k
            edge_of[self.opp(d)] = k
        for s in self.squares:
            union(edge_of[s[0]], edge_of[s[2]])
            union(edge_of[s[1]], edge_of[s[3]])
        roots = {}
        out = {}
        for d in self.darts:
            r = find(edge_of[d])
            out[d] = roots.setdefault(r, len(roots))
        return out

    def relabeled(self, vperm, dperm):
        """Isomorphic copy with vertex/dart ids renamed (used by property tests)."""
        return SquareComplex(
            [vperm[v] for v in self.vertices],
            {dperm[d]: (vperm[t], vperm[h]) for d, (t, h) in self.ends.items()},
            {dperm[d]: dperm[o] for d, o in self.opposite.items()},
            [tuple(dperm[x] for x in s) for s in self.squares],
            self.name,
        )

    def __repr__(self):
        return (f"SquareComplex({self.name!r}, V={len(self.vertices)}, "
                f"E={len(self.darts) // 2}, S={len(self.squares)})")


def check_npc(c):
    """Link condition: every vertex link is a simple graph of girth >= 4."""
    violations = []
    for v in c.vertices:
        verts, edges = c.link(v)
        seen = {}
        adj = {x: set() for x in verts}
        for a, b, k in edges:
            if a == b:
                violations.append((v, ("loop", a, k)))
                continue
            key = frozenset((a, b))
            if key in seen:
                violations.append((v, ("bigon", a, b, seen[key], k)))
                continue
            seen[key] = k
            adj[a].add(b)
            adj[b].add(a)
        for x in verts:
            for y, z in combinations(sorted(adj[x], key=_sort_key), 2):
                if z in adj[y] and _sort_key(x) < _sort_key(y) and _sort_key(x) < _sort_key(z):
                    violations.append((v, ("triangle", x, y, z)))
    return Verdict(not violations, violations)


class ComplexMorphism:
    """Combinatorial map source -> target given on vertices and darts."""

    def __init__(self, source, target, vmap, dmap, smap=None):
        self.source = source
        self.target = target
        self.vmap = dict(vmap)
        self.dmap = dict(dmap)
        self._validate()
        if smap is None:
            smap = {}
            for k, s in enumerate(source.squares):
                img = target.find_square([self.dmap[x] for x in s])
                if img is None:
                    raise ValidationError(f"square {k} of {source.name} has no image square")
                smap[k] = img
        self.smap = dict(smap)

    def _validate(self):
        s, t = self.source, self.target
        for v in s.vertices:
            if v not in self.vmap or self.vmap[v] not in t._vertex_set:
                raise ValidationError(f"vertex {v!r} has no image")
        for d in s.darts:
            if d not in self.dmap:
                raise ValidationError(f"dart {d!r} has no image")
            img = self.dmap[d]
            if img not in t.ends:
                raise ValidationError(f"dart {d!r} maps to unknown dart {img!r}")
            if self.dmap[s.opp(d)] != t.opp(img):
                raise ValidationError(f"dart map does not commute with opposite at {d!r}")
            if (self.vmap[s.tail(d)], self.vmap[s.head(d)]) != t.ends[img]:
                raise ValidationError(f"dart {d!r} endpoints disagree with the vertex map")

    def image(self, path):
        return tuple(self.dmap[d] for d in path)


def check_local_isometry(m):
    y, x = m.source, m.target
    violations = []
    for v in y.vertices:
        seen = {}
        for d in y.out_darts(v):
            img = m.dmap[d]
            if img in seen:
                violations.append(("fold", v, seen[img], d))
            else:
                seen[img] = d
    xc = x.corners()
    yc = y.corners()
    for a in y.darts:
        for b in y.out_darts(y.head(a)):
            if b == y.opp(a):
                continue
            if (m.dmap[a], m.dmap[b]) in xc and (a, b) not in yc:
                violations.append(("missing_square", a, b))
    return Verdict(not violations, violations)


def wedge_of_circles(gens):
    ends = {}
    opp = {}
    for g in gens:
        ends[g] = (0, 0)
        ends[g.upper()] = (0, 0)
        opp[g] = g.upper()
        opp[g.upper()] = g
    return SquareComplex([0], ends, opp, (), name="X")


def cycle_complex(n, name="Y"):
    """Cycle of length n; dart k+1 runs from k to k+1, its opposite is -(k+1)."""
    ends, opp = {}, {}
    for k in range(n):
        ends[k + 1] = (k, (k + 1) % n)
        ends[-(k + 1)] = ((k + 1) % n, k)
        opp[k + 1] = -(k + 1)
        opp[-(k + 1)] = k + 1
    return SquareComplex(range(n), ends, opp, (), name=name)


def cycle_morphism(word, base, name="Y"):
    y = cycle_complex(len(word), name)
    dmap = {}
    for k, x in enumerate(word):
        dmap[k + 1] = x
        dmap[-(k + 1)] = x.swapcase()
    return ComplexMorphism(y, base, {v: 0 for v in y.vertices}, dmap)


class Presentation:
    """Base complex X with cones Y_i and local isometries Y_i -> X."""

    def __init__(self, base, cones, maps, kind, gens=(), relators=(), name=""):
        self.base = base
        self.cones = list(cones)
        self.maps = list(maps)
        self.kind = kind
        self.gens = tuple(gens)
        self.relators = tuple(relators)
        self.name = name
        if len(self.cones) != len(self.maps):
            raise ValidationError("every cone needs a map")
        for i, m in enumerate(self.maps):
            verdict = check_local_isometry(m)
            if not verdict.ok:
                raise ValidationError(f"map of cone {i} is not a local isometry: {verdict.violations[:3]}")

    @property
    def classical(self):
        return self.kind == CLASSICAL

    @classmethod
    def from_relators(cls, gens, relators, name=""):
        gens = tuple(gens)
        for r in relators:
            if not r:
                raise ValidationError("empty relator")
            if not is_cyclically_reduced(r):
                raise ValidationError(f"relator {r} is not cyclically reduced")
            for x in r:
                if x.lower() not in gens:
                    raise ValidationError(f"relator {r} uses unknown generator {x}")
        base = wedge_of_circles(gens)
        maps = [cycle_morphism(r, base, name=f"Y{i + 1}") for i, r in enumerate(relators)]
        return cls(base, [m.source for m in maps], maps, CLASSICAL, gens, tuple(relators), name)

    def __repr__(self):
        if self.classical:
            return f"Presentation<{','.join(self.gens)} | {','.join(self.relators)}>"
        return f"Presentation(SQUARE, {self.base!r}, cones={len(self.cones)})"

    def relator_text(self, i):
        return self.relators[i] if self.classical else str(i)


# ---------------------------------------------------------------- parsing

def _strip(line):
    return line.split("#", 1)[0].strip()


def parse_presentation(text, name=""):
    """Parse the line-oriented presentation format (see docs/format.md)."""
    lines = text.splitlines()
    if any(_strip(l).startswith("[") for l in lines):
        return _parse_square(lines, name)
    gens = None
    rels = []
    for ln, raw in enumerate(lines, 1):
        line = _strip(raw)
        if not line:
            continue
        head, *rest = line.split()
        if head == "gens":
            if gens is not None:
                raise PresentationSyntaxError("second gens line", ln, 1)
            for g in rest:
                if len(g) != 1 or not g.islower():
                    col = raw.find(g) + 1
                    raise PresentationSyntaxError(f"generator {g!r} must be one lowercase letter", ln, col)
            if len(set(rest)) != len(rest):
                raise PresentationSyntaxError("repeated generator", ln, 1)
            gens = rest
        elif head == "rel":
            if gens is None:
                raise PresentationSyntaxError("rel before gens", ln, 1)
            try:
                w = parse_word(rest, gens)
            except ValueError as exc:
                raise PresentationSyntaxError(str(exc), ln, raw.find("rel") + 5) from None
            rels.append(w)
        elif head == "name":
            name = " ".join(rest)
        else:
            raise PresentationSyntaxError(f"unknown keyword {head!r}", ln, raw.find(head) + 1)
    if gens is None:
        raise PresentationSyntaxError("missing gens line", None)
    return Presentation.from_relators(gens, rels, name)


def _parse_int(tok, ln, raw):
    try:
        return int(tok)
    except ValueError:
        raise PresentationSyntaxError(f"expected an integer, got {tok!r}", ln, raw.find(tok) + 1) from None


def _parse_square(lines, name):
    sections = []  # (kind, label, rows)
    current = None
    for ln, raw in enumerate(lines, 1):
        line = _strip(raw)
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise PresentationSyntaxError("unterminated section header", ln, 1)
            parts = line[1:-1].split()
            if len(parts) != 2 or parts[0] not in ("complex", "cone", "map"):
                raise PresentationSyntaxError(f"bad section header {line!r}", ln, 1)
            current = (parts[0], parts[1], [])
            sections.append(current)
            continue
        if line.split()[0] == "name" and current is None:
            name = line.split(None, 1)[1] if len(line.split()) > 1 else ""
            continue
        if current is None:
            raise PresentationSyntaxError("row outside any section", ln, 1)
        current[2].append((ln, raw, line.split()))

    complexes = {}
    maps = {}
    for kind, label, rows in sections:
        if kind in ("complex", "cone"):
            if label in complexes:
                raise PresentationSyntaxError(f"section {label} defined twice", rows[0][0] if rows else None)
            complexes[label] = (kind, _build_complex(label, rows))
        else:
            maps[label] = rows
    base = [c for lab, (k, c) in complexes.items() if k == "complex"]
    if len(base) != 1:
        raise PresentationSyntaxError("exactly one [complex X] section is required", None)
    base = base[0]
    cones, morphisms = [], []
    for label, (kind, c) in complexes.items():
        if kind != "cone":
            continue
        if label not in maps:
            raise ValidationError(f"cone {label} has no [map {label}] section")
        vmap, dmap = {}, {}
        for ln, raw, toks in maps[label]:
            if toks[0] not in ("vertex", "dart") or len(toks) != 3:
                raise PresentationSyntaxError("map rows are 'vertex <y> <x>' or 'dart <y> <x>'", ln, 1)
            if toks[0] == "vertex":
                vmap[toks[1]] = toks[2]
            else:
                a, b = _parse_int(toks[1], ln, raw), _parse_int(toks[2], ln, raw)
                dmap[a] = b
                dmap[-a] = -b
        m = ComplexMorphism(c, base, vmap, dmap)
        if len(c.vertices) == len(base.vertices) and len(c.darts) == len(base.darts) and \
                len(c.squares) == len(base.squares):
            raise ValidationError(f"cone {label} maps onto all of X")
        cones.append(c)
        morphisms.append(m)
    return Presentation(base, cones, morphisms, SQUARE, name=name)


def _build_complex(label, rows):
    vertices, ends, opp, squares = [], {}, {}, []
    for ln, raw, toks in rows:
        head = toks[0]
        if head == "vertex":
            vertices.extend(toks[1:])
        elif head == "dart":
            if len(toks) != 4:
                raise PresentationSyntaxError("dart rows are 'dart <id> <tail> <head>'", ln, 1)
            d = _parse_int(toks[1], ln, raw)
            if d <= 0:
                raise PresentationSyntaxError("dart ids are positive; -id names the opposite", ln, raw.find(toks[1]) + 1)
            if d in ends:
                raise PresentationSyntaxError(f"dart {d} defined twice", ln, 1)
            ends[d] = (toks[2], toks[3])
            ends[-d] = (toks[3], toks[2])
            opp[d], opp[-d] = -d, d
        elif head == "square":
            if len(toks) != 5:
                raise PresentationSyntaxError("square rows list four darts", ln, 1)
            squares.append(tuple(_parse_int(t, ln, raw) for t in toks[1:]))
        else:
            raise PresentationSyntaxError(f"unknown row {head!r}", ln, raw.find(head) + 1)
    return SquareComplex(vertices, ends, opp, squares, name=label)


def load_presentation(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    import os
    return parse_presentation(text, name=os.path.splitext(os.path.basename(path))[0])
