"""C(p) and C'(alpha) verdicts with re-checkable witnesses."""
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .covers import is_null_homotopic
from .errors import BudgetExceeded
from .pieces import CONE, WALL, cyclic_piece_count, get_pieces
from .words import cyclic_reduce

HOLDS = "HOLDS"
FAILS = "FAILS"
UNKNOWN = "UNKNOWN"

DEFAULT_CYCLE_CAP = 200_000


@dataclass
class ConditionVerdict:
    condition: str
    result: str
    witness: dict = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def holds(self):
        return self.result == HOLDS


def enumerate_cycles(c, max_len, cap=DEFAULT_CYCLE_CAP):
    """Cyclically reduced closed paths up to max_len, one per rotation/inversion class.

    Yields in order of length, then dart order of the canonical reading.
    """
    rank = c.dart_rank

    def canon(path):
        inv = tuple(c.opp(d) for d in reversed(path))
        best = None
        for w in (path, inv):
            for s in range(len(w)):
                rot = w[s:] + w[:s]
                key = [rank[d] for d in rot]
                if best is None or key < best[0]:
                    best = (key, rot)
        return best

    count = 0
    for length in range(1, max_len + 1):
        found = {}
        for start in c.vertices:
            stack = [(d,) for d in c.out_darts(start)]
            while stack:
                path = stack.pop()
                if len(path) == length:
                    if c.head(path[-1]) == start and path[-1] != c.opp(path[0]):
                        key, rot = canon(path)
                        found.setdefault(tuple(key), rot)
                    continue
                last = path[-1]
                for d in c.out_darts(c.head(last)):
                    if d != c.opp(last):
                        stack.append(path + (d,))
        for key in sorted(found):
            count += 1
            if count > cap:
                raise BudgetExceeded(f"more than {cap} candidate cycles")
            yield found[key]


def is_essential(p, i, cycle):
    """True/False, or None if the square-complex oracle ran out of budget."""
    if p.classical:
        return bool(cyclic_reduce("".join(p.maps[i].image(cycle))))
    res = is_null_homotopic(p.cones[i], cycle)
    return None if res is None else not res


def _cycle_query(p, i, cycle):
    # classical membership is by word; square membership by cone path
    if p.classical:
        return "".join(p.maps[i].image(cycle)), None
    return cycle, i


def _cycle_cost(p, ps, i, cycle, include_walls=True):
    q, cone = _cycle_query(p, i, cycle)
    return cyclic_piece_count(q, ps, p, cone, include_walls)


def is_simply_connected(c):
    """True when every loop of a spanning-tree basis is null-homotopic; None if the oracle gives up."""
    root = c.vertices[0]
    to = {root: ()}
    queue = [root]
    while queue:
        v = queue.pop(0)
        for d in c.out_darts(v):
            h = c.head(d)
            if h not in to:
                to[h] = to[v] + (d,)
                queue.append(h)
    tree = {x for path in to.values() for x in path}
    for d in c.darts:
        if d in tree or c.opp(d) in tree:
            continue
        back = tuple(c.opp(x) for x in reversed(to[c.head(d)]))
        ok = is_null_homotopic(c, to[c.tail(d)] + (d,) + back)
        if not ok:
            return ok
    return True


def systole(p, i, max_len=None):
    """Shortest essential closed path length in cone i.

    math.inf for a simply connected cone; None if nothing was found within max_len.
    """
    if p.classical:
        return len(p.relators[i])
    c = p.cones[i]
    if is_simply_connected(c):
        return math.inf
    if max_len is None:
        max_len = max(2 * len(c.darts), 4)
    for cyc in enumerate_cycles(c, max_len):
        ess = is_essential(p, i, cyc)
        if ess is None:
            return None
        if ess:
            return len(cyc)
    return None


def _witness(p, i, cycle, count, start, cuts):
    rot = cycle[start:] + cycle[:start]
    q, _ = _cycle_query(p, i, rot)
    parts = [q[a:b] for a, b in cuts]
    if p.classical:
        text = "".join(q)
    else:
        text = " ".join(str(d) for d in rot)
    return {"cone": i, "cycle": rot, "word": text, "pieces": parts, "count": count}


def check_nonmetric_condition(p, pval, ps=None, cycle_cap=DEFAULT_CYCLE_CAP):
    cond = f"C({pval})"
    ps = ps or get_pieces(p)
    diag = {"M": ps.M}
    if not p.cones:
        diag["note"] = "no cones"
        return ConditionVerdict(cond, HOLDS, None, diag)
    if ps.M == 0:
        diag["note"] = "no pieces: holds vacuously"
        return ConditionVerdict(cond, HOLDS, None, diag)
    limit = (pval - 1) * ps.M
    diag["max_cycle_length"] = limit
    unknown_reasons = []
    if ps.unbounded:
        unknown_reasons.append("piece diameters hit the enumeration cap")
    blocked = None
    try:
        for i in range(len(p.cones)):
            for cyc in enumerate_cycles(p.cones[i], limit, cycle_cap):
                count, start, cuts = _cycle_cost(p, ps, i, cyc)
                if count >= pval:
                    continue
                ess = is_essential(p, i, cyc)
                if ess is None:
                    unknown_reasons.append(f"essentiality undecided for a cycle of length {len(cyc)}")
                    continue
                if not ess:
                    continue
                cone_only = _cycle_cost(p, ps, i, cyc, include_walls=False)
                if cone_only[0] < pval:
                    return ConditionVerdict(cond, FAILS, _witness(p, i, cyc, *cone_only), diag)
                if blocked is None:
                    blocked = _witness(p, i, cyc, count, start, cuts)
    except BudgetExceeded as exc:
        unknown_reasons.append(str(exc))
    if blocked is not None:
        diag["wall_only_witness"] = blocked
        unknown_reasons.append("failure relies on over-approximated wall pieces")
    if unknown_reasons:
        diag["unknown"] = unknown_reasons
        return ConditionVerdict(cond, UNKNOWN, None, diag)
    return ConditionVerdict(cond, HOLDS, None, diag)


def _cones_of(piece):
    if piece.kind == CONE and len(piece.provenance) == 3 and not isinstance(piece.path, str):
        i, j, _ = piece.provenance
        return sorted({i, j})
    if piece.kind == WALL:
        return [piece.provenance[0]]
    return list(piece.provenance)


def check_metric_condition(p, alpha, ps=None):
    alpha = Fraction(alpha)
    cond = f"C'({alpha})"
    ps = ps or get_pieces(p)
    diag = {"M": ps.M}
    systoles = {}
    for i in range(len(p.cones)):
        s = systole(p, i)
        if s is None:
            diag["unknown"] = [f"systole of cone {i} undecided"]
            return ConditionVerdict(cond, UNKNOWN, None, diag)
        systoles[i] = s
    diag["systoles"] = systoles
    wall_failure = None
    for piece in ps.maximal:
        for i in _cones_of(piece):
            if not piece.diameter < alpha * systoles[i]:
                w = {"piece": piece.path, "kind": piece.kind, "diameter": piece.diameter,
                     "cone": i, "systole": systoles[i]}
                if piece.kind == CONE:
                    return ConditionVerdict(cond, FAILS, w, diag)
                if wall_failure is None:
                    wall_failure = w
    if wall_failure is not None:
        diag["wall_only_witness"] = wall_failure
        diag["unknown"] = ["failure relies on over-approximated wall pieces"]
        return ConditionVerdict(cond, UNKNOWN, None, diag)
    return ConditionVerdict(cond, HOLDS, None, diag)


def piece_systole(p, i=None, ps=None, cycle_cap=DEFAULT_CYCLE_CAP):
    """Least piece count of an essential closed path in cone i (all cones if i is None).

    Returns math.inf when no essential cycle is a concatenation of pieces,
    None when the enumeration was inconclusive.
    """
    ps = ps or get_pieces(p)
    if i is None:
        vals = [piece_systole(p, k, ps, cycle_cap) for k in range(len(p.cones))]
        if any(v is None for v in vals):
            return None
        return min(vals, default=math.inf)
    if ps.M == 0:
        return math.inf
    c = p.cones[i]
    if p.classical:
        seed = tuple(range(1, len(c.vertices) + 1))
        best = _cycle_cost(p, ps, i, seed)[0]
        if best == math.inf:
            # every essential cycle of a cycle graph passes every edge
            return math.inf
    elif is_simply_connected(c):
        return math.inf
    else:
        best = math.inf
    limit = (best - 1) * ps.M if best != math.inf else max(2 * len(c.darts), 4)
    length_seen = 0
    try:
        for cyc in enumerate_cycles(c, limit, cycle_cap):
            if best != math.inf and len(cyc) > (best - 1) * ps.M:
                break
            length_seen = len(cyc)
            count = _cycle_cost(p, ps, i, cyc)[0]
            if count >= best:
                continue
            ess = is_essential(p, i, cyc)
            if ess is None:
                return None
            if ess:
                best = count
    except BudgetExceeded:
        return None
    if best == math.inf and not p.classical:
        return None
    return best


def _family_pieces_ok(p, ps, n):
    long = {"a" * (n - 1), "A" * (n - 1)}
    return "a" * (n - 1) in ps.words and all(q.path in long or q.diameter <= 2 for q in ps.maximal)


def family_words(length):
    """Candidate w for <a,b | a^n w>: freely reduced, starts and ends with b, no aa or AA.

    Yielded in lexicographic order over the alphabet a, A, b, B.
    """
    def grow(w):
        if len(w) == length:
            if w[-1] == "b":
                yield w
            return
        for x in "aAbB":
            if x == w[-1].swapcase() or (x in "aA" and w[-1] == x):
                continue
            yield from grow(w + x)

    yield from grow("b")


def find_family_word(length=12, exponents=range(5, 11), pval=7):
    """First w (in family_words order) making every a^n w a C(pval) relator whose
    pieces, apart from a^(n-1), have length at most 2.

    Returns (w, candidates tried) or (None, tried).
    """
    from .complex_model import Presentation
    exponents = list(exponents)
    tried = 0
    for w in family_words(length):
        tried += 1
        good = True
        for n in exponents:
            p = Presentation.from_relators("ab", ["a" * n + w])
            ps = get_pieces(p)
            if not _family_pieces_ok(p, ps, n):
                good = False
                break
        if good and all(check_nonmetric_condition(Presentation.from_relators("ab", ["a" * n + w]), pval).holds
                        for n in exponents):
            return w, tried
    return None, tried
