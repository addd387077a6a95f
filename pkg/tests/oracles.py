"""Brute-force reference computations, written independently of the package."""
import itertools
import random
from collections import deque


def inv(w):
    return w[::-1].swapcase()


def reduce_free(w):
    out = []
    for x in w:
        if out and out[-1] == x.swapcase():
            out.pop()
        else:
            out.append(x)
    return "".join(out)


def rotations(w):
    return {w[k:] + w[:k] for k in range(len(w))}


def symmetrized(rels):
    star = set()
    for r in rels:
        star |= rotations(r) | rotations(inv(r))
    return star


def common_prefix_pieces(rels):
    """Every word that is a common prefix of two distinct elements of the symmetrized set."""
    star = sorted(symmetrized(rels))
    out = set()
    for a, b in itertools.combinations(star, 2):
        k = 0
        while k < min(len(a), len(b)) and a[k] == b[k]:
            k += 1
        out.update(a[:j] for j in range(1, k + 1))
    return out


def is_proper_power(w):
    n = len(w)
    return any(n % k == 0 and w[:k] * (n // k) == w for k in range(1, n))


def random_relator(rng, n, letters="aAbB"):
    while True:
        w = ""
        while len(w) < n:
            x = rng.choice(letters)
            if w and x == w[-1].swapcase():
                continue
            w += x
        if w[0] != w[-1].swapcase() and not is_proper_power(w):
            return w


def random_clean_relators(seed, max_total=24):
    """Cyclically reduced, no proper powers, pairwise non-conjugate (also up to inversion)."""
    rng = random.Random(seed)
    while True:
        k = rng.randint(1, 3)
        total = rng.randint(2 * k, max_total)
        sizes = [2] * k
        for _ in range(total - 2 * k):
            sizes[rng.randrange(k)] += 1
        rels = [random_relator(rng, s) for s in sizes]
        classes = [rotations(r) | rotations(inv(r)) for r in rels]
        if all(not (classes[i] & classes[j]) for i, j in itertools.combinations(range(k), 2)):
            return rels


def min_cover(word, pieces, allow_letters=True):
    """Fewest factors (pieces, or single letters if allowed) whose concatenation is word; BFS over cut points."""
    n = len(word)
    dist = {0: 0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        if i == n:
            return dist[i]
        for j in range(i + 1, n + 1):
            part = word[i:j]
            if (allow_letters and j - i == 1) or part in pieces:
                if j not in dist:
                    dist[j] = dist[i] + 1
                    queue.append(j)
    return None


def min_cyclic_cover(word, pieces):
    """Fewest pieces covering the cyclic word, over all starting points (None if impossible)."""
    best = None
    for k in range(len(word)):
        c = min_cover(word[k:] + word[:k], pieces, allow_letters=False)
        if c is not None and (best is None or c < best):
            best = c
    return best


def tree_ball_size(rank, radius):
    """Vertices in a ball of the 2*rank-regular tree."""
    deg = 2 * rank
    return 1 + sum(deg * (deg - 1) ** (k - 1) for k in range(1, radius + 1))


def lattice_ball_size(radius):
    return 2 * radius * radius + 2 * radius + 1


# ------------------------------------------------------------ finite images

def _perm_mul(p, q):
    """p then q."""
    return tuple(q[i] for i in p)


def _perm_inv(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def _evaluate(word, images, ident):
    acc = ident
    for x in word:
        g = images[x.lower()]
        acc = _perm_mul(acc, g if x.islower() else _perm_inv(g))
    return acc


def surface_images(rng, genus, n):
    """Random homomorphism of the genus-g surface group into S_n.

    Pairs (a_i, b_i) map to (x, y) then (y, x) alternately, so the product of
    commutators cancels; a last odd pair maps to commuting powers.
    """
    letters = "abcdefgh"[:2 * genus]
    ident = tuple(range(n))
    images = {}
    pairs = [(letters[2 * i], letters[2 * i + 1]) for i in range(genus)]
    k = 0
    while k + 1 < len(pairs):
        x = tuple(rng.sample(range(n), n))
        y = tuple(rng.sample(range(n), n))
        images[pairs[k][0]], images[pairs[k][1]] = x, y
        images[pairs[k + 1][0]], images[pairs[k + 1][1]] = y, x
        k += 2
    if k < len(pairs):
        z = tuple(rng.sample(range(n), n))
        images[pairs[k][0]] = z
        images[pairs[k][1]] = _perm_mul(z, z)
    return images, ident


def detects_nontrivial(word, genus, tries=400, seed=0):
    """True when some random finite image of the surface group sends word to a non-identity."""
    rng = random.Random(seed)
    for t in range(tries):
        images, ident = surface_images(rng, genus, rng.choice((3, 4, 5, 6, 7)))
        if _evaluate(word, images, ident) != ident:
            return True
    return False


def metric_condition_holds(rels, alpha):
    """Every common prefix of two distinct symmetrized words is shorter than alpha times both lengths."""
    star = []
    for r in rels:
        for w in rotations(r) | rotations(inv(r)):
            star.append((w, len(r)))
    star = sorted(set(star))
    for (a, la), (b, lb) in itertools.combinations(star, 2):
        k = 0
        while k < min(len(a), len(b)) and a[k] == b[k]:
            k += 1
        if k and not (k < alpha * la and k < alpha * lb):
            return False
    return True


def nonmetric_condition_holds(rels, pval):
    """No relator is a cyclic concatenation of fewer than pval pieces."""
    pieces = common_prefix_pieces(rels)
    for r in rels:
        c = min_cyclic_cover(r, pieces)
        if c is not None and c < pval:
            return False
    return True


def piece_distances(ball, pieces, source):
    """BFS from source where every edge and every traced piece word is one step."""
    steps = {}

    def out(u):
        got = steps.get(u)
        if got is None:
            got = set(ball.neighbours(u))
            for w in pieces:
                v = ball.trace(u, w)
                if v is not None:
                    got.add(v)
            steps[u] = got
        return got

    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in out(u):
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def random_trivial_word(rng, rels, gens, conjugates=3, conj_len=3):
    """Freely reduced product of conjugates of relators and their inverses."""
    letters = gens + gens.upper()
    out = ""
    for _ in range(conjugates):
        g = "".join(rng.choice(letters) for _ in range(rng.randint(0, conj_len)))
        r = rng.choice(rels)
        r = r if rng.random() < 0.5 else inv(r)
        k = rng.randrange(len(r))
        out += g + r[k:] + r[:k] + inv(g)
    return reduce_free(out)


def read_boundary(d):
    """Outer-face labels from the basepoint, walked from the raw dart tables."""
    if d.base is None:
        return ()
    cyc = [d.base]
    x = d.nxt[d.base]
    while x != d.base:
        cyc.append(x)
        x = d.nxt[x]
    # the outer face runs clockwise around the disc; reverse it and flip each dart
    walk = cyc[:1] + cyc[:0:-1]
    return tuple(d.lab[d.opp[x]] for x in walk)


def count_comp(d):
    """(cone-cells, squares) counted straight from the face table."""
    kinds = [i.kind for f, i in d.info.items() if f != d.outer and f in set(d.face.values())]
    return (kinds.count("CONECELL"), kinds.count("SQUARE"))
