"""Exact rational linear algebra for small integer matrices."""
from fractions import Fraction
from math import gcd


def nullspace(rows, ncols):
    """Integer basis of {x : r.x = 0 for every row r}."""
    m = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        lead = m[r][c]
        m[r] = [x / lead for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for i, c in enumerate(pivots):
            vec[c] = -m[i][f]
        den = 1
        for x in vec:
            den = den * x.denominator // gcd(den, x.denominator)
        ints = [int(x * den) for x in vec]
        g = 0
        for x in ints:
            g = gcd(g, abs(x))
        basis.append([x // g for x in ints] if g else ints)
    return basis


def in_row_span(rows, vec):
    """True iff vec is a rational combination of rows."""
    n = len(vec)
    null = nullspace(rows, n) if rows else [[int(i == j) for j in range(n)] for i in range(n)]
    return all(sum(a * b for a, b in zip(u, vec)) == 0 for u in null)
