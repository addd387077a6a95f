"""Helpers for words over single-letter generators.

Lowercase letters are generators, uppercase letters their inverses.
"""


def inverse(w):
    return w[::-1].swapcase()


def letter_inverse(x):
    return x.swapcase()


def free_reduce(w):
    out = []
    for x in w:
        if out and out[-1] == x.swapcase():
            out.pop()
        else:
            out.append(x)
    return "".join(out)


def is_freely_reduced(w):
    return all(w[i] != w[i + 1].swapcase() for i in range(len(w) - 1))


def cyclic_reduce(w):
    w = free_reduce(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == w[j - 1].swapcase():
        i += 1
        j -= 1
    return w[i:j]


def is_cyclically_reduced(w):
    return is_freely_reduced(w) and (len(w) < 2 or w[0] != w[-1].swapcase())


def rotations(w):
    return [w[i:] + w[:i] for i in range(len(w))]


def cyclic_subword(w, start, length):
    """Subword of the cyclic word ``w`` read from ``start``; ``length`` <= len(w)."""
    n = len(w)
    start %= n
    if start + length <= n:
        return w[start:start + length]
    return w[start:] + w[:start + length - n]


def exponent_vector(w, gens):
    idx = {g: k for k, g in enumerate(gens)}
    v = [0] * len(gens)
    for x in w:
        if x.islower():
            v[idx[x]] += 1
        else:
            v[idx[x.lower()]] -= 1
    return v


def parse_word(tokens, gens=None):
    """Join word tokens; ``x^n`` means n copies of x (negative n inverts)."""
    out = []
    for tok in tokens:
        if "^" in tok:
            base, _, exp = tok.partition("^")
            n = int(exp)
            piece = base if n >= 0 else inverse(base)
            out.append(piece * abs(n))
        else:
            out.append(tok)
    w = "".join(out)
    if gens is not None:
        allowed = set(gens) | {g.upper() for g in gens}
        bad = [x for x in w if x not in allowed]
        if bad:
            raise ValueError(f"unknown letter {bad[0]!r}")
    return w
