"""Shortlex Knuth-Bendix completion for group presentations.

Used only as an optional normal-form source: when completion finishes
within budget the reduced word is a canonical label for group elements.
"""
from .words import inverse


class RewritingSystem:
    def __init__(self, rules, order):
        self.rules = dict(rules)
        self.order = order
        self._lengths = sorted({len(l) for l in self.rules}, reverse=True)

    def reduce(self, w):
        rules = self.rules
        changed = True
        while changed:
            changed = False
            for i in range(len(w)):
                for n in self._lengths:
                    if i + n <= len(w):
                        rhs = rules.get(w[i:i + n])
                        if rhs is not None:
                            w = w[:i] + rhs + w[i + n:]
                            changed = True
                            break
                if changed:
                    break
        return w

    def __len__(self):
        return len(self.rules)


def _key(order, w):
    return (len(w), [order[c] for c in w])


def knuth_bendix(gens, relators, max_rules=200, max_rounds=40):
    """Return a confluent RewritingSystem, or None if the budget runs out."""
    letters = []
    for g in gens:
        letters += [g, g.upper()]
    order = {c: k for k, c in enumerate(letters)}
    rules = {}

    def reduce(w):
        return RewritingSystem(rules, order).reduce(w)

    def add(a, b):
        a, b = reduce(a), reduce(b)
        if a == b:
            return False
        if _key(order, a) < _key(order, b):
            a, b = b, a
        rules[a] = b
        return True

    eqs = [(g + g.upper(), "") for g in gens] + [(g.upper() + g, "") for g in gens]
    for r in relators:
        for s in range(len(r)):
            c = r[s:] + r[:s]
            for w in (c, inverse(c)):
                h = (len(w) + 1) // 2
                eqs.append((w[:h], inverse(w[h:])))
    for a, b in eqs:
        add(a, b)
    for _ in range(max_rounds):
        _interreduce(rules, order)
        pending = []
        items = list(rules.items())
        for l1, r1 in items:
            for l2, r2 in items:
                for k in range(1, min(len(l1), len(l2))):
                    if l1[-k:] == l2[:k]:
                        a = reduce(r1 + l2[k:])
                        b = reduce(l1[:-k] + r2)
                        if a != b:
                            pending.append((a, b))
        if not pending:
            return RewritingSystem(rules, order)
        for a, b in pending:
            add(a, b)
        if len(rules) > max_rules:
            return None
    return None


def _interreduce(rules, order):
    changed = True
    while changed:
        changed = False
        for lhs in list(rules):
            if lhs not in rules:
                continue
            rhs = rules.pop(lhs)
            rs = RewritingSystem(rules, order)
            l2, r2 = rs.reduce(lhs), rs.reduce(rhs)
            if l2 != r2:
                if _key(order, l2) < _key(order, r2):
                    l2, r2 = r2, l2
                rules[l2] = r2
            if (l2, r2) != (lhs, rhs):
                changed = True
