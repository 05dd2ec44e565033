"""Independent brute-force references.

These deliberately avoid the package's data structures: plain Fractions,
explicit word enumeration, and point-membership tests.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product


def star(gens):
    s = {Fraction(1)}
    for g in gens:
        g = Fraction(g)
        s.add(g)
        s.add(1 / g)
    return sorted(s)


def corridor_words(gens, lo, hi, n):
    """Every product of a word of length <= n over T* whose prefixes stay in [lo, hi]."""
    st = star(gens)
    found = {Fraction(1)}
    for length in range(1, n + 1):
        for word in product(st, repeat=length):
            x = Fraction(1)
            ok = True
            for t in word:
                x *= t
                if not lo <= x <= hi:
                    ok = False
                    break
            if ok:
                found.add(x)
    return found


def corridor_words_pruned(gens, lo, hi, n):
    """Same set via depth-first search that abandons a word once a prefix leaves."""
    st = star(gens)
    found = set()

    def dfs(x, k):
        found.add(x)
        if k == n:
            return
        for t in st:
            y = x * t
            if lo <= y <= hi:
                dfs(y, k + 1)

    dfs(Fraction(1), 0)
    return found


def point_orbit(x, gens, lo, hi, n, lo_closed=True, hi_closed=True):
    """Points t_1...t_k x (k <= n) with every partial product inside the interval."""

    def inside(y):
        return (lo < y or (lo_closed and y == lo)) and (y < hi or (hi_closed and y == hi))

    st = star(gens)
    found = {Fraction(x)}
    for length in range(1, n + 1):
        for word in product(st, repeat=length):
            y = Fraction(x)
            ok = True
            for t in word:
                y *= t
                if not inside(y):
                    ok = False
                    break
            if ok:
                found.add(y)
    return found


def _clip(piece, I):
    """Intersect (lo, hi, lo_closed, hi_closed) tuples; None when empty."""
    a, b, ac, bc = piece
    c, d, cc, dc = I
    if a > c:
        lo, lc = a, ac
    elif a < c:
        lo, lc = c, cc
    else:
        lo, lc = a, ac and cc
    if b < d:
        hi, hc = b, bc
    elif b > d:
        hi, hc = d, dc
    else:
        hi, hc = b, bc and dc
    if lo < hi or (lo == hi and lc and hc):
        return (lo, hi, lc, hc)
    return None


def word_pieces(pieces, gens, I, n):
    """All images of the pieces under words of length exactly n (1 allowed), clipped each step."""
    st = star(gens)
    out = []
    for word in product(st, repeat=n):
        for p in pieces:
            cur = p
            for t in word:
                a, b, ac, bc = cur
                cur = _clip((a * t, b * t, ac, bc), I)
                if cur is None:
                    break
            if cur is not None:
                out.append(cur)
    return out


def member(x, pieces):
    for a, b, ac, bc in pieces:
        if (a < x or (ac and a == x)) and (x < b or (bc and x == b)):
            return True
    return False


def probe_points(pieces):
    """Endpoints plus midpoints between consecutive endpoints and just outside."""
    ends = sorted({p[0] for p in pieces} | {p[1] for p in pieces})
    pts = set(ends)
    for u, v in zip(ends, ends[1:]):
        pts.add((u + v) / 2)
    if ends:
        pts.add(ends[0] / 2)
        pts.add(ends[-1] * 2)
    return sorted(pts)
