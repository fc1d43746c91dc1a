"""Combination orderings used by the subspace scanner.

Subsets of {0, ..., n-1} with t elements are handled as sorted lists.
The revolving-door order (Knuth, TAOCP 7.2.1.3, Algorithm R) changes exactly
one element between consecutive subsets; ``revdoor_rank``/``revdoor_unrank``
index it so a walk can start anywhere. Lexicographic ranks (the order of
``itertools.combinations``) label records in output files.
"""
from __future__ import annotations

from math import comb


def subspace_dimension(N: int, m: int) -> int:
    """Number of m-quasiparticle states, C(N, m), as an exact integer."""
    if m < 0 or m > N:
        raise ValueError(f"need 0 <= m <= N, got N={N}, m={m}")
    return comb(N, m)


def revdoor_rank(c: list[int] | tuple[int, ...]) -> int:
    t = len(c)
    r = -(t % 2)
    s = 1
    for i in range(t, 0, -1):
        r += s * comb(c[i - 1] + 1, i)
        s = -s
    return r


def revdoor_unrank(r: int, n: int, t: int) -> list[int]:
    if not 0 <= r < comb(n, t):
        raise ValueError(f"rank {r} out of range for C({n}, {t})")
    c = [0] * t
    x = n
    for i in range(t, 0, -1):
        while comb(x, i) > r:
            x -= 1
        c[i - 1] = x
        r = comb(x + 1, i) - r - 1
    return c


def revdoor_successor(c: list[int], n: int) -> tuple[int, int] | None:
    """Advance ``c`` in place; return (removed, added), or None after the last subset."""
    t = len(c)
    if t == 0 or t == n:
        return None
    if t % 2:
        hi = c[1] if t > 1 else n
        if c[0] + 1 < hi:
            c[0] += 1
            return c[0] - 1, c[0]
        try_decrease = True
    else:
        if c[0] > 0:
            c[0] -= 1
            return c[0] + 1, c[0]
        try_decrease = False
    j = 2
    while j <= t:
        if try_decrease:
            # here c[j-1] == c[j-2] + 1
            if c[j - 1] >= j:
                removed = c[j - 1]
                c[j - 1] = c[j - 2]
                c[j - 2] = j - 2
                return removed, j - 2
        else:
            # here c[j-2] == j - 2
            nxt = c[j] if j < t else n
            if c[j - 1] + 1 < nxt:
                removed = c[j - 2]
                c[j - 2] = c[j - 1]
                c[j - 1] += 1
                return removed, c[j - 1]
        j += 1
        try_decrease = not try_decrease
    return None


def lex_rank(c: list[int] | tuple[int, ...], n: int) -> int:
    """Position of sorted ``c`` in lexicographic order of t-subsets of range(n)."""
    t = len(c)
    return comb(n, t) - 1 - sum(comb(n - 1 - a, t - j) for j, a in enumerate(c))


def lex_unrank(r: int, n: int, t: int) -> list[int]:
    if not 0 <= r < comb(n, t):
        raise ValueError(f"rank {r} out of range for C({n}, {t})")
    out = []
    x = 0
    for j in range(t, 0, -1):
        while comb(n - 1 - x, j - 1) <= r:
            r -= comb(n - 1 - x, j - 1)
            x += 1
        out.append(x)
        x += 1
    return out
