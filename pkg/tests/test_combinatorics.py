import itertools
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from xychain.combinatorics import (lex_rank, lex_unrank, revdoor_rank, revdoor_successor, revdoor_unrank,
                                   subspace_dimension)


def test_dimensions():
    assert subspace_dimension(1000, 2) == 499500
    assert subspace_dimension(37, 0) == 1
    assert subspace_dimension(1000, 5) == 8250291250200
    with pytest.raises(ValueError):
        subspace_dimension(5, 6)


@pytest.mark.parametrize("n", range(1, 9))
def test_revolving_door_walk(n):
    for t in range(0, n + 1):
        c = revdoor_unrank(0, n, t)
        seen = [tuple(c)]
        while True:
            before = set(c)
            moved = revdoor_successor(c, n)
            if moved is None:
                break
            out, into = moved
            assert before - set(c) == {out} and set(c) - before == {into}
            assert c == sorted(c)
            seen.append(tuple(c))
        assert len(seen) == comb(n, t) == len(set(seen))
        for r, s in enumerate(seen):
            assert revdoor_rank(s) == r
            assert revdoor_unrank(r, n, t) == list(s)


@pytest.mark.parametrize("n, t", [(6, 3), (9, 2), (10, 4)])
def test_lex_rank_matches_itertools(n, t):
    for r, c in enumerate(itertools.combinations(range(n), t)):
        assert lex_rank(c, n) == r
        assert lex_unrank(r, n, t) == list(c)


@given(st.integers(2, 2000), st.data())
def test_lex_roundtrip_large(n, data):
    t = data.draw(st.integers(0, min(n, 5)))
    r = data.draw(st.integers(0, comb(n, t) - 1))
    assert lex_rank(lex_unrank(r, n, t), n) == r
