import itertools
from collections import Counter

import numpy as np
import pytest
from scipy.stats import chisquare

from xychain import (ModelParams, OccupationSet, RecordCollector, ScanPolicy, build_mode_table, concurrence,
                     correlators_of, max_concurrence, scan_subspace)
from xychain.combinatorics import lex_rank
from xychain.scanner import sample_sets


def run(table, policy):
    sink = RecordCollector(policy.m)
    summary = scan_subspace(table, policy, sink)
    return summary, sink.records()


@pytest.mark.parametrize("N", [4, 7, 12, 16])
@pytest.mark.parametrize("m", [0, 1, 2, 3])
def test_incremental_scan_matches_naive(N, m):
    table = build_mode_table(ModelParams(N=N, h=0.85, delta=0.7))
    summary, rec = run(table, ScanPolicy(m=m, chunk_size=37))
    assert summary.visited == len(rec) == len(list(itertools.combinations(range(N), m)))
    got = {int(r): (e, c) for r, e, c in zip(rec.rank, rec.E, rec.C)}
    for occ in itertools.combinations(range(N), m):
        corr = correlators_of(table, occ)
        e, c = got[lex_rank(occ, N)]
        assert abs(e - corr.E) <= 1e-12
        assert abs(c - concurrence(corr).C) <= 1e-12


def test_n12_m3_multiset():
    table = build_mode_table(ModelParams(N=12, h=1.2))
    _, rec = run(table, ScanPolicy(m=3))
    assert len(rec) == 220
    naive = np.array([(correlators_of(table, o).E, concurrence(correlators_of(table, o)).C)
                      for o in itertools.combinations(range(12), 3)])
    got = np.column_stack([rec.E, rec.C])

    def canonical(a):
        # mirror states are degenerate only up to rounding, so order on rounded keys
        return a[np.lexsort((np.round(a[:, 1], 9), np.round(a[:, 0], 9)))]

    np.testing.assert_allclose(canonical(got), canonical(naive), atol=1e-12, rtol=0)


def test_occupations_echoed():
    table = build_mode_table(ModelParams(N=10, h=0.3))
    _, rec = run(table, ScanPolicy(m=2))
    for r in rec:
        assert lex_rank(r.occ.indices, 10) == r.rank
        assert r.E == pytest.approx(correlators_of(table, r.occ).E, abs=1e-12)
    _, rec = run(table, ScanPolicy(m=2, echo_threshold=1))
    assert rec.occ is None


def test_energy_bounds_hold():
    table = build_mode_table(ModelParams(N=60, h=1.7))
    for m in (1, 2, 3):
        _, rec = run(table, ScanPolicy(m=m))
        lo, hi = table.energy_bounds(m)
        assert rec.E.min() >= lo - 1e-12 and rec.E.max() <= hi + 1e-12


def test_worker_count_does_not_change_records():
    table = build_mode_table(ModelParams(N=120, h=1.2))
    a_sum, a = run(table, ScanPolicy(m=2, workers=1, chunk_size=1000))
    b_sum, b = run(table, ScanPolicy(m=2, workers=3, chunk_size=1000))
    for col in ("E", "C", "C1", "C2", "rank"):
        assert np.array_equal(getattr(a, col), getattr(b, col))
    assert a_sum == b_sum


def test_sampling_when_over_budget_is_deterministic():
    table = build_mode_table(ModelParams(N=200, h=1.2))
    policy = ScanPolicy(m=3, budget=1000, sample_count=5000, seed=42)
    s1, r1 = run(table, policy)
    s2, r2 = run(table, ScanPolicy(m=3, budget=1000, sample_count=5000, seed=42, workers=2))
    assert s1.estimated and s1.seed == 42 and s1.visited == 5000
    assert np.array_equal(r1.rank, r2.rank) and np.array_equal(r1.C, r2.C)
    assert len(set(r1.rank.tolist())) == 5000
    _, r3 = run(table, ScanPolicy(m=3, budget=1000, sample_count=5000, seed=43))
    assert not np.array_equal(r1.rank, r3.rank)


def test_sampling_is_uniform():
    counts = Counter()
    for seed in range(1000):
        counts.update(map(tuple, sample_sets(30, 2, 100, seed).tolist()))
    observed = [counts[c] for c in itertools.combinations(range(30), 2)]
    assert sum(observed) == 100_000
    assert chisquare(observed).pvalue > 0.001


def test_sampling_rejects_impossible_count():
    with pytest.raises(ValueError):
        sample_sets(5, 2, 11, 0)


def test_summary_counts():
    table = build_mode_table(ModelParams(N=30, h=1.2))
    summary, rec = run(table, ScanPolicy(m=2))
    assert summary.exhaustive and not summary.estimated
    assert summary.entangled == int(np.count_nonzero(rec.C > 1e-12))
    assert summary.C_max == rec.C.max()
    assert summary.max_trace_residual <= 1e-12


def test_max_concurrence_and_ties():
    table = build_mode_table(ModelParams(N=40, h=1.0))
    c, occ = max_concurrence(table, ScanPolicy(m=1))
    _, rec = run(table, ScanPolicy(m=1))
    assert c == rec.C.max()
    assert occ == OccupationSet((int(rec.rank[rec.C == c].min()),))
    # ties go to the lexicographically first set
    c2, occ2 = max_concurrence(table, ScanPolicy(m=2, chunk_size=50))
    _, rec2 = run(table, ScanPolicy(m=2, chunk_size=50))
    best = rec2.rank[rec2.C == rec2.C.max()].min()
    assert c2 == rec2.C.max() and lex_rank(occ2.indices, 40) == best


def test_max_concurrence_weak_at_factorizing_field():
    c, _ = max_concurrence(build_mode_table(ModelParams(N=1000, h=0.6)), ScanPolicy(m=1))
    assert 0 < c < 0.01


def test_max_concurrence_size_independent_at_critical_field():
    a, _ = max_concurrence(build_mode_table(ModelParams(N=500, h=1.0)), ScanPolicy(m=1))
    b, _ = max_concurrence(build_mode_table(ModelParams(N=1000, h=1.0)), ScanPolicy(m=1))
    assert abs(a - b) <= 1e-3
