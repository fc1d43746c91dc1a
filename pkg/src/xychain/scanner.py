"""Enumeration and sampling of fixed-quasiparticle-number subspaces.

Exhaustive scans walk the revolving-door order, so every step is one Remove
and one Add toggle on the running correlators. The rank space is cut into
fixed-size chunks; each chunk starts from a directly evaluated state, which
makes the output bitwise independent of how many workers process the chunks.
Subspaces larger than the budget are sampled uniformly without replacement.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

import numpy as np

from .combinatorics import lex_rank, lex_unrank, revdoor_successor, revdoor_unrank, subspace_dimension
from .correlators import ModeTable, OccupationSet
from .errors import NumericalIntegrityError

DEFAULT_CHUNK = 1 << 14
SAMPLE_DRAW_BATCH = 1 << 16
REANCHOR = 1 << 10  # steps between direct re-evaluations inside a walk


@dataclass(frozen=True)
class ScanPolicy:
    m: int
    budget: int = 10**7
    sample_count: int = 10**6
    seed: int = 0
    echo_threshold: int = 3
    tol_ent: float = 1e-12
    workers: int = 1
    chunk_size: int = DEFAULT_CHUNK

    def __post_init__(self):
        if self.m < 0:
            raise ValueError(f"m must be >= 0, got {self.m}")
        if self.budget < 1 or self.sample_count < 1:
            raise ValueError("budget and sample_count must be >= 1")
        if self.workers < 1 or self.chunk_size < 1:
            raise ValueError("workers and chunk_size must be >= 1")


@dataclass(frozen=True)
class StateRecord:
    E: float
    C: float
    C1: float
    C2: float
    rank: int
    occ: Optional[OccupationSet] = None


@dataclass
class RecordBatch:
    """Column-wise block of state records; iterating yields ``StateRecord``."""

    E: np.ndarray
    C: np.ndarray
    C1: np.ndarray
    C2: np.ndarray
    rank: np.ndarray
    occ: Optional[np.ndarray] = None

    def __len__(self) -> int:
        return len(self.E)

    def __iter__(self) -> Iterator[StateRecord]:
        for i in range(len(self)):
            occ = OccupationSet(tuple(int(x) for x in self.occ[i])) if self.occ is not None else None
            yield StateRecord(float(self.E[i]), float(self.C[i]), float(self.C1[i]), float(self.C2[i]),
                              int(self.rank[i]), occ)

    @classmethod
    def concat(cls, batches: list["RecordBatch"], m: int = 0, with_occ: bool = False) -> "RecordBatch":
        if not batches:
            return cls(*(np.empty(0) for _ in range(4)), rank=np.empty(0, dtype=np.int64),
                       occ=np.empty((0, m), dtype=np.int64) if with_occ else None)
        occ = None
        if batches[0].occ is not None:
            occ = np.concatenate([b.occ for b in batches])
        return cls(np.concatenate([b.E for b in batches]), np.concatenate([b.C for b in batches]),
                   np.concatenate([b.C1 for b in batches]), np.concatenate([b.C2 for b in batches]),
                   np.concatenate([b.rank for b in batches]), occ)


@dataclass
class ScanSummary:
    N: int
    m: int
    visited: int = 0
    exhaustive: bool = True
    E_min: float = math.inf
    E_max: float = -math.inf
    C_min: float = math.inf
    C_max: float = -math.inf
    entangled: int = 0
    tol_ent: float = 1e-12
    max_trace_residual: float = 0.0
    max_clamped_radicand: float = 0.0
    min_diagonal: float = math.inf
    seed: Optional[int] = None

    @property
    def estimated(self) -> bool:
        return not self.exhaustive

    def update(self, batch: RecordBatch, diag: dict) -> None:
        if len(batch) == 0:
            return
        self.visited += len(batch)
        self.E_min = min(self.E_min, float(batch.E.min()))
        self.E_max = max(self.E_max, float(batch.E.max()))
        self.C_min = min(self.C_min, float(batch.C.min()))
        self.C_max = max(self.C_max, float(batch.C.max()))
        self.entangled += int(np.count_nonzero(batch.C > self.tol_ent))
        self.max_trace_residual = max(self.max_trace_residual, diag["trace"])
        self.max_clamped_radicand = max(self.max_clamped_radicand, diag["clamped"])
        self.min_diagonal = min(self.min_diagonal, diag["min_diag"])


class RecordCollector:
    """Sink that keeps every batch; ``records()`` concatenates them."""

    def __init__(self, m: int = 0):
        self.m = m
        self.batches: list[RecordBatch] = []

    def __call__(self, batch: RecordBatch) -> None:
        self.batches.append(batch)

    def records(self) -> RecordBatch:
        return RecordBatch.concat(self.batches, self.m)


def concurrence_arrays(f0, f1r, f1i, f2):
    """Vectorised X-state concurrence; also returns integrity diagnostics."""
    f1sq = f1r * f1r + f1i * f1i
    Xp = f0 * f0 - f1sq + f2 * f2
    Xm = 1.0 - 2.0 * f0 + Xp
    Y = f0 - Xp
    rx = Xp * Xm
    ry = Y * Y
    C1 = 2.0 * (np.sqrt(f1sq) - np.sqrt(np.maximum(rx, 0.0)))
    C2 = 2.0 * (np.abs(f2) - np.sqrt(ry))
    C = np.maximum(np.maximum(C1, C2), 0.0)
    diag = {"trace": 0.0, "clamped": 0.0, "min_diag": math.inf}
    if len(f0):
        diag["trace"] = float(np.max(np.abs(Xp + Xm + 2.0 * Y - 1.0)))
        neg = rx[rx < 0.0]
        diag["clamped"] = float(-neg.min()) if neg.size else 0.0
        diag["min_diag"] = float(min(Xp.min(), Xm.min(), Y.min()))
        cmax = float(C.max())
        if cmax > 1.0 + 1e-9:
            raise NumericalIntegrityError(f"concurrence {cmax!r} exceeds 1")
        if diag["min_diag"] < -1e-8:
            raise NumericalIntegrityError(f"negative diagonal density-matrix element {diag['min_diag']!r}")
    return np.minimum(C, 1.0), C1, C2, diag


def _finish(table: ModeTable, m: int, cols, ranks, occs, echo: bool):
    f0, f1r, f1i, f2, E = (np.asarray(x, dtype=float) for x in cols)
    C, C1, C2, diag = concurrence_arrays(f0, f1r, f1i, f2)
    dtype = np.int64 if subspace_dimension(table.N, m) < 2**63 else object
    occ = np.asarray(occs, dtype=np.int64).reshape(len(E), m) if echo else None
    return RecordBatch(E, C, C1, C2, np.asarray(ranks, dtype=dtype), occ), diag


def _walk_chunk(table: ModeTable, m: int, start: int, count: int, echo: bool):
    """Revolving-door walk over ranks [start, start + count)."""
    N = table.N
    total = subspace_dimension(N, m)
    c = revdoor_unrank(start, N, m)
    df0, df1r, df1i, df2, dE = (table.df0.tolist(), table.df1.real.tolist(), table.df1.imag.tolist(),
                                table.df2.tolist(), table.dE.tolist())
    g = table.ground

    def direct():
        return (g.f0 + sum(df0[i] for i in c), g.f1.real + sum(df1r[i] for i in c),
                g.f1.imag + sum(df1i[i] for i in c), g.f2 + sum(df2[i] for i in c),
                g.E + sum(dE[i] for i in c))

    f0, f1r, f1i, f2, E = direct()
    lex_tab = [[math.comb(N - 1 - a, m - j) for a in range(N)] for j in range(m)]
    top = total - 1

    F0, F1r, F1i, F2, EE, ranks, occs = [], [], [], [], [], [], []
    for step in range(count):
        F0.append(f0)
        F1r.append(f1r)
        F1i.append(f1i)
        F2.append(f2)
        EE.append(E)
        r = top
        for j in range(m):
            r -= lex_tab[j][c[j]]
        ranks.append(r)
        if echo:
            occs.extend(c)
        if step == count - 1:
            break
        moved = revdoor_successor(c, N)
        if moved is None:
            raise RuntimeError("revolving-door walk ended early")
        if (step + 1) % REANCHOR == 0:
            # bound the rounding drift of the running sums
            f0, f1r, f1i, f2, E = direct()
            continue
        out, into = moved
        f0 += df0[into] - df0[out]
        f1r += df1r[into] - df1r[out]
        f1i += df1i[into] - df1i[out]
        f2 += df2[into] - df2[out]
        E += dE[into] - dE[out]
    return _finish(table, m, (F0, F1r, F1i, F2, EE), ranks, occs, echo)


def _eval_sets(table: ModeTable, m: int, sets: np.ndarray, echo: bool):
    """Direct (non-incremental) evaluation of explicit occupation sets."""
    g = table.ground
    if m == 0:
        n = len(sets)
        cols = [np.full(n, v) for v in (g.f0, g.f1.real, g.f1.imag, g.f2, g.E)]
    else:
        cols = [g.f0 + table.df0[sets].sum(axis=1), g.f1.real + table.df1.real[sets].sum(axis=1),
                g.f1.imag + table.df1.imag[sets].sum(axis=1), g.f2 + table.df2[sets].sum(axis=1),
                g.E + table.dE[sets].sum(axis=1)]
    ranks = [lex_rank(row, table.N) for row in sets.tolist()]
    return _finish(table, m, cols, ranks, sets.ravel().tolist(), echo)


def sample_sets(N: int, m: int, count: int, seed: int) -> np.ndarray:
    """``count`` distinct m-subsets of range(N), uniform, in draw order.

    Rows of m independent uniform indices are drawn in fixed-size batches;
    rows with a repeated index or an already seen subset are rejected.
    """
    total = subspace_dimension(N, m)
    if count > total:
        raise ValueError(f"cannot draw {count} distinct subsets out of {total}")
    rng = np.random.default_rng(seed)
    seen: set[tuple[int, ...]] = set()
    out: list[tuple[int, ...]] = []
    while len(out) < count:
        rows = np.sort(rng.integers(0, N, size=(SAMPLE_DRAW_BATCH, m)), axis=1)
        if m > 1:
            rows = rows[np.all(np.diff(rows, axis=1) > 0, axis=1)]
        for row in map(tuple, rows.tolist()):
            if row not in seen:
                seen.add(row)
                out.append(row)
                if len(out) == count:
                    break
    return np.asarray(out, dtype=np.int64).reshape(count, m)


_WORKER_TABLE: Optional[ModeTable] = None


def _init_worker(table: ModeTable) -> None:
    global _WORKER_TABLE
    _WORKER_TABLE = table


def _run_task(task):
    kind, m, payload, echo = task
    if kind == "walk":
        start, count = payload
        return _walk_chunk(_WORKER_TABLE, m, start, count, echo)
    return _eval_sets(_WORKER_TABLE, m, payload, echo)


def _tasks(table: ModeTable, policy: ScanPolicy, exhaustive: bool, total: int):
    m = policy.m
    echo = m <= policy.echo_threshold
    if exhaustive:
        for start in range(0, total, policy.chunk_size):
            yield ("walk", m, (start, min(policy.chunk_size, total - start)), echo)
    else:
        sets = sample_sets(table.N, m, policy.sample_count, policy.seed)
        for start in range(0, len(sets), policy.chunk_size):
            yield ("sample", m, sets[start:start + policy.chunk_size], echo)


def scan_subspace(table: ModeTable, policy: ScanPolicy,
                  sink: Optional[Callable[[RecordBatch], None]] = None) -> ScanSummary:
    """Visit every state with ``policy.m`` quasiparticles, or a uniform sample.

    Records reach ``sink`` as ``RecordBatch`` blocks. Blocks arrive in a fixed
    order, but consumers must not rely on any ordering of records.
    """
    N, m = table.N, policy.m
    total = subspace_dimension(N, m)
    exhaustive = total <= policy.budget
    summary = ScanSummary(N=N, m=m, exhaustive=exhaustive, tol_ent=policy.tol_ent,
                          seed=None if exhaustive else policy.seed)
    tasks = _tasks(table, policy, exhaustive, total)
    if policy.workers == 1:
        _init_worker(table)
        results = map(_run_task, tasks)
        pool = None
    else:
        pool = ProcessPoolExecutor(max_workers=policy.workers, initializer=_init_worker, initargs=(table,))
        results = pool.map(_run_task, tasks)
    try:
        for batch, diag in results:
            summary.update(batch, diag)
            if sink is not None:
                sink(batch)
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
    return summary


def max_concurrence(table: ModeTable, policy: ScanPolicy) -> tuple[float, OccupationSet]:
    """Largest concurrence in the subspace; ties go to the lexicographically first set."""
    best = {"C": -math.inf, "rank": None}

    def sink(batch: RecordBatch) -> None:
        if len(batch) == 0:
            return
        cmax = batch.C.max()
        ranks = [int(r) for r in batch.rank[batch.C == cmax]]
        r = min(ranks)
        if cmax > best["C"] or (cmax == best["C"] and r < best["rank"]):
            best["C"], best["rank"] = float(cmax), r

    scan_subspace(table, policy, sink)
    return best["C"], OccupationSet(tuple(lex_unrank(best["rank"], table.N, policy.m)))


def default_workers() -> int:
    return max(1, min(8, os.cpu_count() or 1))
