"""Histograms over scanned subspaces and ground-state field sweeps."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .combinatorics import subspace_dimension
from .concurrence import concurrence_xstate, rdm_nn
from .correlators import build_mode_table
from .errors import NumericalIntegrityError
from .scanner import RecordBatch
from .spectrum import ModelParams

RANGE_SLACK = 1e-9
DEGENERATE_WIDTH = 1e-15

Records = Union[RecordBatch, tuple]


@dataclass
class Histogram:
    lo: Optional[float]
    hi: Optional[float]
    bins: int
    counts: np.ndarray
    totals: Optional[np.ndarray]
    weights: np.ndarray
    estimated: bool = False

    @property
    def edges(self) -> np.ndarray:
        if self.bins == 0:
            return np.empty(0)
        return bin_edges(self.lo, self.hi, self.bins)

    @property
    def centers(self) -> np.ndarray:
        e = self.edges
        return 0.5 * (e[:-1] + e[1:])

    def merge(self, other: "Histogram", normalizer: float) -> "Histogram":
        """Sum of two histograms over identical bins, renormalised by ``normalizer``."""
        if (self.lo, self.hi, self.bins) != (other.lo, other.hi, other.bins):
            raise ValueError("cannot merge histograms with different binning")
        counts = self.counts + other.counts
        totals = None if self.totals is None else self.totals + other.totals
        return Histogram(self.lo, self.hi, self.bins, counts, totals, counts / normalizer,
                         self.estimated or other.estimated)


@dataclass
class SweepSeries:
    h_values: np.ndarray
    values: np.ndarray
    label: str

    def __post_init__(self):
        self.h_values = np.asarray(self.h_values, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.h_values.shape != self.values.shape:
            raise ValueError("h_values and values must have equal lengths")
        if np.any(np.diff(self.h_values) <= 0):
            raise ValueError("h_values must be strictly increasing")


def bin_edges(lo: float, hi: float, bins: int) -> np.ndarray:
    width = (hi - lo) / bins
    edges = lo + width * np.arange(bins + 1)
    edges[-1] = hi
    return edges


def assign_bins(values: np.ndarray, lo: float, hi: float, bins: int) -> np.ndarray:
    """Left-closed bins [e_i, e_{i+1}); the last bin also takes ``hi``."""
    edges = bin_edges(lo, hi, bins)
    idx = np.searchsorted(edges, values, side="right") - 1
    return np.clip(idx, 0, bins - 1)


def _columns(records: Records) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(records, RecordBatch):
        return records.E, records.C
    E, C = records
    return np.asarray(E, dtype=float), np.asarray(C, dtype=float)


def _normalizer(N: int, m: int, estimated: bool, sample_size: Optional[int]) -> float:
    if estimated:
        if not sample_size:
            raise ValueError("sample_size is required for an estimated histogram")
        return float(sample_size)
    # m!(N-m)!/N! == 1 / C(N, m)
    return float(subspace_dimension(N, m))


def does_histogram(records: Records, E_min: float, E_max: float, bins: int, N: int, m: int,
                   tol_ent: float = 1e-12, estimated: bool = False,
                   sample_size: Optional[int] = None) -> Histogram:
    """Density of entangled states over ``bins`` equal energy slices of [E_min, E_max]."""
    if not E_max > E_min:
        raise ValueError(f"need E_max > E_min, got [{E_min}, {E_max}]")
    if bins < 1:
        raise ValueError("bins must be >= 1")
    E, C = _columns(records)
    if E.size:
        lo_bad = E.min() < E_min - RANGE_SLACK
        hi_bad = E.max() > E_max + RANGE_SLACK
        if lo_bad or hi_bad:
            raise NumericalIntegrityError(
                f"energies [{E.min()}, {E.max()}] fall outside the subspace range [{E_min}, {E_max}]")
    idx = assign_bins(E, E_min, E_max, bins)
    totals = np.bincount(idx, minlength=bins).astype(np.int64)
    counts = np.bincount(idx[C > tol_ent], minlength=bins).astype(np.int64)
    weights = counts / _normalizer(N, m, estimated, sample_size)
    return Histogram(E_min, E_max, bins, counts, totals, weights, estimated)


def dis_histogram(records: Records, bins: int, N: int, m: int, tol_ent: float = 1e-12,
                  estimated: bool = False, sample_size: Optional[int] = None) -> Histogram:
    """Distribution of concurrence values among entangled states.

    The range is [C_min, C_max] of the entangled records. With no entangled
    record the result has zero bins and an unset range; a degenerate range
    collapses to a single bin.
    """
    if bins < 1:
        raise ValueError("bins must be >= 1")
    _, C = _columns(records)
    ent = C[C > tol_ent]
    if ent.size == 0:
        return Histogram(None, None, 0, np.zeros(0, np.int64), None, np.zeros(0), estimated)
    lo, hi = float(ent.min()), float(ent.max())
    if hi - lo < DEGENERATE_WIDTH:
        bins = 1
        counts = np.array([ent.size], dtype=np.int64)
    else:
        counts = np.bincount(assign_bins(ent, lo, hi, bins), minlength=bins).astype(np.int64)
    weights = counts / _normalizer(N, m, estimated, sample_size)
    return Histogram(lo, hi, bins, counts, None, weights, estimated)


GROUND_COLUMNS = ("E_per_site", "f0", "f1_re", "f1_im", "f2", "Xp", "Xm", "Yp", "Ym", "C1", "C2", "C")


def sweep_values(h_lo: float, h_hi: float, step: float) -> np.ndarray:
    if not (h_hi > h_lo) or not step > 0:
        raise ValueError(f"invalid sweep range [{h_lo}, {h_hi}] step {step}")
    n = int(math.floor((h_hi - h_lo) / step + 1e-9)) + 1
    return np.round(h_lo + step * np.arange(n), 12)


def ground_sweep(template: ModelParams, h_lo: float, h_hi: float, step: float) -> dict[str, SweepSeries]:
    """Vacuum correlators, density matrix and concurrence along a field sweep."""
    hs = sweep_values(h_lo, h_hi, step)
    rows = {name: [] for name in GROUND_COLUMNS}
    for h in hs:
        g = build_mode_table(template.replace(h=float(h))).ground
        rho = rdm_nn(g)
        c = concurrence_xstate(rho)
        for name, v in zip(GROUND_COLUMNS, (g.E / template.N, g.f0, g.f1.real, g.f1.imag, g.f2,
                                            rho.Xp, rho.Xm, rho.Yp, rho.Ym, c.C1, c.C2, c.C)):
            rows[name].append(v)
    return {name: SweepSeries(hs, np.array(v), name) for name, v in rows.items()}


def derivative_series(series: SweepSeries) -> SweepSeries:
    """First derivative: central differences inside, one-sided at the ends."""
    h = series.h_values
    if len(h) < 3:
        raise ValueError("need at least 3 points to differentiate")
    steps = np.diff(h)
    if not np.allclose(steps, steps[0], rtol=1e-9, atol=1e-12):
        raise ValueError("derivative_series needs a uniform step")
    d = np.gradient(series.values, steps[0], edge_order=1)
    return SweepSeries(h, d, f"d{series.label}_dh")
