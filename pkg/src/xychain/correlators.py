"""Nearest-neighbour fermion correlators of Bogoliubov Fock states.

For a state with occupations n_k in {0, 1}

    f0 = 1/N sum_k [cos2t_k n_k + sin^2 t_k]
    f1 = 1/N sum_k cos k [cos2t_k n_k + sin^2 t_k] - i/N sum_k sin k n_k
    f2 = 1/N sum_k sin k sin2t_k (n_k - 1/2)
    E  = sum_k eps_k (n_k - 1/2)

Every quantity is affine in the occupations, so a ``ModeTable`` stores the
vacuum values once plus one increment per mode. Any excited state then costs
O(m) to evaluate and a single occupation flip costs O(1).
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .spectrum import ModeEntry, ModelParams, mode_arrays

logger = logging.getLogger(__name__)

BOUND_TOL = 1e-9


class Direction(enum.Enum):
    ADD = 1
    REMOVE = -1


@dataclass(frozen=True)
class Correlators:
    f0: float
    f1: complex
    f2: float
    E: float

    def within_bounds(self, tol: float = BOUND_TOL) -> bool:
        """Loose physical bounds: 0 <= f0 <= 1, |f1| <= 1, |f2| <= 1/2."""
        return (-tol <= self.f0 <= 1 + tol) and abs(self.f1) <= 1 + tol and abs(self.f2) <= 0.5 + tol


@dataclass(frozen=True)
class OccupationSet:
    """Sorted, duplicate-free set of occupied mode indices."""

    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError(f"occupation indices must be strictly increasing: {idx}")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def of(cls, indices: Iterable[int]) -> "OccupationSet":
        idx = [int(i) for i in indices]
        if len(set(idx)) != len(idx):
            raise ValueError(f"duplicate mode index in {idx}")
        return cls(tuple(sorted(idx)))

    @property
    def m(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __len__(self):
        return len(self.indices)


@dataclass(frozen=True, eq=False)
class ModeTable:
    """Per-mode dispersion data plus vacuum correlators and per-mode increments.

    All arrays are in grid order (ascending k) and must be treated as read-only.
    """

    params: ModelParams
    k: np.ndarray
    sin_k: np.ndarray
    cos_k: np.ndarray
    A: np.ndarray
    C: np.ndarray
    eps: np.ndarray
    cos2t: np.ndarray
    sin2t: np.ndarray
    ground: Correlators
    df0: np.ndarray
    df1: np.ndarray
    df2: np.ndarray
    dE: np.ndarray

    @property
    def N(self) -> int:
        return self.params.N

    def mode(self, i: int) -> ModeEntry:
        return ModeEntry(k=float(self.k[i]), A=float(self.A[i]), C=float(self.C[i]), eps=float(self.eps[i]),
                         cos2t=float(self.cos2t[i]), sin2t=float(self.sin2t[i]))

    def energy_bounds(self, m: int) -> tuple[float, float]:
        """Lowest and highest energy reachable with exactly m quasiparticles."""
        if not 0 <= m <= self.N:
            raise ValueError(f"m must lie in [0, {self.N}], got {m}")
        e = np.sort(self.eps)
        lo = math.fsum([self.ground.E, *e[:m]])
        hi = math.fsum([self.ground.E, *e[self.N - m:]]) if m else self.ground.E
        return lo, hi


def build_mode_table(params: ModelParams) -> ModeTable:
    arr = mode_arrays(params)
    N = params.N
    k, sin_k, cos_k = arr["k"], arr["sin_k"], arr["cos_k"]
    cos2t, sin2t, eps = arr["cos2t"], arr["sin2t"], arr["eps"]
    sin2_half = 0.5 * (1.0 - cos2t)  # sin^2(theta)

    ground = Correlators(
        f0=math.fsum(sin2_half) / N,
        f1=complex(math.fsum(cos_k * sin2_half) / N, 0.0),
        f2=-math.fsum(sin_k * sin2t) / (2 * N),
        E=-0.5 * math.fsum(eps),
    )
    table = ModeTable(
        params=params, k=k, sin_k=sin_k, cos_k=cos_k, A=arr["A"], C=arr["C"], eps=eps,
        cos2t=cos2t, sin2t=sin2t, ground=ground,
        df0=cos2t / N,
        df1=(cos_k * cos2t - 1j * sin_k) / N,
        df2=sin_k * sin2t / N,
        dE=eps.copy(),
    )
    for a in (table.k, table.sin_k, table.cos_k, table.A, table.C, table.eps, table.cos2t, table.sin2t,
              table.df0, table.df1, table.df2, table.dE):
        a.flags.writeable = False
    return table


def _check_index(table: ModeTable, i: int) -> int:
    i = int(i)
    if not 0 <= i < table.N:
        raise ValueError(f"mode index {i} out of range [0, {table.N})")
    return i


def correlators_of(table: ModeTable, occ: OccupationSet | Iterable[int]) -> Correlators:
    """Correlators of the Fock state with the given modes occupied."""
    if not isinstance(occ, OccupationSet):
        occ = OccupationSet.of(occ)
    idx = [_check_index(table, i) for i in occ]
    if not idx:
        return table.ground
    g = table.ground
    f1 = table.df1[idx]
    out = Correlators(
        f0=math.fsum([g.f0, *table.df0[idx]]),
        f1=complex(math.fsum([g.f1.real, *f1.real]), math.fsum([g.f1.imag, *f1.imag])),
        f2=math.fsum([g.f2, *table.df2[idx]]),
        E=math.fsum([g.E, *table.dE[idx]]),
    )
    if logger.isEnabledFor(logging.DEBUG) and not out.within_bounds():
        logger.debug("correlators outside physical bounds for occupation %s: %s", idx, out)
    return out


def toggle_mode(corr: Correlators, table: ModeTable, mode: int, direction: Direction) -> Correlators:
    """Add or remove one quasiparticle. Membership is the caller's business."""
    i = _check_index(table, mode)
    s = direction.value
    return Correlators(
        f0=corr.f0 + s * float(table.df0[i]),
        f1=corr.f1 + s * complex(table.df1[i]),
        f2=corr.f2 + s * float(table.df2[i]),
        E=corr.E + s * float(table.dE[i]),
    )


def energy_of(table: ModeTable, occ: OccupationSet | Iterable[int]) -> float:
    if not isinstance(occ, OccupationSet):
        occ = OccupationSet.of(occ)
    idx = [_check_index(table, i) for i in occ]
    return math.fsum([table.ground.E, *table.dE[idx]])
