"""Model parameters, momentum grids and the quasiparticle dispersion.

The chain is

    H = J sum_n [(1 + delta) Sx_n Sx_{n+1} + (1 - delta) Sy_n Sy_{n+1}] - h sum_n Sz_n

on a ring of N spin-1/2 sites. After Jordan-Wigner and Fourier transforms every
momentum k carries a Bogoliubov mode with energy

    eps_k = sqrt(A_k**2 + C_k**2),   A_k = J cos k - h,   C_k = -J delta sin k.

Observables only ever need the pair (cos 2theta_k, sin 2theta_k),
which is returned directly as (A/eps, -C/eps).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np


class Grid(str, enum.Enum):
    """Fermion boundary condition, i.e. which momentum grid is used."""

    PERIODIC = "periodic"
    ANTIPERIODIC = "antiperiodic"

    @classmethod
    def parse(cls, value: "Grid | str") -> "Grid":
        if isinstance(value, Grid):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown grid {value!r}; expected 'periodic' or 'antiperiodic'") from None


@dataclass(frozen=True)
class ModelParams:
    """Couplings and size of the transverse-field XY ring.

    Parameters
    ----------
    N : int
        Number of sites, at least 4.
    delta : float
        Anisotropy in [0, 1]; 0 is the XX chain, 1 the Ising chain.
    h : float
        Transverse field, non-negative.
    J : float
        Exchange coupling (> 0); J = 1 fixes the energy unit.
    grid : Grid
        Momentum grid for the fermions. Periodic is the default everywhere.
    """

    N: int = 1000
    delta: float = 0.8
    h: float = 0.0
    J: float = 1.0
    grid: Grid = Grid.PERIODIC

    def __post_init__(self):
        object.__setattr__(self, "grid", Grid.parse(self.grid))
        if int(self.N) != self.N or self.N < 4:
            raise ValueError(f"N must be an integer >= 4, got {self.N!r}")
        object.__setattr__(self, "N", int(self.N))
        if not (0.0 <= self.delta <= 1.0):
            raise ValueError(f"delta must lie in [0, 1], got {self.delta!r}")
        if not (self.h >= 0.0) or not math.isfinite(self.h):
            raise ValueError(f"h must be finite and >= 0, got {self.h!r}")
        if not (self.J > 0.0) or not math.isfinite(self.J):
            raise ValueError(f"J must be finite and > 0, got {self.J!r}")

    def replace(self, **changes) -> "ModelParams":
        fields = dict(N=self.N, delta=self.delta, h=self.h, J=self.J, grid=self.grid)
        fields.update(changes)
        return ModelParams(**fields)


@dataclass(frozen=True)
class ModeEntry:
    k: float
    A: float
    C: float
    eps: float
    cos2t: float
    sin2t: float


def build_kgrid(N: int, grid: Grid | str = Grid.PERIODIC) -> np.ndarray:
    """Momenta of one parity sector, strictly increasing in (-pi, pi].

    Periodic:     k = 2 pi m / N,  m = -(N-1)//2 ... N//2
    Antiperiodic: k = pi (2j - 1) / N,  j = -N//2 + 1 ... N - N//2
    """
    grid = Grid.parse(grid)
    if int(N) != N or N < 3:
        raise ValueError(f"N must be an integer >= 3, got {N!r}")
    N = int(N)
    if grid is Grid.PERIODIC:
        m = np.arange(-((N - 1) // 2), N // 2 + 1)
        return 2.0 * np.pi * m / N
    j = np.arange(-(N // 2) + 1, N - N // 2 + 1)
    return np.pi * (2 * j - 1) / N


def bogoliubov_angle(A: float, C: float) -> tuple[float, float]:
    """Return (cos 2theta, sin 2theta) for one mode.

    A gapless mode (A = C = 0) gets (1, 0); at such a mode sin^2(theta) and
    sin(k) sin(2 theta) vanish for any angle, so the choice is inert.
    """
    eps = math.hypot(A, C)
    if eps == 0.0:
        return 1.0, 0.0
    return A / eps, -C / eps


def _angles(A: np.ndarray, C: np.ndarray, eps: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    gapless = eps == 0.0
    safe = np.where(gapless, 1.0, eps)
    cos2t = np.where(gapless, 1.0, A / safe)
    sin2t = np.where(gapless, 0.0, -C / safe)
    return cos2t, sin2t


def mode_arrays(params: ModelParams) -> dict[str, np.ndarray]:
    """Vectorised dispersion over the whole grid of ``params``."""
    k = build_kgrid(params.N, params.grid)
    # sin(pi) is 1.2e-16 in floating point; pin the exact zeros so that the
    # unpaired k = 0 and k = pi modes are exact particle/hole states.
    sin_k = np.sin(k)
    cos_k = np.cos(k)
    sin_k[np.isclose(np.abs(k), np.pi, rtol=0, atol=1e-15) | (k == 0.0)] = 0.0
    A = params.J * cos_k - params.h
    C = -params.J * params.delta * sin_k
    eps = np.hypot(A, C)
    cos2t, sin2t = _angles(A, C, eps)
    return dict(k=k, sin_k=sin_k, cos_k=cos_k, A=A, C=C, eps=eps, cos2t=cos2t, sin2t=sin2t)


def dispersion(params: ModelParams, k: float) -> ModeEntry:
    s = 0.0 if (k == 0.0 or abs(abs(k) - math.pi) <= 1e-15) else math.sin(k)
    A = params.J * math.cos(k) - params.h
    C = -params.J * params.delta * s
    cos2t, sin2t = bogoliubov_angle(A, C)
    return ModeEntry(k=k, A=A, C=C, eps=math.hypot(A, C), cos2t=cos2t, sin2t=sin2t)


def special_fields(J: float = 1.0, delta: float = 0.8) -> tuple[float, float]:
    """Factorizing field h_f = sqrt(J^2 - (J delta)^2) and critical field h_c = J."""
    if not (0.0 <= delta <= 1.0) or not J > 0:
        raise ValueError("need J > 0 and 0 <= delta <= 1")
    return math.sqrt(J * J - (J * delta) ** 2), J
