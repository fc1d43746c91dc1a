"""Two-site reduced density matrices and their concurrence.

Translation invariance and the Z2 symmetry of the chain force the
nearest-neighbour reduced density matrix into X form; in the basis
(uu, ud, du, dd)

    [[Xp, 0,  0,  F*],
     [0,  Yp, Z*, 0 ],
     [0,  Z,  Ym, 0 ],
     [F,  0,  0,  Xm]]

for which the concurrence has the closed form max(0, C1, C2). The general
Wootters route is kept as an independent check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .correlators import Correlators
from .errors import NumericalIntegrityError

PHYSICALITY_TOL = 1e-8
OVERSHOOT_TOL = 1e-9

SIGMA_YY = np.array([[0, 0, 0, -1],
                     [0, 0, 1, 0],
                     [0, 1, 0, 0],
                     [-1, 0, 0, 0]], dtype=complex)


@dataclass(frozen=True)
class NNDensityMatrix:
    Xp: float
    Xm: float
    Yp: float
    Ym: float
    Z: complex
    F: complex

    def to_matrix(self) -> np.ndarray:
        rho = np.zeros((4, 4), dtype=complex)
        rho[0, 0], rho[1, 1], rho[2, 2], rho[3, 3] = self.Xp, self.Yp, self.Ym, self.Xm
        rho[2, 1], rho[1, 2] = self.Z, np.conj(self.Z)
        rho[3, 0], rho[0, 3] = self.F, np.conj(self.F)
        return rho

    @classmethod
    def from_matrix(cls, rho: np.ndarray) -> "NNDensityMatrix":
        """Extract the X-form elements, ignoring everything else."""
        rho = np.asarray(rho)
        return cls(Xp=float(rho[0, 0].real), Xm=float(rho[3, 3].real), Yp=float(rho[1, 1].real),
                   Ym=float(rho[2, 2].real), Z=complex(rho[2, 1]), F=complex(rho[3, 0]))

    @property
    def trace(self) -> float:
        return self.Xp + self.Xm + self.Yp + self.Ym


@dataclass(frozen=True)
class ConcurrenceResult:
    C: float
    C1: float
    C2: float


@dataclass
class RdmCheck:
    name: str
    passed: bool
    residual: float


@dataclass
class RdmReport:
    checks: list[RdmCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> RdmCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def validate_rdm(rho: NNDensityMatrix, tol: float = PHYSICALITY_TOL) -> RdmReport:
    """Trace, diagonal positivity and off-diagonal bounds, with residuals.

    A residual is the amount by which the invariant is violated (0 when it
    holds), except for the trace where it is |trace - 1|.
    """
    trace_res = abs(rho.trace - 1.0)
    pos_res = max(0.0, -min(rho.Xp, rho.Xm, rho.Yp, rho.Ym))
    z_res = max(0.0, abs(rho.Z) ** 2 - rho.Yp * rho.Ym)
    f_res = max(0.0, abs(rho.F) ** 2 - rho.Xp * rho.Xm)
    return RdmReport([
        RdmCheck("trace", trace_res <= tol, trace_res),
        RdmCheck("positivity", pos_res <= tol, pos_res),
        RdmCheck("z_bound", z_res <= tol, z_res),
        RdmCheck("f_bound", f_res <= tol, f_res),
    ])


def rdm_nn(corr: Correlators, check: bool = True) -> NNDensityMatrix:
    """X-form nearest-neighbour density matrix from the fermion correlators.

    Wick's theorem gives <n_i n_{i+1}> = f0^2 - |f1|^2 + |f2|^2, from which
    the other diagonal entries follow by normalisation.
    """
    f0, f1, f2 = corr.f0, corr.f1, corr.f2
    Xp = f0 * f0 - abs(f1) ** 2 + abs(f2) ** 2
    Xm = 1.0 - 2.0 * f0 + Xp
    Y = f0 - Xp
    rho = NNDensityMatrix(Xp=Xp, Xm=Xm, Yp=Y, Ym=Y, Z=complex(f1), F=complex(f2))
    if check:
        report = validate_rdm(rho)
        if not report.passed:
            bad = [f"{c.name}={c.residual:.3g}" for c in report.checks if not c.passed]
            raise NumericalIntegrityError(f"unphysical reduced density matrix ({', '.join(bad)}) from {corr}")
    return rho


def concurrence_xstate(rho: NNDensityMatrix) -> ConcurrenceResult:
    C1 = 2.0 * (abs(rho.Z) - math.sqrt(max(0.0, rho.Xp * rho.Xm)))
    C2 = 2.0 * (abs(rho.F) - math.sqrt(max(0.0, rho.Yp * rho.Ym)))
    C = max(0.0, C1, C2)
    if C > 1.0 + OVERSHOOT_TOL:
        raise NumericalIntegrityError(f"concurrence {C!r} exceeds 1")
    return ConcurrenceResult(C=min(C, 1.0), C1=C1, C2=C2)


def concurrence(corr: Correlators) -> ConcurrenceResult:
    return concurrence_xstate(rdm_nn(corr))


def wootters_general(rho: np.ndarray, tol: float = PHYSICALITY_TOL) -> float:
    """Wootters concurrence of an arbitrary two-qubit density matrix.

    The lambdas are the square roots of the eigenvalues of R = rho rho~. They
    are computed as the singular values of M = Psi^T (sy x sy) Psi with
    rho = Psi Psi^dagger, since M M^dagger is similar to R; this keeps full
    precision for rank-deficient rho where a square root of R's near-zero
    eigenvalues would amplify rounding.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise ValueError(f"density matrix trace {np.trace(rho).real!r} != 1")
    w, v = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    if w.min() < -tol:
        raise ValueError(f"density matrix is not positive semidefinite (min eigenvalue {w.min():.3g})")
    psi = v * np.sqrt(np.clip(w, 0.0, None))
    lam = np.linalg.svd(psi.T @ SIGMA_YY @ psi, compute_uv=False)
    lam = np.sort(lam)[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))
