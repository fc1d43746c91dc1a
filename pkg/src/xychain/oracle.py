"""Brute-force checks of the free-fermion solution on small rings.

Dense spin-basis diagonalisation, two-site partial traces with the general
Wootters formula, and a real-space Bogoliubov-de Gennes spectrum. Nothing here
shares code with the momentum-space route except the parameter type.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .concurrence import concurrence_xstate, rdm_nn, wootters_general
from .correlators import build_mode_table, correlators_of, energy_of
from .spectrum import Grid, ModelParams

MAX_ED_SITES = 12
PARITY_TOL = 0.01
CLUSTER_TOL = 1e-9


@dataclass
class SpinHamiltonian:
    """Dense Hamiltonian in the S^z product basis.

    Basis index bit (N - n) is 1 when site n (1-based) points down, so
    site 1 is the most significant bit and |up...up> is index 0.
    """

    N: int
    matrix: np.ndarray
    params: ModelParams


def build_spin_hamiltonian(params: ModelParams) -> SpinHamiltonian:
    N = params.N
    if not 4 <= N <= MAX_ED_SITES:
        raise ValueError(f"spin ED supports 4 <= N <= {MAX_ED_SITES}, got {N}")
    dim = 1 << N
    idx = np.arange(dim)
    down = [(idx >> (N - 1 - n)) & 1 for n in range(N)]
    H = np.zeros((dim, dim))
    sz_total = sum(0.5 - d for d in down)
    H[idx, idx] = -params.h * sz_total
    for n in range(N):
        j = (n + 1) % N
        flipped = idx ^ (1 << (N - 1 - n)) ^ (1 << (N - 1 - j))
        antiparallel = down[n] != down[j]
        # (1+d) SxSx + (1-d) SySy = (S+S- + S-S+)/2 + d (S+S+ + S-S-)/2
        amp = np.where(antiparallel, 0.5, 0.5 * params.delta) * params.J
        np.add.at(H, (flipped, idx), amp)
    return SpinHamiltonian(N=N, matrix=H, params=params)


def parity_diagonal(N: int) -> np.ndarray:
    """Diagonal of P = prod_n (2 S^z_n), eigenvalues +-1."""
    idx = np.arange(1 << N)
    n_down = np.zeros(1 << N, dtype=int)
    for n in range(N):
        n_down += (idx >> n) & 1
    return np.where(n_down % 2 == 0, 1.0, -1.0)


def partial_trace_nn(state: np.ndarray, site: int, N: Optional[int] = None) -> np.ndarray:
    """Reduced density matrix of sites (site, site + 1 mod N), 1-based, basis (uu, ud, du, dd)."""
    state = np.asarray(state, dtype=complex)
    if N is None:
        N = int(round(np.log2(state.size)))
    if state.size != 1 << N:
        raise ValueError("state length is not a power of two")
    if abs(np.vdot(state, state).real - 1.0) > 1e-10:
        raise ValueError("state is not normalised")
    if not 1 <= site <= N:
        raise ValueError(f"site must lie in [1, {N}]")
    a, b = site - 1, site % N
    t = np.moveaxis(state.reshape((2,) * N), (a, b), (0, 1)).reshape(4, -1)
    return t @ t.conj().T


def bdg_spectrum(params: ModelParams, grid: Grid | str | None = None, full: bool = False) -> np.ndarray:
    """Eigenvalues of the real-space BdG matrix of the fermionised ring.

    H = sum_ij A_ij a+_i a_j + 1/2 sum_ij (B_ij a+_i a+_j + h.c.), with the
    closing bond multiplied by +1 (periodic) or -1 (antiperiodic). Returns
    the N non-negative quasiparticle energies sorted, or all 2N if ``full``.
    """
    grid = Grid.parse(grid if grid is not None else params.grid)
    N, J, d = params.N, params.J, params.delta
    A = np.diag(np.full(N, -params.h))
    B = np.zeros((N, N))
    for n in range(N):
        j = n + 1
        sign = 1.0
        if j == N:
            j = 0
            sign = 1.0 if grid is Grid.PERIODIC else -1.0
        A[n, j] += 0.5 * J * sign
        A[j, n] += 0.5 * J * sign
        B[n, j] += 0.5 * J * d * sign
        B[j, n] -= 0.5 * J * d * sign
    bdg = np.block([[A, B], [-B, -A]])
    w = np.linalg.eigvalsh(bdg)
    return w if full else np.sort(w[N:])


# --------------------------------------------------------------------------- #
# cross-check


@dataclass
class OracleCheck:
    kind: str
    label: str
    analytic: float
    oracle: float
    residual: float
    status: str  # pass | fail | skip


@dataclass
class OracleReport:
    params: ModelParams
    tol: float
    rule: str
    checks: list[OracleCheck] = field(default_factory=list)

    @property
    def matched_energies(self) -> int:
        return sum(1 for c in self.checks if c.kind == "energy" and c.status == "pass")

    @property
    def max_energy_residual(self) -> float:
        res = [c.residual for c in self.checks if c.kind in ("energy", "ground_energy")]
        return max(res, default=0.0)

    @property
    def concurrence_checks(self) -> list[OracleCheck]:
        return [c for c in self.checks if c.kind in ("concurrence", "ground_concurrence")]

    @property
    def failures(self) -> list[OracleCheck]:
        return [c for c in self.checks if c.status == "fail"]

    @property
    def skipped(self) -> list[OracleCheck]:
        return [c for c in self.checks if c.status == "skip"]

    @property
    def passed(self) -> bool:
        return not self.failures


@dataclass
class _Spectrum:
    energies: np.ndarray
    vectors: np.ndarray
    parity: np.ndarray


def _ed_spectrum(params: ModelParams) -> _Spectrum:
    H = build_spin_hamiltonian(params).matrix
    w, v = np.linalg.eigh(H)
    pdiag = parity_diagonal(params.N)
    # rotate each degenerate cluster onto parity eigenvectors
    start = 0
    while start < len(w):
        stop = start + 1
        while stop < len(w) and w[stop] - w[stop - 1] < CLUSTER_TOL:
            stop += 1
        if stop - start > 1:
            block = v[:, start:stop]
            pb = block.T @ (pdiag[:, None] * block)
            _, u = np.linalg.eigh(0.5 * (pb + pb.T))
            v[:, start:stop] = block @ u
        start = stop
    par = np.einsum("ia,i,ia->a", v, pdiag, v)
    rounded = np.where(np.abs(par - 1) < PARITY_TOL, 1, np.where(np.abs(par + 1) < PARITY_TOL, -1, 0))
    return _Spectrum(w, v, rounded)


def sector_parity(N: int, grid: Grid) -> int:
    """Spin parity P of the states the given fermion grid describes.

    Periodic fermions live in the odd fermion-number sector, antiperiodic in
    the even one, and P = (-1)^(N + fermion number).
    """
    n_fermions_parity = 1 if grid is Grid.PERIODIC else 0
    return -1 if (N + n_fermions_parity) % 2 else 1


def fermion_parity(table, occ) -> int:
    """Parity (0 even, 1 odd) of the Jordan-Wigner fermion number of a Bogoliubov Fock state.

    Paired modes (k, -k) hold an even number of fermions in the vacuum; the
    unpaired k = 0 and k = pi modes are filled in the vacuum exactly when
    cos 2theta = -1. Each quasiparticle flips the parity.
    """
    k = table.k
    unpaired = (k == 0.0) | np.isclose(k, np.pi, rtol=0, atol=1e-15)
    vac = int(np.count_nonzero(table.cos2t[unpaired] < 0)) % 2
    return (vac + len(tuple(occ))) % 2


def fock_energies(table) -> np.ndarray:
    """Energies of all 2^N Bogoliubov Fock states of one grid."""
    N = table.N
    occ = (np.arange(1 << N)[:, None] >> np.arange(N)) & 1
    return table.ground.E + occ @ table.eps


def _label(grid: Grid, occ) -> str:
    return f"{grid.value}:[{' '.join(str(i) for i in occ)}]"


def cross_check(params: ModelParams, m_list: Iterable[int], tol: float = 1e-8,
                rule: str = "odd-periodic", site: int = 1) -> OracleReport:
    """Compare free-fermion energies and concurrences with spin-basis ED.

    rule="odd-periodic": every periodic-grid state with odd m in ``m_list`` must
    appear in the P = sector_parity(periodic) part of the ED spectrum, and the
    antiperiodic vacuum must be the ED ground state.

    rule="physical": states of both grids with m in ``m_list`` are kept only if
    their fermion parity matches the grid, and the lowest such state must be
    the ED ground state.

    Concurrences are compared for matched levels that are isolated within
    10 * tol both in their ED parity sector and among all Fock states of the
    grid (a zero mode makes the occupation label ambiguous); the rest are
    reported as skipped.
    """
    if rule not in ("odd-periodic", "physical"):
        raise ValueError(f"unknown rule {rule!r}")
    m_list = sorted(set(int(m) for m in m_list))
    ed = _ed_spectrum(params)
    report = OracleReport(params=params, tol=tol, rule=rule)
    conc_cache: dict[int, float] = {}

    def ed_concurrence(i: int) -> float:
        if i not in conc_cache:
            conc_cache[i] = wootters_general(partial_trace_nn(ed.vectors[:, i], site, params.N))
        return conc_cache[i]

    def isolated(i: int, E: float, grid: Grid) -> bool:
        # ED vectors are parity-resolved, so only same-sector neighbours make the level ambiguous
        same = ed.parity == ed.parity[i]
        ed_alone = int(np.count_nonzero(np.abs(ed.energies[same] - ed.energies[i]) < 10 * tol)) == 1
        fock_alone = int(np.count_nonzero(np.abs(fock[grid] - E) < 10 * tol)) == 1
        return ed_alone and fock_alone

    def check_state(table, grid, occ, kind_e="energy", kind_c="concurrence"):
        E = energy_of(table, occ)
        P = sector_parity(params.N, grid)
        candidates = np.flatnonzero(ed.parity == P)
        label = _label(grid, occ)
        if candidates.size == 0:
            report.checks.append(OracleCheck(kind_e, label, E, float("nan"), float("inf"), "fail"))
            return
        i = candidates[np.argmin(np.abs(ed.energies[candidates] - E))]
        res = abs(ed.energies[i] - E)
        matched = res <= tol
        report.checks.append(OracleCheck(kind_e, label, E, float(ed.energies[i]), float(res),
                                         "pass" if matched else "fail"))
        if not matched:
            return
        c_an = concurrence_xstate(rdm_nn(correlators_of(table, occ))).C
        if not isolated(i, E, grid):
            report.checks.append(OracleCheck(kind_c, label, c_an, float("nan"), 0.0, "skip"))
            return
        c_ed = ed_concurrence(i)
        r = abs(c_an - c_ed)
        report.checks.append(OracleCheck(kind_c, label, c_an, c_ed, r, "pass" if r <= tol else "fail"))

    tables = {g: build_mode_table(params.replace(grid=g)) for g in Grid}
    fock = {g: fock_energies(t) for g, t in tables.items()}
    ground_E = float(ed.energies[0])

    if rule == "odd-periodic":
        per = tables[Grid.PERIODIC]
        for m in m_list:
            if m % 2 == 0 or m > params.N:
                continue
            for occ in itertools.combinations(range(params.N), m):
                check_state(per, Grid.PERIODIC, occ)
        anti = tables[Grid.ANTIPERIODIC]
        e0 = anti.ground.E
        r = abs(e0 - ground_E)
        report.checks.append(OracleCheck("ground_energy", _label(Grid.ANTIPERIODIC, ()), e0, ground_E, r,
                                         "pass" if r <= tol else "fail"))
        check_state(anti, Grid.ANTIPERIODIC, (), "ground_level", "ground_concurrence")
        return report

    lowest = None
    for grid, table in tables.items():
        want = 1 if grid is Grid.PERIODIC else 0
        for m in m_list:
            if m > params.N:
                continue
            for occ in itertools.combinations(range(params.N), m):
                if fermion_parity(table, occ) != want:
                    continue
                check_state(table, grid, occ)
        # lowest physical state of this grid: the vacuum, or the vacuum plus the softest mode
        if fermion_parity(table, ()) == want:
            cand = ((), table.ground.E)
        else:
            i = int(np.argmin(table.eps))
            cand = ((i,), energy_of(table, (i,)))
        if lowest is None or cand[1] < lowest[2]:
            lowest = (grid, cand[0], cand[1])
    grid, occ, e0 = lowest
    r = abs(e0 - ground_E)
    report.checks.append(OracleCheck("ground_energy", _label(grid, occ), e0, ground_E, r,
                                     "pass" if r <= tol else "fail"))
    check_state(tables[grid], grid, occ, "ground_level", "ground_concurrence")
    return report
