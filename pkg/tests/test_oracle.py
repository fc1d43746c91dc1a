import math

import numpy as np
import pytest

from xychain import Grid, ModelParams, build_mode_table, concurrence_xstate, wootters_general
from xychain.concurrence import NNDensityMatrix
from xychain.oracle import (bdg_spectrum, build_spin_hamiltonian, cross_check, parity_diagonal,
                            partial_trace_nn)

SX = np.array([[0, 1], [1, 0]]) / 2
SY = np.array([[0, -1j], [1j, 0]]) / 2
SZ = np.array([[1, 0], [0, -1]]) / 2


def site_op(op, n, N):
    out = np.eye(1)
    for i in range(N):
        out = np.kron(out, op if i == n else np.eye(2))
    return out


def kron_hamiltonian(p):
    N = p.N
    H = np.zeros((2 ** N, 2 ** N), dtype=complex)
    for n in range(N):
        j = (n + 1) % N
        H += p.J * ((1 + p.delta) * site_op(SX, n, N) @ site_op(SX, j, N)
                    + (1 - p.delta) * site_op(SY, n, N) @ site_op(SY, j, N))
        H -= p.h * site_op(SZ, n, N)
    return H


@pytest.mark.parametrize("N, h, delta", [(4, 0.3, 0.8), (5, 1.2, 0.5), (6, 0.0, 1.0)])
def test_matches_kron_construction(N, h, delta):
    p = ModelParams(N=N, h=h, delta=delta)
    np.testing.assert_allclose(build_spin_hamiltonian(p).matrix, kron_hamiltonian(p), atol=1e-14)


@pytest.mark.parametrize("h", [0.0, 0.6, 1.7])
def test_hermitian_and_parity_symmetric(h):
    H = build_spin_hamiltonian(ModelParams(N=8, h=h)).matrix
    assert np.max(np.abs(H - H.conj().T)) <= 1e-13
    P = parity_diagonal(8)
    assert np.max(np.abs(P[:, None] * H - H * P[None, :])) <= 1e-12


def test_four_site_ising_ring():
    # 1/2 sum sigma^x sigma^x on a ring of four: energy (4 - 2 * walls) / 2
    w = np.linalg.eigvalsh(build_spin_hamiltonian(ModelParams(N=4, h=0.0, delta=1.0)).matrix)
    np.testing.assert_allclose(w, [-2, -2] + [0] * 12 + [2, 2], atol=1e-13)


def test_field_reversal_with_spin_flip():
    p = ModelParams(N=6, h=0.7)
    H = build_spin_hamiltonian(p).matrix
    H0 = build_spin_hamiltonian(p.replace(h=0.0)).matrix
    flipped = 2 * H0 - H  # same couplings, field -h
    np.testing.assert_allclose(np.linalg.eigvalsh(flipped), np.linalg.eigvalsh(H), atol=1e-10)


def test_partial_trace_examples():
    up = np.zeros(2 ** 5)
    up[0] = 1
    np.testing.assert_allclose(partial_trace_nn(up, 1), np.diag([1, 0, 0, 0]), atol=1e-15)
    bell = np.zeros(2 ** 5)
    bell[0] = bell[0b11000] = 1 / math.sqrt(2)
    rho = partial_trace_nn(bell, 1)
    assert wootters_general(rho) == pytest.approx(1.0, abs=1e-12)
    assert wootters_general(partial_trace_nn(bell, 2)) == pytest.approx(0.0, abs=1e-12)


def test_translation_invariant_state_same_for_all_bonds():
    H = build_spin_hamiltonian(ModelParams(N=8, h=1.3)).matrix
    _, v = np.linalg.eigh(H)
    g = v[:, 0]
    ref = partial_trace_nn(g, 1)
    for site in range(2, 9):
        assert np.max(np.abs(partial_trace_nn(g, site) - ref)) <= 1e-10
    # X form, so the closed form and the general formula agree
    assert concurrence_xstate(NNDensityMatrix.from_matrix(ref)).C == pytest.approx(wootters_general(ref),
                                                                                   abs=1e-10)


def test_bdg_matches_dispersion():
    p = ModelParams(N=100, h=1.2)
    for grid in Grid:
        eps = np.sort(build_mode_table(p.replace(grid=grid)).eps)
        np.testing.assert_allclose(bdg_spectrum(p, grid), eps, atol=1e-12)
        full = bdg_spectrum(p, grid, full=True)
        np.testing.assert_allclose(full, -full[::-1], atol=1e-12)


def test_bdg_small_ring():
    w = bdg_spectrum(ModelParams(N=4, h=0.5))
    np.testing.assert_allclose(w, [0.5, 0.9433981132056604, 0.9433981132056604, 1.5], atol=1e-13)


def test_cross_check_single_quasiparticle():
    rep = cross_check(ModelParams(N=8, h=1.2), [1])
    assert rep.matched_energies == 8 and rep.passed
    conc = {c.label: c.status for c in rep.checks if c.kind == "concurrence"}
    assert conc["periodic:[3]"] == "pass"  # k = 0
    assert conc["periodic:[7]"] == "pass"  # k = pi
    kinds = {c.kind: c.status for c in rep.checks if c.kind.startswith("ground")}
    assert kinds == {"ground_energy": "pass", "ground_level": "pass", "ground_concurrence": "pass"}


def test_periodic_vacuum_is_not_the_small_ring_ground_state():
    p = ModelParams(N=8, h=1.2)
    from xychain.oracle import _ed_spectrum
    e0 = _ed_spectrum(p).energies[0]
    assert abs(build_mode_table(p).ground.E - e0) > 1e-3


@pytest.mark.parametrize("h", [0.3, 0.6, 1.0, 1.2, 1.5])
def test_physical_parity_rule(h):
    rep = cross_check(ModelParams(N=8, h=h), [0, 1, 2, 3, 4, 5, 6, 7, 8], rule="physical")
    assert rep.passed
    assert rep.matched_energies == 256


def test_ed_size_limits():
    with pytest.raises(ValueError):
        build_spin_hamiltonian(ModelParams(N=13))
