import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xychain import (ConcurrenceResult, Correlators, NNDensityMatrix, NumericalIntegrityError, concurrence,
                     concurrence_xstate, rdm_nn, validate_rdm, wootters_general)


def corr(f0, f1=0.0, f2=0.0):
    return Correlators(f0=f0, f1=complex(f1), f2=f2, E=0.0)


def test_polarized_product_state():
    rho = rdm_nn(corr(1.0))
    assert (rho.Xp, rho.Xm, rho.Yp, rho.Ym, rho.Z, rho.F) == (1.0, 0.0, 0.0, 0.0, 0, 0)
    assert concurrence_xstate(rho).C == 0.0


def test_maximally_mixed():
    rho = rdm_nn(corr(0.5))
    assert (rho.Xp, rho.Xm, rho.Yp, rho.Ym) == (0.25, 0.25, 0.25, 0.25)


def test_bell_type_x_matrix():
    r = concurrence_xstate(NNDensityMatrix(Xp=0, Xm=0, Yp=0.5, Ym=0.5, Z=0.5, F=0))
    assert r == ConcurrenceResult(C=1.0, C1=1.0, C2=-1.0)


@settings(max_examples=300)
@given(f0=st.floats(0, 1), f1r=st.floats(-1, 1), f1i=st.floats(-1, 1), f2=st.floats(-0.5, 0.5))
def test_trace_identity(f0, f1r, f1i, f2):
    rho = rdm_nn(Correlators(f0, complex(f1r, f1i), f2, 0.0), check=False)
    assert abs(rho.trace - 1.0) <= 1e-12


def test_bell_and_product_via_wootters():
    phi = np.array([1, 0, 0, 1]) / math.sqrt(2)
    assert wootters_general(np.outer(phi, phi)) == pytest.approx(1.0, abs=1e-12)
    up = np.array([1, 0, 0, 0])
    assert wootters_general(np.outer(up, up)) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("p", [0.0, 0.2, 1 / 3, 0.5, 0.8, 1.0])
def test_werner_state(p):
    psi = np.array([0, 1, -1, 0]) / math.sqrt(2)
    rho = p * np.outer(psi, psi) + (1 - p) * np.eye(4) / 4
    assert wootters_general(rho) == pytest.approx(max(0.0, (3 * p - 1) / 2), abs=1e-12)


def test_werner_08_frozen():
    # direct eigen-decomposition of R = rho (yy) rho* (yy) gives 0.6999999999999998
    psi = np.array([0, 1, -1, 0]) / math.sqrt(2)
    rho = 0.8 * np.outer(psi, psi) + 0.2 * np.eye(4) / 4
    assert wootters_general(rho) == pytest.approx(0.7, abs=1e-12)
    assert concurrence_xstate(NNDensityMatrix.from_matrix(rho)).C == pytest.approx(0.7, abs=1e-12)


def random_x_matrix(rng):
    d = rng.dirichlet(np.ones(4))
    Xp, Yp, Ym, Xm = d
    z = math.sqrt(Yp * Ym) * rng.uniform(0, 1) * np.exp(2j * math.pi * rng.uniform())
    f = math.sqrt(Xp * Xm) * rng.uniform(0, 1) * np.exp(2j * math.pi * rng.uniform())
    return NNDensityMatrix(Xp=Xp, Xm=Xm, Yp=Yp, Ym=Ym, Z=z, F=f)


def test_xstate_matches_wootters_on_random_matrices():
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(1000):
        rho = random_x_matrix(rng)
        worst = max(worst, abs(concurrence_xstate(rho).C - wootters_general(rho.to_matrix())))
    assert worst <= 1e-10


def test_validate_rdm():
    good = rdm_nn(corr(0.3, 0.1, 0.05))
    assert validate_rdm(good).passed
    bad = NNDensityMatrix(Xp=-0.01, Xm=0.51, Yp=0.25, Ym=0.25, Z=0, F=0)
    rep = validate_rdm(bad)
    assert not rep["positivity"].passed
    assert rep["positivity"].residual == pytest.approx(0.01, abs=1e-15)
    bad = NNDensityMatrix(Xp=0.25, Xm=0.25, Yp=0.25, Ym=0.25, Z=0.4, F=0)
    rep = validate_rdm(bad)
    assert not rep["z_bound"].passed and rep["f_bound"].passed


def test_unphysical_correlators_raise():
    with pytest.raises(NumericalIntegrityError):
        rdm_nn(corr(0.5, 0.9))


def test_overshoot_raises():
    with pytest.raises(NumericalIntegrityError):
        concurrence_xstate(NNDensityMatrix(Xp=0, Xm=0, Yp=0.5, Ym=0.5, Z=0.6, F=0))


def test_wootters_rejects_invalid_input():
    with pytest.raises(ValueError):
        wootters_general(np.eye(4))
    with pytest.raises(ValueError):
        wootters_general(np.diag([1.2, -0.2, 0, 0]))
    m = np.eye(4) / 4
    m[0, 1] = 0.1
    with pytest.raises(ValueError):
        wootters_general(m)


def test_concurrence_of_correlators():
    # f0 = |f1| = 1/2 empties the uu and dd populations, leaving a Bell pair
    r = concurrence(corr(0.5, 0.5))
    assert (r.C, r.C1) == (1.0, 1.0)
