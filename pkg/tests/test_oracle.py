import numpy as np
import pytest

from relhydro.interaction import build_form_factors
from relhydro.kernel import channel_block
from relhydro.kinematics import KinPoint, TwoBodyConfig
from relhydro.oracle import (helicity_spinors, oracle_amplitude, oracle_currents,
                             oracle_helicity_wave, oracle_jj_integral, oracle_kernel_element)
from relhydro.spinor import ALL_LABELS, METRIC, HelicityLabels, oracle_bispinor

CFG = TwoBodyConfig(1.0, 1.7, 1, 0.1)
P = KinPoint(0.6, 1.5)


def test_spinors_match_single_point_version():
    th, ph = np.array([0.3, 1.2, 2.9]), np.array([0.1, 4.0, 2.2])
    for particle in (1, 2):
        for lam in (1, -1):
            U = helicity_spinors(1.3, 0.8, th, ph, lam, particle)
            for i in range(3):
                ref = oracle_bispinor(1.3, 0.8, th[i], ph[i], lam, particle)
                assert np.abs(U[i] - ref).max() < 1e-14


@pytest.mark.parametrize("J,name", [(0, "A"), (1, "B"), (2, "A")])
def test_gauge_parameter_independence(J, name):
    b = channel_block(J, name)
    ffs = build_form_factors(CFG, ["dipole-proton", "anomalous-electron"])
    for i in range(len(b)):
        for j in range(len(b)):
            v1 = oracle_kernel_element(CFG, b, i, j, P, ffs, n_x=48, xi=1.0)
            v17 = oracle_kernel_element(CFG, b, i, j, P, ffs, n_x=48, xi=17.0)
            assert abs(v1 - v17) <= 1e-12 * abs(v1)


def test_projected_currents_conserved(rng):
    th = rng.uniform(0, np.pi, (2, 20))
    ph = rng.uniform(0, 2 * np.pi, (2, 20))
    for L in ALL_LABELS:
        j1, j2, q, q2, _ = oracle_currents(CFG, L, 0.6, 1.5, th[0], ph[0], th[1], ph[1])
        for jj in (j1, j2):
            qj = np.einsum("ni,ij,nj->n", q, METRIC, jj)
            assert np.all(np.abs(qj) <= 1e-12 * np.sqrt(-q2) * np.abs(jj).max(axis=1))


def test_unprojected_amplitude_is_gauge_dependent():
    # without the projector the q_mu q_nu term survives (q0 = 0 is not on shell)
    L = HelicityLabels(1, 1, 1, 1)
    th, ph = np.array([0.7]), np.array([0.4])
    a1 = oracle_amplitude(CFG, L, 0.6, 1.5, 0.0, 0.0, th, ph, xi=1.0, project=False)
    a17 = oracle_amplitude(CFG, L, 0.6, 1.5, 0.0, 0.0, th, ph, xi=17.0, project=False)
    assert abs(a1 - a17).max() > 1e-6 * abs(a1).max()
    b1 = oracle_amplitude(CFG, L, 0.6, 1.5, 0.0, 0.0, th, ph, xi=1.0)
    b17 = oracle_amplitude(CFG, L, 0.6, 1.5, 0.0, 0.0, th, ph, xi=17.0)
    assert abs(b1 - b17).max() <= 1e-13 * abs(b1).max()


def test_phi_average_exact():
    L = HelicityLabels(1, -1, -1, -1)
    a = oracle_helicity_wave(CFG, 1, L, P, n_phi=1)
    b = oracle_helicity_wave(CFG, 1, L, P, n_phi=7)
    assert a == pytest.approx(b, rel=1e-13)


@pytest.mark.slow
@pytest.mark.parametrize("L", [HelicityLabels(1, 1, 1, 1), HelicityLabels(1, 1, 1, -1),
                               HelicityLabels(-1, 1, -1, -1)])
def test_wigner_eckart_selection(L):
    p = KinPoint(0.5, 2.0)
    wave = oracle_helicity_wave(CFG, 1, L, p)
    jj = lambda J, mu, Jp, mup: oracle_jj_integral(CFG, J, mu, Jp, mup, L, p,
                                                   n_theta=12, n_phi=24)
    for J, mu, Jp, mup in ((1, 0, 2, 0), (1, 1, 1, 0), (2, -1, 1, 1), (1, -1, 2, 1)):
        assert abs(jj(J, mu, Jp, mup)) < 1e-8 * abs(wave)
    # reduced element is mu independent and matches the 2D projection
    for mu in (-1, 0, 1):
        v = jj(1, mu, 1, mu)
        assert abs(v.imag) < 1e-12 * abs(v)
        assert v.real * 3 / (4 * np.pi) == pytest.approx(wave, rel=1e-5)
