import numpy as np
import pytest
from hypothesis import given, strategies as st

from relhydro.kinematics import KinPoint, TwoBodyConfig
from relhydro.spinor import (ALL_LABELS, GAMMA, GAMMA5, METRIC, PAULI, HelicityLabels, basis_spinor,
                             contract_scalar_scalar, contract_scalar_slash1,
                             contract_slash2_scalar, contract_time_time,
                             contract_vector_vector, gamma_block, mbs_current, mbs_scalar,
                             numeric_tetrad, oracle_bispinor, oracle_contractions, s_coeff)

pm = st.sampled_from((1, -1))
mass = st.floats(0.2, 5.0)
mom = st.floats(0.01, 5.0)
ang = st.floats(0.0, np.pi)
azi = st.floats(0.0, 2 * np.pi)


def bar(u):
    return u.conj() @ GAMMA[0]


def slash_lower(a):
    return np.einsum("m,mij->ij", a, GAMMA)


class TestTetrad:
    def test_scalar_products(self):
        t = numeric_tetrad()
        for r in (1, -1):
            for lam in (1, -1):
                assert t.dot(t.b(r), t.b(-lam)) == pytest.approx(0.5 * (lam == r))
                assert t.dot(t.n(r), t.n(-lam)) == pytest.approx(0.5 * (lam == r))
                assert t.dot(t.b(r), t.n(lam)) == 0

    def test_completeness(self):
        assert np.abs(numeric_tetrad().completeness() - METRIC).max() < 1e-14


class TestGammaBlock:
    def test_examples(self):
        assert np.allclose(gamma_block(-1, 1, 1, -1), [1, 0, 0, -1])
        assert np.allclose(gamma_block(1, 1, 1, -1), [0, 1, 1j, 0])
        for C in (1, -1):
            for A in (1, -1):
                for s in (1, -1):
                    assert not gamma_block(C, A, s, s).any()

    def test_bad_index(self):
        with pytest.raises(ValueError):
            gamma_block(0, 1, 1, -1)

    def test_matches_basis_spinors(self):
        # Gamma_mu = ubar_sigma(b_C) gamma_mu u_{-rho}(b_{-A})
        for C in (1, -1):
            for A in (1, -1):
                for s in (1, -1):
                    for r in (1, -1):
                        u, v = basis_spinor(s, C), basis_spinor(-r, -A)
                        ref = np.array([bar(u) @ g @ v for g in GAMMA]) @ METRIC
                        assert np.abs(gamma_block(C, A, s, r) - ref).max() < 1e-14


class TestBasisSpinors:
    def test_defining_relations(self):
        t = numeric_tetrad()
        for A in (1, -1):
            for r in (1, -1):
                u = basis_spinor(r, A)
                assert np.abs(slash_lower(t.b(A)) @ u).max() < 1e-14
                assert np.abs(GAMMA5 @ u - r * u).max() < 1e-14
                proj = 0.5 * (np.eye(4) + r * GAMMA5) @ slash_lower(t.b(A))
                assert np.abs(np.outer(u, bar(u)) - proj).max() < 1e-14


class TestSCoeff:
    def test_example_zero_angles(self):
        m, k = 1.3, 0.7
        w = np.hypot(m, k)
        assert s_coeff(m, k, 0, 0, 1, 1, -1) == pytest.approx(np.sqrt(w + k))
        assert s_coeff(m, k, 0, 0, 1, -1, -1) == 0

    @pytest.mark.parametrize("particle", [1, 2])
    def test_rest_magnitude(self, particle):
        m = 2.0
        for A in (1, -1):
            for r in (1, -1):
                for lam in (1, -1):
                    v = s_coeff(m, 0.0, 0.9, 0.4, A, r, lam, particle)
                    assert abs(v) <= np.sqrt(m) + 1e-14
        # at zero angles exactly one column entry survives
        assert abs(s_coeff(m, 0.0, 0.0, 0.0, 1, 1, -1)) == pytest.approx(np.sqrt(m))

    @given(mass, mom, ang, azi, pm, pm, pm, st.sampled_from((1, 2)))
    def test_against_explicit(self, m, k, th, ph, A, r, lam, particle):
        u = oracle_bispinor(m, k, th, ph, lam, particle)
        ref = -(bar(basis_spinor(r, A)) @ u)
        assert abs(s_coeff(m, k, th, ph, A, r, lam, particle) - ref) < 1e-12 * (1 + abs(ref))
        assert abs(ref) <= np.sqrt(2 * np.hypot(m, k)) + 1e-12

    @given(mass, mom, mom, ang, azi, ang, azi, pm, pm, st.sampled_from((1, 2)))
    def test_mbs_bilinears(self, m, k, kp, th, ph, thp, php, lam, lamp, particle):
        u = oracle_bispinor(m, k, th, ph, lam, particle)
        v = oracle_bispinor(m, kp, thp, php, lamp, particle)
        jref = np.array([bar(v) @ g @ u for g in GAMMA]) @ METRIC
        j = mbs_current(m, k, th, ph, lam, kp, thp, php, lamp, particle)
        scale = np.sqrt(np.hypot(m, k) * np.hypot(m, kp))
        assert np.abs(j - jref).max() < 1e-12 * scale
        s = mbs_scalar(m, k, th, ph, lam, kp, thp, php, lamp, particle)
        assert abs(s - bar(v) @ u) < 1e-12 * scale


class TestOracleBispinor:
    def test_rest(self):
        u = oracle_bispinor(2.0, 0.0, 0.0, 0.0, 1)
        # sqrt(w + m) = 2 at rest for m = 2, lower components vanish
        assert np.allclose(np.abs(u), [2.0, 0, 0, 0])

    @given(mass, mom, ang, azi, pm, st.sampled_from((1, 2)))
    def test_dirac_normalisation(self, m, k, th, ph, lam, particle):
        u = oracle_bispinor(m, k, th, ph, lam, particle)
        sgn = 1 if particle == 1 else -1
        n = np.array([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)])
        w = np.hypot(m, k)
        p = np.concatenate([[w], sgn * k * n])
        res = (np.einsum("m,mij->ij", METRIC @ p, GAMMA) - m * np.eye(4)) @ u
        assert np.abs(res).max() < 1e-12 * (1 + w)
        assert (bar(u) @ u).real == pytest.approx(2 * m, rel=1e-12)
        assert (bar(u) @ GAMMA[0] @ u).real == pytest.approx(2 * w, rel=1e-12)
        # helicity lam/2 along the particle's own momentum
        sig = np.array([np.block([[s, 0 * s], [0 * s, s]]) for s in PAULI])
        h = sgn * np.einsum("i,ijk->jk", n, sig)
        assert np.abs(h @ u - lam * u).max() < 1e-12 * (1 + w)


CONTRACTIONS = [contract_vector_vector, contract_scalar_slash1, contract_slash2_scalar,
                contract_scalar_scalar]
KEYS = ["vv", "s_slash1", "slash2_s", "ss"]


class TestContractions:
    def test_labels(self):
        with pytest.raises(ValueError):
            HelicityLabels(1, 0, 1, 1)
        assert len(ALL_LABELS) == 16

    @given(mass, mass, mom, mom, ang, st.integers(0, 15),
           st.lists(st.floats(-2, 2), min_size=4, max_size=4))
    def test_against_oracle(self, m1, m2, k, kp, beta, li, kf):
        cfg = TwoBodyConfig(m1, m2)
        p = KinPoint(k, kp)
        L = ALL_LABELS[li]
        o = oracle_contractions(cfg, p, beta, L)
        for fn, key in zip(CONTRACTIONS, KEYS):
            ref = o[key]
            assert abs(ref.imag) < 1e-11 * (1 + abs(ref))
            assert fn(cfg, p, beta, L) == pytest.approx(ref.real, rel=1e-11, abs=1e-11)
        e1 = (np.hypot(m1, k) + np.hypot(m1, kp)) / (2 * m1)
        e2 = (np.hypot(m2, k) + np.hypot(m2, kp)) / (2 * m2)
        tt = (kf[0] * o["tt"] - kf[1] * e1 * o["s0_1"] - kf[2] * e2 * o["s0_2"]
              + kf[3] * e1 * e2 * o["s0_12"]).real
        assert contract_time_time(cfg, p, beta, L, tuple(kf)) == pytest.approx(
            tt, rel=1e-11, abs=1e-11 * (1 + sum(map(abs, kf))))

    def test_point_like_time_time(self):
        cfg, p = TwoBodyConfig(0.7, 1.9), KinPoint(0.4, 1.3)
        for L in ALL_LABELS:
            o = oracle_contractions(cfg, p, 0.8, L)
            assert contract_time_time(cfg, p, 0.8, L) == pytest.approx(o["tt"].real, abs=1e-12)
            assert contract_time_time(cfg, p, 0.8, L, (0, 0, 0, 0)) == 0

    def test_at_rest(self):
        eps = 1e-9
        cfg, p = TwoBodyConfig(1.5, 2.5), KinPoint(eps, eps)
        L = HelicityLabels(1, 1, 1, 1)
        assert contract_vector_vector(cfg, p, 0.0, L) == pytest.approx(4, rel=1e-8)
        assert contract_scalar_scalar(cfg, p, 0.0, L) / (4 * cfg.m1 * cfg.m2) == \
            pytest.approx(4, rel=1e-8)
        assert contract_time_time(cfg, p, 0.0, L) == pytest.approx(4, rel=1e-8)
        # ubar u = 2 m1 per particle times (P2 + K2)^0 = 2 m2, over N^-1 = m1 m2
        assert contract_scalar_slash1(cfg, p, 0.0, L) == pytest.approx(8 * cfg.m1, rel=1e-8)
        assert contract_slash2_scalar(cfg, p, 0.0, L) == pytest.approx(8 * cfg.m2, rel=1e-8)

    @given(mom, mom)
    def test_collinear_selection(self, k, kp):
        cfg, p = TwoBodyConfig(0.9, 1.4), KinPoint(k, kp)
        for L in ALL_LABELS:
            flips = (L.lk1 != L.lp1) + (L.lk2 != L.lp2)
            if flips == 1:
                for fn in CONTRACTIONS:
                    assert abs(fn(cfg, p, 0.0, L)) < 1e-12
                assert abs(contract_time_time(cfg, p, 0.0, L, (1, 0.3, 0.2, 0.1))) < 1e-12

    def test_vectorised_beta(self):
        cfg, p = TwoBodyConfig(0.9, 1.4), KinPoint(0.5, 1.1)
        b = np.linspace(0, np.pi, 7)
        L = ALL_LABELS[5]
        v = contract_vector_vector(cfg, p, b, L)
        assert np.allclose(v, [contract_vector_vector(cfg, p, x, L) for x in b], atol=1e-14)
