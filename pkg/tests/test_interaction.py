import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from relhydro.interaction import (DIPOLE_MASS2, MU_PROTON, ConstantFn, FormFactorSet,
                                  as_kfamily, build_form_factors, k_families, k_functions, moment_set,
                                  point_like, r_tilde, sachs, u_tilde, uehling, z_tilde)
from relhydro.kinematics import KinPoint, TwoBodyConfig, preset, rho12, y_of
from relhydro.special_fn import legendre_p, legendre_q, legendre_q_deriv

# (2 alpha/pi) int_0^1 x(1-x) ln(1 + x(1-x) Q^2) dx, alpha = 1/137, m = 1 (mpmath, 25 digits)
UEHLING_FROZEN = [
    (0.01, 1.547296079179131915e-6),
    (0.3, 4.5038129818664578516e-5),
    (1.0, 1.4040380221043360948e-4),
    (4.0, 4.4902900175817758455e-4),
    (100.0, 2.3199224368842703081e-3),
    (1e4, 5.84286306336824332e-3),
]

mom = st.floats(0.05, 5.0)


def dipole_k(scale2=2.0):
    return lambda q2: (1.0 - np.asarray(q2, float) / scale2) ** -2


def mp_moment(ell, k, kp, K, power=1):
    """int K(q^2) P_l(x) / (q^2)^power dx with mpmath, split at the forward peak."""
    mp.mp.dps = 30
    k, kp = mp.mpf(k), mp.mpf(kp)

    def f(x):
        q2 = -(k * k + kp * kp - 2 * k * kp * x)
        return K(q2) * mp.legendre(ell, x) / q2 ** power

    return float(mp.quad(f, [-1, 0, 0.9, 0.99, 1]))


class TestModels:
    def test_sachs_examples(self):
        assert sachs(1, 0, -3.0, 2.0) == (1.0, 1.0)
        ge, gm = sachs(1.0, 1.7928, 0.0, 938.27)
        assert (ge, gm) == (1.0, pytest.approx(2.7928))
        f1, f2, m = 0.8, 1.3, 1.7
        q2 = -4 * m * m * f1 / f2
        assert sachs(f1, f2, q2, m)[0] == pytest.approx(0.0, abs=1e-15)

    def test_point_like(self):
        ffs = point_like()
        assert ffs.is_point_like
        assert k_functions(ffs, preset("hydrogen"), -0.3) == (1.0, 0.0, 0.0, 0.0)
        assert ffs.pi(0.1, -2.0) == 1.0
        assert FormFactorSet(f2e=ConstantFn(0.1)).is_point_like is False

    def test_dipole(self):
        cfg = preset("hydrogen")
        ffs = build_form_factors(cfg, ["dipole-proton"])
        K = k_functions(ffs, cfg, 0.0)
        assert K.kI == pytest.approx(MU_PROTON, rel=1e-14)
        assert K.kII == 0.0 and K.kIV == 0.0
        assert K.kIII == pytest.approx(MU_PROTON - 1, rel=1e-14)
        # Sachs inversion reproduces the dipole at finite transfer
        q2 = -0.2e6
        ge, gm = sachs(ffs.f1p(q2), ffs.f2p(q2), q2, cfg.m2)
        g = (1 - q2 / DIPOLE_MASS2) ** -2
        assert (ge, gm) == (pytest.approx(g, rel=1e-13), pytest.approx(MU_PROTON * g, rel=1e-13))

    def test_anomalous_electron(self):
        cfg = preset("hydrogen")
        K = k_functions(build_form_factors(cfg, ["anomalous-electron"]), cfg, -1.0)
        a = cfg.alpha / (2 * np.pi)
        assert K == pytest.approx((1 + a, a, 0.0, 0.0), rel=1e-14)

    def test_builder_errors(self):
        cfg = preset("hydrogen")
        with pytest.raises(ValueError):
            build_form_factors(cfg, ["bogus"])
        with pytest.raises(ValueError):
            build_form_factors(cfg, vacuum_polarization="two-loop")
        assert build_form_factors(cfg, ["point"]).is_point_like
        assert build_form_factors(cfg, ["uehling"]).names == ("uehling",)

    def test_timelike_refused(self):
        with pytest.raises(ValueError):
            k_functions(point_like(), preset("hydrogen"), 1e-3)

    def test_k_families(self):
        cfg = preset("hydrogen")
        fams = k_families(point_like(), cfg)
        assert fams[0].constant and fams[0].value0 == 1.0
        assert all(f.zero for f in fams[1:])
        fams = k_families(build_form_factors(cfg, ["dipole-proton"]), cfg)
        assert not fams[0].constant
        assert fams[0](np.array([0.0, -1e5])).shape == (2,)


class TestUehling:
    @pytest.mark.parametrize("Q2,ref", UEHLING_FROZEN)
    def test_frozen(self, Q2, ref):
        assert uehling(1 / 137, -Q2, 1.0) - 1 == pytest.approx(ref, rel=1e-11)

    def test_zero_and_branch_continuity(self):
        assert uehling(1 / 137, 0.0, 1.0) == 1.0
        below = uehling(1 / 137, -0.5 * (1 - 1e-12), 1.0)
        above = uehling(1 / 137, -0.5 * (1 + 1e-12), 1.0)
        assert above - below == pytest.approx(0.0, abs=1e-15)

    def test_k_function_within_alpha(self):
        cfg = preset("hydrogen")
        ffs = build_form_factors(cfg, vacuum_polarization="uehling")
        assert k_functions(ffs, cfg, 0.0).kI == 1.0
        assert abs(k_functions(ffs, cfg, -1.0).kI - 1) < cfg.alpha

    @given(st.floats(1e-6, 1e6), st.floats(1.0, 10.0))
    def test_monotone(self, Q2, f):
        assert uehling(1 / 137, -Q2 * f, 1.0) >= uehling(1 / 137, -Q2, 1.0)


class TestRTilde:
    def test_example(self):
        assert r_tilde(0, KinPoint(1, 2)) == pytest.approx(-np.log(3) / 2, rel=1e-15)
        assert r_tilde(3, KinPoint(1, 2), 0.0) == 0.0

    def test_refuses_diagonal(self):
        with pytest.raises(ValueError):
            r_tilde(0, KinPoint(1.0, 1.0))
        with pytest.raises(ValueError):
            u_tilde(0, TwoBodyConfig(1, 2), KinPoint(1.0, 1.0))

    @given(mom, mom, st.integers(0, 20))
    def test_constant_closed_form(self, k, kp, ell):
        if abs(k - kp) < 1e-6:
            return
        p = KinPoint(k, kp)
        ref = -legendre_q(ell, y_of(p)) / (k * kp)
        assert r_tilde(ell, p) == pytest.approx(ref, rel=1e-12)
        assert r_tilde(ell, p, 2.5) == pytest.approx(2.5 * ref, rel=1e-12)

    @pytest.mark.parametrize("ell,k,kp", [(0, 1.0, 2.0), (7, 0.8, 1.1), (3, 2.0, 0.3)])
    def test_direct_quadrature(self, ell, k, kp):
        ref = mp_moment(ell, k, kp, lambda q2: 1)
        assert r_tilde(ell, KinPoint(k, kp)) == pytest.approx(ref, rel=1e-12)

    @pytest.mark.parametrize("ell,k,kp", [(0, 1.0, 2.0), (2, 0.8, 1.1), (5, 2.0, 0.3),
                                          (1, 1.0, 1.01)])
    def test_general_k(self, ell, k, kp):
        ref = mp_moment(ell, k, kp, lambda q2: (1 - q2 / 2) ** -2)
        assert r_tilde(ell, KinPoint(k, kp), dipole_k()) == pytest.approx(ref, rel=1e-10)

    @given(mom, mom, st.floats(-3, 3), st.floats(-3, 3))
    def test_linearity(self, k, kp, a, b):
        if abs(k - kp) < 1e-6:
            return
        p = KinPoint(k, kp)
        K1, K2 = dipole_k(2.0), dipole_k(0.5)
        lhs = r_tilde(2, p, lambda q2: a * K1(q2) + b * K2(q2))
        rhs = a * r_tilde(2, p, K1) + b * r_tilde(2, p, K2)
        assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-12)

    def test_vectorised(self):
        p = KinPoint(np.array([0.5, 1.0, 3.0]), 2.0)
        v = r_tilde(4, p)
        assert v.shape == (3,)
        assert v[1] == pytest.approx(r_tilde(4, KinPoint(1.0, 2.0)), rel=1e-15)


class TestUTilde:
    def test_example(self):
        cfg, p = TwoBodyConfig(1, 2), KinPoint(1, 2)
        assert u_tilde(0, cfg, p) == pytest.approx(-0.10818510677891956, rel=1e-14)
        assert u_tilde(0, cfg, p) == pytest.approx(rho12(cfg, p) / 4.5, rel=1e-14)
        assert u_tilde(2, cfg, p, 0.0) == 0.0

    @given(mom, mom, st.integers(0, 12))
    def test_closed_form(self, k, kp, ell):
        if abs(k - kp) < 1e-3:
            return
        cfg, p = TwoBodyConfig(0.7, 1.6), KinPoint(k, kp)
        ref = -rho12(cfg, p) * legendre_q_deriv(ell, y_of(p)) / (2 * k * k * kp * kp)
        assert u_tilde(ell, cfg, p) == pytest.approx(ref, rel=1e-10)

    @pytest.mark.parametrize("ell,k,kp", [(0, 1.0, 2.0), (3, 0.8, 1.1)])
    def test_general_k(self, ell, k, kp):
        cfg, p = TwoBodyConfig(0.7, 1.6), KinPoint(k, kp)
        ref = rho12(cfg, p) * mp_moment(ell, k, kp, lambda q2: (1 - q2 / 2) ** -2, power=2)
        assert u_tilde(ell, cfg, p, dipole_k()) == pytest.approx(ref, rel=1e-10)

    @pytest.mark.parametrize("kfn", [1.0, dipole_k()])
    def test_bounded_near_diagonal(self, kfn):
        cfg, k = TwoBodyConfig(0.7, 1.6), 1.2
        vals = [u_tilde(ell, cfg, KinPoint(k, k * (1 + d)), kfn)
                for d in np.geomspace(1e-6, 1, 25) for ell in (0, 1, 4)]
        assert np.all(np.isfinite(vals))
        assert max(map(abs, vals)) < 1.0


class TestZTilde:
    def test_l0(self):
        assert z_tilde(0, (123.0, 0.7)) == 0.7
        assert z_tilde(3, (0.0, 0.0)) == 0.0

    @pytest.mark.parametrize("ell,k,kp,K", [(0, 1.0, 2.0, None), (4, 0.8, 1.3, None),
                                            (2, 1.0, 2.0, "dipole")])
    def test_direct_x_moment(self, ell, k, kp, K):
        kfn = 1.0 if K is None else dipole_k()
        Kmp = (lambda q2: 1) if K is None else (lambda q2: (1 - q2 / 2) ** -2)
        p = KinPoint(k, kp)
        z = z_tilde(ell, (r_tilde(max(ell - 1, 0), p, kfn), r_tilde(ell + 1, p, kfn)))
        mp.mp.dps = 30
        ref = float(mp.quad(lambda x: Kmp(-(k * k + kp * kp - 2 * k * kp * x)) * x
                            * mp.legendre(ell, x) / -(k * k + kp * kp - 2 * k * kp * x),
                            [-1, 0, 1]))
        assert z == pytest.approx(ref, rel=1e-10)
        ms = moment_set("full", ell, TwoBodyConfig(1, 1), k, kp, as_kfamily(kfn))
        assert ms.Z[ell] == pytest.approx(ref, rel=1e-10)


class TestSingularSplit:
    """full = log-coefficient * (-Q_0(y)/(k k')) + finite part, finite part -> diag."""

    @pytest.mark.parametrize("kfn", [1.0, dipole_k()])
    def test_diag_limit(self, kfn):
        cfg, k = TwoBodyConfig(1.0, 2.0), 1.3
        fam = as_kfamily(kfn)
        d = moment_set("diag", 4, cfg, k, k, fam)
        errs = []
        for delta in (1e-4, 1e-5):
            kp = k * (1 + delta)
            f = moment_set("full", 4, cfg, k, kp, fam)
            lg = moment_set("log", 4, cfg, k, kp, fam)
            S = -legendre_q(0, y_of(KinPoint(k, kp))) / (k * kp)
            errs.append(max(np.abs(getattr(f, n) - getattr(lg, n) * S - getattr(d, n)).max()
                            for n in ("R", "Z", "U")))
        assert errs[1] < 2e-5
        assert errs[0] / errs[1] == pytest.approx(10, rel=0.1)   # linear approach

    def test_constant_diag_values(self):
        cfg, k = TwoBodyConfig(1.0, 2.0), 0.9
        d = moment_set("diag", 3, cfg, k, k, k_families(point_like(), cfg)[0])
        assert d.R[0] == 0.0
        assert d.R[2] == pytest.approx(1.5 / k**2)
        assert d.U[1] == pytest.approx(-1 / (2 * np.hypot(1, k) * np.hypot(2, k)))
        lg = moment_set("log", 3, cfg, k, k, k_families(point_like(), cfg)[0])
        assert np.allclose(lg.R, 1.0) and np.allclose(lg.U, 0.0)

    def test_zero_family(self):
        cfg = TwoBodyConfig(1.0, 2.0)
        ms = moment_set("full", 3, cfg, 1.0, 2.0, k_families(point_like(), cfg)[2])
        assert not ms.R.any() and not ms.U.any() and not ms.Z.any()
