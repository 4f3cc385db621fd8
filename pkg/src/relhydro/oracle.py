"""Brute-force reference for the partial-wave kernel.

Everything here is deliberately naive: explicit 4x4 Dirac matrices, the
full form-factor vertex F1 gamma^mu + i F2 sigma^{mu nu} q_nu / (2m), a
covariant photon propagator with gauge parameter xi, and plain tensor-product
quadrature over angles.  Nothing is shared with the closed forms in
:mod:`relhydro.kernel` except the Clebsch-Gordan routine and the helicity
spinor phase convention.  Used by the test-suite and ``relhydro verify``.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss as _leggauss

from .interaction import FormFactorSet, point_like
from .kinematics import KinPoint, TwoBodyConfig
from .kernel import KERNEL_NORMALIZATION, ChannelBlock
from .special_fn import clebsch_gordan, wigner_d
from .spinor import ALL_LABELS, GAMMA, METRIC, HelicityLabels

__all__ = [
    "helicity_spinors",
    "oracle_currents",
    "oracle_amplitude",
    "oracle_helicity_wave",
    "oracle_kernel_element",
    "oracle_kernel_block",
    "oracle_jj_integral",
]

_G0 = GAMMA[0]
# sigma^{mu nu} = i/2 [gamma^mu, gamma^nu]
_SIGMA = 0.5j * (np.einsum("aij,bjk->abik", GAMMA, GAMMA)
                 - np.einsum("bij,ajk->abik", GAMMA, GAMMA))


def helicity_spinors(m, k, theta, phi, lam, particle=1):
    """Helicity bispinors, vectorised over angle arrays; shape (n, 4).

    Same convention as :func:`relhydro.spinor.oracle_bispinor`: the
    two-spinor is D^{1/2}(phi, theta, -phi) applied to m_z = lam/2
    (particle 1) or -lam/2 (particle 2, which moves along -n).
    """
    theta = np.atleast_1d(np.asarray(theta, float))
    phi = np.broadcast_to(np.asarray(phi, float), theta.shape)
    mz = lam if particle == 1 else -lam
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    # D^{1/2}_{m' m}(phi, theta, -phi) = e^{-i m' phi} d_{m' m} e^{i m phi}
    if mz > 0:
        chi = np.stack([c + 0j, s * np.exp(1j * phi)], -1)
    else:
        chi = np.stack([-s * np.exp(-1j * phi), c + 0j], -1)
    w = np.hypot(m, k)
    return np.concatenate([np.sqrt(w + m) * chi, lam * k / np.sqrt(w + m) * chi], -1)


@lru_cache(maxsize=8)
def leggauss(n):
    return _leggauss(n)


def _dirs(theta, phi, k, sign):
    theta = np.atleast_1d(np.asarray(theta, float))
    phi = np.broadcast_to(np.asarray(phi, float), theta.shape)
    return sign * k * np.stack([np.sin(theta) * np.cos(phi),
                                np.sin(theta) * np.sin(phi), np.cos(theta)], -1)


def _vertex_current(ubar_out, u_in, F1, F2, m, qfull):
    # ubar' [F1 gamma^mu + i F2/(2m) sigma^{mu nu} q_nu] u, shapes (n,4)
    qlow = qfull @ METRIC
    g = np.einsum("ni,mij,nj->nm", ubar_out, GAMMA, u_in)
    sq = np.einsum("ni,mvij,nj,nv->nm", ubar_out, _SIGMA, u_in, qlow, optimize=True)
    return F1[:, None] * g + 1j * F2[:, None] / (2 * m) * sq


def oracle_currents(cfg: TwoBodyConfig, labels: HelicityLabels, k, kp,
                    th_in, ph_in, th_out, ph_out, ffs: FormFactorSet | None = None,
                    project: bool = True):
    """Currents of both particles for all angle pairs (flattened arrays).

    Returns ``(j1, j2, q, q2, N)`` with contravariant currents of shape
    (n, 4), the propagator momentum q = (0, k' - k) and its square.
    With ``project`` the currents are replaced by j - q (q.j)/q^2.
    """
    ffs = ffs or point_like()
    L = labels
    m1, m2 = cfg.m1, cfg.m2
    u1 = helicity_spinors(m1, k, th_in, ph_in, L.lk1, 1)
    u2 = helicity_spinors(m2, k, th_in, ph_in, L.lk2, 2)
    v1 = helicity_spinors(m1, kp, th_out, ph_out, L.lp1, 1)
    v2 = helicity_spinors(m2, kp, th_out, ph_out, L.lp2, 2)
    bar = lambda u: u.conj() @ _G0
    kv, pv = _dirs(th_in, ph_in, k, 1), _dirs(th_out, ph_out, kp, 1)
    n = len(kv)
    qvec = pv - kv
    q = np.concatenate([np.zeros((n, 1)), qvec], -1)
    q2 = -np.einsum("ni,ni->n", qvec, qvec)
    w1, w1p = np.hypot(m1, k), np.hypot(m1, kp)
    w2, w2p = np.hypot(m2, k), np.hypot(m2, kp)
    # full four-momentum transfers at the two vertices
    qf1 = np.concatenate([np.full((n, 1), w1p - w1), qvec], -1)
    qf2 = np.concatenate([np.full((n, 1), w2p - w2), -qvec], -1)
    f = lambda fn: np.broadcast_to(np.asarray(fn(q2), float), q2.shape)
    j1 = _vertex_current(bar(v1), u1, f(ffs.f1e), f(ffs.f2e), m1, qf1)
    j2 = _vertex_current(bar(v2), u2, f(ffs.f1p), f(ffs.f2p), m2, qf2)
    if project:
        qj1 = np.einsum("ni,ij,nj->n", q, METRIC, j1)
        qj2 = np.einsum("ni,ij,nj->n", q, METRIC, j2)
        j1 = j1 - q * (qj1 / q2)[:, None]
        j2 = j2 - q * (qj2 / q2)[:, None]
    N = 1.0 / np.sqrt(w1 * w1p * w2 * w2p)
    return j1, j2, q, q2, N


def oracle_amplitude(cfg: TwoBodyConfig, labels: HelicityLabels, k, kp,
                     th_in, ph_in, th_out, ph_out, ffs: FormFactorSet | None = None,
                     xi: float = 1.0, project: bool = True):
    """One-photon-exchange helicity amplitude with the kernel's normalisation.

    Propagator (-g_{mu nu} + (1 - xi) q_mu q_nu / q^2) / q^2, dressed by Pi.
    """
    ffs = ffs or point_like()
    j1, j2, q, q2, N = oracle_currents(cfg, labels, k, kp, th_in, ph_in,
                                       th_out, ph_out, ffs, project)
    jj = np.einsum("ni,ij,nj->n", j1, METRIC, j2)
    qj1 = np.einsum("ni,ij,nj->n", q, METRIC, j1)
    qj2 = np.einsum("ni,ij,nj->n", q, METRIC, j2)
    prop = (-jj + (1 - xi) * qj1 * qj2 / q2) / q2
    pi = np.broadcast_to(np.asarray(ffs.pi(cfg.alpha, q2), float), q2.shape)
    return KERNEL_NORMALIZATION * cfg.coupling / (8 * np.pi ** 2) * N * pi * prop


def _x_rule(k, kp, n):
    # Gauss-Legendre in u = ln(y - x): resolves the forward peak of 1/q^2
    y = (k * k + kp * kp) / (2 * k * kp)
    ym1 = (k - kp) ** 2 / (2 * k * kp)
    t, w = leggauss(n)
    ua, ub = np.log(ym1), np.log(y + 1)
    u = 0.5 * (ub - ua) * t + 0.5 * (ub + ua)
    e = np.exp(u)
    x = y - e
    return np.clip(x, -1.0, 1.0), 0.5 * (ub - ua) * w * e


def oracle_helicity_wave(cfg: TwoBodyConfig, J: int, labels: HelicityLabels,
                         p: KinPoint, ffs: FormFactorSet | None = None,
                         n_x: int = 96, n_phi: int = 6, xi: float = 1.0) -> float:
    """V^J_{lam' lam}(k', k) by 2D quadrature over the outgoing direction.

    Incoming pair along z.  With the spinor phases used here the amplitude
    carries exp(i (lam - lam') phi), which D^J_{lam lam'}(phi, theta, -phi)
    cancels, so the phi average of the integrand is exact for any n_phi >= 1.
    """
    k, kp = float(p.k), float(p.kp)
    x, wx = _x_rule(k, kp, n_x)
    phis = 2 * np.pi * np.arange(n_phi) / n_phi
    TH = np.repeat(np.arccos(x), n_phi)
    PH = np.tile(phis, n_x)
    W = np.repeat(wx, n_phi) * (2 * np.pi / n_phi)
    A = oracle_amplitude(cfg, labels, k, kp, np.zeros_like(TH), 0.0, TH, PH, ffs, xi)
    lam, lamp = labels.lam, labels.lamp
    d = np.array([wigner_d(J, lam, lamp, t) for t in np.arccos(x)])
    D = np.repeat(d, n_phi) * np.exp(-1j * (lam - lamp) * PH)
    return complex(np.sum(W * D * A)).real


def _ls_weight(block, chan_out, chan_in, L):
    J = block.J
    ell, S = block.channels[chan_in]
    ellp, Sp = block.channels[chan_out]
    lam, lamp = L.lam, L.lamp
    if abs(lam) > min(J, S) or abs(lamp) > min(J, Sp):
        return 0.0
    pre = np.sqrt((2 * ell + 1) * (2 * ellp + 1)) / (2 * J + 1)
    return pre * (clebsch_gordan(ell, 0, S, lam, J, lam)
                  * clebsch_gordan(0.5, L.lk1 / 2, 0.5, -L.lk2 / 2, S, lam)
                  * clebsch_gordan(ellp, 0, Sp, lamp, J, lamp)
                  * clebsch_gordan(0.5, L.lp1 / 2, 0.5, -L.lp2 / 2, Sp, lamp))


def oracle_kernel_block(cfg: TwoBodyConfig, block: ChannelBlock, p: KinPoint,
                        ffs: FormFactorSet | None = None, n_x: int = 96, n_phi: int = 6,
                        xi: float = 1.0) -> np.ndarray:
    """Reference for :func:`relhydro.kernel.kernel_block` at one (k, k'), [out, in]."""
    n = len(block)
    W = np.array([[[_ls_weight(block, o, i, L) for L in ALL_LABELS] for i in range(n)]
                  for o in range(n)])
    waves = np.zeros(len(ALL_LABELS))
    for a, L in enumerate(ALL_LABELS):
        if np.any(W[:, :, a] != 0.0):
            waves[a] = oracle_helicity_wave(cfg, block.J, L, p, ffs, n_x, n_phi, xi)
    return W @ waves


def oracle_kernel_element(cfg: TwoBodyConfig, block: ChannelBlock, chan_out: int,
                          chan_in: int, p: KinPoint, ffs: FormFactorSet | None = None,
                          n_x: int = 96, n_phi: int = 6, xi: float = 1.0) -> float:
    """Reference value of :func:`relhydro.kernel.kernel_element`."""
    tot = 0.0
    for L in ALL_LABELS:
        c = _ls_weight(block, chan_out, chan_in, L)
        if c != 0.0:
            tot = tot + c * oracle_helicity_wave(cfg, block.J, L, p, ffs, n_x, n_phi, xi)
    return tot


def _D(J, m, mp, th, ph):
    # D^J_{m m'}(phi, theta, -phi)
    d = np.array([wigner_d(J, m, mp, t) for t in np.atleast_1d(th)])
    return np.exp(-1j * m * ph) * d * np.exp(1j * mp * ph)


def oracle_jj_integral(cfg: TwoBodyConfig, J: int, mu: int, Jp: int, mup: int,
                       labels: HelicityLabels, p: KinPoint,
                       ffs: FormFactorSet | None = None, n_theta: int = 16,
                       n_phi: int = 24) -> complex:
    """Double angular projection over both directions.

    int dOmega' dOmega D^{J'}_{mu' lam'}(Omega') A(Omega', Omega) D^J_{mu lam}(Omega)^*,
    which vanishes unless J' = J and mu' = mu and then equals
    4 pi/(2J+1) times :func:`oracle_helicity_wave`, independent of mu (the
    amplitude transforms as D^J_{mu lam}(Omega) D^J_{mu lam'}(Omega')^*).
    Meant for well separated k, k' where the integrand is smooth.
    """
    x, wx = leggauss(n_theta)
    phis = 2 * np.pi * np.arange(n_phi) / n_phi
    TH = np.repeat(np.arccos(x), n_phi)
    PH = np.tile(phis, n_theta)
    W = np.repeat(wx, n_phi) * (2 * np.pi / n_phi)
    n = len(TH)
    lam, lamp = labels.lam, labels.lamp
    if abs(lam) > J or abs(mu) > J or abs(lamp) > Jp or abs(mup) > Jp:
        return 0.0
    Din = _D(J, mu, lam, TH, PH)
    Dout = _D(Jp, mup, lamp, TH, PH)
    ii, oo = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    A = oracle_amplitude(cfg, labels, float(p.k), float(p.kp), TH[ii.ravel()],
                         PH[ii.ravel()], TH[oo.ravel()], PH[oo.ravel()], ffs).reshape(n, n)
    return np.einsum("o,o,io,i,i->", W, Dout, A, W, np.conj(Din))
