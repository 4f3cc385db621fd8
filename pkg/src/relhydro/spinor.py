"""Spinor algebra for the one-photon exchange amplitude.

Two independent routes to the same numbers live here:

* closed-form current contractions in the helicity basis (``contract_*``),
  written with chirality-resolved velocity factors and Wigner d^{1/2}
  elements, used by the kernel;
* the basis-spinor expansion (isotropic tetrad, massless basis spinors,
  ``gamma_block`` and ``s_coeff``) plus an explicit Dirac-matrix oracle
  (``oracle_*``), used for cross-checks.

Kinematics convention: the incoming momentum k lies along +z, the outgoing
momentum k' has polar angle beta in the xz-plane (azimuth 0).  Particle 2
moves opposite to particle 1 and its helicity state is obtained by rotating
the spin-down-along-z state, so both particles use the same rotation.

Four-vectors returned by ``gamma_block`` and the tetrad are covariant
(lower index) components.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import null_space

from .kinematics import KinPoint, TwoBodyConfig
from .special_fn import wigner_d

__all__ = [
    "Tetrad",
    "numeric_tetrad",
    "HelicityLabels",
    "ALL_LABELS",
    "gamma_block",
    "basis_spinor",
    "s_coeff",
    "mbs_current",
    "mbs_scalar",
    "chiral_factors",
    "contract_vector_vector",
    "contract_scalar_slash1",
    "contract_slash2_scalar",
    "contract_scalar_scalar",
    "contract_time_time",
    "oracle_bispinor",
    "oracle_contractions",
    "GAMMA",
    "GAMMA5",
    "METRIC",
]

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])


# ---------------------------------------------------------------------------
# isotropic tetrad and basis spinors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Tetrad:
    """Light-like vectors b_{+1}, b_{-1}, n_{+1}, n_{-1} (covariant components)."""

    b_plus: np.ndarray
    b_minus: np.ndarray
    n_plus: np.ndarray
    n_minus: np.ndarray

    def b(self, s: int) -> np.ndarray:
        return self.b_plus if s > 0 else self.b_minus

    def n(self, s: int) -> np.ndarray:
        return self.n_plus if s > 0 else self.n_minus

    def dot(self, a, c):
        # bilinear (no complex conjugation), metric diag(+,-,-,-)
        return a @ METRIC @ c

    def completeness(self) -> np.ndarray:
        """2 * sum_s (b_s b_{-s} + n_s n_{-s}); equals the metric."""
        out = np.zeros((4, 4), complex)
        for s in (1, -1):
            out += np.outer(self.b(s), self.b(-s)) + np.outer(self.n(s), self.n(-s))
        return 2 * out


@lru_cache(maxsize=1)
def numeric_tetrad() -> Tetrad:
    """The constant tetrad b = (1,0,0,+-1)/2, n = (0,+-1,i,0)/2."""
    return Tetrad(
        np.array([1, 0, 0, 1], complex) / 2,
        np.array([1, 0, 0, -1], complex) / 2,
        np.array([0, 1, 1j, 0], complex) / 2,
        np.array([0, -1, 1j, 0], complex) / 2,
    )


def gamma_block(C: int, A: int, sigma: int, rho: int) -> np.ndarray:
    """Gamma^{C,A}_{sigma,rho}[gamma^mu] = ubar_sigma(b_C) gamma^mu u_{-rho}(b_{-A}).

    Returns the covariant four-vector
    2 delta_{sigma,-rho} (delta_{C,-A} b_{-A} + A delta_{C,A} n_{-A rho}).
    """
    for v in (C, A, sigma, rho):
        if v not in (1, -1):
            raise ValueError("indices must be +1 or -1")
    out = np.zeros(4, complex)
    if sigma != -rho:
        return out
    t = numeric_tetrad()
    if C == -A:
        out += t.b(-A)
    else:
        out += A * t.n(-A * rho)
    return 2 * out


# ---------------------------------------------------------------------------
# explicit Dirac matrices (Dirac-Pauli representation); oracle side
# ---------------------------------------------------------------------------

_I2 = np.eye(2, dtype=complex)
_Z2 = np.zeros((2, 2), complex)
PAULI = (
    np.array([[0, 1], [1, 0]], complex),
    np.array([[0, -1j], [1j, 0]], complex),
    np.array([[1, 0], [0, -1]], complex),
)
GAMMA = np.array(
    [np.block([[_I2, _Z2], [_Z2, -_I2]])]
    + [np.block([[_Z2, s], [-s, _Z2]]) for s in PAULI]
)
GAMMA5 = np.block([[_Z2, _I2], [_I2, _Z2]])


def _bar(u):
    return u.conj() @ GAMMA[0]


def _slash_lower(a):
    # a-slash for covariant components a_mu
    return np.einsum("m,mij->ij", a, GAMMA)


@lru_cache(maxsize=1)
def _basis_spinors():
    """u_rho(b_A) for rho, A = +-1 (Dirac-Pauli representation).

    Fixed by  bslash_{-1} u(b_{-1}) = 0,  gamma5 u_rho = rho u_rho,
    u ubar = (1 + rho gamma5)/2 bslash, the phase relation
    nslash_{+1} u_{-1}(b_{-1}) = u_{+1}(b_{-1}) and u_rho(b_1) = bslash_1 u_{-rho}(b_{-1}).
    """
    t = numeric_tetrad()
    out = {}
    for rho in (1, -1):
        M = np.vstack([_slash_lower(t.b(-1)), GAMMA5 - rho * np.eye(4)])
        v = null_space(M)[:, 0]
        lhs = np.outer(v, _bar(v))
        rhs = 0.5 * (np.eye(4) + rho * GAMMA5) @ _slash_lower(t.b(-1))
        i = np.unravel_index(np.abs(rhs).argmax(), rhs.shape)
        v = v * np.sqrt((rhs[i] / lhs[i]).real)
        # remove the arbitrary phase returned by the SVD
        j = np.abs(v).argmax()
        out[(rho, -1)] = v * abs(v[j]) / v[j]
    out[(1, -1)] = _slash_lower(t.n(1)) @ out[(-1, -1)]
    for rho in (1, -1):
        out[(rho, 1)] = _slash_lower(t.b(1)) @ out[(-rho, -1)]
    return out


def basis_spinor(rho: int, A: int) -> np.ndarray:
    """Massless basis spinor u_rho(b_A) as a 4-component column."""
    return _basis_spinors()[(rho, A)].copy()


def _D_half(phi, theta):
    # D^{1/2}_{m' m}(phi, theta, -phi); rows/cols ordered m = +1/2, -1/2
    d = np.array([[wigner_d(0.5, a, b, theta) for b in (0.5, -0.5)] for a in (0.5, -0.5)])
    ph = np.array([0.5, -0.5])
    return np.exp(-1j * ph[:, None] * phi) * d * np.exp(1j * ph[None, :] * phi)


def _idx(m2):
    return 0 if m2 > 0 else 1


def s_coeff(m, k, theta, phi, A, rho, lam, particle: int = 1) -> complex:
    """Expansion coefficient ubar_rho(b_A) u_lam(p) of a helicity spinor.

    s = -lam sqrt(omega - lam rho k) conj(D^{1/2}_{A rho/2, -lam/2}(phi, theta, -phi))
    for particle 1.  Particle 2 (momentum opposite to the direction
    (theta, phi)) uses the column +lam/2 and the opposite overall sign.
    With these phases s = -ubar_rho(b_A) u for the spinors returned by
    :func:`oracle_bispinor`, for both particles; a common sign is invisible
    in every bilinear.

    Parameters
    ----------
    m, k : float
        Mass and momentum magnitude.
    theta, phi : float
        Direction of the pair's relative momentum.
    A, rho, lam : int
        Tetrad index, basis chirality and doubled helicity, each +-1.
    """
    w = np.hypot(m, k)
    col = -lam if particle == 1 else lam
    D = _D_half(phi, theta)
    sign = -lam if particle == 1 else lam
    return complex(sign * np.sqrt(w - lam * rho * k) * np.conj(D[_idx(A * rho), _idx(col)]))


def _coeffs(m, k, theta, phi, lam, particle):
    return {(A, r): s_coeff(m, k, theta, phi, A, r, lam, particle)
            for A in (1, -1) for r in (1, -1)}


def mbs_current(m, k, theta, phi, lam, kp, thetap, phip, lamp, particle=1):
    """ubar(p') gamma_mu u(p) assembled from basis-spinor blocks (covariant)."""
    s_in = _coeffs(m, k, theta, phi, lam, particle)
    s_out = _coeffs(m, kp, thetap, phip, lamp, particle)
    out = np.zeros(4, complex)
    for (C, sg), so in s_out.items():
        for (A, r), si in s_in.items():
            out += np.conj(so) * si * gamma_block(-C, A, -sg, r)
    return out


def mbs_scalar(m, k, theta, phi, lam, kp, thetap, phip, lamp, particle=1):
    """ubar(p') u(p) from basis-spinor coefficients."""
    s_in = _coeffs(m, k, theta, phi, lam, particle)
    s_out = _coeffs(m, kp, thetap, phip, lamp, particle)
    # ubar_{-s}(b_{-C}) u_{-r}(b_{-A}) = delta_{s,-r} delta_{C,-A}
    return sum(np.conj(s_out[(C, sg)]) * s_in[(-C, -sg)]
               for C in (1, -1) for sg in (1, -1))


# ---------------------------------------------------------------------------
# helicity labels and closed-form contractions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HelicityLabels:
    """Doubled helicities of the incoming (k1, k2) and outgoing (p1, p2) fermions."""

    lk1: int
    lk2: int
    lp1: int
    lp2: int

    def __post_init__(self):
        for v in (self.lk1, self.lk2, self.lp1, self.lp2):
            if v not in (1, -1):
                raise ValueError("helicity labels must be +1 or -1")

    @property
    def lam(self) -> int:
        """Total helicity (lk1 - lk2)/2 of the incoming pair."""
        return (self.lk1 - self.lk2) // 2

    @property
    def lamp(self) -> int:
        return (self.lp1 - self.lp2) // 2

    def swapped(self) -> "HelicityLabels":
        """Particle relabeling 1 <-> 2."""
        return HelicityLabels(self.lk2, self.lk1, self.lp2, self.lp1)

    def reversed(self) -> "HelicityLabels":
        """Exchange of incoming and outgoing states."""
        return HelicityLabels(self.lp1, self.lp2, self.lk1, self.lk2)


ALL_LABELS = tuple(HelicityLabels(*t) for t in itertools.product((1, -1), repeat=4))


def _d12(a2, b2, beta):
    # d^{1/2} with doubled projections
    return wigner_d(0.5, a2 / 2, b2 / 2, beta)


def chiral_factors(cfg: TwoBodyConfig, p: KinPoint, labels: HelicityLabels):
    """Velocity factors of the chirality-resolved currents.

    Returns dicts ``V1, S1, V2, S2`` indexed by chirality c = +-1:
    V_i(c) = sqrt(1 + c lk_i v_i(k)) sqrt(1 + c lp_i v_i(k')) (vector-like),
    S_i(c) = sqrt(1 + c lk_i v_i(k)) sqrt(1 - c lp_i v_i(k')) (scalar-like).
    """
    k, kp = np.asarray(p.k, float), np.asarray(p.kp, float)
    vk1, vp1 = k / np.hypot(cfg.m1, k), kp / np.hypot(cfg.m1, kp)
    vk2, vp2 = k / np.hypot(cfg.m2, k), kp / np.hypot(cfg.m2, kp)
    L = labels
    V1 = {c: np.sqrt(1 + c * L.lk1 * vk1) * np.sqrt(1 + c * L.lp1 * vp1) for c in (1, -1)}
    S1 = {c: np.sqrt(1 + c * L.lk1 * vk1) * np.sqrt(1 - c * L.lp1 * vp1) for c in (1, -1)}
    V2 = {c: np.sqrt(1 + c * L.lk2 * vk2) * np.sqrt(1 + c * L.lp2 * vp2) for c in (1, -1)}
    S2 = {c: np.sqrt(1 + c * L.lk2 * vk2) * np.sqrt(1 - c * L.lp2 * vp2) for c in (1, -1)}
    return V1, S1, V2, S2


def _eps(a2, b2):
    # antisymmetric 2x2 symbol on doubled projections (+1,-1) -> +1
    return (a2 - b2) // 2 if a2 != b2 else 0


def _ret(v):
    v = np.asarray(v)
    return float(v) if v.ndim == 0 else v


def _energies(cfg, p):
    k, kp = np.asarray(p.k, float), np.asarray(p.kp, float)
    return (np.hypot(cfg.m1, k), np.hypot(cfg.m1, kp),
            np.hypot(cfg.m2, k), np.hypot(cfg.m2, kp))


def contract_vector_vector(cfg, p, beta, labels):
    """N * ubar gamma^mu u * ubar gamma_mu u, N = (w1 w1' w2 w2')^{-1/2}."""
    L = labels
    V1, _, V2, _ = chiral_factors(cfg, p, L)
    a1, a2, b1, b2 = L.lk1, -L.lk2, L.lp1, -L.lp2
    same = 2 * _eps(a1, a2) * _eps(b1, b2)
    cross = 2 * _d12(a2, b1, beta) * _d12(a1, b2, beta)
    out = 0.0
    for c1 in (1, -1):
        for c2 in (1, -1):
            out = out + V1[c1] * V2[c2] * (same if c1 == c2 else cross)
    return _ret(out)


def contract_scalar_slash1(cfg, p, beta, labels):
    """N * ubar u (particle 1) * ubar (p1+k1)-slash u (particle 2)."""
    L = labels
    _, S1, V2, _ = chiral_factors(cfg, p, L)
    w1, w1p, _, _ = _energies(cfg, p)
    k, kp = np.asarray(p.k, float), np.asarray(p.kp, float)
    dd = _d12(L.lk1, L.lp1, beta) * _d12(-L.lk2, -L.lp2, beta)
    out = 0.0
    for c1 in (1, -1):
        for c2 in (1, -1):
            out = out + S1[c1] * V2[c2] * ((w1 + w1p) + c2 * (L.lk2 * k + L.lp2 * kp))
    return _ret(out * dd)


def contract_slash2_scalar(cfg, p, beta, labels):
    """N * ubar (p2+k2)-slash u (particle 1) * ubar u (particle 2)."""
    L = labels
    V1, _, _, S2 = chiral_factors(cfg, p, L)
    _, _, w2, w2p = _energies(cfg, p)
    k, kp = np.asarray(p.k, float), np.asarray(p.kp, float)
    dd = _d12(L.lk1, L.lp1, beta) * _d12(-L.lk2, -L.lp2, beta)
    out = 0.0
    for c1 in (1, -1):
        for c2 in (1, -1):
            out = out + V1[c1] * S2[c2] * ((w2 + w2p) + c1 * (L.lk1 * k + L.lp1 * kp))
    return _ret(out * dd)


def contract_scalar_scalar(cfg, p, beta, labels):
    """N * (p1+k1).(p2+k2) * ubar u * ubar u."""
    L = labels
    _, S1, _, S2 = chiral_factors(cfg, p, L)
    w1, w1p, w2, w2p = _energies(cfg, p)
    k, kp = np.asarray(p.k, float), np.asarray(p.kp, float)
    x = np.cos(beta)
    dd = _d12(L.lk1, L.lp1, beta) * _d12(-L.lk2, -L.lp2, beta)
    dot = (w1 + w1p) * (w2 + w2p) + k * k + kp * kp + 2 * k * kp * x
    s = sum(S1[c1] * S2[c2] for c1 in (1, -1) for c2 in (1, -1))
    return _ret(s * dot * dd)


def contract_time_time(cfg, p, beta, labels, kfns=(1.0, 0.0, 0.0, 0.0)):
    """N * J1^0 J2^0 for form-factor currents after the Gordon split.

    J^0 = G_M ubar gamma^0 u - F2 (w + w')/(2m) ubar u; ``kfns`` holds the
    products (K^I, K^II, K^III, K^IV) of magnetic and Pauli form factors.
    """
    L = labels
    kI, kII, kIII, kIV = kfns
    V1, S1, V2, S2 = chiral_factors(cfg, p, L)
    w1, w1p, w2, w2p = _energies(cfg, p)
    e1 = (w1 + w1p) / (2 * cfg.m1)
    e2 = (w2 + w2p) / (2 * cfg.m2)
    dd = _d12(L.lk1, L.lp1, beta) * _d12(-L.lk2, -L.lp2, beta)
    out = 0.0
    for c1 in (1, -1):
        for c2 in (1, -1):
            out = out + (kI * V1[c1] * V2[c2] - kII * e1 * S1[c1] * V2[c2]
                         - kIII * e2 * V1[c1] * S2[c2] + kIV * e1 * e2 * S1[c1] * S2[c2])
    return _ret(out * dd)


# ---------------------------------------------------------------------------
# explicit oracle
# ---------------------------------------------------------------------------

def oracle_bispinor(m, k, theta, phi, lam, particle: int = 1) -> np.ndarray:
    """Helicity bispinor normalised to ubar u = 2m (Dirac-Pauli representation).

    Particle 1 moves along (theta, phi); particle 2 moves the opposite way and
    its spin state is the rotated m_z = -lam/2 state, so that in both cases
    the physical helicity is lam/2.
    """
    w = np.hypot(m, k)
    D = _D_half(phi, theta)
    chi = D[:, _idx(lam if particle == 1 else -lam)]
    return np.concatenate([np.sqrt(w + m) * chi, lam * k / np.sqrt(w + m) * chi])


def _four_momentum(m, k, theta, phi, sign=1):
    return np.array([np.hypot(m, k),
                     sign * k * np.sin(theta) * np.cos(phi),
                     sign * k * np.sin(theta) * np.sin(phi),
                     sign * k * np.cos(theta)])


def _slash_upper(a):
    return np.einsum("m,mij->ij", METRIC @ a, GAMMA)


def oracle_contractions(cfg, p, beta, labels, phi=0.0):
    """All five spinor structures by explicit 4x4 matrix algebra.

    Returns a dict with keys ``vv, s_slash1, slash2_s, ss, tt`` plus the
    single-particle pieces ``j1, j2`` (contravariant currents) and scalars
    ``s1, s2``; everything multiplied by N where appropriate.
    """
    L = labels
    m1, m2, k, kp = cfg.m1, cfg.m2, float(p.k), float(p.kp)
    u1 = oracle_bispinor(m1, k, 0.0, 0.0, L.lk1, 1)
    u2 = oracle_bispinor(m2, k, 0.0, 0.0, L.lk2, 2)
    v1 = oracle_bispinor(m1, kp, beta, phi, L.lp1, 1)
    v2 = oracle_bispinor(m2, kp, beta, phi, L.lp2, 2)
    K1 = _four_momentum(m1, k, 0.0, 0.0, 1)
    K2 = _four_momentum(m2, k, 0.0, 0.0, -1)
    P1 = _four_momentum(m1, kp, beta, phi, 1)
    P2 = _four_momentum(m2, kp, beta, phi, -1)
    N = 1.0 / np.sqrt(K1[0] * K2[0] * P1[0] * P2[0])
    j1 = np.array([_bar(v1) @ g @ u1 for g in GAMMA])
    j2 = np.array([_bar(v2) @ g @ u2 for g in GAMMA])
    s1, s2 = _bar(v1) @ u1, _bar(v2) @ u2
    return {
        "vv": N * (j1 @ METRIC @ j2),
        "s_slash1": N * s1 * (_bar(v2) @ _slash_upper(P1 + K1) @ u2),
        "slash2_s": N * (_bar(v1) @ _slash_upper(P2 + K2) @ u1) * s2,
        "ss": N * ((P1 + K1) @ METRIC @ (P2 + K2)) * s1 * s2,
        "tt": N * j1[0] * j2[0],
        "s0_1": N * s1 * j2[0],
        "s0_2": N * j1[0] * s2,
        "s0_12": N * s1 * s2,
        "j1": j1, "j2": j2, "s1": s1, "s2": s2, "N": N,
        "K1": K1, "K2": K2, "P1": P1, "P2": P2,
    }
