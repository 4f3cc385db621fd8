"""Centre-of-mass kinematics for a two-fermion system.

Natural units (hbar = c = 1); masses and momenta in MeV.  In the CM frame
the incoming pair carries momenta (k, -k) and the outgoing pair (k', -k').
The photon transfer is taken with zero energy component, q = (0, k - k').
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

__all__ = [
    "ALPHA",
    "M_ELECTRON",
    "M_PROTON",
    "M_MUON",
    "MEV_TO_EV",
    "TwoBodyConfig",
    "KinPoint",
    "PRESETS",
    "preset",
    "omega",
    "m0",
    "velocity",
    "w_factor",
    "y_of",
    "ym1_of",
    "q2_of",
    "rho12",
]

# CODATA 2018 values
ALPHA = 7.2973525693e-3
M_ELECTRON = 0.51099895
M_PROTON = 938.27208
M_MUON = 105.65837
MEV_TO_EV = 1.0e6


@dataclass(frozen=True)
class TwoBodyConfig:
    """Physical input of a two-fermion bound-state problem.

    Particle 1 is the lepton-like constituent and particle 2 the nucleus-like
    one; form-factor models refer to them in that order.

    Parameters
    ----------
    m1, m2 : float
        Masses in MeV.
    Z : int
        Charge number of particle 2 (the product of charges is -Z).
    alpha : float
        Fine-structure constant.
    name : str, optional
        Label used in reports.
    """

    m1: float
    m2: float
    Z: int = 1
    alpha: float = ALPHA
    name: str = field(default="custom", compare=False)

    def __post_init__(self):
        if not (self.m1 > 0 and self.m2 > 0):
            raise ValueError("masses must be positive")
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if int(self.Z) != self.Z or self.Z < 1:
            raise ValueError("Z must be a positive integer")

    @property
    def mu(self) -> float:
        """Reduced mass."""
        return self.m1 * self.m2 / (self.m1 + self.m2)

    @property
    def coupling(self) -> float:
        return self.Z * self.alpha

    @property
    def bohr_momentum(self) -> float:
        """mu * Z * alpha, the natural momentum scale."""
        return self.mu * self.coupling

    def bohr_binding(self, n: int = 1) -> float:
        """Non-relativistic level -mu (Z alpha)^2 / (2 n^2), in MeV."""
        return -self.mu * self.coupling ** 2 / (2.0 * n * n)

    def swapped(self) -> "TwoBodyConfig":
        return replace(self, m1=self.m2, m2=self.m1)


PRESETS = {
    "hydrogen": TwoBodyConfig(M_ELECTRON, M_PROTON, 1, ALPHA, name="hydrogen"),
    "muonic-hydrogen": TwoBodyConfig(M_MUON, M_PROTON, 1, ALPHA, name="muonic-hydrogen"),
    # equal masses and a strong coupling make relativistic effects visible
    "equal-mass": TwoBodyConfig(1.0, 1.0, 1, 0.3, name="equal-mass"),
}


def preset(name: str) -> TwoBodyConfig:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown system preset {name!r}; "
                         f"choose from {sorted(PRESETS)}") from None


@dataclass(frozen=True)
class KinPoint:
    """Pair of relative-momentum magnitudes.

    ``k`` belongs to the incoming state and ``kp`` to the outgoing one.
    Arrays are accepted and broadcast.
    """

    k: object
    kp: object

    def __post_init__(self):
        if np.any(np.asarray(self.k) <= 0) or np.any(np.asarray(self.kp) <= 0):
            raise ValueError("momenta must be positive")

    def swapped(self) -> "KinPoint":
        return KinPoint(self.kp, self.k)


def _nonneg(*xs):
    for x in xs:
        if np.any(np.asarray(x) < 0):
            raise ValueError("negative mass or momentum")


def _ret(v):
    v = np.asarray(v)
    return float(v) if v.ndim == 0 else v


def omega(m, k):
    """On-shell energy sqrt(m^2 + k^2)."""
    _nonneg(m, k)
    return _ret(np.hypot(m, k))


def m0(cfg: TwoBodyConfig, k):
    """Free invariant mass omega_1(k) + omega_2(k)."""
    return _ret(omega(cfg.m1, k) + omega(cfg.m2, k))


def kinetic(cfg: TwoBodyConfig, k):
    """m0(k) - m1 - m2 without the cancellation, k^2/(w1+m1) + k^2/(w2+m2)."""
    k = np.asarray(k, dtype=float)
    k2 = k * k
    return _ret(k2 / (np.hypot(cfg.m1, k) + cfg.m1) + k2 / (np.hypot(cfg.m2, k) + cfg.m2))


def velocity(m, k):
    """k / omega_m(k), in [0, 1)."""
    _nonneg(m, k)
    w = np.hypot(m, k)
    if np.any(w == 0):
        raise ValueError("velocity undefined for m = k = 0")
    return _ret(np.asarray(k) / w)


def w_factor(lam: int, rho: int, cfg: TwoBodyConfig, k):
    """sqrt(1 + lam v_1(k)) * sqrt(1 + rho v_2(k))."""
    if lam not in (1, -1) or rho not in (1, -1):
        raise ValueError("lam and rho must be +1 or -1")
    v1, v2 = velocity(cfg.m1, k), velocity(cfg.m2, k)
    return _ret(np.sqrt(1 + lam * v1) * np.sqrt(1 + rho * v2))


def ym1_of(p: KinPoint):
    """y - 1 = (k - k')^2 / (2 k k'), accurate near the diagonal."""
    k, kp = np.asarray(p.k, float), np.asarray(p.kp, float)
    return _ret((k - kp) ** 2 / (2 * k * kp))


def y_of(p: KinPoint):
    """y = (k^2 + k'^2) / (2 k k') >= 1."""
    k, kp = np.asarray(p.k, float), np.asarray(p.kp, float)
    return _ret((k * k + kp * kp) / (2 * k * kp))


def q2_of(p: KinPoint, x):
    """Four-momentum transfer squared, -2 k k' (y - x), for cos(beta) = x."""
    x = np.asarray(x, float)
    if np.any(np.abs(x) > 1):
        raise ValueError("|x| must not exceed 1")
    k, kp = np.asarray(p.k, float), np.asarray(p.kp, float)
    # -(k^2 + k'^2 - 2 k k' x) written to stay exact at x = 1
    return _ret(-((k - kp) ** 2 + 2 * k * kp * (1 - x)))


def rho12(cfg: TwoBodyConfig, p: KinPoint):
    """(w1(k') - w1(k)) (w2(k) - w2(k')), non-positive.

    Each difference is evaluated as (k'^2 - k^2)/(w + w') to avoid
    cancellation for nearby momenta.
    """
    k, kp = np.asarray(p.k, float), np.asarray(p.kp, float)
    d = (kp - k) * (kp + k)
    s1 = np.hypot(cfg.m1, k) + np.hypot(cfg.m1, kp)
    s2 = np.hypot(cfg.m2, k) + np.hypot(cfg.m2, kp)
    return _ret(-(d * d) / (s1 * s2))
