"""Vertex structure and partial-wave moment integrals.

Form factors enter through four products K^I..K^IV of magnetic (G_M) and
Pauli (F2) form factors, dressed by the vacuum-polarisation factor Pi:

    K^I   = Pi G_M^(2) G_M^(1)      K^II = Pi G_M^(2) F2^(1)
    K^III = Pi F2^(2)  G_M^(1)      K^IV = Pi F2^(2)  F2^(1)

Particle 1 is the "electron" slot (``f1e``, ``f2e``), particle 2 the
"proton" slot (``f1p``, ``f2p``).  Every K is evaluated at the three-momentum
transfer q^2 = -(k - k')^2 (leading approximation, q1^2 = q2^2 = q^2).

The partial-wave moments are

    R_l = int K(q^2) P_l(x) / q^2 dx
    U_l = rho12 * int K(q^2) P_l(x) / q^4 dx
    Z_l = int K(q^2) x P_l(x) / q^2 dx = [(l+1) R_{l+1} + l R_{l-1}] / (2l+1)

with q^2 = -2 k k' (y - x).  They are computed by expanding K(q^2(x)) P_l(x)
in Legendre polynomials of x and using the closed forms
int P_n/(y-x) dx = 2 Q_n(y) and int P_n/(y-x)^2 dx = -2 Q_n'(y), which are
exact for constant K and spectrally accurate otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Callable, NamedTuple, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

from .kinematics import KinPoint, TwoBodyConfig, M_ELECTRON
from .special_fn import harmonic_number, legendre_p_all, legendre_q_all

__all__ = [
    "ConstantFn",
    "FormFactorSet",
    "KFunctions",
    "KFamily",
    "FORM_FACTOR_MODELS",
    "VACUUM_POLARIZATION_MODELS",
    "build_form_factors",
    "point_like",
    "sachs",
    "k_functions",
    "k_families",
    "uehling",
    "dipole_proton",
    "r_tilde",
    "u_tilde",
    "z_tilde",
    "MomentSet",
    "moment_set",
    "LOG_CUTOFF_WIDTH",
    "MU_PROTON",
    "DIPOLE_MASS2",
]

MU_PROTON = 2.7928          # proton magnetic moment in nuclear magnetons
DIPOLE_MASS2 = 0.71e6       # dipole scale 0.71 GeV^2 in MeV^2

#: width (in y-1) of the smooth window applied to log coefficients
LOG_CUTOFF_WIDTH = 1.0


class ConstantFn:
    """q^2-independent function, recognised by the fast paths."""

    def __init__(self, value: float):
        self.value = float(value)

    def __call__(self, q2):
        return np.full(np.shape(q2), self.value) if np.ndim(q2) else self.value

    def __repr__(self):
        return f"ConstantFn({self.value})"


def _is_const(f) -> bool:
    return isinstance(f, ConstantFn)


@dataclass(frozen=True)
class FormFactorSet:
    """Dirac/Pauli form factors of both particles and the photon dressing.

    ``pi_vp`` is called as ``pi_vp(alpha, q2)`` and returns the factor
    multiplying the bare 1/q^2 propagator (1 for no vacuum polarisation).
    """

    f1e: Callable = ConstantFn(1.0)
    f2e: Callable = ConstantFn(0.0)
    f1p: Callable = ConstantFn(1.0)
    f2p: Callable = ConstantFn(0.0)
    pi_vp: Callable = None
    names: tuple = ("point",)

    def pi(self, alpha, q2):
        if self.pi_vp is None:
            return np.ones(np.shape(q2)) if np.ndim(q2) else 1.0
        return self.pi_vp(alpha, q2)

    @property
    def is_point_like(self) -> bool:
        return (self.pi_vp is None and all(_is_const(f) for f in
                (self.f1e, self.f2e, self.f1p, self.f2p))
                and self.f2e.value == 0 and self.f2p.value == 0
                and self.f1e.value == 1 and self.f1p.value == 1)


def point_like() -> FormFactorSet:
    return FormFactorSet()


# ---------------------------------------------------------------------------
# models
# ---------------------------------------------------------------------------

def sachs(f1, f2, q2, m):
    """Sachs combinations (G_E, G_M) = (F1 + q^2/(4m^2) F2, F1 + F2)."""
    f1, f2, q2 = np.asarray(f1, float), np.asarray(f2, float), np.asarray(q2, float)
    ge = f1 + q2 / (4 * m * m) * f2
    gm = f1 + f2
    if ge.ndim == 0:
        return float(ge), float(gm)
    return ge, gm


def dipole_proton(m: float):
    """F1, F2 of the dipole parametrisation G_E = (1 - q^2/0.71 GeV^2)^-2, G_M = mu_p G_E."""

    def ge(q2):
        return (1.0 - np.asarray(q2, float) / DIPOLE_MASS2) ** -2

    def f2(q2):
        q2 = np.asarray(q2, float)
        # F2 = (G_M - G_E)/(1 - q^2/4m^2)
        return (MU_PROTON - 1.0) * ge(q2) / (1.0 - q2 / (4 * m * m))

    def f1(q2):
        return MU_PROTON * ge(q2) - f2(q2)

    return f1, f2


def _uehling_series(t):
    # (2a/pi) int_0^1 x(1-x) ln(1 + x(1-x) t) dx expanded in t; |t| < 4
    s = np.zeros_like(t)
    term_t = np.ones_like(t)
    for k in range(1, 40):
        term_t = term_t * t
        c = (-1) ** (k + 1) / k * factorial(k + 1) ** 2 / factorial(2 * k + 3)
        s = s + c * term_t
    return 2.0 * s


def uehling(alpha: float, q2, m_loop: float = M_ELECTRON):
    """One-loop vacuum-polarisation factor 1 + Pi_hat(-q^2) for spacelike q^2.

    Pi_hat = (alpha/3pi)[-5/3 + a + (1 - a/2) sqrt(1+a) ln((sqrt(1+a)+1)/(sqrt(1+a)-1))]
    with a = 4 m^2 / Q^2, Q^2 = -q^2.  A power series in Q^2/m^2 replaces the
    closed form at small Q^2 where the latter cancels catastrophically.
    """
    q2 = np.asarray(q2, float)
    t = -q2 / (m_loop * m_loop)
    out = np.empty_like(t)
    small = t < 0.5
    out[small] = (alpha / np.pi) * _uehling_series(t[small])
    tb = t[~small]
    a = 4.0 / tb
    r = np.sqrt(1.0 + a)
    out[~small] = (alpha / (3 * np.pi)) * (-5.0 / 3.0 + a + (1 - a / 2) * r
                                           * np.log((r + 1) / (r - 1)))
    res = 1.0 + out
    return float(res) if res.ndim == 0 else res


FORM_FACTOR_MODELS = ("point", "dipole-proton", "anomalous-electron")
VACUUM_POLARIZATION_MODELS = ("none", "uehling")


def build_form_factors(cfg: TwoBodyConfig, names: Sequence[str] = ("point",),
                       vacuum_polarization: str = "none") -> FormFactorSet:
    """Combine named models into a FormFactorSet.

    ``names`` may contain "point" (no-op), "dipole-proton" (particle 2),
    "anomalous-electron" (F2 of particle 1 set to alpha/2pi) and "uehling"
    (same as ``vacuum_polarization="uehling"``).
    """
    kw = {}
    used = []
    for nm in names:
        nm = nm.strip()
        if not nm or nm == "point":
            continue
        if nm == "dipole-proton":
            kw["f1p"], kw["f2p"] = dipole_proton(cfg.m2)
        elif nm == "anomalous-electron":
            kw["f2e"] = ConstantFn(cfg.alpha / (2 * np.pi))
        elif nm == "uehling":
            vacuum_polarization = "uehling"
            continue
        else:
            raise ValueError(f"unknown form-factor model {nm!r}")
        used.append(nm)
    if vacuum_polarization == "uehling":
        kw["pi_vp"] = lambda a, q2: uehling(a, q2)
        used.append("uehling")
    elif vacuum_polarization not in ("none", None):
        raise ValueError(f"unknown vacuum polarisation model {vacuum_polarization!r}")
    return FormFactorSet(**kw, names=tuple(used) or ("point",))


class KFunctions(NamedTuple):
    kI: object
    kII: object
    kIII: object
    kIV: object


def k_functions(ffs: FormFactorSet, cfg: TwoBodyConfig, q2) -> KFunctions:
    """K^I..K^IV at momentum transfer ``q2`` (must be <= 0)."""
    q2a = np.asarray(q2, float)
    if np.any(q2a > 0):
        raise ValueError("k_functions is defined for spacelike q^2 <= 0 only")
    pi = ffs.pi(cfg.alpha, q2a)
    f1e, f2e, f1p, f2p = (np.asarray(f(q2a), float)
                          for f in (ffs.f1e, ffs.f2e, ffs.f1p, ffs.f2p))
    gme, gmp = f1e + f2e, f1p + f2p
    out = (pi * gmp * gme, pi * gmp * f2e, pi * f2p * gme, pi * f2p * f2e)
    if q2a.ndim == 0:
        out = tuple(float(v) for v in out)
    return KFunctions(*out)


@dataclass(frozen=True)
class KFamily:
    """One K function together with what the fast paths need to know."""

    fn: Callable
    value0: float
    constant: bool

    @property
    def zero(self) -> bool:
        return self.constant and self.value0 == 0.0

    def __call__(self, q2):
        return self.fn(q2)


def k_families(ffs: FormFactorSet, cfg: TwoBodyConfig) -> tuple:
    """The four K functions as ``KFamily`` objects (index 0..3 = I..IV)."""
    const_parts = (ffs.pi_vp is None and
                   all(_is_const(f) for f in (ffs.f1e, ffs.f2e, ffs.f1p, ffs.f2p)))
    k0 = k_functions(ffs, cfg, 0.0)
    fams = []
    for i in range(4):
        fn = (lambda q2, i=i: k_functions(ffs, cfg, q2)[i])
        if const_parts:
            fams.append(KFamily(ConstantFn(k0[i]), k0[i], True))
        else:
            fams.append(KFamily(fn, k0[i], False))
    return tuple(fams)


def as_kfamily(kfn) -> KFamily:
    """Accept a KFamily, a number or a plain callable of q^2."""
    if isinstance(kfn, KFamily):
        return kfn
    if np.isscalar(kfn):
        return KFamily(ConstantFn(kfn), float(kfn), True)
    if _is_const(kfn):
        return KFamily(kfn, kfn.value, True)
    return KFamily(kfn, float(kfn(0.0)), False)


# ---------------------------------------------------------------------------
# moments
# ---------------------------------------------------------------------------

@lru_cache(maxsize=16)
def _projection(nq: int, lmax: int):
    """Nodes and matrices mapping K(x_i) to Legendre coefficients of K P_l."""
    x, w = leggauss(nq)
    P = legendre_p_all(max(nq - 1, lmax), x)          # (n, i)
    Pn = P[:nq]
    norm = (2 * np.arange(nq) + 1) / 2
    # M[l, i, n] = w_i (2n+1)/2 P_n(x_i) P_l(x_i)
    M = np.einsum("i,ni,li->lin", w, Pn, P[:lmax + 1]) * norm[None, None, :]
    return x, M


def _taylor_p(ell: int):
    # derivatives P_l^{(j)}(1), j = 0..3
    return [factorial(ell + j) / (2 ** j * factorial(j) * factorial(ell - j))
            if j <= ell else 0.0 for j in range(4)]


def _log_window(e):
    return np.exp(-(e / LOG_CUTOFF_WIDTH) ** 4)


def _log_coeff_p(ell, e):
    # third-order Taylor polynomial of P_l(1+e), windowed
    d = _taylor_p(ell)
    return (d[0] + d[1] * e + d[2] * e * e / 2 + d[3] * e ** 3 / 6) * _log_window(e)


def _log_coeff_e(ell, e):
    # same for (y^2-1) P_l'(y) = (2e + e^2) P_l'(1+e)
    d = _taylor_p(ell)
    return (2 * d[1] * e + (2 * d[2] + d[1]) * e * e + (d[3] + d[2]) * e ** 3) * _log_window(e)


@dataclass
class MomentSet:
    """R, Z and U moments for orders 0..lmax on a common array of (k, k').

    ``kind`` is "full" (k != k'), "log" (coefficients of the logarithmic
    singularity, expressed as multiples of S = -Q_0(y)/(k k')) or "diag"
    (finite parts at k = k').
    """

    kind: str
    R: np.ndarray
    Z: np.ndarray
    U: np.ndarray

    @classmethod
    def zeros(cls, kind, lmax, shape):
        z = np.zeros((lmax + 1,) + tuple(shape))
        return cls(kind, z, z.copy(), z.copy())


def _bonnet_z(R):
    # Z_l from R_{l-1}, R_{l+1}; R holds orders 0..lmax+1
    lmax = R.shape[0] - 2
    Z = np.empty((lmax + 1,) + R.shape[1:])
    for ell in range(lmax + 1):
        lo = R[ell - 1] if ell > 0 else 0.0
        Z[ell] = ((ell + 1) * R[ell + 1] + ell * lo) / (2 * ell + 1)
    return Z


def moment_set(kind: str, lmax: int, cfg: TwoBodyConfig, k, kp, kfam: KFamily,
               nq: int = 48) -> MomentSet:
    """Moments of one K family on broadcast arrays ``k`` (in) and ``kp`` (out).

    For ``kind == "diag"`` only ``k`` is used (k' = k).
    """
    kfam = as_kfamily(kfam)
    k = np.asarray(k, float)
    kp = np.asarray(kp, float) if kind != "diag" else k
    k, kp = np.broadcast_arrays(k, kp)
    shape = k.shape
    if kfam.zero:
        return MomentSet.zeros(kind, lmax, shape)
    K0 = kfam.value0
    L1 = lmax + 1                       # R needed up to lmax+1 for Z
    w1s = np.hypot(cfg.m1, k) + np.hypot(cfg.m1, kp)
    w2s = np.hypot(cfg.m2, k) + np.hypot(cfg.m2, kp)

    if kind == "log":
        e = (k - kp) ** 2 / (2 * k * kp)
        R = np.array([K0 * _log_coeff_p(ell, e) for ell in range(L1 + 1)])
        U = np.array([-2 * k * kp * K0 * _log_coeff_e(ell, e) / (w1s * w2s)
                      for ell in range(lmax + 1)])
        return MomentSet(kind, R[:lmax + 1], _bonnet_z(R), U)

    if kfam.constant:
        if kind == "diag":
            R = np.array([K0 * harmonic_number(ell) / (k * k) for ell in range(L1 + 1)])
            U = np.broadcast_to(-K0 / (2 * np.hypot(cfg.m1, k) * np.hypot(cfg.m2, k)),
                                (lmax + 1,) + shape).copy()
        else:
            e = (k - kp) ** 2 / (2 * k * kp)
            Q, E = legendre_q_all(L1, e, deriv=True)
            R = -K0 * Q / (k * kp)
            U = 2 * K0 * E[:lmax + 1] / (w1s * w2s)
        return MomentSet(kind, R[:lmax + 1], _bonnet_z(R), U)

    # general K: Legendre coefficients of K(q^2(x)) P_l(x)
    x, M = _projection(nq, L1)
    if kind == "diag":
        q2 = -2 * (k * k)[..., None] * (1 - x)
    else:
        q2 = -((k - kp) ** 2)[..., None] - 2 * (k * kp)[..., None] * (1 - x)
    Kx = np.asarray(kfam(q2), float)                  # shape + (nq,)
    a = np.einsum("...i,lin->l...n", Kx, M)           # (L1+1,) + shape + (nq,)
    if kind == "diag":
        H = np.array([harmonic_number(n) for n in range(nq)])
        R = (a @ H) / (k * k)
        U = -a[:lmax + 1].sum(-1) / (2 * np.hypot(cfg.m1, k) * np.hypot(cfg.m2, k))
    else:
        e = (k - kp) ** 2 / (2 * k * kp)
        Q, E = legendre_q_all(nq - 1, e, deriv=True)  # (nq,) + shape
        Qm, Em = np.moveaxis(Q, 0, -1), np.moveaxis(E, 0, -1)
        R = -(a * Qm).sum(-1) / (k * kp)
        U = 2 * (a[:lmax + 1] * Em).sum(-1) / (w1s * w2s)
    return MomentSet(kind, R[:lmax + 1], _bonnet_z(R), U)


def _point_args(p: KinPoint):
    k, kp = np.asarray(p.k, float), np.asarray(p.kp, float)
    if np.any(k == kp):
        raise ValueError("moments are singular at k = k'; use the solver's diagonal treatment")
    return k, kp


def _ret(v):
    v = np.asarray(v)
    return float(v) if v.ndim == 0 else v


def r_tilde(ell: int, p: KinPoint, kfn=1.0, nq: int = 48):
    """int_{-1}^{1} K(q^2) P_l(x) / q^2 dx for k != k'.

    Equals -Q_l(y)/(k k') when K is constant 1.
    """
    k, kp = _point_args(p)
    dummy = TwoBodyConfig(1.0, 1.0)
    ms = moment_set("full", ell, dummy, k, kp, as_kfamily(kfn), nq)
    return _ret(ms.R[ell])


def u_tilde(ell: int, cfg: TwoBodyConfig, p: KinPoint, kfn=1.0, nq: int = 48):
    """rho12 * int K(q^2) P_l(x) / q^4 dx for k != k'; bounded as k' -> k."""
    k, kp = _point_args(p)
    ms = moment_set("full", ell, cfg, k, kp, as_kfamily(kfn), nq)
    return _ret(ms.U[ell])


def z_tilde(ell: int, r_values) -> float:
    """x-weighted moment from neighbouring R moments.

    ``r_values`` is ``(R_{l-1}, R_{l+1})``; the first entry is ignored for l = 0.
    """
    r_lo, r_hi = r_values
    lo = 0.0 if ell == 0 else np.asarray(r_lo, float)
    return _ret(((ell + 1) * np.asarray(r_hi, float) + ell * lo) / (2 * ell + 1))
