"""Partial-wave radial kernel of the one-photon-exchange interaction.

The helicity amplitude of one-photon exchange is a sum of five structures,
each a product of chirality factors (smooth in k, k'), Wigner d^{1/2}
functions of the scattering angle and one of the moment integrands
K/q^2, x K/q^2 or rho12 K/q^4.  Projecting with d^J_{lam lam'} turns every
d^{1/2} d^{1/2} product into a G coefficient: a short, exactly known linear
combination of the moments R_l, Z_l, U_l.  The (l, S) kernel then follows
by the usual helicity-to-LS recoupling.

Conventions: particle 1 is the lepton; the incoming pair has momenta k
along z, the outgoing pair k' at polar angle beta.  Doubled helicities
``lk1, lk2`` (in) and ``lp1, lp2`` (out) label the 16 helicity terms; the
d^{1/2} projections are a1 = lk1, a2 = -lk2, b1 = lp1, b2 = -lp2.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .interaction import FormFactorSet, MomentSet, k_families, moment_set, point_like
from .kinematics import KinPoint, TwoBodyConfig
from .special_fn import clebsch_gordan
from .spinor import ALL_LABELS, HelicityLabels, chiral_factors

__all__ = [
    "KERNEL_NORMALIZATION",
    "ChannelBlock",
    "channel_block",
    "GArgs",
    "g_coeff",
    "KernelMoments",
    "kernel_moments",
    "v_term_I",
    "v_term_II",
    "v_term_III",
    "v_term_IV",
    "v_term_B",
    "helicity_kernel",
    "kernel_from_moments",
    "kernel_block",
    "kernel_element",
]

# Global sign of the kernel.  The bare prefactor -Z alpha/(4 pi)
# combined with the amplitude conventions above gives a repulsive Coulomb
# limit; one overall factor -1 restores -(Z alpha/pi) Q_l(y)/(k k') for
# k, k' << m.  Fixed by the NR-limit acceptance test, nowhere else.
KERNEL_NORMALIZATION = -1.0


# ---------------------------------------------------------------------------
# channels
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChannelBlock:
    """Coupled (l, S) channels sharing J and parity.

    Block "A" holds {(J,0), (J,1)} (parity (-1)^J), block "B" holds
    {(J-1,1), (J+1,1)} (parity (-1)^(J+1)).  For J = 0 they reduce to
    (0,0) and (1,1).
    """

    J: int
    channels: tuple
    name: str = ""

    def __post_init__(self):
        if self.J < 0 or int(self.J) != self.J:
            raise ValueError("J must be a non-negative integer")
        if not self.channels:
            raise ValueError("empty channel list")
        for ell, S in self.channels:
            if S not in (0, 1) or ell < 0 or not abs(ell - S) <= self.J <= ell + S:
                raise ValueError(f"channel (l={ell}, S={S}) incompatible with J={self.J}")

    def __len__(self):
        return len(self.channels)

    @property
    def lmax(self) -> int:
        return max(ell for ell, _ in self.channels)


BLOCK_ALIASES = {"a": "A", "singlet": "A", "b": "B", "triplet": "B"}


def channel_block(J: int, block: str = "A") -> ChannelBlock:
    """Parity block "A" / "B" (aliases "singlet" / "triplet") of total J."""
    key = BLOCK_ALIASES.get(str(block).lower())
    if key is None:
        raise ValueError(f"unknown block {block!r}; use A, B, singlet or triplet")
    if J < 0:
        raise ValueError("J must be non-negative")
    if key == "A":
        ch = ((0, 0),) if J == 0 else ((J, 0), (J, 1))
    else:
        ch = ((1, 1),) if J == 0 else ((J - 1, 1), (J + 1, 1))
    return ChannelBlock(J, ch, key)


# ---------------------------------------------------------------------------
# G coefficients
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GArgs:
    """Arguments of G = int d^J_{lam lam'} d^{s1}_{a1 b1} d^{s2}_{a2 b2} Phi dx.

    Projections are doubled (a1 = +-1 for s1 = 1/2, +-1, +-3 for 3/2);
    spins ``ts1, ts2`` are doubled as well.  ``tag`` names the moment
    family (``"R"``, ``"Z"`` or ``"U"``) and is informational.
    """

    J: int
    a1: int
    b1: int
    a2: int
    b2: int
    ts1: int = 1
    ts2: int = 1
    tag: str = "R"

    def __post_init__(self):
        for t in (self.ts1, self.ts2):
            if t not in (1, 3):
                raise ValueError("s1, s2 must be 1/2 or 3/2")
        for a, t in ((self.a1, self.ts1), (self.b1, self.ts1),
                     (self.a2, self.ts2), (self.b2, self.ts2)):
            if abs(a) > t or (a - t) % 2:
                raise ValueError("projection out of range")

    @classmethod
    def from_helicities(cls, J, lk1, lk2, lp1, lp2, ts1=1, ts2=1, tag="R") -> "GArgs":
        """Arguments of the direct pairing d_{lk1, lp1} d_{-lk2, -lp2}."""
        return cls(J, lk1, lp1, -lk2, -lp2, ts1, ts2, tag)

    @property
    def lam(self) -> int:
        return (self.a1 + self.a2) // 2

    @property
    def lamp(self) -> int:
        return (self.b1 + self.b2) // 2

    @property
    def lmax(self) -> int:
        return self.J + (self.ts1 + self.ts2) // 2


@lru_cache(maxsize=None)
def _g_vector(J, a1, b1, a2, b2, ts1, ts2):
    # weights w_l with G = sum_l w_l Phi_l
    lam, lamp = (a1 + a2) // 2, (b1 + b2) // 2
    s1, s2 = ts1 / 2, ts2 / 2
    lmax = J + (ts1 + ts2) // 2
    w = np.zeros(lmax + 1)
    if abs(lam) > J or abs(lamp) > J:
        return w
    for ts in range(abs(ts1 - ts2), ts1 + ts2 + 1, 2):
        s = ts // 2
        if abs(lam) > s or abs(lamp) > s:
            continue
        c = (clebsch_gordan(s1, a1 / 2, s2, a2 / 2, s, lam)
             * clebsch_gordan(s1, b1 / 2, s2, b2 / 2, s, lamp))
        if c == 0.0:
            continue
        for ell in range(abs(J - s), J + s + 1):
            t = (clebsch_gordan(s, lam, ell, 0, J, lam)
                 * clebsch_gordan(s, lamp, ell, 0, J, lamp))
            w[ell] += c * t * (2 * ell + 1) / (2 * J + 1)
    w.setflags(write=False)
    return w


def g_coeff(args: GArgs, moments) -> object:
    """Evaluate G for moments Phi_l given as a sequence indexed by l.

    ``moments`` must provide every l up to ``args.lmax``; entries may be
    arrays (broadcast over momentum pairs).
    """
    w = _g_vector(args.J, args.a1, args.b1, args.a2, args.b2, args.ts1, args.ts2)
    if len(moments) < len(w):
        raise ValueError(f"moments up to l={len(w) - 1} required, got {len(moments) - 1}")
    out = 0.0
    for ell, c in enumerate(w):
        if c != 0.0:
            out = out + c * moments[ell]
    return out


def _G(J, a1, b1, a2, b2, phi):
    return g_coeff(GArgs(J, a1, b1, a2, b2), phi)


# ---------------------------------------------------------------------------
# moments for all four K families
# ---------------------------------------------------------------------------

@dataclass
class KernelMoments:
    """Moment sets of the four K families (index 0..3 = I..IV)."""

    sets: tuple
    lmax: int

    def R(self, i):
        return self.sets[i].R

    def Z(self, i):
        return self.sets[i].Z

    def U(self, i):
        return self.sets[i].U


def kernel_moments(kind: str, J: int, cfg: TwoBodyConfig, k_in, k_out,
                   ffs: FormFactorSet | None = None, nq: int = 48) -> KernelMoments:
    """Moments R, Z, U up to l = J + 2 for every K family.

    ``kind`` is passed to :func:`moment_set` ("full", "log" or "diag").
    ``k_in`` is the incoming momentum k, ``k_out`` the outgoing k'.
    """
    ffs = ffs or point_like()
    lmax = J + 2
    fams = k_families(ffs, cfg)
    sets = tuple(moment_set(kind, lmax, cfg, k_in, k_out, f, nq) for f in fams)
    return KernelMoments(sets, lmax)


# ---------------------------------------------------------------------------
# the five helicity-space terms
# ---------------------------------------------------------------------------

def _setup(cfg, p, labels):
    k, kp = np.asarray(p.k, float), np.asarray(p.kp, float)
    V1, S1, V2, S2 = chiral_factors(cfg, p, labels)
    L = labels
    return k, kp, V1, S1, V2, S2, (L.lk1, -L.lk2, L.lp1, -L.lp2)


def v_term_I(cfg, p: KinPoint, labels: HelicityLabels, J: int, R) -> object:
    """Vector-vector term with the K^I moments ``R`` (indexed by l).

    2 sum_{c1=c2} V1 V2 eps eps R_J + 2 sum_{c1!=c2} V1 V2 G[d_{a2 b1} d_{a1 b2}].
    """
    _, _, V1, _, V2, _, (a1, a2, b1, b2) = _setup(cfg, p, labels)
    out = 0.0
    if a1 == -a2 and b1 == -b2:
        eps = ((a1 - a2) // 2) * ((b1 - b2) // 2)
        out = out + 2 * eps * (V1[1] * V2[1] + V1[-1] * V2[-1]) * R[J]
    cross = _G(J, a2, b1, a1, b2, R)
    return out + 2 * (V1[1] * V2[-1] + V1[-1] * V2[1]) * cross


def v_term_II(cfg, p, labels, J: int, R) -> object:
    """Scalar (particle 1) times (p1+k1)-slash (particle 2), K^II moments."""
    k, kp, _, S1, V2, _, (a1, a2, b1, b2) = _setup(cfg, p, labels)
    w1s = np.hypot(cfg.m1, k) + np.hypot(cfg.m1, kp)
    L = labels
    br = 0.0
    for c1 in (1, -1):
        for c2 in (1, -1):
            br = br + S1[c1] * V2[c2] * (w1s + c2 * (L.lk2 * k + L.lp2 * kp))
    return -br / (2 * cfg.m1) * _G(J, a1, b1, a2, b2, R)


def v_term_III(cfg, p, labels, J: int, R) -> object:
    """Mirror of :func:`v_term_II` with the particle roles exchanged."""
    k, kp, V1, _, _, S2, (a1, a2, b1, b2) = _setup(cfg, p, labels)
    w2s = np.hypot(cfg.m2, k) + np.hypot(cfg.m2, kp)
    L = labels
    br = 0.0
    for c1 in (1, -1):
        for c2 in (1, -1):
            br = br + V1[c1] * S2[c2] * (w2s + c1 * (L.lk1 * k + L.lp1 * kp))
    return -br / (2 * cfg.m2) * _G(J, a1, b1, a2, b2, R)


def v_term_IV(cfg, p, labels, J: int, R, Z) -> object:
    """Scalar-scalar term with (k'^2 + k^2 + (w1+w1')(w2+w2')) and 2kk' Z pieces."""
    k, kp, _, S1, _, S2, (a1, a2, b1, b2) = _setup(cfg, p, labels)
    w1s = np.hypot(cfg.m1, k) + np.hypot(cfg.m1, kp)
    w2s = np.hypot(cfg.m2, k) + np.hypot(cfg.m2, kp)
    s = sum(S1[c1] * S2[c2] for c1 in (1, -1) for c2 in (1, -1))
    g = (w1s * w2s + k * k + kp * kp) * _G(J, a1, b1, a2, b2, R) \
        + 2 * k * kp * _G(J, a1, b1, a2, b2, Z)
    return s * g / (4 * cfg.m1 * cfg.m2)


def v_term_B(cfg, p, labels, J: int, U) -> object:
    """Time-time (retardation) term from rho12 K/q^4 moments.

    ``U`` is a 4-tuple with the U moments of families I..IV.
    """
    k, kp, V1, S1, V2, S2, (a1, a2, b1, b2) = _setup(cfg, p, labels)
    e1 = (np.hypot(cfg.m1, k) + np.hypot(cfg.m1, kp)) / (2 * cfg.m1)
    e2 = (np.hypot(cfg.m2, k) + np.hypot(cfg.m2, kp)) / (2 * cfg.m2)
    sums = [0.0, 0.0, 0.0, 0.0]
    for c1 in (1, -1):
        for c2 in (1, -1):
            sums[0] = sums[0] + V1[c1] * V2[c2]
            sums[1] = sums[1] - e1 * S1[c1] * V2[c2]
            sums[2] = sums[2] - e2 * V1[c1] * S2[c2]
            sums[3] = sums[3] + e1 * e2 * S1[c1] * S2[c2]
    out = 0.0
    for i in range(4):
        if U[i] is not None:
            out = out + sums[i] * _G(J, a1, b1, a2, b2, U[i])
    return -out


def helicity_kernel(cfg, p: KinPoint, labels: HelicityLabels, J: int,
                    mom: KernelMoments) -> object:
    """Sum of the five terms for one helicity configuration, without prefactor."""
    out = v_term_I(cfg, p, labels, J, mom.R(0))
    if np.any(mom.R(1)):
        out = out + v_term_II(cfg, p, labels, J, mom.R(1))
    if np.any(mom.R(2)):
        out = out + v_term_III(cfg, p, labels, J, mom.R(2))
    if np.any(mom.R(3)):
        out = out + v_term_IV(cfg, p, labels, J, mom.R(3), mom.Z(3))
    U = tuple(mom.U(i) if np.any(mom.U(i)) else None for i in range(4))
    return out + v_term_B(cfg, p, labels, J, U)


# ---------------------------------------------------------------------------
# LS projection
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _ls_weights(J, ell, S, ellp, Sp):
    # per-label recoupling weight including sqrt((2l+1)(2l'+1))/(2J+1)
    pre = np.sqrt((2 * ell + 1) * (2 * ellp + 1)) / (2 * J + 1)
    out = []
    for L in ALL_LABELS:
        lam, lamp = L.lam, L.lamp
        if abs(lam) > min(J, S) or abs(lamp) > min(J, Sp):
            out.append(0.0)
            continue
        c = (clebsch_gordan(ell, 0, S, lam, J, lam)
             * clebsch_gordan(0.5, L.lk1 / 2, 0.5, -L.lk2 / 2, S, lam)
             * clebsch_gordan(ellp, 0, Sp, lamp, J, lamp)
             * clebsch_gordan(0.5, L.lp1 / 2, 0.5, -L.lp2 / 2, Sp, lamp))
        out.append(pre * c)
    return tuple(out)


def _prefactor(cfg):
    return KERNEL_NORMALIZATION * (-cfg.coupling / (4 * np.pi))


def kernel_from_moments(cfg: TwoBodyConfig, block: ChannelBlock, p: KinPoint,
                        mom: KernelMoments) -> np.ndarray:
    """Block kernel V[out, in, ...] for arbitrary moment sets.

    The kernel is linear in the moments, so the same routine yields the
    full kernel, its logarithmic coefficient or its diagonal finite part.
    """
    J = block.J
    hel = {}
    need = set()
    pairs = [(co, ci) for co in block.channels for ci in block.channels]
    wts = {pr: _ls_weights(J, pr[1][0], pr[1][1], pr[0][0], pr[0][1]) for pr in pairs}
    for w in wts.values():
        need.update(i for i, v in enumerate(w) if v != 0.0)
    for i in sorted(need):
        hel[i] = helicity_kernel(cfg, p, ALL_LABELS[i], J, mom)
    shape = np.broadcast(np.asarray(p.k), np.asarray(p.kp)).shape
    n = len(block)
    out = np.zeros((n, n) + shape)
    pre = _prefactor(cfg)
    for io, co in enumerate(block.channels):
        for ii, ci in enumerate(block.channels):
            acc = 0.0
            for i, w in enumerate(wts[(co, ci)]):
                if w != 0.0:
                    acc = acc + w * hel[i]
            out[io, ii] = pre * acc
    return out


def kernel_block(cfg: TwoBodyConfig, block: ChannelBlock, p: KinPoint,
                 ffs: FormFactorSet | None = None, nq: int = 48) -> np.ndarray:
    """All channel pairs of ``block`` at momenta ``p`` (k != k' everywhere).

    Returns an array of shape (n_channels, n_channels) + broadcast shape,
    indexed [out, in]; units MeV^-2.
    """
    k, kp = np.asarray(p.k, float), np.asarray(p.kp, float)
    if np.any(k == kp):
        raise ValueError("kernel is log-singular at k = k'; the solver treats the diagonal")
    mom = kernel_moments("full", block.J, cfg, k, kp, ffs, nq)
    return kernel_from_moments(cfg, block, p, mom)


def kernel_element(cfg: TwoBodyConfig, block: ChannelBlock, chan_out: int,
                   chan_in: int, p: KinPoint, ffs: FormFactorSet | None = None,
                   nq: int = 48):
    """V^J_{l'S'; lS}(k', k) for channels indexed within ``block``.

    ``p.k`` is the incoming momentum k, ``p.kp`` the outgoing k'.
    """
    n = len(block)
    for c in (chan_out, chan_in):
        if not (isinstance(c, (int, np.integer)) and 0 <= c < n):
            raise IndexError(f"channel index {c} out of range for block of size {n}")
    v = kernel_block(cfg, block, p, ffs, nq)[chan_out, chan_in]
    return float(v) if np.ndim(v) == 0 else v
