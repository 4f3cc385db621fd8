"""Angular-momentum special functions.

Legendre functions of the first and second kind, Wigner small-d matrix
elements and SU(2) Clebsch-Gordan coefficients (Condon-Shortley phases).

Half-integer quantum numbers are passed either as ``HalfInt`` or as plain
floats such as ``0.5``; internally everything is carried as twice the value
so that selection rules are decided with integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from math import factorial, sqrt, comb

import numpy as np
from scipy.special import eval_jacobi

__all__ = [
    "HalfInt",
    "legendre_p",
    "legendre_p_all",
    "legendre_q",
    "legendre_q_all",
    "legendre_q_deriv",
    "harmonic_number",
    "wigner_d",
    "clebsch_gordan",
    "LMAX_CONTRACT",
]

#: largest orbital index covered by the accuracy contract
LMAX_CONTRACT = 50


@dataclass(frozen=True, order=True)
class HalfInt:
    """Exact half-integer, stored as twice its value.

    Parameters
    ----------
    twice_value : int
        ``2*j``. Negative values are allowed for projections.

    Examples
    --------
    >>> HalfInt(1)
    HalfInt(1/2)
    >>> float(HalfInt.of(1.5))
    1.5
    """

    twice_value: int

    def __post_init__(self):
        if not isinstance(self.twice_value, (int, np.integer)):
            raise TypeError("twice_value must be an integer")
        object.__setattr__(self, "twice_value", int(self.twice_value))

    @classmethod
    def of(cls, x) -> "HalfInt":
        """Build from a HalfInt, an int or a float that is a multiple of 1/2."""
        if isinstance(x, HalfInt):
            return x
        tw = 2 * float(x)
        r = round(tw)
        if abs(tw - r) > 1e-9:
            raise ValueError(f"{x!r} is not a multiple of 1/2")
        return cls(int(r))

    @property
    def is_integer(self) -> bool:
        return self.twice_value % 2 == 0

    def __float__(self):
        return self.twice_value / 2

    def __neg__(self):
        return HalfInt(-self.twice_value)

    def __add__(self, other):
        return HalfInt(self.twice_value + HalfInt.of(other).twice_value)

    def __sub__(self, other):
        return HalfInt(self.twice_value - HalfInt.of(other).twice_value)

    def __repr__(self):
        t = self.twice_value
        return f"HalfInt({t // 2})" if t % 2 == 0 else f"HalfInt({t}/2)"


def _tw(x) -> int:
    return HalfInt.of(x).twice_value


# ---------------------------------------------------------------------------
# Legendre P
# ---------------------------------------------------------------------------

def legendre_p_all(lmax: int, x):
    """P_0..P_lmax at ``x`` by the Bonnet recurrence.

    No domain restriction is applied, so this also serves arguments y > 1.

    Returns
    -------
    ndarray, shape ``(lmax+1,) + shape(x)``
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((lmax + 1,) + x.shape)
    out[0] = 1.0
    if lmax >= 1:
        out[1] = x
    for n in range(1, lmax):
        out[n + 1] = ((2 * n + 1) * x * out[n] - n * out[n - 1]) / (n + 1)
    return out


def legendre_p(ell: int, x):
    """Legendre polynomial P_ell(x) for |x| <= 1.

    Parameters
    ----------
    ell : int
        Non-negative degree.
    x : float or array_like
        Argument in [-1, 1].

    Raises
    ------
    ValueError
        If ``|x| > 1`` or ``ell < 0``.
    """
    if ell < 0:
        raise ValueError("ell must be non-negative")
    xa = np.asarray(x, dtype=float)
    if np.any(np.abs(xa) > 1.0):
        raise ValueError("legendre_p requires |x| <= 1")
    val = legendre_p_all(ell, xa)[ell]
    return float(val) if val.ndim == 0 else val


# ---------------------------------------------------------------------------
# Legendre Q for y > 1
# ---------------------------------------------------------------------------

def harmonic_number(n: int) -> float:
    return float(sum(1.0 / j for j in range(1, n + 1)))


def _q0(ym1):
    # Q_0(y) = atanh(1/y); written with y-1 so digits near y=1 survive
    return 0.5 * np.log1p(2.0 / ym1)


def legendre_q_all(lmax: int, ym1, deriv: bool = False):
    """Q_0..Q_lmax evaluated at y = 1 + ym1.

    The argument is passed as ``y - 1`` because callers usually know it in
    closed form, e.g. ``(k-k')**2/(2kk')``, which keeps full relative
    precision close to the logarithmic singularity.

    Parameters
    ----------
    lmax : int
    ym1 : array_like
        Strictly positive values of y-1.
    deriv : bool
        Also return E_n = (y**2-1) Q_n'(y), a quantity that stays bounded
        as y -> 1 (it tends to -1 for every n).

    Returns
    -------
    Q : ndarray, shape ``(lmax+1,) + shape(ym1)``
    E : ndarray, same shape, only when ``deriv`` is true

    Notes
    -----
    Q_n is the minimal solution of the Bonnet recurrence, so upward
    recurrence amplifies rounding by roughly rho**(2n) with
    rho = y + sqrt(y**2-1). Elements with lmax*log(rho) <= 2 use upward
    recurrence (bounded amplification). The rest use the continued fraction
    for Q_n/Q_{n-1} started far enough above lmax and anchored on Q_0.
    """
    ym1 = np.asarray(ym1, dtype=float)
    if np.any(~(ym1 > 0)):
        raise ValueError("legendre_q_all requires y > 1")
    shape = ym1.shape
    e = ym1.ravel()
    y = 1.0 + e
    lnrho = np.log1p(e + np.sqrt(e * (e + 2.0)))
    Q = np.empty((lmax + 1, e.size))
    E = np.empty((lmax + 1, e.size)) if deriv else None
    Q[0] = _q0(e)
    if deriv:
        E[0] = -1.0

    up = lmax * lnrho <= 2.0
    if np.any(up):
        yu, qu = y[up], np.empty((lmax + 1, up.sum()))
        qu[0] = Q[0, up]
        if lmax >= 1:
            qu[1] = yu * qu[0] - 1.0
        for n in range(1, lmax):
            qu[n + 1] = ((2 * n + 1) * yu * qu[n] - n * qu[n - 1]) / (n + 1)
        Q[:, up] = qu
        if deriv:
            for n in range(1, lmax + 1):
                E[n, up] = n * (yu * qu[n] - qu[n - 1])

    dn = ~up
    if np.any(dn) and lmax >= 1:
        yd = y[dn]
        top = lmax + int(np.ceil(18.0 / lnrho[dn].min())) + 5
        # r_n = Q_n / Q_{n-1}
        r = np.zeros_like(yd)
        ratios = np.empty((lmax + 1, yd.size))
        for n in range(top, 0, -1):
            r = n / ((2 * n + 1) * yd - (n + 1) * r)
            if n <= lmax:
                ratios[n] = r
        qd = np.empty((lmax + 1, yd.size))
        qd[0] = Q[0, dn]
        for n in range(1, lmax + 1):
            qd[n] = ratios[n] * qd[n - 1]
        Q[:, dn] = qd
        if deriv:
            # same recurrence for E_n: n E_{n+1} = (2n+1) y E_n - (n+1) E_{n-1}
            s = np.zeros_like(yd)
            sr = np.empty((lmax + 1, yd.size))
            for n in range(top, 0, -1):
                s = (n + 1) / ((2 * n + 1) * yd - n * s)
                if n <= lmax:
                    sr[n] = s
            ed = np.empty((lmax + 1, yd.size))
            ed[0] = -1.0
            for n in range(1, lmax + 1):
                ed[n] = sr[n] * ed[n - 1]
            E[:, dn] = ed

    Q = Q.reshape((lmax + 1,) + shape)
    if deriv:
        return Q, E.reshape((lmax + 1,) + shape)
    return Q


def legendre_q(ell: int, y):
    """Legendre function of the second kind Q_ell(y) for real y > 1.

    Q_ell(y) = 1/2 * int_{-1}^{1} P_ell(x) / (y - x) dx.

    Raises
    ------
    ValueError
        If any ``y <= 1``.

    Examples
    --------
    >>> round(legendre_q(0, 2.0), 6)
    0.549306
    """
    if ell < 0:
        raise ValueError("ell must be non-negative")
    ya = np.asarray(y, dtype=float)
    if np.any(~(ya > 1.0)):
        raise ValueError("legendre_q requires y > 1")
    val = legendre_q_all(ell, ya - 1.0)[ell]
    return float(val) if val.ndim == 0 else val


def legendre_q_deriv(ell: int, y):
    """dQ_ell/dy for y > 1."""
    ya = np.asarray(y, dtype=float)
    if np.any(~(ya > 1.0)):
        raise ValueError("legendre_q_deriv requires y > 1")
    ym1 = ya - 1.0
    _, E = legendre_q_all(ell, ym1, deriv=True)
    val = E[ell] / (ym1 * (ya + 1.0))
    return float(val) if val.ndim == 0 else val


# ---------------------------------------------------------------------------
# Wigner d and Clebsch-Gordan
# ---------------------------------------------------------------------------

def _check_jm(tj, tm):
    if tj < 0 or abs(tm) > tj or (tj - tm) % 2:
        raise ValueError(f"invalid angular momentum pair j={tj}/2, m={tm}/2")


@lru_cache(maxsize=4096)
def _d_params(tj, tm, tmp):
    # Jacobi-polynomial representation of d^j_{m' m}; everything as integers
    # (see e.g. the standard formula with k = min(j+m, j-m, j+m', j-m'))
    j2m, j2mm, j2p, j2pm = tj + tm, tj - tm, tj + tmp, tj - tmp
    k2 = min(j2m, j2mm, j2p, j2pm)
    k = k2 // 2
    if k2 == j2m:
        a, lam = (tmp - tm) // 2, (tmp - tm) // 2
    elif k2 == j2mm:
        a, lam = (tm - tmp) // 2, 0
    elif k2 == j2p:
        a, lam = (tm - tmp) // 2, 0
    else:
        a, lam = (tmp - tm) // 2, (tmp - tm) // 2
    b = tj - k2 - a
    pref = (-1) ** lam * sqrt(comb(tj - k, k + a) / comb(k + b, b))
    return k, a, b, pref


def wigner_d(j, m, mp, beta):
    """Small Wigner matrix element d^j_{m, mp}(beta).

    Uses the z-y-z convention, so that d^{1/2}_{1/2,1/2} = cos(beta/2)
    and d^{1/2}_{1/2,-1/2} = -sin(beta/2).

    Parameters
    ----------
    j, m, mp : HalfInt or float
        Angular momentum and its two projections (row ``m``, column ``mp``).
    beta : float or array_like
        Rotation angle in radians.

    Raises
    ------
    ValueError
        For an invalid (j, m, mp) combination.
    """
    tj, tm, tmp = _tw(j), _tw(m), _tw(mp)
    _check_jm(tj, tm)
    _check_jm(tj, tmp)
    # the formula below is written for d^j_{m' m} with m' the row index
    k, a, b, pref = _d_params(tj, tmp, tm)
    beta = np.asarray(beta, dtype=float)
    val = (pref * np.sin(beta / 2) ** a * np.cos(beta / 2) ** b
           * eval_jacobi(k, a, b, np.cos(beta)))
    return float(val) if val.ndim == 0 else val


@lru_cache(maxsize=1 << 16)
def _cg_twice(t1, tm1, t2, tm2, tJ, tM) -> float:
    if tm1 + tm2 != tM:
        return 0.0
    for tj, tm in ((t1, tm1), (t2, tm2), (tJ, tM)):
        if tj < 0 or abs(tm) > tj or (tj - tm) % 2:
            return 0.0
    if tJ < abs(t1 - t2) or tJ > t1 + t2 or (t1 + t2 + tJ) % 2:
        return 0.0
    # Racah's closed formula, exact rational arithmetic
    f = factorial
    a = (t1 + t2 - tJ) // 2
    b = (t1 - t2 + tJ) // 2
    c = (-t1 + t2 + tJ) // 2
    u1, v1 = (t1 + tm1) // 2, (t1 - tm1) // 2
    u2, v2 = (t2 + tm2) // 2, (t2 - tm2) // 2
    uJ, vJ = (tJ + tM) // 2, (tJ - tM) // 2
    pre = Fraction((tJ + 1) * f(a) * f(b) * f(c) * f(u1) * f(v1) * f(u2) * f(v2)
                   * f(uJ) * f(vJ), f((t1 + t2 + tJ) // 2 + 1))
    e1 = (tJ - t2 + tm1) // 2
    e2 = (tJ - t1 - tm2) // 2
    s = Fraction(0)
    for k in range(max(0, -e1, -e2), min(a, v1, u2) + 1):
        s += Fraction((-1) ** k, f(k) * f(a - k) * f(v1 - k) * f(u2 - k)
                      * f(e1 + k) * f(e2 + k))
    return float(np.sign(s)) * sqrt(float(pre * s * s))


def clebsch_gordan(j1, m1, j2, m2, J, M) -> float:
    """Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M>.

    Condon-Shortley convention. Returns 0 whenever a selection rule fails
    (M != m1+m2, triangle violated, |m| > j), never raises for those.

    Examples
    --------
    >>> round(clebsch_gordan(0.5, 0.5, 0.5, -0.5, 0, 0), 12)
    0.707106781187
    """
    return _cg_twice(_tw(j1), _tw(m1), _tw(j2), _tw(m2), _tw(J), _tw(M))
