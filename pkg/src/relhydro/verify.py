"""Self-checks behind ``relhydro verify``.

Each suite compares a production path against an independent reference at
a modest number of seeded random points and returns a :class:`SuiteResult`.
The acceptance tests run the same comparisons with larger samples.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernel as _kernel
from .interaction import point_like, r_tilde
from .kernel import channel_block, kernel_element
from .kinematics import KinPoint, TwoBodyConfig, preset, y_of
from .oracle import oracle_currents, oracle_kernel_block, oracle_kernel_element
from .special_fn import legendre_q
from .spinor import (ALL_LABELS, METRIC, contract_scalar_scalar, contract_scalar_slash1,
                     contract_slash2_scalar, contract_time_time, contract_vector_vector,
                     oracle_contractions)

__all__ = ["SuiteResult", "SUITES", "run_suites", "DEFAULT_SEED"]

DEFAULT_SEED = 20240917


@dataclass
class SuiteResult:
    name: str
    passed: bool
    worst: float
    tolerance: float
    detail: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return (f"{tag} {self.name}: worst={self.worst:.3e} tol={self.tolerance:.1e} "
                f"({self.seconds:.2f}s){' ' + self.detail if self.detail else ''}")


def _random_point(rng, scale=1.0):
    return KinPoint(*(scale * rng.uniform(0.05, 3.0, 2)))


def _relerr(a, b, floor):
    return abs(a - b) / max(abs(b), floor)


_CONTRACTIONS = (
    ("vv", contract_vector_vector),
    ("s_slash1", contract_scalar_slash1),
    ("slash2_s", contract_slash2_scalar),
    ("ss", contract_scalar_scalar),
)


def spinor_suite(rng, n_points: int = 20, tol: float = 1e-11) -> SuiteResult:
    """Closed-form contractions against explicit gamma-matrix algebra."""
    worst = 0.0
    for _ in range(n_points):
        cfg = TwoBodyConfig(*rng.uniform(0.3, 3.0, 2))
        p = _random_point(rng)
        beta = rng.uniform(0, np.pi)
        kf = tuple(rng.normal(size=4))
        for L in ALL_LABELS:
            o = oracle_contractions(cfg, p, beta, L)
            # contractions are O(1) per unit energy; normalise by the local scale
            scale = (np.hypot(cfg.m1, p.k) + np.hypot(cfg.m1, p.kp)) * \
                (np.hypot(cfg.m2, p.k) + np.hypot(cfg.m2, p.kp))
            for key, fn in _CONTRACTIONS:
                worst = max(worst, abs(fn(cfg, p, beta, L) - o[key].real) / scale)
            e1 = (np.hypot(cfg.m1, p.k) + np.hypot(cfg.m1, p.kp)) / (2 * cfg.m1)
            e2 = (np.hypot(cfg.m2, p.k) + np.hypot(cfg.m2, p.kp)) / (2 * cfg.m2)
            tt = (kf[0] * o["tt"] - kf[1] * e1 * o["s0_1"] - kf[2] * e2 * o["s0_2"]
                  + kf[3] * e1 * e2 * o["s0_12"]).real
            worst = max(worst, abs(contract_time_time(cfg, p, beta, L, kf) - tt) / scale)
    return SuiteResult("spinor", worst < tol, worst, tol)


def moments_suite(rng, n_points: int = 30, tol: float = 1e-10) -> SuiteResult:
    """R moments with K = 1 against -Q_l(y)/(k k')."""
    worst = 0.0
    for _ in range(n_points):
        p = _random_point(rng)
        for ell in (0, 1, 5, 12, 20):
            ref = -legendre_q(ell, y_of(p)) / (p.k * p.kp)
            worst = max(worst, _relerr(r_tilde(ell, p), ref, 1e-300))
    return SuiteResult("moments", worst < tol, worst, tol)


def angular_suite(rng, n_points: int = 4, tol: float = 1e-7, jmax: int = 2) -> SuiteResult:
    """Partial-wave kernel against 2D angular quadrature of the amplitude."""
    worst = 0.0
    cfg = TwoBodyConfig(1.0, 1.7, 1, 0.1)
    for _ in range(n_points):
        p = _random_point(rng)
        for J in range(jmax + 1):
            for name in ("A", "B"):
                b = channel_block(J, name)
                V = np.array([[kernel_element(cfg, b, i, j, p) for j in range(len(b))]
                              for i in range(len(b))])
                O = oracle_kernel_block(cfg, b, p)
                worst = max(worst, np.abs(V - O).max() / np.abs(O).max())
    return SuiteResult("angular", worst < tol, worst, tol)


def gauge_suite(rng, n_points: int = 3, tol: float = 1e-12) -> SuiteResult:
    """Gauge-parameter independence and q.J = 0 for the projected currents."""
    worst = 0.0
    cfg = TwoBodyConfig(1.0, 1.7, 1, 0.1)
    for _ in range(n_points):
        p = _random_point(rng)
        b = channel_block(1, "B")
        for i in range(2):
            for j in range(2):
                v1 = oracle_kernel_element(cfg, b, i, j, p, xi=1.0, n_x=48)
                v17 = oracle_kernel_element(cfg, b, i, j, p, xi=17.0, n_x=48)
                worst = max(worst, _relerr(v1, v17, 1e-300))
        th = rng.uniform(0, np.pi, (2, 8))
        ph = rng.uniform(0, 2 * np.pi, (2, 8))
        for L in ALL_LABELS:
            j1, j2, q, q2, _ = oracle_currents(cfg, L, float(p.k), float(p.kp),
                                               th[0], ph[0], th[1], ph[1])
            for jj in (j1, j2):
                qj = np.einsum("ni,ij,nj->n", q, METRIC, jj)
                norm = np.sqrt(-q2) * np.abs(jj).max(axis=1)
                worst = max(worst, float(np.max(np.abs(qj) / np.maximum(norm, 1e-300))))
    return SuiteResult("gauge", worst < tol, worst, tol)


def nr_limit_suite(rng, tol: float = 3.0) -> SuiteResult:
    """Kernel against the Coulomb partial wave at atomic momenta.

    The relative deviation divided by (k/m1)^2 must stay below ``tol``; a
    wrong global sign or normalisation gives values of order (m1/k)^2.
    """
    cfg = preset("hydrogen")
    worst = 0.0
    for J, name in ((0, "A"), (1, "B"), (2, "A")):
        b = channel_block(J, name)
        for _ in range(3):
            k, kp = cfg.bohr_momentum * rng.uniform(0.2, 5.0, 2)
            p = KinPoint(k, kp)
            for c, (ell, _S) in enumerate(b.channels):
                v = kernel_element(cfg, b, c, c, p)
                ref = -(cfg.coupling / np.pi) * legendre_q(ell, y_of(p)) / (k * kp)
                worst = max(worst, abs(v / ref - 1) / (max(k, kp) / cfg.m1) ** 2)
    return SuiteResult("nr-limit", worst < tol, worst, tol)


SUITES: dict[str, Callable] = {
    "spinor": spinor_suite,
    "moments": moments_suite,
    "angular": angular_suite,
    "gauge": gauge_suite,
    "nr-limit": nr_limit_suite,
}


def run_suites(names=None, seed: int = DEFAULT_SEED) -> list:
    """Run the named suites (all by default) with a seeded generator each."""
    names = list(SUITES) if not names else list(names)
    out = []
    for nm in names:
        if nm not in SUITES:
            raise ValueError(f"unknown suite {nm!r}; available: {', '.join(SUITES)}")
        rng = np.random.default_rng([seed, list(SUITES).index(nm)])
        t0 = time.perf_counter()
        try:
            res = SUITES[nm](rng)
        except Exception as exc:  # a crash is a failed check, not a crash of the runner
            res = SuiteResult(nm, False, float("nan"), float("nan"), f"error: {exc}")
        res.seconds = time.perf_counter() - t0
        out.append(res)
    return out
