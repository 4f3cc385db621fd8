"""Nystrom solution of the radial bound-state equation.

The kernel of one-photon exchange has an integrable logarithmic singularity
at k = k'.  It is split as

    V(k', k) = B(k', k) S(k', k) + V_reg(k', k),   S = -Q_0(y)/(k k'),

where B is the kernel evaluated with the logarithmic coefficients of the
moments (smooth, B(k, k) is the coefficient of the log) and V_reg is
continuous with a known diagonal limit.  On the mapped Gauss-Legendre grid
ln|k - k'| = ln|(k - k')/(t - t')| + ln|t - t'| and the last logarithm is
integrated with product-integration weights, which keeps the Nystrom matrix
accurate to spectral order.  The older Lande subtraction is available with
``singular="lande"``; it converges only algebraically.

All matrices act on M - m1 - m2 (the binding energy) so that hydrogen-scale
levels keep full relative precision.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss, legvander
from scipy.linalg import LinAlgError, eigh

from .interaction import FormFactorSet, point_like
from .kernel import ChannelBlock, kernel_from_moments, kernel_moments
from .kinematics import KinPoint, TwoBodyConfig, kinetic

__all__ = [
    "ConfigurationError",
    "NumericalError",
    "MomentumGrid",
    "tan_map",
    "build_grid",
    "log_product_weights",
    "assemble",
    "assemble_from_kernel",
    "solve",
    "SpectrumResult",
    "ConvergenceReport",
    "converge",
    "spectrum",
    "MIN_GRID_SIZE",
]

log = logging.getLogger(__name__)

MIN_GRID_SIZE = 8
ASYMMETRY_LIMIT = 1e-9


class ConfigurationError(ValueError):
    """Invalid user input (grid size, scale, block, model name)."""


class NumericalError(RuntimeError):
    """Failure inside assembly or the eigen-decomposition."""


# ---------------------------------------------------------------------------
# grid
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MomentumGrid:
    """Quadrature on (0, inf): nodes k_i, weights w_i, Gauss nodes t_i."""

    nodes: np.ndarray
    weights: np.ndarray
    scale: float
    t: np.ndarray = field(repr=False)
    t_weights: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.nodes)

    @property
    def jacobian(self) -> np.ndarray:
        """dk/dt at the nodes."""
        return self.weights / self.t_weights

    def integrate(self, f) -> float:
        return float(np.sum(self.weights * f(self.nodes)))


def tan_map(t, k0: float):
    """k = k0 tan(pi (t + 1)/4) and dk/dt for t in (-1, 1)."""
    a = np.pi * (np.asarray(t, float) + 1) / 4
    return k0 * np.tan(a), k0 * np.pi / 4 / np.cos(a) ** 2


def build_grid(n: int, k0: float) -> MomentumGrid:
    """Gauss-Legendre grid of ``n`` nodes mapped to (0, inf) with scale ``k0``.

    Half the nodes lie below k0.
    """
    if int(n) != n or n < MIN_GRID_SIZE:
        raise ConfigurationError(f"grid size must be an integer >= {MIN_GRID_SIZE}, got {n}")
    if not k0 > 0:
        raise ConfigurationError("grid scale k0 must be positive")
    t, wg = leggauss(int(n))
    k, jac = tan_map(t, k0)
    return MomentumGrid(k, jac * wg, float(k0), t, wg)


def _q_cut(nmax, tau):
    # Legendre Q_n on the cut (-1, 1), upward recurrence
    Q = np.zeros((nmax + 2,) + tau.shape)
    Q[0] = 0.5 * np.log((1 + tau) / (1 - tau))
    Q[1] = tau * Q[0] - 1
    for n in range(1, nmax + 1):
        Q[n + 1] = ((2 * n + 1) * tau * Q[n] - n * Q[n - 1]) / (n + 1)
    return Q


def log_product_weights(t, wg) -> np.ndarray:
    """L[i, j] with sum_j L[i, j] g(t_j) = int_{-1}^{1} ln|t_i - s| g(s) ds.

    Exact for polynomials g of degree < n.  Uses
    int ln|t - s| P_m(s) ds = 2/(2m+1) [Q_{m+1}(t) - Q_{m-1}(t)] for m >= 1.
    """
    t = np.asarray(t, float)
    n = len(t)
    I = np.zeros((n, n))
    I[:, 0] = (1 + t) * np.log1p(t) + (1 - t) * np.log1p(-t) - 2
    Q = _q_cut(n, t)
    for m in range(1, n):
        I[:, m] = 2.0 / (2 * m + 1) * (Q[m + 1] - Q[m - 1])
    P = legvander(t, n - 1)
    c = (2 * np.arange(n) + 1) / 2
    return (I * c[None, :]) @ P.T * np.asarray(wg)[None, :]


# ---------------------------------------------------------------------------
# assembly
# ---------------------------------------------------------------------------

def _block_kernels(cfg, block, grid, ffs, nq):
    # V_full (off-diagonal), B (log coefficient) and V_fin (diagonal limit)
    k = grid.nodes
    n = len(k)
    K_in = np.broadcast_to(k[None, :], (n, n))
    K_out = np.broadcast_to(k[:, None], (n, n))
    p = KinPoint(K_in, K_out)
    # placeholder off the singular diagonal; those entries are replaced below
    K_off = K_out.copy()
    K_off[np.diag_indices(n)] *= 2.0
    mf = kernel_moments("full", block.J, cfg, K_in, K_off, ffs, nq)
    Vf = kernel_from_moments(cfg, block, KinPoint(K_in, K_off), mf)
    ml = kernel_moments("log", block.J, cfg, K_in, K_out, ffs, nq)
    B = kernel_from_moments(cfg, block, p, ml)
    # diagonal limit: moments at k' = k, pulled through the same functional
    pd = KinPoint(k, k)
    md = kernel_moments("diag", block.J, cfg, k, k, ffs, nq)
    Vd = kernel_from_moments(cfg, block, pd, md)
    return Vf, B, Vd


def _singular_matrix(grid: MomentumGrid) -> np.ndarray:
    # S_hat[i, j]: discrete stand-in for -Q_0/(k k') whose ln|t - t'| part
    # carries product-integration weights, divided by the plain weights
    k, t, wg = grid.nodes, grid.t, grid.t_weights
    n = len(k)
    L = log_product_weights(t, wg) / wg[None, :]
    ls = 0.5 * (L + L.T)
    with np.errstate(divide="ignore", invalid="ignore"):
        dq = (k[:, None] - k[None, :]) / (t[:, None] - t[None, :])
    dq[np.diag_indices(n)] = grid.jacobian
    return -(np.log(k[:, None] + k[None, :]) - np.log(dq) - ls) / np.outer(k, k)


def _exact_s(grid):
    k = grid.nodes
    with np.errstate(divide="ignore"):
        S = -np.log((k[:, None] + k[None, :]) / np.abs(k[:, None] - k[None, :])) / np.outer(k, k)
    np.fill_diagonal(S, 0.0)
    return S


def assemble_from_kernel(cfg: TwoBodyConfig, grid: MomentumGrid, V: np.ndarray,
                         check: bool = True) -> np.ndarray:
    """Nystrom matrix diag(T(k_i)) + D V D for a kernel on the grid.

    ``V`` has shape (n_ch, n_ch, N, N) indexed [out, in, k'_i, k_j] (or
    (N, N) for one channel) and already contains any diagonal treatment.
    T(k) = w1 + w2 - m1 - m2, D = diag(sqrt(w_i) k_i).  The result acts on
    the binding energy M - m1 - m2.
    """
    V = np.asarray(V, float)
    if V.ndim == 2:
        V = V[None, None]
    nch, N = V.shape[0], V.shape[2]
    if N != grid.size:
        raise ConfigurationError("kernel and grid sizes differ")
    s = np.sqrt(grid.weights) * grid.nodes
    A = (V * s[None, None, :, None] * s[None, None, None, :]).transpose(0, 2, 1, 3)
    A = A.reshape(nch * N, nch * N)
    A = A + np.diag(np.tile(kinetic(cfg, grid.nodes), nch))
    if not np.all(np.isfinite(A)):
        raise NumericalError("non-finite entries in the Nystrom matrix")
    asym = np.abs(A - A.T).max() / max(np.abs(A).max(), 1e-300)
    if check and asym > ASYMMETRY_LIMIT:
        raise NumericalError(f"assembled matrix asymmetric: {asym:.3e} > {ASYMMETRY_LIMIT:g}")
    log.debug("assembled %dx%d, relative asymmetry %.2e", *A.shape, asym)
    return 0.5 * (A + A.T)


def grid_kernel(cfg: TwoBodyConfig, block: ChannelBlock, grid: MomentumGrid,
                ffs: FormFactorSet | None = None, singular: str = "product",
                nq: int = 48) -> np.ndarray:
    """Discretised kernel V_hat[out, in, i, j] including the diagonal treatment."""
    ffs = ffs or point_like()
    Vf, B, Vd = _block_kernels(cfg, block, grid, ffs, nq)
    n = grid.size
    di = np.diag_indices(n)
    S = _exact_s(grid)
    Vreg = Vf - B * S
    for a in range(len(block)):
        for b in range(len(block)):
            Vreg[a, b][di] = Vd[a, b]
    if singular == "product":
        return Vreg + B * _singular_matrix(grid)
    if singular == "lande":
        # int S(k, k') dk' = -pi^2/(2k) absorbs the subtracted diagonal term
        w, k = grid.weights, grid.nodes
        corr = (-np.pi ** 2 / (2 * k) - (S * w[None, :]).sum(1)) / w
        out = Vreg + B * S
        for a in range(len(block)):
            for b in range(len(block)):
                out[a, b][di] += B[a, b][di] * corr
        return out
    raise ConfigurationError(f"unknown singular treatment {singular!r}")


def assemble(cfg: TwoBodyConfig, block: ChannelBlock, grid: MomentumGrid,
             ffs: FormFactorSet | None = None, singular: str = "product",
             nq: int = 48) -> np.ndarray:
    """Symmetric Nystrom matrix of the block; eigenvalues are M - m1 - m2.

    Channels are stacked channel-major: index c * N + i.
    """
    V = grid_kernel(cfg, block, grid, ffs, singular, nq)
    return assemble_from_kernel(cfg, grid, V)


# ---------------------------------------------------------------------------
# spectrum
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectrumResult:
    """Eigen-solution of one channel block.

    ``vectors[n, c, i]`` is Phi_c(k_i) of state n, normalised so that
    sum_{c,i} w_i k_i^2 |Phi_c(k_i)|^2 = 1.
    """

    binding: np.ndarray
    masses: np.ndarray
    vectors: np.ndarray
    grid: MomentumGrid | None = None
    block: ChannelBlock | None = None
    cfg: TwoBodyConfig | None = None

    @property
    def bound(self) -> np.ndarray:
        return self.binding < 0

    def to_dict(self, n_levels: int | None = None) -> dict:
        nb = len(self.binding) if n_levels is None else n_levels
        d = {
            "masses": [float(v) for v in self.masses[:nb]],
            "binding": [float(v) for v in self.binding[:nb]],
        }
        if self.cfg is not None:
            c = self.cfg
            d = {"config": {"name": c.name, "m1": c.m1, "m2": c.m2, "Z": c.Z,
                            "alpha": c.alpha}, **d}
        if self.block is not None:
            d["block"] = {"J": self.block.J, "name": self.block.name,
                          "channels": [list(ch) for ch in self.block.channels]}
        if self.grid is not None:
            d["grid"] = {"N": self.grid.size, "k0": self.grid.scale}
        return d


def solve(matrix, grid: MomentumGrid | None = None, block: ChannelBlock | None = None,
          cfg: TwoBodyConfig | None = None) -> SpectrumResult:
    """Diagonalise a symmetric Nystrom matrix.

    Without ``grid`` the eigenvectors are returned as they are (one channel,
    unit Euclidean norm).  ``masses`` add m1 + m2 when ``cfg`` is given.
    """
    A = np.asarray(matrix, float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    try:
        vals, vecs = eigh(A)
    except (LinAlgError, ValueError) as exc:
        raise NumericalError(f"eigen-decomposition failed ({exc}); "
                             f"size {A.shape[0]}, finite={np.isfinite(A).all()}") from exc
    n = A.shape[0]
    if grid is not None:
        nch = n // grid.size
        s = np.sqrt(grid.weights) * grid.nodes
        phi = vecs.T.reshape(n, nch, grid.size) / s[None, None, :]
    else:
        phi = vecs.T.reshape(n, 1, n)
    offset = (cfg.m1 + cfg.m2) if cfg is not None else 0.0
    return SpectrumResult(vals, vals + offset, phi, grid, block, cfg)


def spectrum(cfg: TwoBodyConfig, block: ChannelBlock, n: int, k0: float | None = None,
             ffs: FormFactorSet | None = None, singular: str = "product",
             nq: int = 48) -> SpectrumResult:
    """Build grid, assemble and solve in one call; k0 defaults to mu Z alpha."""
    grid = build_grid(n, k0 if k0 is not None else cfg.bohr_momentum)
    A = assemble(cfg, block, grid, ffs, singular, nq)
    return solve(A, grid, block, cfg)


@dataclass
class ConvergenceReport:
    """Lowest bindings for each grid size and relative changes between sizes."""

    sizes: list
    binding: list
    deltas: list
    tolerance: float
    converged: bool

    def to_dict(self) -> dict:
        return {"sizes": list(self.sizes),
                "binding": [list(map(float, b)) for b in self.binding],
                "relative_delta": [float(d) for d in self.deltas],
                "tolerance": self.tolerance, "converged": bool(self.converged)}


def converge(cfg: TwoBodyConfig, block: ChannelBlock, ffs: FormFactorSet | None = None,
             n_sequence: Sequence[int] = (48, 64, 80, 96, 120), k0: float | None = None,
             n_levels: int = 3, tol: float = 1e-6, singular: str = "product",
             nq: int = 48) -> ConvergenceReport:
    """Ground-state binding across grid sizes.

    Converged when |Delta B_1| / |B_1| < ``tol`` between the last two sizes.
    """
    if len(n_sequence) < 2:
        raise ConfigurationError("need at least two grid sizes")
    bs = []
    for n in n_sequence:
        res = spectrum(cfg, block, n, k0, ffs, singular, nq)
        bs.append(res.binding[:n_levels].copy())
        log.info("N=%d  B1=%.12g", n, res.binding[0])
    deltas = [abs(b[0] - a[0]) / abs(b[0]) for a, b in zip(bs, bs[1:])]
    return ConvergenceReport(list(n_sequence), bs, deltas, tol, deltas[-1] < tol)
