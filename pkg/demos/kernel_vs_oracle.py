"""Closed-form kernel against brute-force angular quadrature.

The oracle builds Dirac spinors, contracts the full currents and projects
numerically on the partial waves.  The analytic kernel uses Legendre
moments only.  They should agree to quadrature precision.
"""
import numpy as np

from relhydro import KinPoint, TwoBodyConfig, channel_block, kernel_block
from relhydro.oracle import oracle_kernel_block

cfg = TwoBodyConfig(1.0, 1.7, 1, 0.1)
rng = np.random.default_rng(3)

for J in (0, 1, 2):
    for blk in ("A", "B"):
        b = channel_block(J, blk)
        worst = 0.0
        for _ in range(5):
            k, kp = rng.uniform(0.05, 3.0, 2)
            p = KinPoint(k, kp)
            V = np.asarray(kernel_block(cfg, b, p))
            O = np.asarray(oracle_kernel_block(cfg, b, p))
            worst = max(worst, np.max(np.abs(V - O)) / np.max(np.abs(O)))
        print(f"J={J} block {blk}: max relative deviation {worst:.2e}")
