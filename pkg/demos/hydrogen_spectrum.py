"""Hydrogen levels from the one-photon-exchange kernel.

Solves the J=0 and J=1 blocks on a tan-mapped grid and compares the lowest
bindings with the Bohr formula -mu (Z alpha)^2 / (2 n^2).  The small excess
over Bohr is the relativistic (fine-structure) shift, of relative size
(Z alpha)^2.
"""
import numpy as np

from relhydro import channel_block, preset, spectrum

cfg = preset("hydrogen")
mu = cfg.m1 * cfg.m2 / (cfg.m1 + cfg.m2)
bohr = -mu * (cfg.Z * cfg.alpha) ** 2 / 2      # MeV
ev = 1e6

print(f"reduced mass {mu:.9f} MeV, Bohr ground state {bohr * ev:.6f} eV\n")

# block A of J=0 holds the 1S0, 2S0, ... singlets.
# block B of J=1 couples 3S1 and 3D1; block B of J=0 is 3P0.
for J, blk, label in ((0, "A", "1S0 series"), (1, "B", "3S1-3D1"), (0, "B", "3P0")):
    res = spectrum(cfg, channel_block(J, blk), n=96)
    b = res.binding[:3]
    print(f"J={J} block {blk} ({label})")
    for i, e in enumerate(b):
        # principal quantum number: S series starts at n=1, P at n=2
        n = i + (2 if label == "3P0" else 1)
        print(f"   B = {e * ev:12.6f} eV   B / Bohr(n={n}) = {e / (bohr / n**2):.8f}")
    print()

# Expected (Z alpha)^2 scale of the shift
print(f"(Z alpha)^2 = {(cfg.Z * cfg.alpha) ** 2:.3e}")
