"""Vacuum polarisation in muonic hydrogen.

The Uehling correction to the photon propagator is what dominates the
2S-2P splitting in muonic hydrogen (about 205 meV).  We get it as the
difference between runs with and without vacuum polarisation, which removes
the common Coulomb part.
"""
from relhydro import build_form_factors, channel_block, preset, spectrum

cfg = preset("muonic-hydrogen")
N = 96

point = build_form_factors(cfg, ["point"])
vp = build_form_factors(cfg, ["point"], vacuum_polarization="uehling")

s_blk = channel_block(0, "A")   # 1S0, 2S0
p_blk = channel_block(1, "A")   # 1P1

def levels(block, ffs):
    return spectrum(cfg, block, N, ffs=ffs).binding

s0, s1 = levels(s_blk, point), levels(s_blk, vp)
p0, p1 = levels(p_blk, point), levels(p_blk, vp)

# 2S is the second S level, 2P the first P level
d2s = s1[1] - s0[1]
d2p = p1[0] - p0[0]
print(f"Uehling shift of 2S : {d2s * 1e9:9.3f} meV")
print(f"Uehling shift of 2P : {d2p * 1e9:9.3f} meV")
print(f"2P - 2S from VP     : {(d2p - d2s) * 1e9:9.3f} meV")
