"""Ground-state hyperfine splitting of hydrogen.

Singlet (J=0, block A) minus triplet (J=1, block B).  A point Dirac proton
has no anomalous moment, so its splitting is short by the factor
mu_p / (2 mu_N) ~ 2.79.  Switching on the dipole form factors restores the
Pauli coupling and brings the result close to the 5.87 ueV line.
"""
from relhydro import build_form_factors, channel_block, preset, spectrum

cfg = preset("hydrogen")
N = 96

for names in (["point"], ["dipole-proton"]):
    ffs = build_form_factors(cfg, names)
    singlet = spectrum(cfg, channel_block(0, "A"), N, ffs=ffs).binding[0]
    triplet = spectrum(cfg, channel_block(1, "B"), N, ffs=ffs).binding[0]
    print(f"{names[0]:>14s}: E(triplet) - E(singlet) = {(triplet - singlet) * 1e12:7.3f} ueV")
