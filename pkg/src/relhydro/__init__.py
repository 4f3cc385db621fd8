"""Relativistic two-fermion bound states from the one-photon-exchange kernel.

Modules
-------
special_fn   Legendre P/Q, Wigner d, Clebsch-Gordan coefficients.
kinematics   Masses, presets and centre-of-mass kinematics.
spinor       Helicity current contractions and their Dirac-matrix oracle.
interaction  Form factors, vacuum polarisation and partial-wave moments.
kernel       Partial-wave radial kernel V^J_{l'S'; lS}(k', k).
solver       Nystrom discretisation and the bound-state spectrum.
oracle       Brute-force angular quadrature used for verification.
cli          ``relhydro`` command-line interface.
"""

from .interaction import FormFactorSet, build_form_factors, point_like
from .kernel import ChannelBlock, channel_block, kernel_block, kernel_element
from .kinematics import KinPoint, TwoBodyConfig, preset
from .solver import build_grid, converge, spectrum

__version__ = "0.1.0"

__all__ = [
    "ChannelBlock",
    "FormFactorSet",
    "KinPoint",
    "TwoBodyConfig",
    "build_form_factors",
    "build_grid",
    "channel_block",
    "converge",
    "kernel_block",
    "kernel_element",
    "point_like",
    "preset",
    "spectrum",
]
