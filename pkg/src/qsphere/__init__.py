"""Quaternionic spherical harmonics, zonal kernels and sub-Laplacian spectral multipliers.

Exact identities run over rationals (``gmpy2.mpq``); estimates use numpy
Monte Carlo and closed-form spectral sums.
"""
__version__ = "0.1.0"

from .harmonic import (  # noqa: E402
    EigenData,
    HarmonicSpaceBasis,
    SpectralIndex,
    bidegree_space,
    dim_H_h,
    dim_H_hm,
    dim_P_h,
    eigenvalues,
    harmonic_space,
    joint_eigenspace,
    projection_kernel_bruteforce,
    su2_string_check,
)
from .multiplier import (  # noqa: E402
    BandIndicator,
    BochnerRiesz,
    Heat,
    MihlinBump,
    Tabulated,
    ball_volume_mc,
    enumerate_Ij,
    multiplier_kernel,
    norm_N2,
    parse_multiplier,
    plancherel_ratio,
    resolvent_diag_sum,
    weight_integral_mc,
)
from .poly import Poly  # noqa: E402
from .quat import HPoint, Quaternion, SpherePoint  # noqa: E402
from .rational import ComplexRational  # noqa: E402
from .zonal import KernelPoly, recurrence_coeffs, zonal_Z  # noqa: E402

__all__ = [
    "__version__",
    "EigenData",
    "HarmonicSpaceBasis",
    "SpectralIndex",
    "bidegree_space",
    "dim_H_h",
    "dim_H_hm",
    "dim_P_h",
    "eigenvalues",
    "harmonic_space",
    "joint_eigenspace",
    "projection_kernel_bruteforce",
    "su2_string_check",
    "BandIndicator",
    "BochnerRiesz",
    "Heat",
    "MihlinBump",
    "Tabulated",
    "ball_volume_mc",
    "enumerate_Ij",
    "multiplier_kernel",
    "norm_N2",
    "parse_multiplier",
    "plancherel_ratio",
    "resolvent_diag_sum",
    "weight_integral_mc",
    "Poly",
    "HPoint",
    "Quaternion",
    "SpherePoint",
    "ComplexRational",
    "KernelPoly",
    "recurrence_coeffs",
    "zonal_Z",
]
