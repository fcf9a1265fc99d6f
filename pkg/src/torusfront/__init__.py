"""Numerical wave front detection on the torus via Fourier coefficients.

Windowed periodizations turn local singularity questions into coefficient
decay questions on frequency cones; weighted sequence spaces and coefficient
convolution provide the accompanying distribution algebra.
"""

from .algebra import (
    ProductReport,
    coeff_convolution,
    local_product,
    truncation_flags,
    young_bound_check,
    young_exponent,
)
from .coeffs import (
    CoeffArray,
    TestDistribution,
    analytic_coeffs,
    fourier_coefficients,
    modulate,
    synthesize,
    window_coefficients,
)
from .cones import Cone, lattice_points_in_cone, separation_constant, shrink
from .grid import (
    CutoffWindow,
    Grid,
    SampledField,
    bump_window,
    make_grid,
    periodize,
    sample,
    smoothstep,
)
from .spaces import (
    MembershipReport,
    ModerateReport,
    Weight,
    dual_pairing,
    effective_bandwidth,
    is_nu_moderate,
    localize,
    membership_estimate,
    polyweight,
    weighted_norm,
)
from .testcases import OracleCase, classical_coeffs, generate, standard_cases
from .wavefront import (
    DecayEstimate,
    SobolevEstimate,
    WavefrontReport,
    direction_grid,
    directional_decay,
    full_wf_map,
    sobolev_order,
    sobolev_wavefront_scan,
    wavefront_scan,
)

__version__ = "0.1.0"

__all__ = [
    "ProductReport",
    "coeff_convolution",
    "local_product",
    "truncation_flags",
    "young_bound_check",
    "young_exponent",
    "CoeffArray",
    "TestDistribution",
    "analytic_coeffs",
    "fourier_coefficients",
    "modulate",
    "synthesize",
    "window_coefficients",
    "Cone",
    "lattice_points_in_cone",
    "separation_constant",
    "shrink",
    "CutoffWindow",
    "Grid",
    "SampledField",
    "bump_window",
    "make_grid",
    "periodize",
    "sample",
    "smoothstep",
    "MembershipReport",
    "ModerateReport",
    "Weight",
    "dual_pairing",
    "effective_bandwidth",
    "is_nu_moderate",
    "localize",
    "membership_estimate",
    "polyweight",
    "weighted_norm",
    "OracleCase",
    "classical_coeffs",
    "generate",
    "standard_cases",
    "DecayEstimate",
    "SobolevEstimate",
    "WavefrontReport",
    "direction_grid",
    "directional_decay",
    "full_wf_map",
    "sobolev_order",
    "sobolev_wavefront_scan",
    "wavefront_scan",
    "__version__",
]
