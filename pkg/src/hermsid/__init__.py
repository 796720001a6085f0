"""Continuous-time LTI subspace identification via Hermite projections."""

from .analysis import EigMatch, McStats, frf_discrepancy, match_eigenvalues, mc_statistics
from .basis import (
    BasisSpec,
    CoefficientMatrix,
    SampledSignal,
    TimeScaling,
    convolution_coefficients,
    eval_basis,
    project,
    quadrature_grid,
    reconstruct,
    sampled_basis_matrix,
    shift_and_scale,
)
from .identify import IdentConfig, IdentResult, identify
from .lti import (
    NoiseSpec,
    StateSpaceModel,
    SweepSpec,
    bandlimit_via_hermite,
    eigenvalues,
    frequency_response,
    simulate,
    sine_sweep,
)
from .operators import (
    DerivativeOperator,
    ModifiedOperator,
    derivative_operator,
    modified_operator,
    operator_inverse_power,
    operator_power,
)

__version__ = "0.1.0"

__all__ = [
    "BasisSpec",
    "CoefficientMatrix",
    "DerivativeOperator",
    "EigMatch",
    "IdentConfig",
    "IdentResult",
    "McStats",
    "ModifiedOperator",
    "NoiseSpec",
    "SampledSignal",
    "StateSpaceModel",
    "SweepSpec",
    "TimeScaling",
    "bandlimit_via_hermite",
    "convolution_coefficients",
    "derivative_operator",
    "eigenvalues",
    "eval_basis",
    "frequency_response",
    "frf_discrepancy",
    "identify",
    "match_eigenvalues",
    "mc_statistics",
    "modified_operator",
    "operator_inverse_power",
    "operator_power",
    "project",
    "quadrature_grid",
    "reconstruct",
    "sampled_basis_matrix",
    "shift_and_scale",
    "simulate",
    "sine_sweep",
]
