"""Causal trajectories for the 1+1D Klein-Gordon square barrier.

Stationary scattering off scalar and electrostatic square barriers, the
stress tensor of the mode and its time-like eigen-flow, and world-line
integration under three velocity laws, with CSV/JSON emitters for every
result class. Hot kernels exist as a compiled extension and a pure-Python
twin; see kgflow.backend.
"""
from .backend import backend_name
from .barrier import (
    KIND_ELECTROSTATIC,
    KIND_SCALAR,
    KINDS,
    REGIME_EVANESCENT,
    REGIME_KLEIN,
    REGIME_PROPAGATING,
    BarrierSpec,
    barrier_k2_squared,
    barrier_regime,
    barrier_wavenumber,
    incident_wavenumber,
    omega_from_momentum,
    wavenumbers,
)
from .emt import (
    EmtSample,
    MixedTensor,
    eigen_analytic,
    eigen_numeric,
    emt_sample,
    kinetic_polar,
    lambda_extrema,
    stress_energy,
    stress_energy_polar,
    velocity_debroglie,
    velocity_eigen,
    velocity_schrodinger,
)
from .errors import (
    BothNullWarning,
    CausalityViolationError,
    DegenerateError,
    KGFlowError,
    NoBracketError,
    NodeApproachError,
    NodeError,
    SingularSystemError,
    StagnationNotice,
    SubThresholdError,
)
from .field import (
    FieldSample,
    conserved_current,
    evaluate_field,
    hj_residual,
    polar_gradients,
)
from .fourvec import FourVector
from .scattering import (
    RegionWave,
    ScanGrid,
    ScatteringSolution,
    closed_form_RT,
    find_potential_for_reflection,
    free_superposition,
    match_boundaries,
    rt_from_q,
    scan_transmission,
    single_region,
)
from .trajectories import (
    LAWS,
    Trajectory,
    boost_check,
    boost_trajectory,
    boost_velocity,
    direction_field,
    integrate_bundle,
    integrate_callable,
    integrate_trajectory,
    lambda_weighted_seeds,
)

__version__ = "0.1.0"

__all__ = [
    "BarrierSpec", "BothNullWarning", "CausalityViolationError",
    "DegenerateError", "EmtSample", "FieldSample", "FourVector",
    "KGFlowError", "KINDS", "KIND_ELECTROSTATIC", "KIND_SCALAR", "LAWS",
    "MixedTensor", "NoBracketError", "NodeApproachError", "NodeError",
    "REGIME_EVANESCENT", "REGIME_KLEIN", "REGIME_PROPAGATING", "RegionWave",
    "ScanGrid", "ScatteringSolution", "SingularSystemError",
    "StagnationNotice", "SubThresholdError", "Trajectory", "backend_name",
    "barrier_k2_squared", "barrier_regime", "barrier_wavenumber",
    "boost_check", "boost_trajectory", "boost_velocity",
    "closed_form_RT", "conserved_current", "direction_field",
    "eigen_analytic", "eigen_numeric", "emt_sample", "evaluate_field",
    "find_potential_for_reflection", "free_superposition", "hj_residual",
    "incident_wavenumber", "integrate_bundle", "integrate_callable",
    "integrate_trajectory", "kinetic_polar", "lambda_extrema",
    "lambda_weighted_seeds", "match_boundaries", "omega_from_momentum",
    "polar_gradients", "rt_from_q", "scan_transmission", "single_region",
    "stress_energy", "stress_energy_polar", "velocity_debroglie",
    "velocity_eigen", "velocity_schrodinger", "wavenumbers",
]
