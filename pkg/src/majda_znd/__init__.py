"""ZND detonation profiles and spectral stability for Majda's model."""

from __future__ import annotations

from .errors import (
    AdmissibilityError,
    ConvergenceError,
    DomainError,
    GeometryError,
    MajdaZNDError,
    ZeroOnContour,
)
from .evans import compare_methods, det_ode, eigen_system_eval
from .lopatinski import det_closed_form, evaluate, psi, psi_abscissa, z1_at_zero
from .numerics import adaptive_quad, integrate_ode
from .params import P0, P1, DetonationParams, build_params, ignition, q_max
from .profile import ProfilePoint, integrate_profile_oracle, profile_at, rh_residual
from .reports import canonical_json, emit_report
from .simulate import GridSpec, Perturbation, distance_to_orbit, init_state, run_experiment, step
from .stability import (
    StabilityReport,
    SweepSpec,
    Tolerances,
    Verdict,
    build_contours,
    parameter_sweep,
    verify_condition_D,
    winding_number,
)

__all__ = [
    "AdmissibilityError", "ConvergenceError", "DomainError", "GeometryError", "MajdaZNDError", "ZeroOnContour",
    "compare_methods", "det_ode", "eigen_system_eval",
    "det_closed_form", "evaluate", "psi", "psi_abscissa", "z1_at_zero",
    "adaptive_quad", "integrate_ode",
    "P0", "P1", "DetonationParams", "build_params", "ignition", "q_max",
    "ProfilePoint", "integrate_profile_oracle", "profile_at", "rh_residual",
    "canonical_json", "emit_report",
    "GridSpec", "Perturbation", "distance_to_orbit", "init_state", "run_experiment", "step",
    "StabilityReport", "SweepSpec", "Tolerances", "Verdict", "build_contours", "parameter_sweep",
    "verify_condition_D", "winding_number",
]
__version__ = "0.1.0"
