"""Filtered Lie splitting for the cubic nonlinear Schrodinger equation
on the d-torus (d = 1..5), with rough random initial data, convergence
and one-step-defect benchmark harnesses, and discrete-in-time Bourgain
diagnostics."""

__version__ = "0.1.0"

from .spectral import (
    FilterSpec,
    SpectralField,
    TorusGrid,
    apply_projector,
    band_mask,
    free_flow,
    get_fft_workers,
    l2_distance,
    l2_norm,
    make_grid,
    physical_l2_norm,
    set_fft_workers,
    to_physical,
    to_spectral,
    weighted_l2_norm,
)
from .initial_data import RoughDataSpec, decay_envelope, plane_wave, rough_data
from .integrators import (
    AliasingError,
    AliasingWarning,
    BlowUpError,
    StepperConfig,
    Trajectory,
    evolve,
    filtered_equation_reference,
    lie_filtered_step,
    lie_standard_step,
    local_error_probe,
)
from .bourgain import (
    RegimeQuery,
    RegimeReport,
    SequenceSample,
    Table1Row,
    discrete_bourgain_norm,
    lp_tau_norm,
    regime_check,
    sobolev_norm,
)
from .harness import (
    ConvergenceReport,
    CurveResult,
    ExperimentPlan,
    LocalErrorSettings,
    PlanError,
    ReferenceRecipe,
    fit_order,
    load_plan,
    plan_from_dict,
    run_convergence,
    run_local_error,
)

__all__ = [
    "__version__",
    "FilterSpec", "SpectralField", "TorusGrid", "apply_projector", "band_mask",
    "free_flow", "get_fft_workers", "l2_distance", "l2_norm", "make_grid",
    "physical_l2_norm", "set_fft_workers", "to_physical", "to_spectral",
    "weighted_l2_norm",
    "RoughDataSpec", "decay_envelope", "plane_wave", "rough_data",
    "AliasingError", "AliasingWarning", "BlowUpError", "StepperConfig",
    "Trajectory", "evolve", "filtered_equation_reference", "lie_filtered_step",
    "lie_standard_step", "local_error_probe",
    "RegimeQuery", "RegimeReport", "SequenceSample", "Table1Row",
    "discrete_bourgain_norm", "lp_tau_norm", "regime_check", "sobolev_norm",
    "ConvergenceReport", "CurveResult", "ExperimentPlan", "LocalErrorSettings",
    "PlanError", "ReferenceRecipe", "fit_order", "load_plan", "plan_from_dict",
    "run_convergence", "run_local_error",
]
