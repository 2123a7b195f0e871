"""Protective measurement of a spin-1/2 particle: disturbance, fidelity, design."""

from .core import (
    CouplingProfile,
    FieldSpec,
    MeasurementGeometry,
    ProfileKind,
    coupling_eval,
    direction_angles,
    direction_vector,
    normalization_residual,
    phased_integral,
)
from .design import (
    DesignReport,
    LabParameters,
    derive_report,
    required_gradient,
    xi_budget,
)
from .dyson import (
    FirstOrderResult,
    envelope_closed_form,
    first_order_amplitude,
    reduction_ratio,
)
from .exact import (
    DegenerateFieldError,
    Method,
    TiltedField,
    TransitionResult,
    amplitude_envelope,
    amplitude_exact,
    probability_taylor,
    reversal_probability,
    survival_split,
    tilted_field,
    xi_bound,
)
from .multimeas import (
    MultiFieldConfig,
    combined_field_geometry,
    simultaneous_amplitude,
    simultaneous_schedule,
    successive_amplitude,
    successive_schedule,
    term_magnitudes,
)
from .oracle import (
    ConvergenceError,
    CrosscheckReport,
    HamiltonianSchedule,
    Segment,
    SpinState,
    crosscheck,
    propagate,
)
from .reconstruct import (
    DensityMatrix,
    ExpectationTriple,
    ReconstructionResult,
    corrupted_reconstruction,
    fidelity,
    measurement_triple,
    reconstruct_state,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "CouplingProfile",
    "CrosscheckReport",
    "DegenerateFieldError",
    "DensityMatrix",
    "DesignReport",
    "ExpectationTriple",
    "FieldSpec",
    "FirstOrderResult",
    "HamiltonianSchedule",
    "LabParameters",
    "MeasurementGeometry",
    "Method",
    "MultiFieldConfig",
    "ProfileKind",
    "ReconstructionResult",
    "Segment",
    "SpinState",
    "TiltedField",
    "TransitionResult",
    "amplitude_envelope",
    "amplitude_exact",
    "combined_field_geometry",
    "corrupted_reconstruction",
    "coupling_eval",
    "crosscheck",
    "derive_report",
    "direction_angles",
    "direction_vector",
    "envelope_closed_form",
    "fidelity",
    "first_order_amplitude",
    "measurement_triple",
    "normalization_residual",
    "phased_integral",
    "probability_taylor",
    "propagate",
    "reconstruct_state",
    "reduction_ratio",
    "required_gradient",
    "reversal_probability",
    "simultaneous_amplitude",
    "simultaneous_schedule",
    "successive_amplitude",
    "successive_schedule",
    "survival_split",
    "term_magnitudes",
    "tilted_field",
    "xi_bound",
    "xi_budget",
]
