"""Exact time evolution of spin-s substates in a rotating-wave magnetic resonance field."""
from .dynamics import (
    DerivedFrame,
    TimeSeries,
    adiabatic_evolve,
    derive_frame,
    evolve,
    evolve_series,
    hall_klemm_coefficients,
    probabilities,
)
from .errors import (
    ConfigError,
    DegenerateField,
    InvalidSpin,
    NotNormalized,
    SpinRWAError,
    StepTooLarge,
    UnknownScenario,
)
from .field import FieldConfig
from .spin import SpinOperators, SpinQuantum, StateVector, enumerate_substates, spin_matrices
from .wigner import HalfAngle, WignerMatrix, half_angle_from_field, wigner_d

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "DegenerateField", "DerivedFrame", "FieldConfig", "HalfAngle",
    "InvalidSpin", "NotNormalized", "SpinOperators", "SpinQuantum", "SpinRWAError",
    "StateVector", "StepTooLarge", "TimeSeries", "UnknownScenario", "WignerMatrix",
    "adiabatic_evolve", "derive_frame", "enumerate_substates", "evolve", "evolve_series",
    "half_angle_from_field", "hall_klemm_coefficients", "probabilities", "spin_matrices",
    "wigner_d",
]
