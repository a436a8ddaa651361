"""Semiclassical double-well spectra and flux-resolved tunneling gaps on the circle."""

from ._core import (
    AgmonConstants,
    ParameterError,
    Potential,
    PrecisionError,
    ValidationError,
    __version__,
    agmon_constants,
    circle_eigenvalues,
    circle_gap,
    dirichlet_ground,
    kappa,
    leading_interaction,
    phase_profile,
    predicted_gap_even,
    splitting,
    sweep,
    sweep_csv,
    transport_amplitude,
    validate,
    wkb_compare,
)

__all__ = [
    "AgmonConstants",
    "ParameterError",
    "Potential",
    "PrecisionError",
    "ValidationError",
    "__version__",
    "agmon_constants",
    "circle_eigenvalues",
    "circle_gap",
    "dirichlet_ground",
    "kappa",
    "leading_interaction",
    "phase_profile",
    "predicted_gap_even",
    "splitting",
    "sweep",
    "sweep_csv",
    "transport_amplitude",
    "validate",
    "wkb_compare",
]
