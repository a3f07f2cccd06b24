"""Resonant multiphoton Compton spectra of planar-channeled particles in a strong laser wave."""

from ._chanqed import (
    ConfigError,
    DomainError,
    KinematicsError,
    NumericError,
    __version__,
    angular_frequency_to_energy,
    bessel_j,
    derive,
    emitted_frequency,
    lambda0_series,
    lambda_r,
    lambda_series,
    lorentz_gamma,
    oscillator_frequency,
    spectrum,
    spectrum_csv,
    sweep,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "KinematicsError",
    "NumericError",
    "__version__",
    "angular_frequency_to_energy",
    "bessel_j",
    "derive",
    "emitted_frequency",
    "lambda0_series",
    "lambda_r",
    "lambda_series",
    "lorentz_gamma",
    "oscillator_frequency",
    "spectrum",
    "spectrum_csv",
    "sweep",
]
