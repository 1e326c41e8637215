"""Thermal line shapes of a relativistic gas of monochromatic radiators."""

from .detector import DetectorConfig, ScanCurve, doppler_scan, registered_mean, response_weight
from .juttner import (
    EnsembleParams,
    juttner_pdf,
    juttner_sample,
    mean_inverse_gamma,
    sample_emission,
)
from .monte_carlo import SimulationSpec, histogram_distance, simulate_spectrum
from .special_functions import bessel_k, bessel_k_ratio
from .spectrum import (
    counting_spectrum,
    intensity_spectrum,
    line_center,
    marginal_spectrum_quadrature,
    spectral_moment,
)

__version__ = "0.1.0"

__all__ = [
    "DetectorConfig",
    "EnsembleParams",
    "ScanCurve",
    "SimulationSpec",
    "bessel_k",
    "bessel_k_ratio",
    "counting_spectrum",
    "doppler_scan",
    "histogram_distance",
    "intensity_spectrum",
    "juttner_pdf",
    "juttner_sample",
    "line_center",
    "marginal_spectrum_quadrature",
    "mean_inverse_gamma",
    "registered_mean",
    "response_weight",
    "sample_emission",
    "simulate_spectrum",
    "spectral_moment",
]
