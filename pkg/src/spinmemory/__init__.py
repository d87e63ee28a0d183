"""Squeezing transfer from cavity light to metastable and nuclear collective spins."""

from .analytic import (DerivedParams, analytic_variances, build_reduced_system,
                       cooperativity, derive_params, memory_bandwidth, pump_rate,
                       rabi_squared_for_pump)
from .engine import (BestQuadrature, VarianceReport, best_quadrature,
                     commutator_residuals, integrate_moments, integrate_spectrum,
                     noise_spectrum, quadrature_variances, solve_steady_moments,
                     spectrum_halfwidth)
from .helium import (GasCell, OperatingPoint, field_error_detunings,
                     gas_populations, homogeneity_check, larmor,
                     match_operating_point)
from .langevin import (LangevinSystem, build_full_diffusion, build_full_drift,
                       build_system, check_stability, strip_exchange_noise)
from .params import InputFieldStats, PhysicalParams, vacuum_input

__all__ = [
    "BestQuadrature", "DerivedParams", "GasCell", "InputFieldStats",
    "LangevinSystem", "OperatingPoint", "PhysicalParams", "VarianceReport",
    "analytic_variances", "best_quadrature", "build_full_diffusion",
    "build_full_drift", "build_reduced_system", "build_system",
    "check_stability", "commutator_residuals", "cooperativity", "derive_params",
    "field_error_detunings", "gas_populations", "homogeneity_check",
    "integrate_moments", "integrate_spectrum", "larmor", "match_operating_point",
    "memory_bandwidth", "noise_spectrum", "pump_rate", "quadrature_variances",
    "rabi_squared_for_pump", "solve_steady_moments", "spectrum_halfwidth",
    "strip_exchange_noise", "vacuum_input",
]

__version__ = "0.1.0"
