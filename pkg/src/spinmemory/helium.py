"""Helium-3 constants, gas bookkeeping and operating-point matching.

Magnetic fields are expressed in gauss at this boundary; everything else
stays in angular frequencies (rad/s).  Resonant transfer requires the
metastable coherence (light-shifted) and the ground-state coherence to be
driven at the same frequency, which pins the magnetic field B and the
drive/cavity frequency difference delta_las simultaneously.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from scipy import constants

from .analytic import DerivedParams
from .exceptions import ConfigError, NoPositiveFieldError, ZeroDetuningError
from .params import PhysicalParams

#: Nuclear moment, Hz per gauss (ground state of 3He).
MU_I_OVER_H = 3.24e3
#: Metastable-state moment, Hz per gauss.
MU_S_OVER_H = 1.87e6
#: Metastable coherence wall-relaxation rate at 1 torr, s^-1.
GAMMA0_REF = 1.0e3
GAMMA0_REF_PRESSURE = 1.0  # torr
#: Transition wavelength from the metastable state, m (informational).
LAMBDA_C9 = 1.08e-6

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class GasCell:
    """Sealed helium cell: pressure in torr, volume in cm^3, temperature in K,
    metastable density in atoms/cm^3 (sustained by the discharge)."""

    pressure: float
    volume: float
    temperature: float
    metastable_density: float

    def __post_init__(self):
        for name in ("pressure", "volume", "temperature", "metastable_density"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ConfigError(f"cell {name} must be a positive finite number")


@dataclass(frozen=True)
class GasPopulations:
    n_ground: float   # N, ideal-gas atom number
    n_meta: float     # n, discharge-sustained metastable number
    gamma_0: float    # wall relaxation at this pressure

    def ground_exchange_rate(self, gamma_m: float) -> float:
        """gamma_f from the exchange balance gamma_f N = gamma_m n."""
        return gamma_m * self.n_meta / self.n_ground


def gas_populations(cell: GasCell) -> GasPopulations:
    """Atom numbers and wall relaxation for one cell.

    N from the ideal-gas law, n from the metastable density, gamma_0
    scaling inversely with pressure from its 1-torr reference value.
    """
    volume_m3 = cell.volume * 1e-6
    pressure_pa = cell.pressure * constants.torr
    n_ground = pressure_pa * volume_m3 / (constants.k * cell.temperature)
    n_meta = cell.metastable_density * cell.volume
    gamma_0 = GAMMA0_REF * GAMMA0_REF_PRESSURE / cell.pressure
    if n_meta >= n_ground:
        raise ConfigError("metastable population must stay a small fraction of N")
    return GasPopulations(n_ground=n_ground, n_meta=n_meta, gamma_0=gamma_0)


def larmor(B: float, species: str) -> float:
    """Larmor angular frequency mu B / hbar for 'nuclear' or 'metastable' spins.

    Linear low-field Zeeman only; the operating fields here are tens of mG.
    """
    if species == "nuclear":
        mu_over_h = MU_I_OVER_H
    elif species == "metastable":
        mu_over_h = MU_S_OVER_H
    else:
        raise ValueError(f"species must be 'nuclear' or 'metastable', got {species!r}")
    if abs(B) > 50.0:
        warnings.warn("linear Zeeman formula used above 50 G", stacklevel=2)
    return _TWO_PI * mu_over_h * B


@dataclass(frozen=True)
class OperatingPoint:
    """Simultaneous resonance point for both spin coherences."""

    B: float            # gauss
    delta_las: float    # drive/cavity frequency difference omega_1 - omega_2, rad/s
    light_shift: float  # Omega^2 / Delta, rad/s
    omega_I: float      # nuclear Larmor frequency at B, rad/s
    omega_S: float      # metastable Larmor frequency at B, rad/s

    @property
    def residual_meta(self) -> float:
        """omega_S(B) + Omega^2/Delta - delta_las, zero when matched."""
        return self.omega_S + self.light_shift - self.delta_las

    @property
    def residual_ground(self) -> float:
        """omega_I(B) - delta_las, zero when matched."""
        return self.omega_I - self.delta_las


def match_operating_point(omega_rabi: float, delta_one_photon: float) -> OperatingPoint:
    """Solve both resonance conditions for B and delta_las.

    Subtracting the two conditions gives (omega_S - omega_I)(B) =
    -Omega^2/Delta, hence B = -Omega^2 / (Delta * 2 pi (mu_S - mu_I)/h);
    the light shift must point the field positive, i.e. Delta < 0 for a
    real drive.  The mu_S - mu_I difference (0.17% below mu_S) comes from
    eliminating delta_las between the two conditions.
    """
    if omega_rabi == 0:
        return OperatingPoint(B=0.0, delta_las=0.0, light_shift=0.0,
                              omega_I=0.0, omega_S=0.0)
    if delta_one_photon == 0:
        raise ZeroDetuningError("one-photon detuning must be non-zero")
    shift = omega_rabi ** 2 / delta_one_photon
    B = -shift / (_TWO_PI * (MU_S_OVER_H - MU_I_OVER_H))
    if B <= 0:
        raise NoPositiveFieldError(
            "light shift has the wrong sign for a positive field; "
            "the one-photon detuning must be negative")
    omega_I = larmor(B, "nuclear")
    omega_S = larmor(B, "metastable")
    return OperatingPoint(B=B, delta_las=omega_I, light_shift=shift,
                          omega_I=omega_I, omega_S=omega_S)


def field_error_detunings(delta_B: float):
    """Detuning shifts caused by a field error delta_B (gauss).

    Returns (shift of delta_tilde, shift of delta_I): the metastable
    Larmor frequency moves by the mu_S rate (the light shift does not
    depend on B), the ground-state one by the much smaller mu_I rate.
    """
    return (_TWO_PI * MU_S_OVER_H * delta_B, _TWO_PI * MU_I_OVER_H * delta_B)


@dataclass(frozen=True)
class HomogeneityResult:
    passed: bool
    threshold_ratio: float          # binding Delta_B / B threshold
    threshold_ratio_rounded: float  # paper-style rounded small-pump form
    small_pump_regime: bool         # Gamma << gamma_m, where the 600 prefactor applies
    max_delta_B: float              # gauss


def homogeneity_check(params: PhysicalParams, derived: DerivedParams,
                      delta_B: float) -> HomogeneityResult:
    """Field-homogeneity criterion for preserving the transfer efficiency.

    The binding condition is that the ground-state detuning spread stays
    below the memory bandwidth: 2 pi (mu_I/h) Delta_B < Gamma_F.  Expressed
    relative to the operating field this becomes
    (Gamma/Gamma_F)(mu_I/mu_S)(|Delta|/(3 gamma C)) (Delta_B/B) < 1, whose
    prefactor rounds to 600 |Delta|/(gamma C) in the small-pump regime for
    the nominal n/N = 1e-6 gas.
    """
    gamma_F = derived.memory_bandwidth
    max_delta_B = gamma_F / (_TWO_PI * MU_I_OVER_H)
    point = match_operating_point(params.omega_rabi, params.delta_one_photon)

    detuning_factor = abs(params.delta_one_photon) / (params.gamma * derived.cooperativity)
    threshold_rounded = 1.0 / (600.0 * detuning_factor)
    if point.B > 0:
        threshold = max_delta_B / point.B
    else:
        threshold = 0.0 if gamma_F == 0 else math.inf
    # tolerance keeps the nominal Gamma = 0.1 gamma_m point inside despite
    # roundoff from the drive-strength round trip
    small_pump = derived.pump_rate <= 0.1 * params.gamma_m * (1.0 + 1e-9)
    return HomogeneityResult(
        passed=delta_B == 0.0 or delta_B < max_delta_B,
        threshold_ratio=threshold,
        threshold_ratio_rounded=threshold_rounded,
        small_pump_regime=small_pump,
        max_delta_B=max_delta_B,
    )
