"""Physical configuration of the spin-memory model.

All rates and detunings are angular frequencies in s^-1 (rad/s), atom
numbers are dimensionless counts carried as floats (they reach 1e18).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace, fields

from .exceptions import ConfigError

#: Relative tolerance for the exchange-balance identity gamma_f * N = gamma_m * n.
EXCHANGE_BALANCE_RTOL = 1e-12


@dataclass(frozen=True)
class PhysicalParams:
    """One complete model configuration.

    The exchange rates and populations are tied by the balance relation
    gamma_m / gamma_f = n_ground / n_meta; use :meth:`balanced` to derive
    gamma_f instead of supplying it by hand.
    """

    gamma: float            # optical polarization decay rate
    kappa: float            # cavity field decay rate
    gamma_m: float          # metastable exchange rate
    gamma_f: float          # ground-state exchange rate
    omega_rabi: float       # coherent drive Rabi frequency (real)
    delta_one_photon: float  # one-photon optical detuning
    g_coupling: float       # atom-cavity coupling
    n_meta: float           # metastable atom number
    n_ground: float         # ground-state atom number
    gamma_0: float = 0.0    # metastable wall-relaxation rate (extra coherence damping)
    delta_meta: float = 0.0     # two-photon detuning (before light shift)
    delta_ground: float = 0.0   # ground-state detuning
    delta_cavity: float = 0.0   # cavity detuning
    r_squeeze: float = 0.0      # input squeezing parameter (r >= 0: X squeezed)

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ConfigError(f"parameter {f.name} must be a finite number, got {v!r}")
        for name in ("gamma", "kappa", "gamma_m", "gamma_f", "n_meta", "n_ground"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"parameter {name} must be > 0")
        if self.gamma_0 < 0:
            raise ConfigError("gamma_0 must be >= 0")
        lhs = self.gamma_f * self.n_ground
        rhs = self.gamma_m * self.n_meta
        if abs(lhs - rhs) > EXCHANGE_BALANCE_RTOL * max(abs(lhs), abs(rhs)):
            raise ConfigError(
                "exchange balance violated: gamma_f * n_ground = "
                f"{lhs:.6e} but gamma_m * n_meta = {rhs:.6e}"
            )

    @classmethod
    def balanced(cls, *, gamma_m=None, gamma_f=None, n_meta, n_ground, **kwargs):
        """Construct with gamma_f (or gamma_m) derived from the exchange balance."""
        if (gamma_m is None) == (gamma_f is None):
            raise ConfigError("give exactly one of gamma_m, gamma_f")
        if gamma_f is None:
            gamma_f = gamma_m * n_meta / n_ground
        else:
            gamma_m = gamma_f * n_ground / n_meta
        return cls(gamma_m=gamma_m, gamma_f=gamma_f, n_meta=n_meta,
                   n_ground=n_ground, **kwargs)

    def replace(self, **kwargs) -> "PhysicalParams":
        return replace(self, **kwargs)


@dataclass(frozen=True)
class InputFieldStats:
    """Broadband second moments of the squeezed vacuum driving the cavity.

    n_therm is the effective photon number sinh^2(r); m_anom the anomalous
    moment -sinh(r)cosh(r).  Together they reproduce the stated quadrature
    variances: 1 + 2 n_therm + 2 m_anom = e^{-2r} (X, squeezed) and
    1 + 2 n_therm - 2 m_anom = e^{+2r} (Y, anti-squeezed).
    """

    n_therm: float
    m_anom: float

    @classmethod
    def from_squeezing(cls, r: float) -> "InputFieldStats":
        if not math.isfinite(r):
            raise ConfigError("squeezing parameter r must be finite")
        s, c = math.sinh(r), math.cosh(r)
        return cls(n_therm=s * s, m_anom=-s * c)

    def quadrature_variances(self):
        """Input (X, Y) variances; (e^{-2r}, e^{+2r}) for pure squeezed vacuum."""
        return (1.0 + 2.0 * self.n_therm + 2.0 * self.m_anom,
                1.0 + 2.0 * self.n_therm - 2.0 * self.m_anom)


def vacuum_input() -> InputFieldStats:
    return InputFieldStats(n_therm=0.0, m_anom=0.0)
