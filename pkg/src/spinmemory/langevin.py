"""Linearized Heisenberg-Langevin system for the coupled spin-cavity model.

Fluctuation vector (fixed basis order)::

    [dS21, dS12, dS23, dS32, dI09, dI90, dA, dAdag]

where S21 is the metastable Zeeman coherence, S23 the optical coherence,
I09 the ground-state (nuclear) coherence and A the cavity mode.  The
dynamics is d(v)/dt = drift @ v + f with delta-correlated Langevin forces
<f_a(t) f_b(t')> = diffusion[a, b] * delta(t - t').
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .exceptions import EigenSolverError
from .params import InputFieldStats, PhysicalParams

BASIS = ("S21", "S12", "S23", "S32", "I09", "I90", "A", "Adag")

# Index constants for the fixed basis order.
S21, S12, S23, S32, I09, I90, A, ADAG = range(8)

#: Conjugate-partner index for each basis entry (S12 = S21^dag, etc.).
CONJ_PARTNER = (S12, S21, S32, S23, I90, I09, ADAG, A)

#: Positions that may carry metastability-exchange diffusion.
EXCHANGE_DIFFUSION_POSITIONS = ((S21, S12), (I09, I90), (S21, I90), (I09, S12))


@dataclass(frozen=True)
class LangevinSystem:
    """Drift and diffusion matrices over an ordered operator basis.

    ``commutators`` holds the steady-state commutator targets per conjugate
    pair present in the basis (n for S21/S12, N for I09/I90, 1 for A/Adag);
    it is carried along so moment-level consistency checks and quadrature
    normalizations do not need the original parameters.
    """

    basis: tuple
    drift: np.ndarray
    diffusion: np.ndarray
    commutators: dict

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self, label: str) -> int:
        return self.basis.index(label)

    def with_diffusion(self, diffusion: np.ndarray) -> "LangevinSystem":
        return replace(self, diffusion=np.asarray(diffusion, dtype=complex))


def build_full_drift(params: PhysicalParams) -> np.ndarray:
    """8x8 complex drift matrix of the linearized equations of motion.

    Row structure (lowering-operator sector)::

        dS21/dt = -(gamma_m + gamma_0 - i delta) S21 + gamma_f I09 - i Omega S23
        dS23/dt = -(gamma + i Delta) S23 - i Omega S21 - i g n A
        dI09/dt = -(gamma_f - i delta_I) I09 + gamma_m S21
        dA/dt   = -(kappa + i Delta_c) A - i g S23

    plus the elementwise-conjugated rows for the raising-operator sector.
    The wall-relaxation rate gamma_0 damps only the metastable coherence.
    """
    p = params
    M = np.zeros((8, 8), dtype=complex)

    M[S21, S21] = -(p.gamma_m + p.gamma_0 - 1j * p.delta_meta)
    M[S21, I09] = p.gamma_f
    M[S21, S23] = -1j * p.omega_rabi

    M[S23, S23] = -(p.gamma + 1j * p.delta_one_photon)
    M[S23, S21] = -1j * p.omega_rabi
    M[S23, A] = -1j * p.g_coupling * p.n_meta

    M[I09, I09] = -(p.gamma_f - 1j * p.delta_ground)
    M[I09, S21] = p.gamma_m

    M[A, A] = -(p.kappa + 1j * p.delta_cavity)
    M[A, S23] = -1j * p.g_coupling

    # Conjugate sector: conjugated coefficients acting on conjugate partners.
    for row in (S21, S23, I09, A):
        for col in range(8):
            M[CONJ_PARTNER[row], CONJ_PARTNER[col]] = np.conj(M[row, col])
    return M


def build_full_diffusion(params: PhysicalParams,
                         input_stats: InputFieldStats | None = None) -> np.ndarray:
    """8x8 diffusion matrix D with <f_a(t) f_b(t')> = D[a,b] delta(t-t').

    Atomic entries come from the generalized Einstein relation for the
    polarized ensemble; only the listed operator orderings are non-zero.
    The field block follows from the sqrt(2 kappa) A_in forcing with the
    squeezed-vacuum broadband moments.
    """
    p = params
    if input_stats is None:
        input_stats = InputFieldStats.from_squeezing(p.r_squeeze)
    D = np.zeros((8, 8), dtype=complex)

    two_n_gm = 2.0 * p.n_meta * p.gamma_m
    # Wall relaxation needs its own force on the same ordering, else gamma_0
    # would purify the state and violate [S21, S12] preservation.
    D[S21, S12] = two_n_gm + 2.0 * p.n_meta * p.gamma_0
    D[I09, I90] = two_n_gm
    D[S21, I90] = -two_n_gm
    D[I09, S12] = -two_n_gm
    D[S23, S32] = 2.0 * p.n_meta * p.gamma

    D[A, ADAG] = 2.0 * p.kappa * (input_stats.n_therm + 1.0)
    D[ADAG, A] = 2.0 * p.kappa * input_stats.n_therm
    D[A, A] = 2.0 * p.kappa * input_stats.m_anom
    D[ADAG, ADAG] = 2.0 * p.kappa * input_stats.m_anom
    return D


def build_system(params: PhysicalParams,
                 input_stats: InputFieldStats | None = None) -> LangevinSystem:
    """Assemble the full 8-operator system for one configuration."""
    return LangevinSystem(
        basis=BASIS,
        drift=build_full_drift(params),
        diffusion=build_full_diffusion(params, input_stats),
        commutators={(S21, S12): params.n_meta,
                     (S23, S32): params.n_meta,
                     (I09, I90): params.n_ground,
                     (A, ADAG): 1.0},
    )


def strip_exchange_noise(system: LangevinSystem) -> LangevinSystem:
    """Remove the metastability-exchange Langevin forces (negative control).

    Without these forces the non-Hamiltonian exchange terms no longer
    preserve commutators, so commutator-consistency checks must fail.
    """
    D = system.diffusion.copy()
    for i, j in EXCHANGE_DIFFUSION_POSITIONS:
        D[i, j] = 0.0
    return system.with_diffusion(D)


def balance_scales(system: LangevinSystem) -> np.ndarray:
    """Per-operator scale sqrt(|commutator|) of the conjugate pair.

    Dividing each collective operator by this scale (S21 by sqrt(n), I09
    by sqrt(N), A by 1) symmetrizes the otherwise hugely non-normal drift
    (g n against g spans ~12 decades raw) without changing its spectrum.
    """
    s = np.ones(system.dim)
    for (i, j), target in system.commutators.items():
        s[i] = s[j] = math.sqrt(abs(target))
    return s


def balanced_drift(system: LangevinSystem) -> np.ndarray:
    s = balance_scales(system)
    return system.drift * (s[np.newaxis, :] / s[:, np.newaxis])


def check_stability(system: LangevinSystem) -> float:
    """Stability margin: max real part of the drift eigenvalues.

    Negative means stable; callers must refuse steady-state solves
    otherwise.  Computed on the balanced drift, whose eigenvalues are the
    same but come out of the QR algorithm with far smaller backward error.
    """
    try:
        eigvals = np.linalg.eigvals(balanced_drift(system))
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(f"drift eigenvalue computation failed: {exc}") from exc
    return float(np.max(eigvals.real))
