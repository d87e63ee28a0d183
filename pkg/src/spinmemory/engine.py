"""Steady-state moments, quadrature variances and noise spectra.

The second-moment matrix M[a, b] = <dv_a dv_b> of a stable linear Langevin
system obeys dM/dt = A M + M A^T + D and its steady state solves the
Lyapunov-type equation A M + M A^T + D = 0.  M is operator-ordered (not
symmetrized), matching the non-symmetric diffusion matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid
from scipy.linalg import lu_factor, lu_solve

from .exceptions import (NoSqueezingError, SingularSolveError, StepSizeError,
                         UnstableSystemError)
from .langevin import LangevinSystem, balance_scales, balanced_drift, check_stability

#: Residual acceptance for the algebraic steady-state solve (Frobenius).
SOLVE_RESIDUAL_RTOL = 1e-10

_SPECIES_LABELS = {
    "ground": ("I09", "I90"),
    "meta": ("S21", "S12"),
    "field": ("A", "Adag"),
}


@dataclass(frozen=True)
class VarianceReport:
    """Normalized quadrature variances (coherent-state value = 1)."""

    var_I_x: float
    var_I_y: float
    var_S_x: float
    var_S_y: float
    var_X: float
    var_Y: float
    best_angle_I: float
    best_var_I: float


@dataclass(frozen=True)
class BestQuadrature:
    angle: float
    variance: float
    degenerate: bool


def _require_stable(system: LangevinSystem) -> float:
    # Margins within eigensolver roundoff of zero cannot be distinguished
    # from a marginal mode; the slowest physical rate (the memory
    # bandwidth) can sit ~13 decades below the fastest one, so the guard
    # is anchored to machine precision, not to a fixed relative factor.
    margin = check_stability(system)
    tol = 64.0 * np.finfo(float).eps * np.linalg.norm(balanced_drift(system))
    if margin > -tol:
        raise UnstableSystemError(margin)
    return margin


def _balanced(system: LangevinSystem):
    """Balanced drift/diffusion plus the outer-product rescaling for moments."""
    s = balance_scales(system)
    outer = np.outer(s, s)
    return balanced_drift(system), system.diffusion / outer, outer


def solve_steady_moments(system: LangevinSystem) -> np.ndarray:
    """Unique steady-state moment matrix of a strictly stable system.

    Solves the vectorized dense linear system over the d^2 unknowns with
    LU plus extended-precision iterative refinement; the rate spread of
    the physical configurations (s^-1 to 1e10 s^-1) makes the plain solve
    lose the slow nuclear-coherence components otherwise.
    """
    _require_stable(system)
    A, D, outer = _balanced(system)
    d = system.dim
    eye = np.eye(d)
    K = np.kron(A, eye) + np.kron(eye, A)  # row-major vec of A M + M A^T
    b = -D.flatten()
    try:
        lu = lu_factor(K)
        x = lu_solve(lu, b)
        Kq = K.astype(np.clongdouble)
        bq = b.astype(np.clongdouble)
        for _ in range(3):
            r = bq - Kq @ x.astype(np.clongdouble)
            x = x + lu_solve(lu, r.astype(complex))
    except np.linalg.LinAlgError as exc:
        raise SingularSolveError(f"steady-state solve failed: {exc}") from exc

    M = x.reshape(d, d)
    residual = np.linalg.norm(A @ M + M @ A.T + D)
    bound = SOLVE_RESIDUAL_RTOL * np.linalg.norm(D)
    if not residual <= bound:
        raise SingularSolveError(
            f"steady-state residual {residual:.3e} exceeds {bound:.3e}",
            condition_estimate=float(np.linalg.cond(K)),
        )
    return M * outer


def integrate_moments(system: LangevinSystem, t_final: float, dt: float) -> np.ndarray:
    """Integrate dM/dt = A M + M A^T + D from M(0) = 0 (independent oracle).

    Classical fixed-step 4th-order Runge-Kutta.  For this linear autonomous
    ODE one RK4 step is a constant affine map on vec(M); the map is
    precomputed once and composed by binary squaring, which reproduces the
    step-by-step recursion at O(log n_steps) cost.
    """
    margin = _require_stable(system)
    A, D, outer = _balanced(system)
    eigvals = np.linalg.eigvals(A)
    fastest = float(np.max(np.abs(eigvals.real)))
    slowest = float(np.min(np.abs(eigvals.real)))
    if dt > 0.1 / fastest:
        raise StepSizeError(f"dt {dt:.3e} exceeds 0.1/max|Re lambda| = {0.1 / fastest:.3e}")
    if t_final < 20.0 / slowest:
        raise StepSizeError(f"t_final {t_final:.3e} below 20/min|Re lambda| = {20.0 / slowest:.3e}")
    del margin

    d = system.dim
    eye = np.eye(d)
    # Extended precision throughout: the slow nuclear mode sits ~13 decades
    # below the fastest rate, and double-precision roundoff in the step map
    # gets amplified by that spread at the fixed point.
    K = (np.kron(A, eye) + np.kron(eye, A)).astype(np.clongdouble)
    b = D.flatten().astype(np.clongdouble)
    n_steps = int(math.ceil(t_final / dt))

    # RK4 step map: v <- G v + c with G = sum_{k<=4} (dt K)^k / k!.
    hK = dt * K
    G = np.eye(d * d, dtype=np.clongdouble)
    c = np.zeros(d * d, dtype=np.clongdouble)
    term = np.eye(d * d, dtype=np.clongdouble)
    for k in range(1, 5):
        # term is (dt K)^(k-1)/(k-1)! here, so dt/k yields dt (dt K)^(k-1)/k!.
        c = c + term @ b * (dt / k)
        term = term @ hK / k
        G = G + term

    v = np.zeros(d * d, dtype=np.clongdouble)
    Gp, cp = G, c  # map for 2^j composed steps
    remaining = n_steps
    while remaining:
        if remaining & 1:
            v = Gp @ v + cp
        remaining >>= 1
        if remaining:
            cp = Gp @ cp + cp
            Gp = Gp @ Gp
    return (v.reshape(d, d) * outer).astype(complex)


def commutator_residuals(M: np.ndarray, system: LangevinSystem) -> dict:
    """Antisymmetric moment combinations minus their commutator targets.

    For a consistent steady state M[a,b] - M[b,a] equals <[v_a, v_b]> in
    the polarized reference state: n, N and 1 for the three conjugate
    pairs, zero for all cross-species combinations.
    """
    res = {}
    for (i, j), target in system.commutators.items():
        res[(system.basis[i], system.basis[j])] = complex(M[i, j] - M[j, i] - target)
    pairs = list(system.commutators)
    for a in range(len(pairs)):
        for b in range(a + 1, len(pairs)):
            for i in pairs[a]:
                for j in pairs[b]:
                    res[(system.basis[i], system.basis[j])] = complex(M[i, j] - M[j, i])
    return res


def _species_indices(system: LangevinSystem, species: str):
    try:
        la, lb = _SPECIES_LABELS[species]
    except KeyError:
        raise ValueError(f"unknown species {species!r}") from None
    ia, ib = system.index(la), system.index(lb)
    comm = system.commutators[(ia, ib)]
    return ia, ib, comm


def quadrature_covariance(M: np.ndarray, system: LangevinSystem, species: str):
    """Normalized symmetric 2x2 covariance of the (x, y) quadrature pair.

    Quadratures q_x = (a + a^dag)/2, q_y = i(a^dag - a)/2, normalized by
    the coherent-state variance comm/4 so the isotropic vacuum gives the
    identity matrix.
    """
    ia, ib, comm = _species_indices(system, species)
    maa, mbb = M[ia, ia], M[ib, ib]
    msym = M[ia, ib] + M[ib, ia]
    vxx = (msym + maa + mbb).real / comm
    vyy = (msym - maa - mbb).real / comm
    vxy = (1j * (mbb - maa)).real / comm
    return vxx, vyy, vxy


def best_quadrature(M: np.ndarray, system: LangevinSystem, species: str) -> BestQuadrature:
    """Minimum-variance quadrature angle over theta in [0, pi).

    Closed form from the eigen-decomposition of the 2x2 symmetrized
    quadrature covariance; isotropic covariances are flagged degenerate.
    """
    vxx, vyy, vxy = quadrature_covariance(M, system, species)
    mean = 0.5 * (vxx + vyy)
    spread = math.hypot(0.5 * (vxx - vyy), vxy)
    if spread <= 1e-12 * abs(mean):
        return BestQuadrature(angle=0.0, variance=mean, degenerate=True)
    theta = 0.5 * (math.atan2(2.0 * vxy, vxx - vyy) + math.pi)
    theta %= math.pi
    return BestQuadrature(angle=theta, variance=mean - spread, degenerate=False)


def quadrature_variances(M: np.ndarray, system: LangevinSystem) -> VarianceReport:
    """Normalized quadrature variances for ground spin, metastable spin, field."""
    gx, gy, _ = quadrature_covariance(M, system, "ground")
    sx, sy, _ = quadrature_covariance(M, system, "meta")
    fx, fy, _ = quadrature_covariance(M, system, "field")
    best = best_quadrature(M, system, "ground")
    return VarianceReport(var_I_x=gx, var_I_y=gy, var_S_x=sx, var_S_y=sy,
                          var_X=fx, var_Y=fy,
                          best_angle_I=best.angle, best_var_I=best.variance)


def noise_spectrum(system: LangevinSystem, omega: float) -> np.ndarray:
    """Spectral matrix S(w) = (A + i w)^{-1} D (A^T - i w)^{-1}.

    Normalized so that (1/2pi) * integral of S over w recovers the
    steady-state moment matrix.
    """
    _require_stable(system)
    A, D, outer = _balanced(system)
    eye = np.eye(system.dim)
    left = np.linalg.solve(A + 1j * omega * eye, D)
    return np.linalg.solve(A - 1j * omega * eye, left.T).T * outer


def quadrature_spectral_density(system: LangevinSystem, omega: float,
                                species: str, quadrature: str = "y") -> float:
    """Normalized spectral density of one quadrature of one species."""
    ia, ib, comm = _species_indices(system, species)
    S = noise_spectrum(system, omega)
    sym = S[ia, ib] + S[ib, ia]
    if quadrature == "y":
        val = sym - S[ia, ia] - S[ib, ib]
    elif quadrature == "x":
        val = sym + S[ia, ia] + S[ib, ib]
    else:
        raise ValueError(f"quadrature must be 'x' or 'y', got {quadrature!r}")
    return val.real / comm


def vacuum_reference(system: LangevinSystem) -> LangevinSystem:
    """Same system with the squeezed input replaced by vacuum.

    The cavity decay rate is read off the drift diagonal, so this also
    works for hand-built field-only subsystems.
    """
    ia = system.index("A")
    ib = system.index("Adag")
    kappa = -system.drift[ia, ia].real
    D = system.diffusion.copy()
    D[ia, ia] = D[ib, ib] = D[ib, ia] = 0.0
    D[ia, ib] = 2.0 * kappa
    return system.with_diffusion(D)


def spectrum_halfwidth(system: LangevinSystem, species: str = "ground",
                       quadrature: str = "y", rtol: float = 1e-4) -> float:
    """HWHM of the squeezing dip in the selected quadrature spectrum.

    The dip is the coherent-input (vacuum) spectral density minus the
    squeezed-input one; its zero-frequency value must be positive,
    otherwise there is no squeezing to measure.  Root located by bisection
    after bracketing by doubling.
    """
    reference = vacuum_reference(system)

    def dip(w):
        return (quadrature_spectral_density(reference, w, species, quadrature)
                - quadrature_spectral_density(system, w, species, quadrature))

    d0 = dip(0.0)
    if d0 <= 0.0:
        raise NoSqueezingError(
            f"{species} {quadrature}-quadrature is not squeezed at omega=0")
    target = 0.5 * d0

    eigvals = np.linalg.eigvals(balanced_drift(system))
    w_lo = 0.0
    w_hi = float(np.min(np.abs(eigvals.real))) * 1e-3
    for _ in range(300):
        if dip(w_hi) < target:
            break
        w_lo = w_hi
        w_hi *= 2.0
    else:
        raise NoSqueezingError("squeezing dip half-depth not bracketed")

    while (w_hi - w_lo) > rtol * w_hi:
        w_mid = 0.5 * (w_lo + w_hi)
        if dip(w_mid) < target:
            w_hi = w_mid
        else:
            w_lo = w_mid
    return 0.5 * (w_lo + w_hi)


def integrate_spectrum(system: LangevinSystem, points_per_decade: int = 400) -> np.ndarray:
    """(1/2pi) integral of the spectral matrix over frequency (Parseval check).

    Symmetric composite grid: linear below the slowest rate, logarithmic
    up to 1e3 times the fastest rate (points-per-decade capped at 2000),
    plus the analytic D/(pi w_max) tail of the 1/w^2 decay.
    """
    _require_stable(system)
    ppd = min(points_per_decade, 2000)
    eigvals = np.linalg.eigvals(balanced_drift(system))
    w_min = float(np.min(np.abs(eigvals.real))) * 1e-3
    w_max = float(np.max(np.abs(eigvals.real))) * 1e3
    n_log = max(2, int(ppd * math.log10(w_max / w_min)))
    grid = np.concatenate([
        np.linspace(0.0, w_min, 17),
        np.geomspace(w_min, w_max, n_log)[1:],
    ])
    grid = np.concatenate([-grid[::-1], grid[1:]])

    values = np.stack([noise_spectrum(system, w) for w in grid])
    integral = trapezoid(values, grid, axis=0) / (2.0 * math.pi)
    tail = system.diffusion / (math.pi * w_max)
    return integral + tail


def write_moments_csv(M: np.ndarray, system: LangevinSystem, path) -> None:
    """Row-major moment dump, complex entries as re/im column pairs."""
    with open(path, "w") as fh:
        header = ["row"]
        for label in system.basis:
            header += [f"{label}_re", f"{label}_im"]
        fh.write(",".join(header) + "\n")
        for i, label in enumerate(system.basis):
            cells = [label]
            for j in range(system.dim):
                cells += [f"{M[i, j].real:.8e}", f"{M[i, j].imag:.8e}"]
            fh.write(",".join(cells) + "\n")


def write_variance_csv(report: VarianceReport, path) -> None:
    names = ["var_I_x", "var_I_y", "var_S_x", "var_S_y", "var_X", "var_Y",
             "best_angle_I", "best_var_I"]
    with open(path, "w") as fh:
        fh.write(",".join(names) + "\n")
        fh.write(",".join(f"{getattr(report, n):.8e}" for n in names) + "\n")
